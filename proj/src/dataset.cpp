#include "aalenfic/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "aalenfic/errors.hpp"
#include "aalenfic/format.hpp"
#include "aalenfic/linalg.hpp"

namespace aalenfic {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_number(const std::string& field, long row, const char* what) {
  const char* begin = field.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0') || !std::isfinite(v)) {
    throw ParseError("row " + std::to_string(row) + ": " + what + " is not a finite number: '" +
                         field + "'",
                     row);
  }
  return v;
}

}  // namespace

Dataset::Dataset(std::vector<SurvivalRecord> records) : records_(std::move(records)) {
  if (records_.empty()) throw ValidationError("dataset must contain at least one record");
  r_ = static_cast<int>(records_.front().covariates.size());
  if (r_ < 1) throw ValidationError("dataset must have at least one covariate column");
  for (size_t i = 0; i < records_.size(); ++i) {
    const SurvivalRecord& rec = records_[i];
    if (!(rec.time >= 0.0) || !std::isfinite(rec.time))
      throw ValidationError("record " + std::to_string(i + 1) +
                            ": time must be finite and nonnegative");
    if (rec.covariates.size() != r_)
      throw ValidationError("record " + std::to_string(i + 1) + ": expected " +
                            std::to_string(r_) + " covariates, got " +
                            std::to_string(rec.covariates.size()));
    for (int j = 0; j < r_; ++j)
      if (!std::isfinite(rec.covariates[j]))
        throw ValidationError("record " + std::to_string(i + 1) + ": covariate " +
                              std::to_string(j + 1) + " is not finite");
    if (rec.event) max_event_time_ = std::max(max_event_time_, rec.time);
  }

  // Canonical order sorts on content only, so any permutation of the rows
  // accumulates sums in the same sequence.
  canonical_order_.resize(records_.size());
  std::iota(canonical_order_.begin(), canonical_order_.end(), 0);
  std::sort(canonical_order_.begin(), canonical_order_.end(), [this](int a, int b) {
    const SurvivalRecord& ra = records_[a];
    const SurvivalRecord& rb = records_[b];
    if (ra.time != rb.time) return ra.time < rb.time;
    if (ra.event != rb.event) return ra.event < rb.event;
    for (int j = 0; j < r_; ++j)
      if (ra.covariates[j] != rb.covariates[j]) return ra.covariates[j] < rb.covariates[j];
    return false;
  });
}

Dataset Dataset::from_csv(std::istream& in) {
  std::string line;
  bool have_header = false;
  int r = 0;
  std::vector<SurvivalRecord> records;
  long row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (!have_header) {
      if (fields.size() < 3 || fields[0] != "time" || fields[1] != "status")
        throw ParseError("header must be 'time,status,x1,...,xr'", 0);
      for (size_t j = 2; j < fields.size(); ++j)
        if (fields[j] != "x" + std::to_string(j - 1))
          throw ParseError("header must be 'time,status,x1,...,xr'; column " +
                               std::to_string(j + 1) + " is '" + fields[j] + "'",
                           0);
      r = static_cast<int>(fields.size()) - 2;
      have_header = true;
      continue;
    }
    ++row;
    if (fields.size() != static_cast<size_t>(r) + 2)
      throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(r + 2) +
                           " fields, got " + std::to_string(fields.size()),
                       row);
    SurvivalRecord rec;
    rec.time = parse_number(fields[0], row, "time");
    const double status = parse_number(fields[1], row, "status");
    if (status != 0.0 && status != 1.0)
      throw ParseError("row " + std::to_string(row) + ": status must be 0 or 1", row);
    rec.event = status == 1.0;
    rec.covariates.resize(r);
    for (int j = 0; j < r; ++j)
      rec.covariates[j] = parse_number(fields[2 + j], row, ("x" + std::to_string(j + 1)).c_str());
    if (rec.time < 0.0)
      throw ValidationError("row " + std::to_string(row) + ": time must be nonnegative");
    records.push_back(std::move(rec));
  }
  if (!have_header) throw ParseError("empty input: missing CSV header", 0);
  return Dataset(std::move(records));
}

Dataset Dataset::from_csv_string(const std::string& text) {
  std::istringstream in(text);
  return from_csv(in);
}

Dataset Dataset::from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  return from_csv(in);
}

Dataset Dataset::project(const IndexSet& index_set) const {
  if (index_set.dimension() != r_)
    throw ValidationError("index set dimension " + std::to_string(index_set.dimension()) +
                          " does not match dataset dimension " + std::to_string(r_));
  std::vector<SurvivalRecord> projected;
  projected.reserve(records_.size());
  for (const SurvivalRecord& rec : records_) {
    projected.push_back(
        {rec.time, rec.event, subvector(rec.covariates, index_set.indices())});
  }
  return Dataset(std::move(projected));
}

std::string Dataset::to_csv() const {
  std::string out = "time,status";
  for (int j = 1; j <= r_; ++j) out += ",x" + std::to_string(j);
  out += "\n";
  for (const SurvivalRecord& rec : records_) {
    out += format_double(rec.time);
    out += rec.event ? ",1" : ",0";
    for (int j = 0; j < r_; ++j) out += "," + format_double(rec.covariates[j]);
    out += "\n";
  }
  return out;
}

EventGrid event_grid(const Dataset& data, double tau) {
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  std::vector<double> times;
  for (const SurvivalRecord& rec : data.records())
    if (rec.event && rec.time <= tau) times.push_back(rec.time);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return EventGrid{std::move(times)};
}

std::vector<bool> at_risk(const Dataset& data, double u) {
  if (!(u >= 0.0)) throw ValidationError("u must be nonnegative");
  std::vector<bool> out(data.n());
  for (int i = 0; i < data.n(); ++i) out[i] = data.records()[i].time >= u;
  return out;
}

}  // namespace aalenfic
