#include "aalenfic/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "aalenfic/errors.hpp"
#include "aalenfic/format.hpp"

namespace aalenfic {

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

namespace {

const json& require(const json& doc, const char* field) {
  if (!doc.is_object() || !doc.contains(field))
    throw ValidationError(std::string("missing field '") + field + "'");
  return doc.at(field);
}

double as_number(const json& v, const char* what) {
  if (!v.is_number()) throw ValidationError(std::string("field '") + what + "' must be a number");
  return v.get<double>();
}

Eigen::VectorXd as_vector(const json& v, const char* what) {
  if (!v.is_array()) throw ValidationError(std::string("field '") + what + "' must be an array");
  Eigen::VectorXd out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = as_number(v[i], what);
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

PiecewiseConstant alpha_from_json(const json& v) {
  if (v.is_number()) return PiecewiseConstant::constant(v.get<double>());
  if (v.is_object()) {
    const Eigen::VectorXd times = as_vector(require(v, "times"), "times");
    const Eigen::VectorXd values = as_vector(require(v, "values"), "values");
    return PiecewiseConstant(std::vector<double>(times.begin(), times.end()),
                             std::vector<double>(values.begin(), values.end()));
  }
  throw ValidationError("each alpha must be a number or {times, values}");
}

Censoring censoring_from_json(const json& doc) {
  Censoring c;
  if (doc.is_null()) return c;
  const std::string type = require(doc, "type").get<std::string>();
  if (type == "none") {
    c.kind = CensoringKind::none;
  } else if (type == "exponential") {
    c.kind = CensoringKind::exponential;
    c.param = as_number(require(doc, "rate"), "rate");
  } else if (type == "administrative") {
    c.kind = CensoringKind::administrative;
    c.param = as_number(require(doc, "time"), "time");
  } else {
    throw ValidationError("censoring type must be none, exponential or administrative");
  }
  return c;
}

GammaCovariateSpec gamma_spec_from_json(const json& doc) {
  GammaCovariateSpec spec;
  spec.shape = as_vector(require(doc, "shape"), "shape");
  spec.rate = as_vector(require(doc, "rate"), "rate");
  spec.validate();
  return spec;
}

}  // namespace

json dataset_to_json(const Dataset& data) {
  json out = json::array();
  for (const SurvivalRecord& rec : data.records()) {
    out.push_back(
        {{"time", rec.time}, {"status", rec.event ? 1 : 0}, {"x", vector_to_json(rec.covariates)}});
  }
  return out;
}

Dataset dataset_from_json(const json& doc) {
  if (!doc.is_array()) throw ValidationError("dataset JSON must be an array of records");
  std::vector<SurvivalRecord> records;
  records.reserve(doc.size());
  for (size_t i = 0; i < doc.size(); ++i) {
    const json& rec = doc[i];
    SurvivalRecord out;
    out.time = as_number(require(rec, "time"), "time");
    const double status = as_number(require(rec, "status"), "status");
    if (status != 0.0 && status != 1.0)
      throw ValidationError("record " + std::to_string(i + 1) + ": status must be 0 or 1");
    out.event = status == 1.0;
    out.covariates = as_vector(require(rec, "x"), "x");
    records.push_back(std::move(out));
  }
  return Dataset(std::move(records));
}

json step_estimate_to_json(const StepEstimate& est) {
  json increments = json::array();
  for (const Eigen::VectorXd& inc : est.increments) increments.push_back(vector_to_json(inc));
  json index_set;
  if (est.index_set.is_full()) {
    index_set = "full";
  } else {
    index_set = est.index_set.one_based();
  }
  return {{"index_set", index_set},
          {"r", est.index_set.dimension()},
          {"grid", est.grid.times},
          {"increments", increments}};
}

StepEstimate step_estimate_from_json(const json& doc) {
  const int r = static_cast<int>(as_number(require(doc, "r"), "r"));
  const json& is = require(doc, "index_set");
  IndexSet index_set = IndexSet::full(r);
  if (!is.is_string()) {
    std::vector<int> one_based;
    for (const json& v : is) one_based.push_back(v.get<int>());
    index_set = IndexSet::from_one_based(std::move(one_based), r);
  }
  const Eigen::VectorXd grid = as_vector(require(doc, "grid"), "grid");
  const json& incs = require(doc, "increments");
  if (!incs.is_array() || incs.size() != static_cast<size_t>(grid.size()))
    throw ValidationError("increments must have one entry per grid time");
  std::vector<Eigen::VectorXd> increments;
  for (const json& v : incs) increments.push_back(as_vector(v, "increments"));
  return StepEstimate{EventGrid{std::vector<double>(grid.begin(), grid.end())},
                      std::move(increments), std::move(index_set)};
}

json weight_spec_to_json(const WeightSpec& w) {
  if (w.is_empirical()) return {{"type", "empirical"}, {"t", w.empirical_time()}};
  json points = json::array();
  for (const WeightPoint& p : w.points())
    points.push_back({{"x", vector_to_json(p.x)}, {"t", p.t}, {"w", p.w}});
  return {{"type", "points"}, {"points", points}};
}

WeightSpec weight_spec_from_json(const json& doc, int r) {
  const std::string type = require(doc, "type").get<std::string>();
  if (type == "empirical") return WeightSpec::empirical(as_number(require(doc, "t"), "t"));
  if (type != "points") throw ValidationError("weight spec type must be points or empirical");
  std::vector<WeightPoint> points;
  for (const json& p : require(doc, "points")) {
    WeightPoint wp;
    wp.x = as_vector(require(p, "x"), "x");
    if (wp.x.size() != r)
      throw ValidationError("weight point covariates must have dimension " + std::to_string(r));
    wp.t = as_number(require(p, "t"), "t");
    wp.w = as_number(require(p, "w"), "w");
    points.push_back(std::move(wp));
  }
  return WeightSpec::from_points(std::move(points));
}

namespace {

json focal_to_json(const Focal& focal) {
  return std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FocalPoint>) {
          return {{"type", "point"}, {"x", vector_to_json(f.x)}, {"t", f.t}};
        } else if constexpr (std::is_same_v<T, FocalInterval>) {
          return {{"type", "interval"}, {"x", vector_to_json(f.x)}, {"t1", f.t1}, {"t2", f.t2}};
        } else {
          return weight_spec_to_json(f);
        }
      },
      focal);
}

}  // namespace

json fic_report_to_json(const FicReport& report) {
  json candidates = json::array();
  for (const CandidateScore& c : report.candidates) {
    json entry = {{"I", c.index_set.one_based()},
                  {"sqb_hat", c.sqb},
                  {"var_hat", c.var},
                  {"score", c.score},
                  {"feasible", c.feasible}};
    if (!c.note.empty()) entry["note"] = c.note;
    candidates.push_back(std::move(entry));
  }
  json winner;
  if (report.winner) winner = report.winner->one_based();
  return {{"focal", focal_to_json(report.focal)}, {"candidates", candidates}, {"winner", winner}};
}

SimConfig sim_config_from_json(const json& doc) {
  SimConfig cfg;
  cfg.n = static_cast<int>(as_number(require(doc, "n"), "n"));
  cfg.seed = require(doc, "seed").get<uint64_t>();
  const json& cov = require(doc, "covariates");
  const std::string type = require(cov, "type").get<std::string>();
  if (type == "gamma") {
    cfg.covariates = gamma_spec_from_json(cov);
  } else if (type == "explicit") {
    std::vector<Eigen::VectorXd> values;
    for (const json& v : require(cov, "values")) values.push_back(as_vector(v, "values"));
    cfg.covariates = std::move(values);
  } else {
    throw ValidationError("covariates type must be gamma or explicit");
  }
  for (const json& a : require(doc, "alphas")) cfg.alphas.push_back(alpha_from_json(a));
  cfg.censoring = censoring_from_json(doc.contains("censoring") ? doc.at("censoring") : json());
  if (doc.contains("mode")) {
    const std::string mode = doc.at("mode").get<std::string>();
    if (mode == "marginal") {
      cfg.mode = CovariateMode::marginal;
    } else if (mode == "conditional") {
      cfg.mode = CovariateMode::conditional;
    } else {
      throw ValidationError("mode must be marginal or conditional");
    }
  }
  cfg.validate();
  return cfg;
}

OracleConfig oracle_config_from_json(const json& doc) {
  OracleConfig cfg;
  cfg.covariates = gamma_spec_from_json(require(doc, "covariates"));
  for (const json& a : require(doc, "alphas")) cfg.alphas.push_back(alpha_from_json(a));
  cfg.censoring = censoring_from_json(doc.contains("censoring") ? doc.at("censoring") : json());
  cfg.focal_x = as_vector(require(doc, "focal_x"), "focal_x");
  cfg.horizon = as_number(require(doc, "t"), "t");
  cfg.validate();
  return cfg;
}

}  // namespace aalenfic
