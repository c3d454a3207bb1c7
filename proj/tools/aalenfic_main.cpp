// Command-line front end. Talks to the library exclusively through the
// C API in aalenfic.h; every human-readable table mirrors a JSON artifact.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aalenfic.h"

using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open file: " << path << "\n";
    std::exit(kExitValidation);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write file: " << path << "\n";
    std::exit(kExitValidation);
  }
  out << content;
}

int fail(aalenfic_status status) {
  std::cerr << "error: " << aalenfic_last_error() << "\n";
  return static_cast<int>(status);
}

std::string fmt(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(field, &pos));
      if (pos != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      std::cerr << "error: '" << field << "' is not a number\n";
      std::exit(kExitValidation);
    }
  }
  return out;
}

json parse_subset(const std::string& text) {
  json out = json::array();
  for (double v : parse_number_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

// "all" or semicolon-separated subsets of comma-separated 1-based indices
json parse_candidates(const std::string& text) {
  if (text == "all") return json("all");
  json out = json::array();
  std::stringstream ss(text);
  std::string subset;
  while (std::getline(ss, subset, ';'))
    if (!subset.empty()) out.push_back(parse_subset(subset));
  return out;
}

// Deterministic fields only; wall-clock goes to stderr so that reruns of the
// same command produce byte-identical artifacts.
json manifest(const std::string& command, const std::string& input, const json& extra = {}) {
  json m = {{"command", command}, {"input", input}, {"version", aalenfic_version()}};
  if (extra.is_object())
    for (const auto& [k, v] : extra.items()) m[k] = v;
  return m;
}

std::string join_subset(const json& one_based) {
  std::string out;
  for (const json& v : one_based) {
    if (!out.empty()) out += "+";
    out += std::to_string(v.get<int>());
  }
  return out;
}

void print_report_table(const json& report) {
  std::printf("%-4s %-12s %14s %14s %14s  %s\n", "rank", "I", "sqb_hat", "var_hat", "score",
              "status");
  int rank = 1;
  for (const json& c : report.at("candidates")) {
    const bool feasible = c.at("feasible").get<bool>();
    std::string status = feasible ? "ok" : "infeasible";
    if (feasible && c.contains("note")) status += " (" + c.at("note").get<std::string>() + ")";
    std::printf("%-4d %-12s %14.6g %14.6g %14.6g  %s\n", rank++,
                join_subset(c.at("I")).c_str(), c.at("sqb_hat").get<double>(),
                c.at("var_hat").get<double>(), c.at("score").get<double>(), status.c_str());
  }
  if (!report.at("winner").is_null())
    std::printf("winner: %s\n", join_subset(report.at("winner")).c_str());
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ~Timer() {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::cerr << "elapsed: " << ms << " ms\n";
  }
};

int cmd_fit(const std::string& data_path, const std::string& tau, const std::string& subset,
            const std::string& json_out) {
  const std::string csv = read_file(data_path);
  aalenfic_dataset* ds = nullptr;
  aalenfic_status st = aalenfic_dataset_from_csv(csv.c_str(), &ds);
  if (st != AALENFIC_OK) return fail(st);

  json req = json::object();
  if (!tau.empty()) req["tau"] = std::stod(tau);
  if (!subset.empty()) req["subset"] = parse_subset(subset);
  char* resp = nullptr;
  st = aalenfic_fit(ds, req.dump().c_str(), &resp);
  aalenfic_dataset_free(ds);
  if (st != AALENFIC_OK) return fail(st);
  const json est = json::parse(resp);
  aalenfic_string_free(resp);

  const json& grid = est.at("grid");
  const json& inc = est.at("increments");
  const std::string cols = est.at("index_set").is_string()
                               ? "full"
                               : join_subset(est.at("index_set"));
  std::printf("aalen fit: %zu jump times, columns %s\n", grid.size(), cols.c_str());
  std::printf("%14s", "time");
  const size_t dim = grid.empty() ? 0 : inc[0].size();
  for (size_t j = 0; j < dim; ++j) std::printf(" %13s%zu", "dA", j + 1);
  for (size_t j = 0; j < dim; ++j) std::printf(" %13s%zu", "A", j + 1);
  std::printf("\n");
  std::vector<double> cum(dim, 0.0);
  for (size_t k = 0; k < grid.size(); ++k) {
    std::printf("%14.6g", grid[k].get<double>());
    for (size_t j = 0; j < dim; ++j) std::printf(" %14.6g", inc[k][j].get<double>());
    for (size_t j = 0; j < dim; ++j) {
      cum[j] += inc[k][j].get<double>();
      std::printf(" %14.6g", cum[j]);
    }
    std::printf("\n");
  }
  if (!json_out.empty())
    write_output(json_out,
                 json{{"manifest", manifest("fit", data_path)}, {"estimate", est}}.dump(1) + "\n");
  return 0;
}

int cmd_fic(const std::string& data_path, const std::string& x, const std::string& t,
            const std::string& t1, const std::string& t2, const std::string& weights_path,
            const std::string& centers, const std::string& delta,
            const std::string& candidates, const std::string& protected_set,
            const std::string& json_out) {
  const std::string csv = read_file(data_path);
  aalenfic_dataset* ds = nullptr;
  aalenfic_status st = aalenfic_dataset_from_csv(csv.c_str(), &ds);
  if (st != AALENFIC_OK) return fail(st);

  json req = json::object();
  req["candidates"] = parse_candidates(candidates);
  if (!protected_set.empty()) req["protected"] = parse_subset(protected_set);
  if (!x.empty()) req["x"] = parse_number_list(x);
  if (!weights_path.empty()) {
    req["mode"] = "weights";
    req["weights"] = json::parse(read_file(weights_path), nullptr, false);
    if (req["weights"].is_discarded()) {
      std::cerr << "error: invalid JSON in " << weights_path << "\n";
      aalenfic_dataset_free(ds);
      return kExitValidation;
    }
  } else if (!centers.empty()) {
    req["mode"] = "window";
    req["centers"] = parse_number_list(centers);
    req["delta"] = delta.empty() ? 0.0 : std::stod(delta);
  } else if (!t1.empty() || !t2.empty()) {
    if (t1.empty() || t2.empty()) {
      std::cerr << "error: interval mode needs both --t1 and --t2\n";
      aalenfic_dataset_free(ds);
      return kExitValidation;
    }
    req["mode"] = "interval";
    req["t1"] = std::stod(t1);
    req["t2"] = std::stod(t2);
  } else if (!t.empty()) {
    req["mode"] = "point";
    req["t"] = std::stod(t);
  } else {
    std::cerr << "error: pass --t, --t1/--t2, --centers or --weights\n";
    aalenfic_dataset_free(ds);
    return kExitValidation;
  }

  char* resp = nullptr;
  st = aalenfic_fic(ds, req.dump().c_str(), &resp);
  aalenfic_dataset_free(ds);
  if (st != AALENFIC_OK) return fail(st);
  const json report = json::parse(resp);
  aalenfic_string_free(resp);

  if (report.is_array()) {
    for (const json& entry : report) {
      std::printf("window center %g:\n", entry.at("center").get<double>());
      print_report_table(entry.at("report"));
    }
  } else {
    print_report_table(report);
  }
  if (!json_out.empty())
    write_output(json_out,
                 json{{"manifest", manifest("fic", data_path)}, {"report", report}}.dump(1) + "\n");
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path, int threads) {
  json config = json::parse(read_file(config_path), nullptr, false);
  if (config.is_discarded()) {
    std::cerr << "error: invalid JSON in " << config_path << "\n";
    return kExitValidation;
  }
  config["threads"] = threads;
  aalenfic_dataset* ds = nullptr;
  aalenfic_status st = aalenfic_simulate(config.dump().c_str(), &ds);
  if (st != AALENFIC_OK) return fail(st);
  char* csv = nullptr;
  st = aalenfic_dataset_to_csv(ds, &csv);
  aalenfic_dataset_free(ds);
  if (st != AALENFIC_OK) return fail(st);

  json m = manifest("simulate", config_path);
  if (config.contains("seed")) m["seed"] = config.at("seed");
  std::string out = "# manifest: " + m.dump() + "\n";
  out += csv;
  aalenfic_string_free(csv);
  write_output(out_path, out);
  return 0;
}

int cmd_oracle(const std::string& config_path, double n, const std::string& candidates,
               const std::string& protected_set, bool radius, int reps, uint64_t seed,
               int threads, const std::string& out_path) {
  json config = json::parse(read_file(config_path), nullptr, false);
  if (config.is_discarded()) {
    std::cerr << "error: invalid JSON in " << config_path << "\n";
    return kExitValidation;
  }
  json req = {{"config", config}, {"n", n}, {"candidates", parse_candidates(candidates)}};
  if (!protected_set.empty()) req["protected"] = parse_subset(protected_set);
  if (radius) req["radius"] = true;
  if (reps > 0) {
    req["reps"] = reps;
    req["seed"] = seed;
    req["threads"] = threads;
  }
  char* resp = nullptr;
  aalenfic_status st = aalenfic_oracle_risk(req.dump().c_str(), &resp);
  if (st != AALENFIC_OK) return fail(st);
  const json rows = json::parse(resp).at("rows");
  aalenfic_string_free(resp);

  json m = manifest("oracle", config_path, {{"n", n}});
  std::string out = "# manifest: " + m.dump() + "\n";
  out += "config_id,I,sqb,var,mse";
  if (radius) out += ",lhs,rhs,submodel_preferred";
  if (reps > 0) out += ",mse_mc,mc_se,mc_dropped";
  out += "\n";
  for (const json& row : rows) {
    out += row.at("config_id").get<std::string>() + "," + join_subset(row.at("I"));
    out += "," + fmt(row.at("sqb").get<double>());
    out += "," + fmt(row.at("var").get<double>());
    out += "," + fmt(row.at("mse").get<double>());
    if (radius) {
      out += "," + fmt(row.at("lhs").get<double>());
      out += "," + fmt(row.at("rhs").get<double>());
      out += row.at("submodel_preferred").get<bool>() ? ",1" : ",0";
    }
    if (reps > 0) {
      out += "," + fmt(row.at("mse_mc").get<double>());
      out += "," + fmt(row.at("mc_se").get<double>());
      out += "," + std::to_string(row.at("mc_dropped").get<int>());
    }
    out += "\n";
  }
  write_output(out_path, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"additive hazard regression with focused covariate selection"};
  app.set_version_flag("--version", std::string(aalenfic_version()));
  app.require_subcommand(1);

  std::string data_path, tau, subset, json_out;
  CLI::App* fit = app.add_subcommand("fit", "Aalen estimate of the cumulative regressors");
  fit->add_option("data", data_path, "input CSV (time,status,x1,...,xr)")->required();
  fit->add_option("--tau", tau, "fit horizon (default: largest event time)");
  fit->add_option("--subset", subset, "1-based covariate subset, e.g. 1,3");
  fit->add_option("--json", json_out, "write the estimate as JSON");

  std::string x, t, t1, t2, weights_path, centers, delta, candidates = "all", protected_set;
  CLI::App* fic = app.add_subcommand("fic", "rank candidate covariate subsets");
  fic->add_option("data", data_path, "input CSV")->required();
  fic->add_option("--x", x, "focal covariate vector, e.g. 1,2.5");
  fic->add_option("--t", t, "focal time");
  fic->add_option("--t1", t1, "interval start");
  fic->add_option("--t2", t2, "interval end");
  fic->add_option("--weights", weights_path, "weight spec JSON file");
  fic->add_option("--centers", centers, "gliding-window centers, e.g. 1,2,3");
  fic->add_option("--delta", delta, "gliding-window half width");
  fic->add_option("--candidates", candidates, "'all' or subsets like '1;2;1,2'");
  fic->add_option("--protected", protected_set, "indices every candidate must contain");
  fic->add_option("--json", json_out, "write the report as JSON");

  std::string config_path, out_path;
  int threads = 1;
  CLI::App* sim = app.add_subcommand("simulate", "draw a dataset from a hazard config");
  sim->add_option("config", config_path, "simulation config JSON")->required();
  sim->add_option("--out", out_path, "output CSV path (default stdout)");
  sim->add_option("--threads", threads, "worker threads");

  double n = 0.0;
  bool radius = false;
  int reps = 0;
  uint64_t seed = 1;
  CLI::App* oracle = app.add_subcommand("oracle", "closed-form risk under a population config");
  oracle->add_option("config", config_path, "oracle config JSON (object or array)")->required();
  oracle->add_option("--n", n, "sample size entering the squared bias")->required();
  oracle->add_option("--candidates", candidates, "'all' or subsets like '1;2;1,2'");
  oracle->add_option("--protected", protected_set, "indices every candidate must contain");
  oracle->add_flag("--radius", radius, "add tolerance-radius columns");
  oracle->add_option("--reps", reps, "add Monte Carlo columns from this many replications");
  oracle->add_option("--seed", seed, "seed for the Monte Carlo columns");
  oracle->add_option("--threads", threads, "worker threads for the Monte Carlo columns");
  oracle->add_option("--out", out_path, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    app.exit(e);
    return kExitValidation;
  }

  Timer timer;
  if (fit->parsed()) return cmd_fit(data_path, tau, subset, json_out);
  if (fic->parsed())
    return cmd_fic(data_path, x, t, t1, t2, weights_path, centers, delta, candidates,
                   protected_set, json_out);
  if (sim->parsed()) return cmd_simulate(config_path, out_path, threads);
  if (oracle->parsed())
    return cmd_oracle(config_path, n, candidates, protected_set, radius, reps, seed, threads,
                      out_path);
  return kExitValidation;
}
