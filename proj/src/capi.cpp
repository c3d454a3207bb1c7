#include "aalenfic.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "aalenfic/errors.hpp"
#include "aalenfic/json_io.hpp"
#include "aalenfic/version.hpp"

using namespace aalenfic;

struct aalenfic_dataset {
  Dataset impl;
};

namespace {

thread_local std::string g_last_error;

template <class F>
aalenfic_status guarded(F&& body) noexcept {
  try {
    g_last_error.clear();
    body();
    return AALENFIC_OK;
  } catch (const SingularityError& e) {
    g_last_error = e.what();
    return AALENFIC_SINGULAR_ERROR;
  } catch (const QuadratureError& e) {
    g_last_error = e.what();
    return AALENFIC_SINGULAR_ERROR;
  } catch (const InfeasibleError& e) {
    g_last_error = e.what();
    return AALENFIC_INFEASIBLE_ERROR;
  } catch (const ValidationError& e) {
    g_last_error = e.what();
    return AALENFIC_VALIDATION_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AALENFIC_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return AALENFIC_INTERNAL_ERROR;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const char* require_cstr(const char* s, const char* what) {
  if (!s) throw ValidationError(std::string(what) + " must not be NULL");
  return s;
}

json parse_request(const char* request_json) {
  return request_json && *request_json ? parse_json(request_json) : json::object();
}

std::vector<IndexSet> parse_candidates(const json& req, int r) {
  std::vector<int> protected_one_based;
  if (req.contains("protected"))
    for (const json& v : req.at("protected")) protected_one_based.push_back(v.get<int>());
  if (!req.contains("candidates") ||
      (req.at("candidates").is_string() && req.at("candidates") == "all"))
    return enumerate_candidates(r, protected_one_based);
  const json& list = req.at("candidates");
  if (!list.is_array() || list.empty())
    throw ValidationError("candidates must be \"all\" or a nonempty array of index lists");
  std::vector<IndexSet> out;
  for (const json& entry : list) {
    std::vector<int> one_based;
    for (const json& v : entry) one_based.push_back(v.get<int>());
    out.push_back(IndexSet::from_one_based(std::move(one_based), r));
  }
  return out;
}

IndexSet parse_subset(const json& entry, int r) {
  std::vector<int> one_based;
  for (const json& v : entry) one_based.push_back(v.get<int>());
  return IndexSet::from_one_based(std::move(one_based), r);
}

}  // namespace

extern "C" {

const char* aalenfic_version(void) { return AALENFIC_VERSION; }

const char* aalenfic_last_error(void) { return g_last_error.c_str(); }

void aalenfic_string_free(char* s) { std::free(s); }

aalenfic_status aalenfic_dataset_from_csv(const char* text, aalenfic_dataset** out) {
  return guarded([&] {
    require_cstr(text, "csv text");
    if (!out) throw ValidationError("output handle must not be NULL");
    *out = new aalenfic_dataset{Dataset::from_csv_string(text)};
  });
}

aalenfic_status aalenfic_dataset_from_json(const char* text, aalenfic_dataset** out) {
  return guarded([&] {
    require_cstr(text, "json text");
    if (!out) throw ValidationError("output handle must not be NULL");
    *out = new aalenfic_dataset{dataset_from_json(parse_json(text))};
  });
}

aalenfic_status aalenfic_dataset_to_csv(const aalenfic_dataset* d, char** out) {
  return guarded([&] {
    if (!d || !out) throw ValidationError("dataset and output must not be NULL");
    *out = dup_string(d->impl.to_csv());
  });
}

aalenfic_status aalenfic_dataset_to_json(const aalenfic_dataset* d, char** out) {
  return guarded([&] {
    if (!d || !out) throw ValidationError("dataset and output must not be NULL");
    *out = dup_string(dataset_to_json(d->impl).dump());
  });
}

int aalenfic_dataset_rows(const aalenfic_dataset* d) { return d ? d->impl.n() : 0; }

int aalenfic_dataset_covariate_dim(const aalenfic_dataset* d) { return d ? d->impl.r() : 0; }

void aalenfic_dataset_free(aalenfic_dataset* d) { delete d; }

aalenfic_status aalenfic_fit(const aalenfic_dataset* d, const char* request_json,
                             char** response_json) {
  return guarded([&] {
    if (!d || !response_json) throw ValidationError("dataset and output must not be NULL");
    const json req = parse_request(request_json);
    const double tau =
        req.contains("tau") ? req.at("tau").get<double>() : d->impl.max_event_time();
    StepEstimate est = req.contains("subset")
                           ? fit_submodel(d->impl, parse_subset(req.at("subset"), d->impl.r()), tau)
                           : fit_full(d->impl, tau);
    *response_json = dup_string(step_estimate_to_json(est).dump());
  });
}

aalenfic_status aalenfic_fic(const aalenfic_dataset* d, const char* request_json,
                             char** response_json) {
  return guarded([&] {
    if (!d || !response_json) throw ValidationError("dataset and output must not be NULL");
    const json req = parse_request(request_json);
    const int r = d->impl.r();
    const std::vector<IndexSet> candidates = parse_candidates(req, r);
    const std::string mode =
        req.contains("mode") ? req.at("mode").get<std::string>() : std::string("point");

    if (mode == "window") {
      const Eigen::VectorXd x = [&] {
        if (!req.contains("x")) throw ValidationError("window mode needs 'x'");
        Eigen::VectorXd v(req.at("x").size());
        for (size_t i = 0; i < req.at("x").size(); ++i) v[i] = req.at("x")[i].get<double>();
        return v;
      }();
      std::vector<double> centers;
      for (const json& c : req.at("centers")) centers.push_back(c.get<double>());
      const double delta = req.at("delta").get<double>();
      const std::vector<FicReport> reports =
          gliding_window(d->impl, candidates, x, centers, delta);
      json out = json::array();
      for (size_t k = 0; k < reports.size(); ++k)
        out.push_back({{"center", centers[k]}, {"report", fic_report_to_json(reports[k])}});
      *response_json = dup_string(out.dump());
      return;
    }

    Focal focal = [&]() -> Focal {
      if (mode == "weights") return weight_spec_from_json(req.at("weights"), r);
      if (!req.contains("x")) throw ValidationError("focal covariate vector 'x' is required");
      Eigen::VectorXd x(req.at("x").size());
      for (size_t i = 0; i < req.at("x").size(); ++i) x[i] = req.at("x")[i].get<double>();
      if (mode == "interval")
        return FocalInterval{std::move(x), req.at("t1").get<double>(),
                             req.at("t2").get<double>()};
      if (mode != "point") throw ValidationError("mode must be point, interval, window or weights");
      return FocalPoint{std::move(x), req.at("t").get<double>()};
    }();
    const FicReport report = rank_models(d->impl, candidates, focal);
    *response_json = dup_string(fic_report_to_json(report).dump());
  });
}

aalenfic_status aalenfic_simulate(const char* config_json, aalenfic_dataset** out) {
  return guarded([&] {
    require_cstr(config_json, "config");
    if (!out) throw ValidationError("output handle must not be NULL");
    const json doc = parse_json(config_json);
    const SimConfig cfg = sim_config_from_json(doc);
    const int threads = doc.contains("threads") ? doc.at("threads").get<int>() : 1;
    *out = new aalenfic_dataset{simulate_dataset(cfg, 0, threads)};
  });
}

aalenfic_status aalenfic_replicate_mse(const char* request_json, char** response_json) {
  return guarded([&] {
    require_cstr(request_json, "request");
    if (!response_json) throw ValidationError("output must not be NULL");
    const json req = parse_json(request_json);
    const SimConfig cfg = sim_config_from_json(req.at("sim"));
    const IndexSet subset = parse_subset(req.at("subset"), cfg.r());
    Eigen::VectorXd x(req.at("x").size());
    for (size_t i = 0; i < req.at("x").size(); ++i) x[i] = req.at("x")[i].get<double>();
    const double t = req.at("t").get<double>();
    const int reps = req.at("reps").get<int>();
    const int threads = req.contains("threads") ? req.at("threads").get<int>() : 1;
    const MseEstimate est = replicate_mse(cfg, subset, x, t, reps, threads);
    const json out = {
        {"mean", est.mean}, {"se", est.se}, {"used", est.used}, {"dropped", est.dropped}};
    *response_json = dup_string(out.dump());
  });
}

aalenfic_status aalenfic_oracle_risk(const char* request_json, char** response_json) {
  return guarded([&] {
    require_cstr(request_json, "request");
    if (!response_json) throw ValidationError("output must not be NULL");
    const json req = parse_json(request_json);
    const double n = req.at("n").get<double>();
    const bool radius = req.contains("radius") && req.at("radius").get<bool>();
    const int reps = req.contains("reps") ? req.at("reps").get<int>() : 0;
    const int threads = req.contains("threads") ? req.at("threads").get<int>() : 1;
    const uint64_t seed = req.contains("seed") ? req.at("seed").get<uint64_t>() : 1;

    json configs = req.at("config");
    if (!configs.is_array()) configs = json::array({configs});
    json rows = json::array();
    for (size_t c = 0; c < configs.size(); ++c) {
      const json& doc = configs[c];
      const OracleConfig cfg = oracle_config_from_json(doc);
      const std::string config_id =
          doc.contains("id") ? doc.at("id").get<std::string>() : std::to_string(c);
      const std::vector<IndexSet> candidates = parse_candidates(req, cfg.r());
      for (const IndexSet& index_set : candidates) {
        const ExactRisk risk = exact_risk(cfg, index_set, n);
        json row = {{"config_id", config_id},
                    {"I", index_set.one_based()},
                    {"sqb", risk.sqb},
                    {"var", risk.var},
                    {"mse", risk.mse}};
        if (radius) {
          const ToleranceRadius tr = tolerance_radius(cfg, index_set, n);
          row["lhs"] = tr.lhs;
          row["rhs"] = tr.rhs;
          row["submodel_preferred"] = tr.submodel_preferred;
        }
        if (reps > 0) {
          SimConfig sim;
          sim.n = static_cast<int>(n);
          sim.seed = seed;
          sim.covariates = cfg.covariates;
          sim.alphas = cfg.alphas;
          sim.censoring = cfg.censoring;
          const MseEstimate mc =
              replicate_mse(sim, index_set, cfg.focal_x, cfg.horizon, reps, threads);
          row["mse_mc"] = mc.mean;
          row["mc_se"] = mc.se;
          row["mc_dropped"] = mc.dropped;
        }
        rows.push_back(std::move(row));
      }
    }
    *response_json = dup_string(json{{"rows", rows}}.dump());
  });
}

}  // extern "C"
