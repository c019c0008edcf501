// C ABI wrapper: opaque handles, status codes, exception containment.
#include "casim.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "report.hpp"
#include "sim.hpp"
#include "textio.hpp"

struct casim_config {
  casim::SimConfig cfg;
};

struct casim_result {
  casim::RunResult run;
};

namespace {

constexpr const char* kVersion = "1.0.0";

void put_error(char* err, size_t err_cap, const char* msg) {
  if (err && err_cap > 0) std::snprintf(err, err_cap, "%s", msg);
}

casim_status failure_status(char* err, size_t err_cap) {
  try {
    throw;
  } catch (const casim::ConfigError& e) {
    put_error(err, err_cap, e.what());
    return CASIM_ERR_VALIDATION;
  } catch (const casim::IoError& e) {
    put_error(err, err_cap, e.what());
    return CASIM_ERR_IO;
  } catch (const std::invalid_argument& e) {
    put_error(err, err_cap, e.what());
    return CASIM_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    put_error(err, err_cap, e.what());
    return CASIM_ERR_INTERNAL;
  } catch (...) {
    put_error(err, err_cap, "unknown error");
    return CASIM_ERR_INTERNAL;
  }
}

template <typename Fn>
casim_status guarded(char* err, size_t err_cap, Fn&& fn) {
  try {
    fn();
    return CASIM_OK;
  } catch (...) {
    return failure_status(err, err_cap);
  }
}

casim_status require(bool ok, char* err, size_t err_cap, const char* msg) {
  if (ok) return CASIM_OK;
  put_error(err, err_cap, msg);
  return CASIM_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* casim_version(void) { return kVersion; }

const char* casim_status_name(casim_status status) {
  switch (status) {
    case CASIM_OK: return "CASIM_OK";
    case CASIM_ERR_IO: return "CASIM_ERR_IO";
    case CASIM_ERR_VALIDATION: return "CASIM_ERR_VALIDATION";
    case CASIM_ERR_INVALID_ARGUMENT: return "CASIM_ERR_INVALID_ARGUMENT";
    case CASIM_ERR_INTERNAL: return "CASIM_ERR_INTERNAL";
  }
  return "?";
}

casim_status casim_config_create_default(casim_config** out) {
  if (!out) return CASIM_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) casim_config{};
  return *out ? CASIM_OK : CASIM_ERR_INTERNAL;
}

casim_status casim_config_load(const char* path, casim_config** out, char* err,
                               size_t err_cap) {
  if (auto st = require(path && out, err, err_cap, "path and out must be non-NULL"))
    return st;
  *out = nullptr;
  return guarded(err, err_cap, [&] {
    auto handle = std::make_unique<casim_config>();
    handle->cfg = casim::load_config_file(path);
    *out = handle.release();
  });
}

casim_status casim_config_parse(const char* json_text, casim_config** out, char* err,
                                size_t err_cap) {
  if (auto st = require(json_text && out, err, err_cap, "json_text and out must be non-NULL"))
    return st;
  *out = nullptr;
  return guarded(err, err_cap, [&] {
    auto handle = std::make_unique<casim_config>();
    handle->cfg = casim::config_from_json(casim::parse_config_text(json_text));
    *out = handle.release();
  });
}

casim_status casim_config_set(casim_config* cfg, const char* key, const char* value,
                              char* err, size_t err_cap) {
  if (auto st = require(cfg && key && value, err, err_cap,
                        "cfg, key and value must be non-NULL"))
    return st;
  return guarded(err, err_cap, [&] {
    nlohmann::json doc = casim::config_to_json(cfg->cfg);
    casim::apply_override(doc, key, value);
    cfg->cfg = casim::config_from_json(doc);
  });
}

casim_status casim_config_dump(const casim_config* cfg, char** out_json) {
  if (!cfg || !out_json) return CASIM_ERR_INVALID_ARGUMENT;
  const std::string text = casim::config_to_json(cfg->cfg).dump(2) + "\n";
  char* buf = static_cast<char*>(std::malloc(text.size() + 1));
  if (!buf) return CASIM_ERR_INTERNAL;
  std::memcpy(buf, text.c_str(), text.size() + 1);
  *out_json = buf;
  return CASIM_OK;
}

void casim_config_free(casim_config* cfg) { delete cfg; }

void casim_string_free(char* s) { std::free(s); }

casim_status casim_run(const casim_config* cfg, casim_result** out, char* err,
                       size_t err_cap) {
  if (auto st = require(cfg && out, err, err_cap, "cfg and out must be non-NULL")) return st;
  *out = nullptr;
  return guarded(err, err_cap, [&] {
    auto handle = std::make_unique<casim_result>();
    handle->run = casim::run_simulation(cfg->cfg);
    *out = handle.release();
  });
}

casim_status casim_eval(const casim_config* cfg, const char* qtable_dir, casim_result** out,
                        char* err, size_t err_cap) {
  if (auto st = require(cfg && qtable_dir && out, err, err_cap,
                        "cfg, qtable_dir and out must be non-NULL"))
    return st;
  *out = nullptr;
  return guarded(err, err_cap, [&] {
    auto tables = casim::load_qtable_files(cfg->cfg, qtable_dir);
    auto handle = std::make_unique<casim_result>();
    handle->run = casim::run_eval(cfg->cfg, std::move(tables));
    *out = handle.release();
  });
}

casim_status casim_compare(const casim_config* cfg, const char* const* methods,
                           size_t n_methods, const uint64_t* seeds, size_t n_seeds,
                           const char* out_dir, int max_threads, char* err, size_t err_cap) {
  if (auto st = require(cfg && out_dir && (n_methods == 0 || methods) &&
                            (n_seeds == 0 || seeds),
                        err, err_cap, "cfg and out_dir must be non-NULL"))
    return st;
  return guarded(err, err_cap, [&] {
    casim::CompareSpec spec;
    spec.base = cfg->cfg;
    for (size_t i = 0; i < n_methods; ++i) {
      auto m = casim::method_from_name(methods[i] ? methods[i] : "");
      if (!m)
        throw casim::ConfigError(std::string("config error: methods: unknown method '") +
                                 (methods[i] ? methods[i] : "(null)") + "'");
      spec.methods.push_back(*m);
    }
    spec.seeds.assign(seeds, seeds + n_seeds);
    spec.max_threads = max_threads;
    casim::run_compare_to_dir(spec, out_dir);
  });
}

casim_status casim_result_mean_throughput_bps(const casim_result* result, int traffic_class,
                                              double* out) {
  if (!result || !out || traffic_class < 0 || traffic_class >= casim::kNumClasses)
    return CASIM_ERR_INVALID_ARGUMENT;
  *out = result->run.summary.throughput_bps[traffic_class];
  return CASIM_OK;
}

casim_status casim_result_mean_active_ccs(const casim_result* result, int traffic_class,
                                          double* out) {
  if (!result || !out || traffic_class < -1 || traffic_class >= casim::kNumClasses)
    return CASIM_ERR_INVALID_ARGUMENT;
  *out = traffic_class < 0 ? result->run.summary.active_ccs_all
                           : result->run.summary.active_ccs[traffic_class];
  return CASIM_OK;
}

casim_status casim_result_energy_total(const casim_result* result, double* out) {
  if (!result || !out) return CASIM_ERR_INVALID_ARGUMENT;
  *out = result->run.summary.energy_total;
  return CASIM_OK;
}

casim_status casim_result_convergence_slot(const casim_result* result, int64_t* out) {
  if (!result || !out) return CASIM_ERR_INVALID_ARGUMENT;
  *out = result->run.summary.convergence_slot;
  return CASIM_OK;
}

casim_status casim_result_final_window_reward(const casim_result* result, double* out) {
  if (!result || !out) return CASIM_ERR_INVALID_ARGUMENT;
  *out = result->run.summary.final_window_mean_reward;
  return CASIM_OK;
}

casim_status casim_result_write_metrics_csv(const casim_result* result, const char* path,
                                            char* err, size_t err_cap) {
  if (auto st = require(result && path, err, err_cap, "result and path must be non-NULL"))
    return st;
  return guarded(err, err_cap,
                 [&] { casim::atomic_write_file(path, casim::metrics_csv(result->run.log)); });
}

casim_status casim_result_write_epochs_csv(const casim_result* result, const char* path,
                                           char* err, size_t err_cap) {
  if (auto st = require(result && path, err, err_cap, "result and path must be non-NULL"))
    return st;
  return guarded(err, err_cap,
                 [&] { casim::atomic_write_file(path, casim::epochs_csv(result->run.log)); });
}

casim_status casim_result_write_summary_json(const casim_result* result, const char* path,
                                             char* err, size_t err_cap) {
  if (auto st = require(result && path, err, err_cap, "result and path must be non-NULL"))
    return st;
  return guarded(err, err_cap, [&] {
    nlohmann::json summary{{"schema_version", 1},
                           {"run", casim::run_summary_json(result->run.summary)}};
    casim::atomic_write_file(path, summary.dump(2) + "\n");
  });
}

casim_status casim_result_write_qtables(const casim_result* result, const char* dir,
                                        char* err, size_t err_cap) {
  if (auto st = require(result && dir, err, err_cap, "result and dir must be non-NULL"))
    return st;
  return guarded(err, err_cap, [&] {
    if (result->run.qtables.empty())
      throw casim::ConfigError(
          "config error: method: this result has no Q-tables (baseline method)");
    casim::write_qtable_files(result->run, dir);
  });
}

void casim_result_free(casim_result* result) { delete result; }

}  // extern "C"
