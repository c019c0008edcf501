/* casim: carrier-aggregation cell simulator with learned SCC activation.
 *
 * C interface over the simulation core.  All objects are opaque handles
 * created and destroyed here; every fallible call returns a casim_status and,
 * when a (err, err_cap) pair is accepted, writes a NUL-terminated message
 * into the caller's buffer on failure.
 */
#ifndef CASIM_H
#define CASIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum casim_status {
  CASIM_OK = 0,
  CASIM_ERR_IO = 1,
  CASIM_ERR_VALIDATION = 2,
  CASIM_ERR_INVALID_ARGUMENT = 3,
  CASIM_ERR_INTERNAL = 4
} casim_status;

typedef struct casim_config casim_config;
typedef struct casim_result casim_result;

const char* casim_version(void);
const char* casim_status_name(casim_status status);

/* Configs.  Load/parse validate the whole document; set applies one
 * dotted-path override (value parsed as JSON, else taken as a string) and
 * re-validates. */
casim_status casim_config_create_default(casim_config** out);
casim_status casim_config_load(const char* path, casim_config** out, char* err,
                               size_t err_cap);
casim_status casim_config_parse(const char* json_text, casim_config** out, char* err,
                                size_t err_cap);
casim_status casim_config_set(casim_config* cfg, const char* key, const char* value,
                              char* err, size_t err_cap);
/* Returns the full validated config as JSON; free with casim_string_free. */
casim_status casim_config_dump(const casim_config* cfg, char** out_json);
void casim_config_free(casim_config* cfg);
void casim_string_free(char* s);

/* Runs.  casim_eval loads Q-tables written by casim_result_write_qtables and
 * replays them frozen (no exploration, no updates). */
casim_status casim_run(const casim_config* cfg, casim_result** out, char* err,
                       size_t err_cap);
casim_status casim_eval(const casim_config* cfg, const char* qtable_dir, casim_result** out,
                        char* err, size_t err_cap);

/* Cartesian product of methods x seeds; per-run metrics plus aggregate.csv
 * and summary.json under out_dir.  methods/seeds may be NULL (with count 0)
 * for the defaults: all five methods, the config's seed.  max_threads 0 uses
 * the hardware parallelism; output is identical for any thread count. */
casim_status casim_compare(const casim_config* cfg, const char* const* methods,
                           size_t n_methods, const uint64_t* seeds, size_t n_seeds,
                           const char* out_dir, int max_threads, char* err, size_t err_cap);

/* Result accessors.  traffic_class: 0 = FTP, 1 = CBR; -1 means all UEs where
 * noted.  convergence_slot is -1 when the run never converged. */
casim_status casim_result_mean_throughput_bps(const casim_result* result, int traffic_class,
                                              double* out);
casim_status casim_result_mean_active_ccs(const casim_result* result, int traffic_class,
                                          double* out);
casim_status casim_result_energy_total(const casim_result* result, double* out);
casim_status casim_result_convergence_slot(const casim_result* result, int64_t* out);
casim_status casim_result_final_window_reward(const casim_result* result, double* out);

casim_status casim_result_write_metrics_csv(const casim_result* result, const char* path,
                                            char* err, size_t err_cap);
casim_status casim_result_write_epochs_csv(const casim_result* result, const char* path,
                                           char* err, size_t err_cap);
casim_status casim_result_write_summary_json(const casim_result* result, const char* path,
                                             char* err, size_t err_cap);
casim_status casim_result_write_qtables(const casim_result* result, const char* dir,
                                        char* err, size_t err_cap);
void casim_result_free(casim_result* result);

#ifdef __cplusplus
}
#endif

#endif /* CASIM_H */
