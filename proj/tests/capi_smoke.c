/* Exercises the C interface from plain C11: config edits, a run, accessors. */
#include <stdint.h>
#include <stdio.h>
#include <string.h>

#include "casim.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

int main(void) {
  CHECK(casim_version() != NULL);
  CHECK(strcmp(casim_status_name(CASIM_OK), "CASIM_OK") == 0);
  CHECK(strcmp(casim_status_name(CASIM_ERR_VALIDATION), "CASIM_ERR_VALIDATION") == 0);

  casim_config* cfg = NULL;
  CHECK(casim_config_create_default(&cfg) == CASIM_OK);
  CHECK(cfg != NULL);

  char err[512] = "";
  CHECK(casim_config_set(cfg, "total_slots", "200", err, sizeof err) == CASIM_OK);
  CHECK(casim_config_set(cfg, "n_ues", "2", err, sizeof err) == CASIM_OK);
  CHECK(casim_config_set(cfg, "method", "ALL_CC", err, sizeof err) == CASIM_OK);

  CHECK(casim_config_set(cfg, "n_ccs", "0", err, sizeof err) == CASIM_ERR_VALIDATION);
  CHECK(strstr(err, "n_ccs") != NULL);

  char* dump = NULL;
  CHECK(casim_config_dump(cfg, &dump) == CASIM_OK);
  CHECK(dump != NULL);
  CHECK(strstr(dump, "\"ALL_CC\"") != NULL);
  casim_string_free(dump);

  err[0] = '\0';
  casim_result* result = NULL;
  CHECK(casim_run(cfg, &result, err, sizeof err) == CASIM_OK);
  CHECK(result != NULL);

  double throughput = -1.0;
  CHECK(casim_result_mean_throughput_bps(result, 0, &throughput) == CASIM_OK);
  CHECK(throughput >= 0.0);

  double active = -1.0;
  CHECK(casim_result_mean_active_ccs(result, -1, &active) == CASIM_OK);
  CHECK(active >= 1.0);
  CHECK(active <= 3.0);

  double energy = -1.0;
  CHECK(casim_result_energy_total(result, &energy) == CASIM_OK);
  CHECK(energy > 0.0);

  int64_t convergence = -2;
  CHECK(casim_result_convergence_slot(result, &convergence) == CASIM_OK);
  CHECK(convergence >= -1);

  double reward = 1.0 / 0.0;
  CHECK(casim_result_final_window_reward(result, &reward) == CASIM_OK);
  CHECK(reward == reward); /* finite, not NaN */

  CHECK(casim_result_mean_throughput_bps(result, 7, &throughput) ==
        CASIM_ERR_INVALID_ARGUMENT);
  CHECK(casim_run(NULL, &result, err, sizeof err) == CASIM_ERR_INVALID_ARGUMENT);

  casim_config* bad = NULL;
  CHECK(casim_config_parse("{oops", &bad, err, sizeof err) == CASIM_ERR_VALIDATION);
  CHECK(bad == NULL);

  casim_result_free(result);
  casim_config_free(cfg);

  if (failures > 0) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi smoke: all checks passed\n");
  return 0;
}
