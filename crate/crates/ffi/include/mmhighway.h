#ifndef MMHIGHWAY_H
#define MMHIGHWAY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum MhStatus {
  MH_STATUS_OK = 0,
  MH_STATUS_NULL_POINTER = 1,
  MH_STATUS_INVALID_ARGUMENT = 2,
  MH_STATUS_NUMERICAL = 3,
  MH_STATUS_CONFIG = 4,
  MH_STATUS_IO = 5,
  MH_STATUS_PANIC = 6,
} MhStatus;

/**
 * Outage expression selector.
 */
typedef enum MhVariant {
  MH_VARIANT_FULL = 0,
  MH_VARIANT_SIMPLIFIED_LOS_ONLY = 1,
  MH_VARIANT_MEDIAN_DEPLOYMENT = 2,
} MhVariant;

/**
 * Opaque scenario handle.
 */
typedef struct MhScenario MhScenario;

/**
 * Monte Carlo estimate with its confidence interval.
 */
typedef struct MhEstimate {
  double value;
  double ci_low;
  double ci_high;
  uint64_t n;
} MhEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL
 * terminated, truncated to `len` bytes). Returns the full message length
 * without the terminator, or 0 when there is no error.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t mh_last_error(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mh_version(void);

/**
 * Reference scenario with `n_obstacle_lanes` obstacle lanes (1 or 2) and
 * BS density `lambda_bs` per meter.
 *
 * # Safety
 * `out` must be a valid pointer; on success it receives a handle to free
 * with `mh_scenario_free`.
 */
enum MhStatus mh_scenario_new_default(uint32_t n_obstacle_lanes,
                                      double lambda_bs,
                                      struct MhScenario **out);

/**
 * Scenario described by the TOML experiment text `toml`.
 *
 * # Safety
 * `toml` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum MhStatus mh_scenario_from_toml(const char *toml, struct MhScenario **out);

/**
 * Releases a scenario handle. Null is ignored.
 *
 * # Safety
 * `scenario` must come from an `mh_scenario_*` constructor and must not be
 * used afterwards.
 */
void mh_scenario_free(struct MhScenario *scenario);

/**
 * Sets the main-lobe beamwidth ψ of BSs and user, in degrees.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum MhStatus mh_scenario_set_beamwidth_deg(struct MhScenario *scenario, double psi_deg);

/**
 * Sets the BS main-lobe gain G_TX, in dB.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum MhStatus mh_scenario_set_g_tx_main_db(struct MhScenario *scenario, double g_db);

/**
 * Sets the NLOS path-loss exponent α_N.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum MhStatus mh_scenario_set_alpha_n(struct MhScenario *scenario, double alpha_n);

/**
 * Sets the BS density λ_BS, per meter.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum MhStatus mh_scenario_set_lambda_bs(struct MhScenario *scenario, double lambda_bs);

/**
 * LOS and NLOS association probabilities.
 *
 * # Safety
 * `scenario` must be a live handle; `p_l` and `p_n` valid pointers.
 */
enum MhStatus mh_association(const struct MhScenario *scenario, double *p_l, double *p_n);

/**
 * SINR outage probability at threshold `theta_db`.
 *
 * # Safety
 * `scenario` must be a live handle; `out` a valid pointer.
 */
enum MhStatus mh_outage_probability(const struct MhScenario *scenario,
                                    double theta_db,
                                    enum MhVariant variant,
                                    double *out);

/**
 * Probability that the rate reaches `kappa` bit/s.
 *
 * # Safety
 * `scenario` must be a live handle; `out` a valid pointer.
 */
enum MhStatus mh_rate_coverage(const struct MhScenario *scenario,
                               double kappa,
                               enum MhVariant variant,
                               double *out);

/**
 * Simulated outage probability at `theta_db` with the default simulator
 * settings, `n_trials` trials and `seed`.
 *
 * # Safety
 * `scenario` must be a live handle; `out` a valid pointer.
 */
enum MhStatus mh_simulate_outage(const struct MhScenario *scenario,
                                 double theta_db,
                                 uint32_t n_trials,
                                 uint64_t seed,
                                 struct MhEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MMHIGHWAY_H */
