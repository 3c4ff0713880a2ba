/* C API for the SOPPP simulator: adversarial online path planning on
 * DAGs with the Exp3-OE learner, instantiated on Colonel Blotto and
 * Hide-and-Seek games.
 *
 * All functions return a soppp_status; on failure soppp_last_error()
 * holds a thread-local message. Handles are opaque and must be released
 * with their destroy function.
 */

#ifndef SOPPP_C_H
#define SOPPP_C_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum soppp_status {
    SOPPP_OK = 0,
    SOPPP_ERR_INVALID = 1,  /* bad configuration or arguments */
    SOPPP_ERR_RUNTIME = 2,  /* internal failure */
    SOPPP_ERR_IO = 3        /* file read/write failure */
} soppp_status;

const char* soppp_last_error(void);

/* -------------------------------------------------------------------
 * Experiment: parse a config, run it, inspect or export the series.
 * Config format: whitespace-separated key=value tokens, '#' comments.
 * Keys: game=cb|hs k n T seed [kappa condition=c1|c2 reps tuning=auto|explicit
 *       eta beta adversary values=fixed|random diagnostics=on|off
 *       obs=game|selfloops|complete out]
 * ------------------------------------------------------------------- */

typedef struct soppp_experiment soppp_experiment;

soppp_status soppp_experiment_create(const char* config_text, soppp_experiment** out);
void soppp_experiment_destroy(soppp_experiment* exp);

/* Runs all repetitions; idempotent (re-running replaces the series). */
soppp_status soppp_experiment_run(soppp_experiment* exp);

/* Number of stages in the computed series (0 before run). */
int64_t soppp_experiment_stages(const soppp_experiment* exp);

/* One row of the regret series; stage is 1-based. has_qt is 0 when
 * diagnostics were off (mean_qt is then left untouched). */
soppp_status soppp_experiment_row(const soppp_experiment* exp, int64_t stage,
                                  double* mean_cum_loss, double* best_cum_loss,
                                  double* regret, double* mean_qt, int* has_qt);

/* Mean terminal regret across repetitions. */
soppp_status soppp_experiment_terminal_regret(const soppp_experiment* exp, double* out);

/* Writes the series as CSV (header t,mean_cum_loss,best_cum_loss,regret,mean_Qt). */
soppp_status soppp_experiment_write_csv(const soppp_experiment* exp, const char* path);

/* -------------------------------------------------------------------
 * Bound verification: runs with diagnostics and checks the regret
 * bound on the realized traces (3-standard-error allowance).
 * ------------------------------------------------------------------- */

typedef struct soppp_bound_report {
    double mean_regret;
    double regret_std_err;
    double bound_rhs;
    double eta;
    double beta;
    int passed; /* 1 iff mean_regret <= bound_rhs + 3 * regret_std_err */
} soppp_bound_report;

soppp_status soppp_verify_bound(const char* config_text, soppp_bound_report* out);

/* -------------------------------------------------------------------
 * Graph info: structural counts and one sampled round's observation
 * graph classification. kappa/condition are ignored for game "cb";
 * condition is "c1" or "c2".
 * ------------------------------------------------------------------- */

typedef struct soppp_graph_report {
    int32_t vertex_count;
    int32_t edge_count;
    uint64_t path_count;      /* saturates at UINT64_MAX */
    int32_t path_count_exact; /* 0 when saturated */
    double log_path_count;
    int32_t max_path_length;
    int32_t alpha_bound;
    int32_t symmetric;
    int32_t satisfies_a0;
    int32_t alpha_exact; /* -1 when only the bound is available */
} soppp_graph_report;

soppp_status soppp_graph_info(const char* game, int32_t k, int32_t n, int32_t kappa,
                              const char* condition, soppp_graph_report* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SOPPP_C_H */
