#ifndef TILTED_TILTED_H
#define TILTED_TILTED_H

/*
 * C interface to the tilted empirical risk library.
 *
 * Every fallible call returns a tilted_status; on failure the message is
 * available from tilted_last_error() on the same thread until the next call.
 * Handles are opaque and owned by the caller. Strings returned through a
 * char** out-parameter are released with tilted_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TILTED_API __declspec(dllexport)
#else
#define TILTED_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tilted_status {
    TILTED_OK = 0,
    TILTED_INVALID_INPUT = 1,
    TILTED_ABSOLUTE_CONTINUITY = 2,
    TILTED_ENUMERATION_TOO_LARGE = 3,
    TILTED_MISSING_FIELD = 4,
    TILTED_TILT_SIGN = 5,
    TILTED_CONFIG = 6,
    TILTED_IO = 7,
    TILTED_INTERNAL = 8
} tilted_status;

typedef enum tilted_kernel_kind {
    TILTED_KERNEL_TILTED_GIBBS = 0,
    TILTED_KERNEL_PLAIN_GIBBS = 1,
    TILTED_KERNEL_ARGMIN_TER = 2
} tilted_kernel_kind;

typedef enum tilted_experiment {
    TILTED_RUN_COVERAGE = 0,
    TILTED_RUN_RATE = 1,
    TILTED_RUN_ROBUSTNESS = 2,
    TILTED_RUN_GIBBS = 3
} tilted_experiment;

typedef struct tilted_instance tilted_instance;
typedef struct tilted_bound_query tilted_bound_query;
typedef struct tilted_bound_report tilted_bound_report;
typedef struct tilted_info tilted_info;
typedef struct tilted_config tilted_config;

TILTED_API const char* tilted_last_error(void);
TILTED_API const char* tilted_status_name(tilted_status status);
TILTED_API void tilted_string_free(char* text);

/* (1/gamma) log((1/n) sum exp(gamma l_i)); the arithmetic mean when |gamma| < 1e-7. */
TILTED_API tilted_status tilted_ter(const double* losses, size_t count, double gamma, double* out);

/* Instances. tilted_instance_load accepts a builtin name or an instance file path. */
TILTED_API size_t tilted_catalog_count(void);
TILTED_API const char* tilted_catalog_name(size_t index);
TILTED_API tilted_status tilted_instance_builtin(const char* name, tilted_instance** out);
TILTED_API tilted_status tilted_instance_load(const char* name_or_path, tilted_instance** out);
TILTED_API tilted_status tilted_instance_parse(const char* json, tilted_instance** out);
TILTED_API void tilted_instance_free(tilted_instance* instance);
TILTED_API const char* tilted_instance_name(const tilted_instance* instance);
TILTED_API size_t tilted_instance_hypotheses(const tilted_instance* instance);
TILTED_API size_t tilted_instance_symbols(const tilted_instance* instance);
/* Returns 1 and writes M when the loss table carries a bound, 0 otherwise. */
TILTED_API int tilted_instance_loss_bound(const tilted_instance* instance, double* M);
TILTED_API int tilted_instance_has_shift(const tilted_instance* instance);
TILTED_API tilted_status tilted_instance_format(const tilted_instance* instance, char** json);

/*
 * Bound queries. Keys: delta, n, gamma, card_H, M, kappa_u, kappa_s, kappa_t,
 * zeta, mutual_information, stability_beta, pac_eta, pac_kl, lipschitz_loss,
 * massart_B, variance_exp, variance_loss, alpha, tv. Unset optional keys stay
 * unset; an unset zeta is chosen automatically.
 */
TILTED_API tilted_bound_query* tilted_bound_query_new(void);
TILTED_API void tilted_bound_query_free(tilted_bound_query* query);
TILTED_API tilted_status tilted_bound_query_set(tilted_bound_query* query, const char* key, double value);
TILTED_API tilted_status tilted_bound_query_set_individual_mi(tilted_bound_query* query, const double* values,
                                                              size_t count);
TILTED_API tilted_status tilted_bound_evaluate(const tilted_bound_query* query, const char* family, const char* kind,
                                               tilted_bound_report** out);
TILTED_API size_t tilted_bound_family_count(void);
TILTED_API const char* tilted_bound_family_name(size_t index);

TILTED_API void tilted_bound_report_free(tilted_bound_report* report);
TILTED_API double tilted_bound_report_value(const tilted_bound_report* report);
TILTED_API int tilted_bound_report_valid(const tilted_bound_report* report);
TILTED_API const char* tilted_bound_report_family(const tilted_bound_report* report);
TILTED_API const char* tilted_bound_report_kind(const tilted_bound_report* report);
TILTED_API size_t tilted_bound_report_term_count(const tilted_bound_report* report);
TILTED_API const char* tilted_bound_report_term_label(const tilted_bound_report* report, size_t index);
TILTED_API double tilted_bound_report_term_value(const tilted_bound_report* report, size_t index);
TILTED_API size_t tilted_bound_report_constant_count(const tilted_bound_report* report);
TILTED_API const char* tilted_bound_report_constant_label(const tilted_bound_report* report, size_t index);
TILTED_API double tilted_bound_report_constant_value(const tilted_bound_report* report, size_t index);
TILTED_API size_t tilted_bound_report_violation_count(const tilted_bound_report* report);
TILTED_API const char* tilted_bound_report_violation(const tilted_bound_report* report, size_t index);

/* Bounds on R(h, mu) - R_gamma(h, mu) given Var(exp(gamma l)). */
TILTED_API tilted_status tilted_sandwich(double gamma, double M, double variance_exp, double* lower, double* upper);

/* Exact information measures; Gibbs kernels use a uniform prior over hypotheses. */
TILTED_API tilted_status tilted_info_exact(const tilted_instance* instance, tilted_kernel_kind kernel, double alpha,
                                           double gamma, size_t n, unsigned threads, tilted_info** out);
TILTED_API void tilted_info_free(tilted_info* info);
TILTED_API double tilted_info_mutual_information(const tilted_info* info);
TILTED_API double tilted_info_symmetrized_kl(const tilted_info* info);
TILTED_API uint64_t tilted_info_enumerated(const tilted_info* info);
TILTED_API size_t tilted_info_hypotheses(const tilted_info* info);
TILTED_API double tilted_info_marginal(const tilted_info* info, size_t h);
TILTED_API size_t tilted_info_samples(const tilted_info* info);
TILTED_API double tilted_info_individual(const tilted_info* info, size_t i);

/* Tilted Gibbs posterior (uniform prior) on a dataset of symbol indices. */
TILTED_API tilted_status tilted_gibbs_posterior(const tilted_instance* instance, const size_t* samples, size_t n,
                                                double alpha, double gamma, double* weights, size_t hypotheses);
TILTED_API tilted_status tilted_gibbs_identity(const tilted_instance* instance, double alpha, double gamma, size_t n,
                                               unsigned threads, double* lhs, double* rhs, double* gap);
TILTED_API tilted_status tilted_gibbs_expected_gen(const tilted_instance* instance, double alpha, double gamma,
                                                   size_t n, unsigned threads, double* out);

/* Experiment configs and runs. */
TILTED_API tilted_config* tilted_config_new(void);
TILTED_API void tilted_config_free(tilted_config* config);
TILTED_API tilted_status tilted_config_parse(const char* json, tilted_config** out);
TILTED_API tilted_status tilted_config_load(const char* path, tilted_config** out);
TILTED_API tilted_status tilted_config_set(tilted_config* config, const char* key, const char* value);
TILTED_API tilted_status tilted_config_dump(const tilted_config* config, char** json);
TILTED_API tilted_status tilted_run(const tilted_config* config, tilted_experiment experiment, unsigned threads,
                                    char** csv, char** summary);

#ifdef __cplusplus
}
#endif

#endif
