#include "tilted/tilted.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "tilted/bounds.hpp"
#include "tilted/gibbs.hpp"
#include "tilted/harness.hpp"
#include "tilted/info.hpp"
#include "tilted/spaces.hpp"

struct tilted_instance {
    tilted::Instance value;
};

struct tilted_bound_query {
    tilted::BoundRequest request;
};

struct tilted_bound_report {
    tilted::BoundReport value;
};

struct tilted_info {
    tilted::InfoReport value;
};

struct tilted_config {
    tilted::ExperimentConfig value;
};

namespace {

thread_local std::string last_error;

tilted_status status_of(tilted::ErrorCode code) {
    using tilted::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidInput: return TILTED_INVALID_INPUT;
        case ErrorCode::AbsoluteContinuity: return TILTED_ABSOLUTE_CONTINUITY;
        case ErrorCode::EnumerationTooLarge: return TILTED_ENUMERATION_TOO_LARGE;
        case ErrorCode::MissingField: return TILTED_MISSING_FIELD;
        case ErrorCode::TiltSign: return TILTED_TILT_SIGN;
        case ErrorCode::Config: return TILTED_CONFIG;
        case ErrorCode::Io: return TILTED_IO;
    }
    return TILTED_INTERNAL;
}

template <class F>
tilted_status guard(F&& body) {
    try {
        body();
        last_error.clear();
        return TILTED_OK;
    } catch (const tilted::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return TILTED_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return TILTED_INTERNAL;
    }
}

void need_pointer(const void* p, const char* name) {
    if (!p) tilted::fail(tilted::ErrorCode::InvalidInput, std::string(name) + " is null");
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::size_t to_count(double v, const char* key) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15)
        tilted::fail(tilted::ErrorCode::InvalidInput, std::string(key) + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

tilted::LearningKernel make_kernel(const tilted::Instance& inst, tilted_kernel_kind kind, double alpha,
                                   const tilted::Tilt& tilt) {
    const auto prior = tilted::DiscreteDistribution::uniform(inst.loss.hypotheses());
    switch (kind) {
        case TILTED_KERNEL_TILTED_GIBBS: return tilted::LearningKernel::tilted_gibbs(alpha, tilt, prior);
        case TILTED_KERNEL_PLAIN_GIBBS: return tilted::LearningKernel::plain_gibbs(alpha, prior);
        case TILTED_KERNEL_ARGMIN_TER: return tilted::LearningKernel::argmin_ter(tilt);
    }
    tilted::fail(tilted::ErrorCode::InvalidInput, "unknown kernel kind");
}

std::string coverage_summary(const tilted::CoverageResult& r) {
    std::string out;
    for (const auto& s : r.summary)
        out += "n=" + std::to_string(s.n) + " gamma=" + tilted::format_number(s.gamma) +
               " bound=" + tilted::format_number(s.bound) + " valid=" + (s.valid ? "1" : "0") +
               " violations=" + std::to_string(s.violations) + " violation_rate=" +
               tilted::format_number(s.violation_rate) + "\n";
    return out;
}

std::string rate_summary(const tilted::RateResult& r) {
    return "realized_slope=" + tilted::format_number(r.realized.slope) + " status=" + r.realized.status +
           "\nbound_slope=" + tilted::format_number(r.bound.slope) + " status=" + r.bound.status + "\n";
}

std::string robustness_summary(const tilted::RobustnessResult& r) {
    std::string out = "n=" + std::to_string(r.n) + " gamma=" + tilted::format_number(r.gamma) +
                      " population_check=" + (r.population_check_passed ? "pass" : "FAIL") + "\n";
    for (const auto& row : r.rows)
        out += "epsilon=" + tilted::format_number(row.epsilon) + " population_gap=" +
               tilted::format_number(row.population_gap) + " population_term=" +
               tilted::format_number(row.population_term) + "\n";
    return out;
}

std::string gibbs_summary(const tilted::GibbsResult& r) {
    std::string out;
    for (const auto& row : r.rows)
        out += "n=" + std::to_string(row.n) + " within_bound=" +
               (std::abs(row.expected_gen_exact) <= row.bound ? "1" : "0") +
               " iskl_gap=" + tilted::format_number(row.iskl_gap) + "\n";
    return out;
}

}  // namespace

extern "C" {

const char* tilted_last_error(void) {
    return last_error.c_str();
}

const char* tilted_status_name(tilted_status status) {
    switch (status) {
        case TILTED_OK: return "ok";
        case TILTED_INVALID_INPUT: return "invalid input";
        case TILTED_ABSOLUTE_CONTINUITY: return "absolute continuity";
        case TILTED_ENUMERATION_TOO_LARGE: return "enumeration too large";
        case TILTED_MISSING_FIELD: return "missing field";
        case TILTED_TILT_SIGN: return "tilt sign";
        case TILTED_CONFIG: return "config";
        case TILTED_IO: return "io";
        case TILTED_INTERNAL: return "internal";
    }
    return "unknown";
}

void tilted_string_free(char* text) {
    std::free(text);
}

tilted_status tilted_ter(const double* losses, size_t count, double gamma, double* out) {
    return guard([&] {
        need_pointer(out, "out");
        if (count > 0) need_pointer(losses, "losses");
        *out = tilted::ter(std::span<const double>(losses, count), tilted::Tilt(gamma));
    });
}

size_t tilted_catalog_count(void) {
    return tilted::builtin_instances().size();
}

const char* tilted_catalog_name(size_t index) {
    const auto& all = tilted::builtin_instances();
    return index < all.size() ? all[index].name.c_str() : nullptr;
}

tilted_status tilted_instance_builtin(const char* name, tilted_instance** out) {
    return guard([&] {
        need_pointer(name, "name");
        need_pointer(out, "out");
        auto found = tilted::find_builtin(name);
        if (!found) tilted::fail(tilted::ErrorCode::InvalidInput, std::string("no builtin instance '") + name + "'");
        *out = new tilted_instance{std::move(*found)};
    });
}

tilted_status tilted_instance_load(const char* name_or_path, tilted_instance** out) {
    return guard([&] {
        need_pointer(name_or_path, "name_or_path");
        need_pointer(out, "out");
        *out = new tilted_instance{tilted::resolve_instance(name_or_path)};
    });
}

tilted_status tilted_instance_parse(const char* json, tilted_instance** out) {
    return guard([&] {
        need_pointer(json, "json");
        need_pointer(out, "out");
        *out = new tilted_instance{tilted::parse_instance(json)};
    });
}

void tilted_instance_free(tilted_instance* instance) {
    delete instance;
}

const char* tilted_instance_name(const tilted_instance* instance) {
    return instance ? instance->value.name.c_str() : nullptr;
}

size_t tilted_instance_hypotheses(const tilted_instance* instance) {
    return instance ? instance->value.loss.hypotheses() : 0;
}

size_t tilted_instance_symbols(const tilted_instance* instance) {
    return instance ? instance->value.loss.symbols() : 0;
}

int tilted_instance_loss_bound(const tilted_instance* instance, double* M) {
    if (!instance || !instance->value.loss.upper_bound()) return 0;
    if (M) *M = *instance->value.loss.upper_bound();
    return 1;
}

int tilted_instance_has_shift(const tilted_instance* instance) {
    return instance && instance->value.mu_tilde ? 1 : 0;
}

tilted_status tilted_instance_format(const tilted_instance* instance, char** json) {
    return guard([&] {
        need_pointer(instance, "instance");
        need_pointer(json, "json");
        *json = copy_string(tilted::format_instance(instance->value));
    });
}

tilted_bound_query* tilted_bound_query_new(void) {
    return new (std::nothrow) tilted_bound_query{};
}

void tilted_bound_query_free(tilted_bound_query* query) {
    delete query;
}

tilted_status tilted_bound_query_set(tilted_bound_query* query, const char* key, double value) {
    return guard([&] {
        need_pointer(query, "query");
        need_pointer(key, "key");
        if (!std::isfinite(value))
            tilted::fail(tilted::ErrorCode::InvalidInput, std::string("bound key '") + key + "' must be finite");
        auto& r = query->request;
        auto& q = r.query;
        const std::string k = key;
        if (k == "delta") q.delta = value;
        else if (k == "n") q.n = to_count(value, key);
        else if (k == "gamma") q.tilt = tilted::Tilt(value);
        else if (k == "card_H") q.card_H = to_count(value, key);
        else if (k == "M") q.M = value;
        else if (k == "kappa_u") q.kappa_u = value;
        else if (k == "kappa_s") q.kappa_s = value;
        else if (k == "kappa_t") q.kappa_t = value;
        else if (k == "zeta") q.zeta = value;
        else if (k == "mutual_information") q.mutual_information = value;
        else if (k == "stability_beta") q.stability_beta = value;
        else if (k == "pac_eta") q.pac_eta = value;
        else if (k == "pac_kl") q.pac_kl = value;
        else if (k == "lipschitz_loss") q.lipschitz_loss = value;
        else if (k == "massart_B") q.massart_B = value;
        else if (k == "variance_exp") q.variance_exp = value;
        else if (k == "variance_loss") q.variance_loss = value;
        else if (k == "alpha") q.alpha = value;
        else if (k == "tv") r.tv = value;
        else tilted::fail(tilted::ErrorCode::InvalidInput, "unknown bound key '" + k + "'");
    });
}

tilted_status tilted_bound_query_set_individual_mi(tilted_bound_query* query, const double* values, size_t count) {
    return guard([&] {
        need_pointer(query, "query");
        if (count > 0) need_pointer(values, "values");
        query->request.individual_mi = std::vector<double>(values, values + count);
    });
}

tilted_status tilted_bound_evaluate(const tilted_bound_query* query, const char* family, const char* kind,
                                    tilted_bound_report** out) {
    return guard([&] {
        need_pointer(query, "query");
        need_pointer(family, "family");
        need_pointer(kind, "kind");
        need_pointer(out, "out");
        auto request = query->request;
        request.family = family;
        request.kind = tilted::parse_bound_kind(kind);
        *out = new tilted_bound_report{tilted::evaluate_bound(request)};
    });
}

size_t tilted_bound_family_count(void) {
    return tilted::bound_families().size();
}

const char* tilted_bound_family_name(size_t index) {
    const auto& all = tilted::bound_families();
    return index < all.size() ? all[index].c_str() : nullptr;
}

void tilted_bound_report_free(tilted_bound_report* report) {
    delete report;
}

double tilted_bound_report_value(const tilted_bound_report* report) {
    return report ? report->value.value : std::numeric_limits<double>::quiet_NaN();
}

int tilted_bound_report_valid(const tilted_bound_report* report) {
    return report && report->value.valid ? 1 : 0;
}

const char* tilted_bound_report_family(const tilted_bound_report* report) {
    return report ? report->value.family.c_str() : nullptr;
}

const char* tilted_bound_report_kind(const tilted_bound_report* report) {
    return report ? tilted::to_string(report->value.kind) : nullptr;
}

size_t tilted_bound_report_term_count(const tilted_bound_report* report) {
    return report ? report->value.terms.size() : 0;
}

const char* tilted_bound_report_term_label(const tilted_bound_report* report, size_t index) {
    return report && index < report->value.terms.size() ? report->value.terms[index].label.c_str() : nullptr;
}

double tilted_bound_report_term_value(const tilted_bound_report* report, size_t index) {
    return report && index < report->value.terms.size() ? report->value.terms[index].value
                                                        : std::numeric_limits<double>::quiet_NaN();
}

size_t tilted_bound_report_constant_count(const tilted_bound_report* report) {
    return report ? report->value.constants.size() : 0;
}

const char* tilted_bound_report_constant_label(const tilted_bound_report* report, size_t index) {
    return report && index < report->value.constants.size() ? report->value.constants[index].label.c_str()
                                                            : nullptr;
}

double tilted_bound_report_constant_value(const tilted_bound_report* report, size_t index) {
    return report && index < report->value.constants.size() ? report->value.constants[index].value
                                                            : std::numeric_limits<double>::quiet_NaN();
}

size_t tilted_bound_report_violation_count(const tilted_bound_report* report) {
    return report ? report->value.violations.size() : 0;
}

const char* tilted_bound_report_violation(const tilted_bound_report* report, size_t index) {
    return report && index < report->value.violations.size() ? report->value.violations[index].c_str() : nullptr;
}

tilted_status tilted_sandwich(double gamma, double M, double variance_exp, double* lower, double* upper) {
    return guard([&] {
        need_pointer(lower, "lower");
        need_pointer(upper, "upper");
        tilted::BoundQuery q;
        q.tilt = tilted::Tilt(gamma);
        q.M = M;
        const auto s = tilted::sandwich_true_vs_tilted(q, variance_exp);
        *lower = s.lower;
        *upper = s.upper;
    });
}

tilted_status tilted_info_exact(const tilted_instance* instance, tilted_kernel_kind kernel, double alpha, double gamma,
                                size_t n, unsigned threads, tilted_info** out) {
    return guard([&] {
        need_pointer(instance, "instance");
        need_pointer(out, "out");
        const tilted::Tilt tilt(gamma);
        const auto k = make_kernel(instance->value, kernel, alpha, tilt);
        *out = new tilted_info{
            tilted::mutual_information_exact(k, instance->value, n, tilted::kDefaultEnumerationCap, threads)};
    });
}

void tilted_info_free(tilted_info* info) {
    delete info;
}

double tilted_info_mutual_information(const tilted_info* info) {
    return info ? info->value.mutual_information : std::numeric_limits<double>::quiet_NaN();
}

double tilted_info_symmetrized_kl(const tilted_info* info) {
    return info ? info->value.symmetrized_kl_information : std::numeric_limits<double>::quiet_NaN();
}

uint64_t tilted_info_enumerated(const tilted_info* info) {
    return info ? info->value.enumerated_datasets : 0;
}

size_t tilted_info_hypotheses(const tilted_info* info) {
    return info ? info->value.marginal_posterior.size() : 0;
}

double tilted_info_marginal(const tilted_info* info, size_t h) {
    return info && h < info->value.marginal_posterior.size() ? info->value.marginal_posterior[h]
                                                             : std::numeric_limits<double>::quiet_NaN();
}

size_t tilted_info_samples(const tilted_info* info) {
    return info ? info->value.individual_mutual_information.size() : 0;
}

double tilted_info_individual(const tilted_info* info, size_t i) {
    return info && i < info->value.individual_mutual_information.size()
               ? info->value.individual_mutual_information[i]
               : std::numeric_limits<double>::quiet_NaN();
}

tilted_status tilted_gibbs_posterior(const tilted_instance* instance, const size_t* samples, size_t n, double alpha,
                                     double gamma, double* weights, size_t hypotheses) {
    return guard([&] {
        need_pointer(instance, "instance");
        need_pointer(weights, "weights");
        if (n > 0) need_pointer(samples, "samples");
        const auto& inst = instance->value;
        if (hypotheses != inst.loss.hypotheses())
            tilted::fail(tilted::ErrorCode::InvalidInput, "weights buffer size does not match the hypothesis count");
        tilted::Dataset d{std::vector<std::size_t>(samples, samples + n)};
        d.validate(inst.loss.symbols());
        const tilted::GibbsConfig cfg{alpha, tilted::Tilt(gamma),
                                      tilted::DiscreteDistribution::uniform(inst.loss.hypotheses())};
        const auto post = tilted::tilted_gibbs_posterior(d, inst.loss, cfg);
        for (std::size_t h = 0; h < hypotheses; ++h) weights[h] = post[h];
    });
}

tilted_status tilted_gibbs_identity(const tilted_instance* instance, double alpha, double gamma, size_t n,
                                    unsigned threads, double* lhs, double* rhs, double* gap) {
    return guard([&] {
        need_pointer(instance, "instance");
        const auto& inst = instance->value;
        const tilted::GibbsConfig cfg{alpha, tilted::Tilt(gamma),
                                      tilted::DiscreteDistribution::uniform(inst.loss.hypotheses())};
        const auto r = tilted::check_iskl_identity(inst, cfg, n, tilted::kDefaultEnumerationCap, threads);
        if (lhs) *lhs = r.lhs;
        if (rhs) *rhs = r.rhs;
        if (gap) *gap = r.gap;
    });
}

tilted_status tilted_gibbs_expected_gen(const tilted_instance* instance, double alpha, double gamma, size_t n,
                                        unsigned threads, double* out) {
    return guard([&] {
        need_pointer(instance, "instance");
        need_pointer(out, "out");
        const auto& inst = instance->value;
        const tilted::Tilt tilt(gamma);
        const auto k = tilted::LearningKernel::tilted_gibbs(
            alpha, tilt, tilted::DiscreteDistribution::uniform(inst.loss.hypotheses()));
        *out = tilted::expected_tilted_gen_exact(inst, k, tilt, n, tilted::kDefaultEnumerationCap, threads);
    });
}

tilted_config* tilted_config_new(void) {
    return new (std::nothrow) tilted_config{};
}

void tilted_config_free(tilted_config* config) {
    delete config;
}

tilted_status tilted_config_parse(const char* json, tilted_config** out) {
    return guard([&] {
        need_pointer(json, "json");
        need_pointer(out, "out");
        *out = new tilted_config{tilted::parse_config(json)};
    });
}

tilted_status tilted_config_load(const char* path, tilted_config** out) {
    return guard([&] {
        need_pointer(path, "path");
        need_pointer(out, "out");
        *out = new tilted_config{tilted::load_config_file(path)};
    });
}

tilted_status tilted_config_set(tilted_config* config, const char* key, const char* value) {
    return guard([&] {
        need_pointer(config, "config");
        need_pointer(key, "key");
        need_pointer(value, "value");
        tilted::set_config_key(config->value, key, value);
    });
}

tilted_status tilted_config_dump(const tilted_config* config, char** json) {
    return guard([&] {
        need_pointer(config, "config");
        need_pointer(json, "json");
        *json = copy_string(tilted::dump_config(config->value));
    });
}

tilted_status tilted_run(const tilted_config* config, tilted_experiment experiment, unsigned threads, char** csv,
                         char** summary) {
    return guard([&] {
        need_pointer(config, "config");
        need_pointer(csv, "csv");
        std::string table, notes;
        switch (experiment) {
            case TILTED_RUN_COVERAGE: {
                const auto r = tilted::run_coverage(config->value, threads);
                table = r.csv();
                notes = coverage_summary(r);
                break;
            }
            case TILTED_RUN_RATE: {
                const auto r = tilted::run_rate(config->value, threads);
                table = r.csv();
                notes = rate_summary(r);
                break;
            }
            case TILTED_RUN_ROBUSTNESS: {
                const auto r = tilted::run_robustness(config->value, threads);
                table = r.csv();
                notes = robustness_summary(r);
                break;
            }
            case TILTED_RUN_GIBBS: {
                const auto r = tilted::run_gibbs(config->value, threads);
                table = r.csv();
                notes = gibbs_summary(r);
                break;
            }
            default:
                tilted::fail(tilted::ErrorCode::InvalidInput, "unknown experiment");
        }
        std::unique_ptr<char, decltype(&std::free)> held(copy_string(table), &std::free);
        if (summary) *summary = copy_string(notes);
        *csv = held.release();
    });
}

}  // extern "C"
