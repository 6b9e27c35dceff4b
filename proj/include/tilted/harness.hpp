#pragma once

// Seeded Monte Carlo experiments over finite instances: bound coverage,
// convergence-rate fits, contamination sweeps and exact Gibbs checks.
//
// Trial (n index i, trial t) draws from stream i * trials + t of the base
// seed; records are stored by (n, trial) so output never depends on the
// number of worker threads.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tilted/bounds.hpp"
#include "tilted/spaces.hpp"

namespace tilted {

enum class TiltSchedule { Constant, Power };

struct ExperimentConfig {
    std::string instance = "bernoulli-2h";
    std::string family = "uniform-bounded";
    std::vector<std::size_t> n_grid = {64, 256, 1024};
    std::size_t trials = 1000;
    double delta = 0.05;
    TiltSchedule tilt_schedule = TiltSchedule::Constant;
    double gamma = -0.1;    // constant schedule
    double tilt_c = 1.0;    // power schedule: gamma = tilt_sign * c * n^-beta
    double beta = 0.5;
    int tilt_sign = -1;
    std::vector<double> epsilon_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    double alpha = 2.0;
    std::uint64_t seed = 0;
    double shift_epsilon = 0.1;  // mixture weight of mu_tilde in shift coverage runs
    std::optional<double> zeta;  // unset means Auto

    void validate() const;
    Tilt tilt_at(std::size_t n) const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Flat JSON object whose keys are the field names above.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config_file(const std::string& path);
std::string dump_config(const ExperimentConfig& config);
// Applies one key=value override; lists are comma separated and "auto"
// clears zeta.
void set_config_key(ExperimentConfig& config, std::string_view key, std::string_view value);
const std::vector<std::string>& config_keys();

struct TrialRecord {
    std::size_t n = 0;
    std::size_t trial = 0;
    double gamma = 0.0;
    double realized_sup_gen = 0.0;
    double bound = 0.0;
    bool valid = false;
    bool violated = false;
    std::uint64_t seed_stream = 0;
};

struct CoverageSummary {
    std::size_t n = 0;
    double gamma = 0.0;
    double bound = 0.0;
    bool valid = false;
    std::size_t violations = 0;
    double violation_rate = 0.0;
};

struct CoverageResult {
    std::vector<TrialRecord> records;
    std::vector<CoverageSummary> summary;
    std::string csv() const;
};

struct RateRow {
    std::size_t n = 0;
    double mean_realized = 0.0;
    double std_err = 0.0;
    double bound_value = 0.0;
    double gamma = 0.0;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::string status = "ok";
};

struct RateResult {
    std::vector<RateRow> rows;
    SlopeFit realized;  // slope of log mean realized sup|gen| vs log n
    SlopeFit bound;     // slope of log bound value vs log n
    std::string csv() const;
};

struct RobustnessRow {
    double epsilon = 0.0;
    double tv = 0.0;
    double realized_sup_gen = 0.0;  // mean over trials
    double bound = 0.0;
    double population_term = 0.0;
    double population_gap = 0.0;  // max_h |R_gamma(h, mu) - R_gamma(h, mu_eps)|
};

struct RobustnessResult {
    std::size_t n = 0;
    double gamma = 0.0;
    std::vector<RobustnessRow> rows;
    bool population_check_passed = true;
    std::string csv() const;
};

struct GibbsRow {
    std::size_t n = 0;
    double gamma = 0.0;
    double alpha = 0.0;
    double expected_gen_exact = 0.0;
    double bound = 0.0;
    double iskl_gap = 0.0;
};

struct GibbsResult {
    std::vector<GibbsRow> rows;
    std::string csv() const;
};

// Unweighted least squares on (log x, log y). Needs at least 4 points with
// max x / min x >= 100 (ConfigError otherwise); a non-positive y gives a NaN
// slope with an explanatory status.
SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// max_h |R(h, mu) - TER(h, S)| with population risks taken exactly from mu.
double realized_sup_gen(const Instance& instance, const Dataset& dataset, const Tilt& tilt);

// Abs bound of the configured family at sample size n for this instance.
BoundReport coverage_bound(const ExperimentConfig& config, const Instance& instance, std::size_t n);

CoverageResult run_coverage(const ExperimentConfig& config, unsigned threads = 1);
RateResult run_rate(const ExperimentConfig& config, unsigned threads = 1);
RobustnessResult run_robustness(const ExperimentConfig& config, unsigned threads = 1);
// gamma = 1/n at every n (the schedule in the config is not used).
GibbsResult run_gibbs(const ExperimentConfig& config, unsigned threads = 1);

std::string format_number(double value);

}  // namespace tilted
