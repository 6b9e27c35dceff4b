#pragma once

// Risk functionals over finite hypothesis spaces and discrete data.
//
// Every population quantity here is an exact weighted sum over a discrete
// distribution; nothing is estimated.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tilted/error.hpp"

namespace tilted {

// Below this magnitude the tilt is treated as its gamma -> 0 limit.
inline constexpr double kZeroLimitThreshold = 1e-7;

class Tilt {
public:
    enum class Regime { Exact, ZeroLimit };

    explicit Tilt(double gamma);

    double gamma() const noexcept { return gamma_; }
    Regime regime() const noexcept { return regime_; }
    bool zero_limit() const noexcept { return regime_ == Regime::ZeroLimit; }

    friend bool operator==(const Tilt&, const Tilt&) = default;

private:
    double gamma_;
    Regime regime_;
};

// Probability vector over a finite alphabet (data symbols or hypotheses).
class DiscreteDistribution {
public:
    static constexpr double kSumTolerance = 1e-12;

    DiscreteDistribution() = default;
    explicit DiscreteDistribution(std::vector<double> weights);

    static DiscreteDistribution uniform(std::size_t size);
    static DiscreteDistribution point_mass(std::size_t size, std::size_t at);

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const noexcept { return weights_; }

    friend bool operator==(const DiscreteDistribution&, const DiscreteDistribution&) = default;

private:
    std::vector<double> weights_;
};

// l(h, z) >= 0, rows are hypotheses and columns data symbols.
class LossTable {
public:
    LossTable() = default;
    LossTable(std::vector<std::vector<double>> rows, std::optional<double> upper_bound = std::nullopt);

    std::size_t hypotheses() const noexcept { return rows_; }
    std::size_t symbols() const noexcept { return cols_; }
    double operator()(std::size_t h, std::size_t z) const { return values_[h * cols_ + z]; }
    std::span<const double> row(std::size_t h) const;
    const std::optional<double>& upper_bound() const noexcept { return upper_bound_; }
    double max_entry() const noexcept;

    std::vector<std::vector<double>> to_rows() const;

    friend bool operator==(const LossTable&, const LossTable&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
    std::optional<double> upper_bound_;
};

struct Dataset {
    std::vector<std::size_t> samples;

    std::size_t n() const noexcept { return samples.size(); }
    void validate(std::size_t alphabet) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct MomentBounds {
    double kappa_u = 0.0;
    double kappa_s = 0.0;
    double kappa_t = 0.0;
};

// Tilted empirical risk (1/gamma) log((1/n) sum exp(gamma l_i)).
double ter(std::span<const double> losses, const Tilt& tilt);

// Losses of hypothesis h on each sample of the dataset.
std::vector<double> dataset_losses(std::size_t h, const Dataset& dataset, const LossTable& loss);

double empirical_risk(std::size_t h, const Dataset& dataset, const LossTable& loss);
double tilted_empirical_risk(std::size_t h, const Dataset& dataset, const LossTable& loss, const Tilt& tilt);

double population_risk(std::size_t h, const LossTable& loss, const DiscreteDistribution& mu);
double tilted_population_risk(std::size_t h, const LossTable& loss, const DiscreteDistribution& mu,
                              const Tilt& tilt);

double tilted_gen_error(std::size_t h, const Dataset& dataset, const LossTable& loss,
                        const DiscreteDistribution& mu, const Tilt& tilt);
double nonlinear_gen_error(std::size_t h, const Dataset& dataset, const LossTable& loss,
                           const DiscreteDistribution& mu, const Tilt& tilt);

// argmin over h of the TER on the dataset, lowest index on ties.
std::size_t minimize_ter(const Dataset& dataset, const LossTable& loss, const Tilt& tilt);
// argmin over h of the population risk, lowest index on ties.
std::size_t minimize_population_risk(const LossTable& loss, const DiscreteDistribution& mu);

double excess_risk(const Dataset& dataset, const LossTable& loss, const DiscreteDistribution& mu,
                   const Tilt& tilt);

// kappa_t comes from the hypothesis prior when one is given, otherwise it
// equals kappa_u.
MomentBounds compute_moment_bounds(const LossTable& loss, const DiscreteDistribution& mu,
                                   const std::optional<DiscreteDistribution>& mu_tilde = std::nullopt,
                                   const std::optional<DiscreteDistribution>& hypothesis_prior = std::nullopt);

// Exact moments of a hypothesis row under mu.
double second_moment(std::size_t h, const LossTable& loss, const DiscreteDistribution& mu);
double loss_variance(std::size_t h, const LossTable& loss, const DiscreteDistribution& mu);
// Var(exp(gamma l(h, Z))) under mu.
double exp_loss_variance(std::size_t h, const LossTable& loss, const DiscreteDistribution& mu,
                         const Tilt& tilt);

}  // namespace tilted
