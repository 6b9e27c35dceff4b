#include "tilted/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tilted {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::AbsoluteContinuity: return "AbsoluteContinuityError";
        case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
        case ErrorCode::MissingField: return "MissingField";
        case ErrorCode::TiltSign: return "TiltSignError";
        case ErrorCode::Config: return "ConfigError";
        case ErrorCode::Io: return "IoError";
    }
    return "Unknown";
}

Tilt::Tilt(double gamma) : gamma_(gamma) {
    require(std::isfinite(gamma), "tilt gamma must be finite");
    regime_ = std::abs(gamma) < kZeroLimitThreshold ? Regime::ZeroLimit : Regime::Exact;
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
    require(!weights_.empty(), "distribution must have at least one symbol");
    double total = 0.0;
    for (double w : weights_) {
        require(std::isfinite(w) && w >= 0.0, "distribution weights must be finite and nonnegative");
        total += w;
    }
    require(std::abs(total - 1.0) <= kSumTolerance, "distribution weights must sum to 1");
}

DiscreteDistribution DiscreteDistribution::uniform(std::size_t size) {
    require(size > 0, "uniform distribution needs a nonempty support");
    return DiscreteDistribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

DiscreteDistribution DiscreteDistribution::point_mass(std::size_t size, std::size_t at) {
    require(at < size, "point mass index out of range");
    std::vector<double> w(size, 0.0);
    w[at] = 1.0;
    return DiscreteDistribution(std::move(w));
}

LossTable::LossTable(std::vector<std::vector<double>> rows, std::optional<double> upper_bound)
    : upper_bound_(upper_bound) {
    require(!rows.empty() && !rows.front().empty(), "loss table must be nonempty");
    rows_ = rows.size();
    cols_ = rows.front().size();
    if (upper_bound_) require(std::isfinite(*upper_bound_) && *upper_bound_ >= 0.0, "M must be finite and >= 0");
    values_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        require(r.size() == cols_, "loss table rows must have equal length");
        for (double v : r) {
            require(std::isfinite(v) && v >= 0.0, "loss entries must be finite and nonnegative");
            if (upper_bound_) require(v <= *upper_bound_, "loss entry exceeds the declared bound M");
            values_.push_back(v);
        }
    }
}

std::span<const double> LossTable::row(std::size_t h) const {
    require(h < rows_, "hypothesis index out of range");
    return std::span<const double>(values_).subspan(h * cols_, cols_);
}

double LossTable::max_entry() const noexcept {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

std::vector<std::vector<double>> LossTable::to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t h = 0; h < rows_; ++h) {
        auto r = row(h);
        out[h].assign(r.begin(), r.end());
    }
    return out;
}

void Dataset::validate(std::size_t alphabet) const {
    require(!samples.empty(), "dataset must contain at least one sample");
    for (auto z : samples) require(z < alphabet, "dataset symbol outside the alphabet");
}

double ter(std::span<const double> losses, const Tilt& tilt) {
    require(!losses.empty(), "ter needs at least one loss");
    double lo = losses[0];
    double hi = losses[0];
    double sum = 0.0;
    for (double l : losses) {
        require(std::isfinite(l), "ter losses must be finite");
        lo = std::min(lo, l);
        hi = std::max(hi, l);
        sum += l;
    }
    const double n = static_cast<double>(losses.size());
    if (tilt.zero_limit()) return std::clamp(sum / n, lo, hi);

    // Shift by the loss maximizing gamma * l so every exponent is <= 0; the
    // mean of expm1 keeps full precision when gamma is small.
    const double g = tilt.gamma();
    const double pivot = g > 0.0 ? hi : lo;
    double s = 0.0;
    for (double l : losses) s += std::expm1(g * (l - pivot));
    s /= n;
    double log_mean;
    if (s > -0.5) {
        log_mean = std::log1p(s);
    } else {
        double e = 0.0;
        for (double l : losses) e += std::exp(g * (l - pivot));
        log_mean = std::log(e / n);
    }
    return std::clamp(pivot + log_mean / g, lo, hi);
}

std::vector<double> dataset_losses(std::size_t h, const Dataset& dataset, const LossTable& loss) {
    require(h < loss.hypotheses(), "hypothesis index out of range");
    dataset.validate(loss.symbols());
    std::vector<double> out;
    out.reserve(dataset.n());
    for (auto z : dataset.samples) out.push_back(loss(h, z));
    return out;
}

double empirical_risk(std::size_t h, const Dataset& dataset, const LossTable& loss) {
    auto l = dataset_losses(h, dataset, loss);
    double s = 0.0;
    for (double v : l) s += v;
    return s / static_cast<double>(l.size());
}

double tilted_empirical_risk(std::size_t h, const Dataset& dataset, const LossTable& loss, const Tilt& tilt) {
    return ter(dataset_losses(h, dataset, loss), tilt);
}

namespace {

void check_mu(const LossTable& loss, const DiscreteDistribution& mu) {
    require(mu.size() == loss.symbols(), "distribution size does not match the loss table");
}

}  // namespace

double population_risk(std::size_t h, const LossTable& loss, const DiscreteDistribution& mu) {
    check_mu(loss, mu);
    auto r = loss.row(h);
    double s = 0.0;
    for (std::size_t z = 0; z < r.size(); ++z) s += mu[z] * r[z];
    return s;
}

double tilted_population_risk(std::size_t h, const LossTable& loss, const DiscreteDistribution& mu,
                              const Tilt& tilt) {
    check_mu(loss, mu);
    auto r = loss.row(h);
    if (tilt.zero_limit()) return population_risk(h, loss, mu);
    const double g = tilt.gamma();
    // Same pivot trick as ter, over the support of mu.
    bool first = true;
    double pivot = 0.0;
    for (std::size_t z = 0; z < r.size(); ++z) {
        if (mu[z] <= 0.0) continue;
        if (first || g * r[z] > g * pivot) pivot = r[z];
        first = false;
    }
    double s = 0.0;
    for (std::size_t z = 0; z < r.size(); ++z)
        if (mu[z] > 0.0) s += mu[z] * std::expm1(g * (r[z] - pivot));
    double log_mean;
    if (s > -0.5) {
        log_mean = std::log1p(s);
    } else {
        double e = 0.0;
        for (std::size_t z = 0; z < r.size(); ++z)
            if (mu[z] > 0.0) e += mu[z] * std::exp(g * (r[z] - pivot));
        log_mean = std::log(e);
    }
    return pivot + log_mean / g;
}

double tilted_gen_error(std::size_t h, const Dataset& dataset, const LossTable& loss,
                        const DiscreteDistribution& mu, const Tilt& tilt) {
    return population_risk(h, loss, mu) - tilted_empirical_risk(h, dataset, loss, tilt);
}

double nonlinear_gen_error(std::size_t h, const Dataset& dataset, const LossTable& loss,
                           const DiscreteDistribution& mu, const Tilt& tilt) {
    return tilted_population_risk(h, loss, mu, tilt) - tilted_empirical_risk(h, dataset, loss, tilt);
}

std::size_t minimize_ter(const Dataset& dataset, const LossTable& loss, const Tilt& tilt) {
    std::size_t best = 0;
    double best_value = tilted_empirical_risk(0, dataset, loss, tilt);
    for (std::size_t h = 1; h < loss.hypotheses(); ++h) {
        double v = tilted_empirical_risk(h, dataset, loss, tilt);
        if (v < best_value) {
            best = h;
            best_value = v;
        }
    }
    return best;
}

std::size_t minimize_population_risk(const LossTable& loss, const DiscreteDistribution& mu) {
    std::size_t best = 0;
    double best_value = population_risk(0, loss, mu);
    for (std::size_t h = 1; h < loss.hypotheses(); ++h) {
        double v = population_risk(h, loss, mu);
        if (v < best_value) {
            best = h;
            best_value = v;
        }
    }
    return best;
}

double excess_risk(const Dataset& dataset, const LossTable& loss, const DiscreteDistribution& mu,
                   const Tilt& tilt) {
    const auto chosen = minimize_ter(dataset, loss, tilt);
    const auto best = minimize_population_risk(loss, mu);
    return std::max(0.0, population_risk(chosen, loss, mu) - population_risk(best, loss, mu));
}

double second_moment(std::size_t h, const LossTable& loss, const DiscreteDistribution& mu) {
    check_mu(loss, mu);
    auto r = loss.row(h);
    double s = 0.0;
    for (std::size_t z = 0; z < r.size(); ++z) s += mu[z] * r[z] * r[z];
    return s;
}

double loss_variance(std::size_t h, const LossTable& loss, const DiscreteDistribution& mu) {
    const double m = population_risk(h, loss, mu);
    auto r = loss.row(h);
    double s = 0.0;
    for (std::size_t z = 0; z < r.size(); ++z) s += mu[z] * (r[z] - m) * (r[z] - m);
    return s;
}

double exp_loss_variance(std::size_t h, const LossTable& loss, const DiscreteDistribution& mu,
                         const Tilt& tilt) {
    check_mu(loss, mu);
    auto r = loss.row(h);
    const double g = tilt.gamma();
    // Variance is shift invariant, so expm1 avoids the cancellation near 1.
    std::vector<double> x(r.size());
    double m = 0.0;
    for (std::size_t z = 0; z < r.size(); ++z) {
        x[z] = std::expm1(g * r[z]);
        m += mu[z] * x[z];
    }
    double s = 0.0;
    for (std::size_t z = 0; z < r.size(); ++z) s += mu[z] * (x[z] - m) * (x[z] - m);
    return s;
}

MomentBounds compute_moment_bounds(const LossTable& loss, const DiscreteDistribution& mu,
                                   const std::optional<DiscreteDistribution>& mu_tilde,
                                   const std::optional<DiscreteDistribution>& hypothesis_prior) {
    MomentBounds out;
    double worst = 0.0;
    for (std::size_t h = 0; h < loss.hypotheses(); ++h) worst = std::max(worst, second_moment(h, loss, mu));
    out.kappa_u = std::sqrt(worst);
    if (mu_tilde) {
        double worst_s = 0.0;
        for (std::size_t h = 0; h < loss.hypotheses(); ++h)
            worst_s = std::max(worst_s, second_moment(h, loss, *mu_tilde));
        out.kappa_s = std::sqrt(worst_s);
    }
    if (hypothesis_prior) {
        require(hypothesis_prior->size() == loss.hypotheses(), "hypothesis prior size mismatch");
        double e = 0.0;
        for (std::size_t h = 0; h < loss.hypotheses(); ++h) e += (*hypothesis_prior)[h] * second_moment(h, loss, mu);
        out.kappa_t = std::sqrt(e);
    } else {
        out.kappa_t = out.kappa_u;
    }
    return out;
}

}  // namespace tilted
