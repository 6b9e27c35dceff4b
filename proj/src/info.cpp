#include "tilted/info.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tilted/gibbs.hpp"
#include "tilted/reduce.hpp"

namespace tilted {

double kl(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    require(p.size() == q.size(), "kl needs distributions on the same alphabet");
    double s = 0.0;
    for (std::size_t z = 0; z < p.size(); ++z) {
        if (p[z] == 0.0) continue;
        if (q[z] == 0.0)
            fail(ErrorCode::AbsoluteContinuity,
                 "kl: p(" + std::to_string(z) + ") > 0 but q(" + std::to_string(z) + ") = 0");
        s += p[z] * std::log(p[z] / q[z]);
    }
    return std::max(0.0, s);
}

double tv(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    require(p.size() == q.size(), "tv needs distributions on the same alphabet");
    double s = 0.0;
    for (std::size_t z = 0; z < p.size(); ++z) s += std::abs(p[z] - q[z]);
    return s;
}

LearningKernel LearningKernel::tilted_gibbs(double alpha, Tilt tilt, DiscreteDistribution prior) {
    require(std::isfinite(alpha) && alpha > 0.0, "Gibbs alpha must be > 0");
    LearningKernel k(Kind::TiltedGibbs, alpha, tilt);
    k.prior_ = std::move(prior);
    return k;
}

LearningKernel LearningKernel::plain_gibbs(double alpha, DiscreteDistribution prior) {
    require(std::isfinite(alpha) && alpha > 0.0, "Gibbs alpha must be > 0");
    LearningKernel k(Kind::PlainGibbs, alpha, Tilt(0.0));
    k.prior_ = std::move(prior);
    return k;
}

LearningKernel LearningKernel::argmin_ter(Tilt tilt) {
    return LearningKernel(Kind::ArgminTER, 0.0, tilt);
}

LearningKernel LearningKernel::independent(DiscreteDistribution posterior) {
    LearningKernel k(Kind::Independent, 0.0, Tilt(0.0));
    k.prior_ = std::move(posterior);
    return k;
}

LearningKernel LearningKernel::custom(Map map) {
    require(static_cast<bool>(map), "custom kernel needs a callable");
    LearningKernel k(Kind::Custom, 0.0, Tilt(0.0));
    k.map_ = std::move(map);
    return k;
}

DiscreteDistribution LearningKernel::posterior(const Dataset& dataset, const LossTable& loss) const {
    switch (kind_) {
        case Kind::TiltedGibbs:
            return tilted_gibbs_posterior(dataset, loss, GibbsConfig{alpha_, tilt_, *prior_});
        case Kind::PlainGibbs:
            return plain_gibbs_posterior(dataset, loss, alpha_, *prior_);
        case Kind::ArgminTER:
            return DiscreteDistribution::point_mass(loss.hypotheses(), minimize_ter(dataset, loss, tilt_));
        case Kind::Independent:
            require(prior_->size() == loss.hypotheses(), "independent kernel posterior size mismatch");
            return *prior_;
        case Kind::Custom: {
            auto p = map_(dataset, loss);
            require(p.size() == loss.hypotheses(), "custom kernel returned a posterior of the wrong size");
            return p;
        }
    }
    fail(ErrorCode::InvalidInput, "unknown kernel kind");
}

DatasetSpace::DatasetSpace(const DiscreteDistribution& mu, std::size_t n, std::uint64_t cap) : mu_(&mu), n_(n) {
    require(n >= 1, "dataset enumeration needs n >= 1");
    const std::uint64_t base = mu.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > cap / base)
            fail(ErrorCode::EnumerationTooLarge, "enumerating |Z|^n = " + std::to_string(base) + "^" +
                                                     std::to_string(n) + " datasets exceeds the cap of " +
                                                     std::to_string(cap));
        total *= base;
    }
    size_ = total;
}

Dataset DatasetSpace::at(std::uint64_t index) const {
    const std::uint64_t base = mu_->size();
    Dataset d;
    d.samples.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        d.samples[i] = static_cast<std::size_t>(index % base);
        index /= base;
    }
    return d;
}

double DatasetSpace::probability(std::uint64_t index) const {
    const std::uint64_t base = mu_->size();
    double p = 1.0;
    for (std::size_t i = 0; i < n_; ++i) {
        p *= (*mu_)[static_cast<std::size_t>(index % base)];
        index /= base;
    }
    return p;
}

InfoReport mutual_information_exact(const LearningKernel& kernel, const Instance& instance, std::size_t n,
                                    std::uint64_t cap, unsigned threads) {
    instance.validate();
    const DatasetSpace space(instance.mu, n, cap);
    const std::size_t H = instance.loss.hypotheses();
    const std::size_t Z = instance.mu.size();

    // Pass 1: P_H(h) and the per-position joints P(h, Z_i = z).
    const std::size_t width = H + H * Z * n;
    auto sums = blocked_sum(space.size(), width, threads, [&](std::size_t idx, std::span<double> out) {
        const double w = space.probability(idx);
        if (w == 0.0) return;
        const Dataset s = space.at(idx);
        const auto post = kernel.posterior(s, instance.loss);
        for (std::size_t h = 0; h < H; ++h) {
            const double m = w * post[h];
            out[h] = m;
            for (std::size_t i = 0; i < n; ++i) out[H + (i * Z + s.samples[i]) * H + h] = m;
        }
    });
    std::vector<double> marginal(sums.begin(), sums.begin() + static_cast<std::ptrdiff_t>(H));
    double total = 0.0;
    for (double v : marginal) total += v;
    for (double& v : marginal) v /= total;

    // Pass 2: forward and reverse KL between the joint and the product.
    auto kls = blocked_sum(space.size(), 2, threads, [&](std::size_t idx, std::span<double> out) {
        const double w = space.probability(idx);
        if (w == 0.0) return;
        const auto post = kernel.posterior(space.at(idx), instance.loss);
        for (std::size_t h = 0; h < H; ++h) {
            const double p = post[h];
            const double q = marginal[h];
            if (p > 0.0) out[0] += w * p * std::log(p / q);
            if (q > 0.0) out[1] += p > 0.0 ? w * q * std::log(q / p) : std::numeric_limits<double>::infinity();
        }
    });

    InfoReport report;
    report.mutual_information = std::max(0.0, kls[0]);
    report.symmetrized_kl_information = report.mutual_information + std::max(0.0, kls[1]);
    report.marginal_posterior = DiscreteDistribution(marginal);
    report.enumerated_datasets = space.size();
    report.individual_mutual_information.resize(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double mi = 0.0;
        for (std::size_t z = 0; z < Z; ++z) {
            for (std::size_t h = 0; h < H; ++h) {
                const double joint = sums[H + (i * Z + z) * H + h] / total;
                const double prod = marginal[h] * instance.mu[z];
                if (joint > 0.0) mi += joint * std::log(joint / prod);
            }
        }
        report.individual_mutual_information[i] = std::max(0.0, mi);
    }
    return report;
}

}  // namespace tilted
