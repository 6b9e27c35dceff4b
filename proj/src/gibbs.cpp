#include "tilted/gibbs.hpp"

#include <cmath>
#include <limits>

#include "tilted/reduce.hpp"

namespace tilted {

void GibbsConfig::validate(std::size_t hypotheses) const {
    require(std::isfinite(alpha) && alpha > 0.0, "Gibbs alpha must be > 0");
    require(prior.size() == hypotheses, "Gibbs prior size does not match the hypothesis space");
}

DiscreteDistribution gibbs_reweight(std::span<const double> risks, double alpha, const DiscreteDistribution& prior) {
    require(risks.size() == prior.size(), "Gibbs prior size does not match the hypothesis space");
    const std::size_t H = risks.size();
    std::vector<double> logw(H, -std::numeric_limits<double>::infinity());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < H; ++h) {
        if (prior[h] <= 0.0) continue;
        logw[h] = std::log(prior[h]) - alpha * risks[h];
        top = std::max(top, logw[h]);
    }
    require(std::isfinite(top), "Gibbs posterior has no prior mass on any hypothesis");
    std::vector<double> w(H, 0.0);
    double total = 0.0;
    for (std::size_t h = 0; h < H; ++h) {
        if (prior[h] <= 0.0) continue;
        w[h] = std::exp(logw[h] - top);
        total += w[h];
    }
    for (double& v : w) v /= total;
    return DiscreteDistribution(std::move(w));
}

DiscreteDistribution tilted_gibbs_posterior(const Dataset& dataset, const LossTable& loss, const GibbsConfig& config) {
    config.validate(loss.hypotheses());
    if (config.tilt.zero_limit()) return plain_gibbs_posterior(dataset, loss, config.alpha, config.prior);
    std::vector<double> risks(loss.hypotheses());
    for (std::size_t h = 0; h < risks.size(); ++h) risks[h] = tilted_empirical_risk(h, dataset, loss, config.tilt);
    return gibbs_reweight(risks, config.alpha, config.prior);
}

DiscreteDistribution plain_gibbs_posterior(const Dataset& dataset, const LossTable& loss, double alpha,
                                           const DiscreteDistribution& prior) {
    require(std::isfinite(alpha) && alpha > 0.0, "Gibbs alpha must be > 0");
    std::vector<double> risks(loss.hypotheses());
    for (std::size_t h = 0; h < risks.size(); ++h) risks[h] = empirical_risk(h, dataset, loss);
    return gibbs_reweight(risks, alpha, prior);
}

IdentityCheck check_iskl_identity(const Instance& instance, const LearningKernel& kernel, double alpha,
                                  const Tilt& tilt, std::size_t n, std::uint64_t cap, unsigned threads) {
    require(std::isfinite(alpha) && alpha > 0.0, "identity check needs alpha > 0");
    const auto info = mutual_information_exact(kernel, instance, n, cap, threads);
    const DatasetSpace space(instance.mu, n, cap);
    const std::size_t H = instance.loss.hypotheses();

    // Expected TER under the product of marginals minus under the joint; the
    // marginal P_H comes from the enumeration in mutual_information_exact.
    auto diff = blocked_sum(space.size(), 1, threads, [&](std::size_t idx, std::span<double> out) {
        const double w = space.probability(idx);
        if (w == 0.0) return;
        const Dataset s = space.at(idx);
        const auto post = kernel.posterior(s, instance.loss);
        double acc = 0.0;
        for (std::size_t h = 0; h < H; ++h)
            acc += (info.marginal_posterior[h] - post[h]) * tilted_empirical_risk(h, s, instance.loss, tilt);
        out[0] = w * acc;
    });

    IdentityCheck out;
    out.lhs = diff[0];
    out.rhs = info.symmetrized_kl_information / alpha;
    out.gap = std::abs(out.lhs - out.rhs);
    return out;
}

IdentityCheck check_iskl_identity(const Instance& instance, const GibbsConfig& config, std::size_t n,
                                  std::uint64_t cap, unsigned threads) {
    config.validate(instance.loss.hypotheses());
    const auto kernel = LearningKernel::tilted_gibbs(config.alpha, config.tilt, config.prior);
    return check_iskl_identity(instance, kernel, config.alpha, config.tilt, n, cap, threads);
}

double expected_tilted_gen_exact(const Instance& instance, const LearningKernel& kernel, const Tilt& tilt,
                                 std::size_t n, std::uint64_t cap, unsigned threads) {
    instance.validate();
    const DatasetSpace space(instance.mu, n, cap);
    const std::size_t H = instance.loss.hypotheses();
    std::vector<double> risk(H);
    for (std::size_t h = 0; h < H; ++h) risk[h] = population_risk(h, instance.loss, instance.mu);
    auto sum = blocked_sum(space.size(), 1, threads, [&](std::size_t idx, std::span<double> out) {
        const double w = space.probability(idx);
        if (w == 0.0) return;
        const Dataset s = space.at(idx);
        const auto post = kernel.posterior(s, instance.loss);
        double acc = 0.0;
        for (std::size_t h = 0; h < H; ++h)
            if (post[h] > 0.0) acc += post[h] * (risk[h] - tilted_empirical_risk(h, s, instance.loss, tilt));
        out[0] = w * acc;
    });
    return sum[0];
}

}  // namespace tilted
