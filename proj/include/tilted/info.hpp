#pragma once

// Exact information measures on finite instances. Mutual information between
// the learned hypothesis and the training set is computed by enumerating
// every dataset in Z^n. Natural logarithms throughout.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tilted/core.hpp"
#include "tilted/spaces.hpp"

namespace tilted {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// Sum of p log(p / q); throws AbsoluteContinuity when q(z) = 0 < p(z).
double kl(const DiscreteDistribution& p, const DiscreteDistribution& q);

// Unhalved total variation sum |p - q|, range [0, 2].
double tv(const DiscreteDistribution& p, const DiscreteDistribution& q);

// A Markov kernel from datasets to distributions over hypotheses.
class LearningKernel {
public:
    enum class Kind { TiltedGibbs, PlainGibbs, ArgminTER, Independent, Custom };
    using Map = std::function<DiscreteDistribution(const Dataset&, const LossTable&)>;

    static LearningKernel tilted_gibbs(double alpha, Tilt tilt, DiscreteDistribution prior);
    static LearningKernel plain_gibbs(double alpha, DiscreteDistribution prior);
    static LearningKernel argmin_ter(Tilt tilt);
    static LearningKernel independent(DiscreteDistribution posterior);
    static LearningKernel custom(Map map);

    Kind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    const Tilt& tilt() const noexcept { return tilt_; }
    const std::optional<DiscreteDistribution>& prior() const noexcept { return prior_; }

    DiscreteDistribution posterior(const Dataset& dataset, const LossTable& loss) const;

private:
    LearningKernel(Kind kind, double alpha, Tilt tilt) : kind_(kind), alpha_(alpha), tilt_(tilt) {}

    Kind kind_;
    double alpha_ = 0.0;
    Tilt tilt_;
    std::optional<DiscreteDistribution> prior_;
    Map map_;
};

// Every dataset of length n over an alphabet, in base-|Z| little-endian order.
class DatasetSpace {
public:
    DatasetSpace(const DiscreteDistribution& mu, std::size_t n, std::uint64_t cap = kDefaultEnumerationCap);

    std::uint64_t size() const noexcept { return size_; }
    std::size_t n() const noexcept { return n_; }
    Dataset at(std::uint64_t index) const;
    // mu^{(x)n}(S) for the dataset at `index`.
    double probability(std::uint64_t index) const;

private:
    const DiscreteDistribution* mu_;
    std::size_t n_;
    std::uint64_t size_;
};

struct InfoReport {
    double mutual_information = 0.0;          // I(H;S), nats
    double symmetrized_kl_information = 0.0;  // I_SKL(H;S), nats, may be +inf
    DiscreteDistribution marginal_posterior;  // P_H
    std::vector<double> individual_mutual_information;  // I(H;Z_i), i = 1..n
    std::uint64_t enumerated_datasets = 0;
};

InfoReport mutual_information_exact(const LearningKernel& kernel, const Instance& instance, std::size_t n,
                                    std::uint64_t cap = kDefaultEnumerationCap, unsigned threads = 1);

}  // namespace tilted
