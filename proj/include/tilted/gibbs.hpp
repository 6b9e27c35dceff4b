#pragma once

// Tilted and plain Gibbs posteriors over a finite hypothesis space.

#include <optional>

#include "tilted/core.hpp"
#include "tilted/info.hpp"

namespace tilted {

struct GibbsConfig {
    double alpha;  // inverse temperature, > 0
    Tilt tilt;
    DiscreteDistribution prior;  // over hypotheses

    void validate(std::size_t hypotheses) const;
};

// posterior(h) ~ prior(h) exp(-alpha TER(h, S)), normalized in log space.
DiscreteDistribution tilted_gibbs_posterior(const Dataset& dataset, const LossTable& loss, const GibbsConfig& config);

// posterior(h) ~ prior(h) exp(-alpha mean loss of h on S).
DiscreteDistribution plain_gibbs_posterior(const Dataset& dataset, const LossTable& loss, double alpha,
                                           const DiscreteDistribution& prior);

// Posterior from per-hypothesis risks: prior(h) exp(-alpha risk(h)).
DiscreteDistribution gibbs_reweight(std::span<const double> risks, double alpha, const DiscreteDistribution& prior);

struct IdentityCheck {
    double lhs = 0.0;  // E_{P_H x mu^n}[TER] - E_{P_{H,S}}[TER]
    double rhs = 0.0;  // I_SKL(H;S) / alpha
    double gap = 0.0;
};

// Both sides by exact enumeration of Z^n under the tilted Gibbs kernel.
IdentityCheck check_iskl_identity(const Instance& instance, const GibbsConfig& config, std::size_t n,
                                  std::uint64_t cap = kDefaultEnumerationCap, unsigned threads = 1);

// Same check for an arbitrary kernel; the right-hand side still divides by
// `alpha`.
IdentityCheck check_iskl_identity(const Instance& instance, const LearningKernel& kernel, double alpha,
                                  const Tilt& tilt, std::size_t n, std::uint64_t cap = kDefaultEnumerationCap,
                                  unsigned threads = 1);

// E_{P_{H,S}}[R(H, mu) - TER(H, S)] by exact enumeration.
double expected_tilted_gen_exact(const Instance& instance, const LearningKernel& kernel, const Tilt& tilt,
                                 std::size_t n, std::uint64_t cap = kDefaultEnumerationCap, unsigned threads = 1);

}  // namespace tilted
