#pragma once

// Closed-form generalization, excess-risk and robustness bounds for the
// tilted empirical risk. Each evaluator returns a BoundReport whose value is
// the sum of its named terms, together with every precondition that failed.
//
// Conventions:
//  * total variation is the unhalved L1 distance, range [0, 2];
//  * when Var(exp(gamma l)) or E[Var(l)] is not supplied the worst-case caps
//    (1 - exp(gamma M))^2 / 4 and M^2 / 4 are used and the term label says so;
//  * a zeta left unset is chosen from {0.1, ..., 0.9}: the valid grid point
//    with the smallest |value|, lowest zeta on ties;
//  * failed preconditions mark the report invalid; only a wrong tilt sign or
//    a missing input throws.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tilted/core.hpp"

namespace tilted {

struct BoundQuery {
    double delta = 0.05;
    std::size_t n = 1;
    Tilt tilt{0.0};
    std::optional<std::size_t> card_H;
    std::optional<double> M;
    std::optional<double> kappa_u;
    std::optional<double> kappa_s;
    std::optional<double> kappa_t;
    std::optional<double> zeta;  // unset means Auto
    std::optional<double> mutual_information;
    std::optional<double> stability_beta;
    std::optional<double> pac_eta;
    std::optional<double> pac_kl;
    std::optional<double> lipschitz_loss;
    std::optional<double> massart_B;
    std::optional<double> variance_exp;   // Var(exp(gamma l)) under mu
    std::optional<double> variance_loss;  // E_{P_H}[Var(l)]
    std::optional<double> alpha;          // Gibbs inverse temperature

    void set_moments(const MomentBounds& m) {
        kappa_u = m.kappa_u;
        kappa_s = m.kappa_s;
        kappa_t = m.kappa_t;
    }
    void validate() const;
};

enum class BoundKind { Upper, Lower, Abs, Excess, Population, Rademacher, Stability, PacBayes, GibbsLinear };

const char* to_string(BoundKind kind) noexcept;
BoundKind parse_bound_kind(std::string_view text);

struct BoundTerm {
    std::string label;
    double value;
};

struct BoundReport {
    double value = 0.0;
    std::vector<BoundTerm> terms;
    // Derived constants and diagnostics; not part of the sum.
    std::vector<BoundTerm> constants;
    bool valid = true;
    std::vector<std::string> violations;
    std::string family;
    BoundKind kind = BoundKind::Abs;
    BoundQuery query;

    std::optional<double> constant(std::string_view label) const;
};

inline constexpr double kZetaGrid[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

struct Sandwich {
    double lower;
    double upper;
};

// Bounds on R(h, mu) - R_gamma(h, mu) in terms of Var(exp(gamma l)).
Sandwich sandwich_true_vs_tilted(const BoundQuery& query, double variance_exp);

BoundReport uniform_bounded(const BoundQuery& query, BoundKind kind);
BoundReport uniform_unbounded(const BoundQuery& query, BoundKind kind);
BoundReport info_bounded(const BoundQuery& query, BoundKind kind,
                         const std::optional<std::vector<double>>& individual_mi = std::nullopt);
BoundReport info_unbounded(const BoundQuery& query, BoundKind kind);
BoundReport shift_bounds(const BoundQuery& query, double tv_value, BoundKind kind);
BoundReport mcdiarmid_bounds(const BoundQuery& query, BoundKind kind);
BoundReport supplementary_bounds(const BoundQuery& query, BoundKind kind);
BoundReport tilted_gibbs_bound(const BoundQuery& query, double alpha, BoundKind kind);

// Family-name dispatch used by the C API and the command line.
struct BoundRequest {
    std::string family;
    BoundKind kind = BoundKind::Abs;
    BoundQuery query;
    std::optional<double> tv;
    std::optional<std::vector<double>> individual_mi;
};

BoundReport evaluate_bound(const BoundRequest& request);
const std::vector<std::string>& bound_families();

}  // namespace tilted
