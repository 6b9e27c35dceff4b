#include "tilted/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace tilted {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double need(const std::optional<double>& v, const char* field, const char* family) {
    if (!v) fail(ErrorCode::MissingField, std::string(family) + " bound needs '" + field + "'");
    return *v;
}

void require_negative_tilt(const BoundQuery& q, const char* family) {
    if (!(q.tilt.gamma() < 0.0))
        fail(ErrorCode::TiltSign, std::string(family) + " bounds hold only for gamma < 0 (got gamma = " +
                                      fmt(q.tilt.gamma()) + ")");
}

void require_kind(bool ok, BoundKind kind, const char* family) {
    if (!ok) fail(ErrorCode::InvalidInput, std::string(family) + " has no '" + to_string(kind) + "' bound");
}

// (exp(|gamma| M) - 1) / |gamma|, with its limit M.
double log_lipschitz_coef(const Tilt& t, double M) {
    if (t.zero_limit()) return M;
    const double a = std::abs(t.gamma());
    return std::expm1(a * M) / a;
}

// A(gamma) = (1 - exp(gamma M))^2.
double a_gamma(const Tilt& t, double M) {
    const double e = std::expm1(t.gamma() * M);
    return e * e;
}

// max(1, exp(-2 gamma M)), branching on the sign of gamma.
double max_one_exp(const Tilt& t, double M) {
    return t.gamma() < 0.0 ? std::exp(-2.0 * t.gamma() * M) : 1.0;
}

double log_card(const BoundQuery& q, const char* family) {
    if (!q.card_H) fail(ErrorCode::MissingField, std::string(family) + " bound needs 'card_H'");
    return std::log(static_cast<double>(*q.card_H));
}

class Builder {
public:
    Builder(const BoundQuery& q, const char* family, BoundKind kind) {
        report_.query = q;
        report_.family = family;
        report_.kind = kind;
    }

    Builder& term(std::string label, double value) {
        report_.terms.push_back({std::move(label), value});
        return *this;
    }
    Builder& constant(std::string label, double value) {
        report_.constants.push_back({std::move(label), value});
        return *this;
    }
    Builder& violation(std::string text) {
        report_.violations.push_back(std::move(text));
        return *this;
    }

    BoundReport finish(bool lower_side = false) {
        double sum = 0.0;
        for (const auto& t : report_.terms) sum += t.value;
        if (std::isnan(sum)) sum = lower_side ? -kInf : kInf;
        report_.value = sum;
        report_.valid = report_.violations.empty();
        return std::move(report_);
    }

private:
    BoundReport report_;
};

// Scales every term by `factor` (the excess-risk corollaries double each
// term of the absolute bound).
BoundReport scaled(BoundReport r, double factor, BoundKind kind) {
    r.kind = kind;
    r.value = 0.0;
    for (auto& t : r.terms) {
        t.label = "2 x " + t.label;
        t.value *= factor;
        r.value += t.value;
    }
    return r;
}

BoundReport resolve_zeta(const BoundQuery& q, const std::function<BoundReport(double)>& eval) {
    if (q.zeta) {
        auto r = eval(*q.zeta);
        r.constants.push_back({"zeta", *q.zeta});
        return r;
    }
    std::optional<BoundReport> best;
    double best_zeta = 0.0;
    bool best_valid = false;
    for (double z : kZetaGrid) {
        auto r = eval(z);
        const bool better = !best || (r.valid && !best_valid) ||
                            (r.valid == best_valid && std::abs(r.value) < std::abs(best->value));
        if (better) {
            best = std::move(r);
            best_zeta = z;
            best_valid = best->valid;
        }
    }
    best->constants.push_back({"zeta", best_zeta});
    best->constants.push_back({"zeta auto", 1.0});
    return std::move(*best);
}

double bernstein_threshold(const BoundQuery& q, double kappa, double zeta) {
    const double g = q.tilt.gamma();
    const double l2 = std::log(2.0 / q.delta);
    return (4.0 * g * g * kappa * kappa + 8.0 * zeta / 3.0) * l2 / (zeta * zeta * std::exp(2.0 * g * kappa));
}

void check_bernstein(Builder& b, const BoundQuery& q, double kappa, double zeta) {
    const double need_n = bernstein_threshold(q, kappa, zeta);
    b.constant("Bernstein n threshold", need_n);
    if (static_cast<double>(q.n) < need_n)
        b.violation("n below Bernstein threshold: n = " + std::to_string(q.n) + " < " + fmt(need_n));
}

}  // namespace

const char* to_string(BoundKind kind) noexcept {
    switch (kind) {
        case BoundKind::Upper: return "upper";
        case BoundKind::Lower: return "lower";
        case BoundKind::Abs: return "abs";
        case BoundKind::Excess: return "excess";
        case BoundKind::Population: return "population";
        case BoundKind::Rademacher: return "rademacher";
        case BoundKind::Stability: return "stability";
        case BoundKind::PacBayes: return "pac-bayes";
        case BoundKind::GibbsLinear: return "gibbs-linear";
    }
    return "unknown";
}

BoundKind parse_bound_kind(std::string_view text) {
    for (auto k : {BoundKind::Upper, BoundKind::Lower, BoundKind::Abs, BoundKind::Excess, BoundKind::Population,
                   BoundKind::Rademacher, BoundKind::Stability, BoundKind::PacBayes, BoundKind::GibbsLinear})
        if (text == to_string(k)) return k;
    fail(ErrorCode::InvalidInput, "unknown bound kind '" + std::string(text) + "'");
}

std::optional<double> BoundReport::constant(std::string_view label) const {
    for (const auto& c : constants)
        if (c.label == label) return c.value;
    return std::nullopt;
}

void BoundQuery::validate() const {
    require(std::isfinite(delta) && delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    require(n >= 1, "n must be >= 1");
    if (card_H) require(*card_H >= 1, "card_H must be >= 1");
    auto nonneg = [](const std::optional<double>& v, const char* name) {
        if (v) require(std::isfinite(*v) && *v >= 0.0, std::string(name) + " must be finite and >= 0");
    };
    nonneg(M, "M");
    nonneg(kappa_u, "kappa_u");
    nonneg(kappa_s, "kappa_s");
    nonneg(kappa_t, "kappa_t");
    nonneg(mutual_information, "mutual_information");
    nonneg(stability_beta, "stability_beta");
    nonneg(pac_kl, "pac_kl");
    nonneg(lipschitz_loss, "lipschitz_loss");
    nonneg(massart_B, "massart_B");
    nonneg(variance_exp, "variance_exp");
    nonneg(variance_loss, "variance_loss");
    if (zeta) require(std::isfinite(*zeta) && *zeta > 0.0 && *zeta < 1.0, "zeta must lie in (0, 1)");
    if (pac_eta) require(std::isfinite(*pac_eta) && *pac_eta > 0.0, "pac_eta must be > 0");
    if (alpha) require(std::isfinite(*alpha) && *alpha > 0.0, "alpha must be > 0");
}

Sandwich sandwich_true_vs_tilted(const BoundQuery& q, double variance_exp) {
    q.validate();
    const double M = need(q.M, "M", "sandwich");
    require(std::isfinite(variance_exp) && variance_exp >= 0.0, "variance_exp must be finite and >= 0");
    if (q.tilt.zero_limit()) return {0.0, 0.0};
    const double g = q.tilt.gamma();
    return {-variance_exp / (2.0 * g), -std::exp(-2.0 * g * M) * variance_exp / (2.0 * g)};
}

BoundReport uniform_bounded(const BoundQuery& q, BoundKind kind) {
    static constexpr const char* family = "uniform-bounded";
    q.validate();
    require_kind(kind == BoundKind::Upper || kind == BoundKind::Lower || kind == BoundKind::Abs ||
                     kind == BoundKind::Excess,
                 kind, family);
    const double M = need(q.M, "M", family);
    const Tilt& t = q.tilt;
    const double g = t.gamma();
    const double a = std::abs(g);
    const double n = static_cast<double>(q.n);
    const double coef = log_lipschitz_coef(t, M);
    const double A = a_gamma(t, M);

    Builder b(q, family, kind);
    b.constant("A(gamma)", A);
    if (kind == BoundKind::Upper || kind == BoundKind::Lower) {
        const double l2 = std::log(2.0 / q.delta);
        std::string var_label = "Var(exp(gamma l))";
        double var = A / 4.0;
        if (q.variance_exp) {
            var = *q.variance_exp;
        } else {
            var_label = "worst-case Var cap A(gamma)/4";
        }
        b.constant("variance_exp used", var);
        const double conc = coef * std::sqrt(l2 / (2.0 * n));
        if (kind == BoundKind::Upper) {
            b.term("tilt bias -exp(-2 gamma M) Var / (2 gamma) [" + var_label + "]",
                   t.zero_limit() ? 0.0 : -std::exp(-2.0 * g * M) * var / (2.0 * g));
            b.term("Hoeffding concentration", conc);
            return b.finish();
        }
        b.term("tilt bias -Var / (2 gamma) [" + var_label + "]", t.zero_limit() ? 0.0 : -var / (2.0 * g));
        b.term("Hoeffding concentration", -conc);
        return b.finish(true);
    }

    const double B = log_card(q, family) + std::log(2.0 / q.delta);
    b.constant("B(delta)", B);
    b.term("uniform concentration", coef * std::sqrt(B / (2.0 * n)));
    b.term("tilt bias max(1, exp(-2 gamma M)) A(gamma) / (8 |gamma|)",
           t.zero_limit() ? 0.0 : max_one_exp(t, M) * A / (8.0 * a));
    auto r = b.finish();
    return kind == BoundKind::Excess ? scaled(std::move(r), 2.0, kind) : r;
}

BoundReport uniform_unbounded(const BoundQuery& q, BoundKind kind) {
    static constexpr const char* family = "uniform-unbounded";
    q.validate();
    require_kind(kind == BoundKind::Upper || kind == BoundKind::Lower || kind == BoundKind::Abs ||
                     kind == BoundKind::Excess,
                 kind, family);
    require_negative_tilt(q, family);
    const double kappa = need(q.kappa_u, "kappa_u", family);
    const double g = q.tilt.gamma();
    const double n = static_cast<double>(q.n);
    const double l2 = std::log(2.0 / q.delta);
    const double e = std::exp(-g * kappa);

    if (kind == BoundKind::Upper) {
        Builder b(q, family, kind);
        b.term("Bernstein deviation 2 kappa_u exp(-gamma kappa_u) sqrt(log(2/delta)/n)",
               2.0 * kappa * e * std::sqrt(l2 / n));
        b.term("Bernstein range -4 exp(-gamma kappa_u) log(2/delta) / (3 n gamma)", -4.0 * e * l2 / (3.0 * n * g));
        b.term("tilt bias -(gamma/2) kappa_u^2", -0.5 * g * kappa * kappa);
        return b.finish();
    }
    if (kind == BoundKind::Lower) {
        return resolve_zeta(q, [&](double zeta) {
            Builder b(q, family, kind);
            check_bernstein(b, q, kappa, zeta);
            b.term("Bernstein deviation", -2.0 * kappa * e / (1.0 - zeta) * std::sqrt(l2 / n));
            b.term("Bernstein range", 4.0 * e * l2 / (3.0 * n * g * (1.0 - zeta)));
            return b.finish(true);
        });
    }
    const double B = log_card(q, family) + std::log(2.0 / q.delta);
    auto r = resolve_zeta(q, [&](double zeta) {
        Builder b(q, family, BoundKind::Abs);
        b.constant("B(delta)", B);
        check_bernstein(b, q, kappa, zeta);
        b.term("uniform Bernstein deviation", 2.0 * kappa * e / (1.0 - zeta) * std::sqrt(B / n));
        b.term("uniform Bernstein range", -4.0 * e * B / (3.0 * n * g * (1.0 - zeta)));
        b.term("tilt bias -(gamma/2) kappa_u^2", -0.5 * g * kappa * kappa);
        return b.finish();
    });
    return kind == BoundKind::Excess ? scaled(std::move(r), 2.0, kind) : r;
}

BoundReport info_bounded(const BoundQuery& q, BoundKind kind, const std::optional<std::vector<double>>& individual_mi) {
    static constexpr const char* family = "info-bounded";
    q.validate();
    require_kind(kind == BoundKind::Upper || kind == BoundKind::Lower || kind == BoundKind::Abs, kind, family);
    const double M = need(q.M, "M", family);
    const Tilt& t = q.tilt;
    const double g = t.gamma();
    const double a = std::abs(g);
    const double n = static_cast<double>(q.n);
    const double coef = log_lipschitz_coef(t, M);

    Builder b(q, family, kind);
    double info_term;
    std::string info_label;
    if (individual_mi) {
        require(individual_mi->size() == q.n, "individual_mi needs one value per sample");
        double s = 0.0;
        for (double v : *individual_mi) {
            require(std::isfinite(v) && v >= 0.0, "individual mutual information must be finite and >= 0");
            s += std::sqrt(v / 2.0);
        }
        info_term = coef * s / n;
        info_label = "individual-sample information term";
    } else {
        const double I = need(q.mutual_information, "mutual_information", family);
        info_term = coef * std::sqrt(I / (2.0 * n));
        info_label = "mutual information term";
    }
    const double finite_n = 1.0 - 1.0 / n;

    if (kind == BoundKind::Abs) {
        b.term(info_label, info_term);
        b.term("tilt bias |gamma| M^2 exp(|gamma| M) (1 - 1/n) / 8",
               t.zero_limit() ? 0.0 : a * M * M * std::exp(a * M) / 8.0 * finite_n);
        return b.finish();
    }
    std::string var_label = "E[Var(l)]";
    double var = M * M / 4.0;
    if (q.variance_loss) {
        var = *q.variance_loss;
    } else {
        var_label = "worst-case cap M^2/4";
    }
    b.constant("variance_loss used", var);
    if (kind == BoundKind::Upper) {
        b.term(info_label, info_term);
        b.term("tilt bias -(gamma exp(-gamma M)/2)(1 - 1/n) [" + var_label + "]",
               t.zero_limit() ? 0.0 : -g * std::exp(-g * M) / 2.0 * finite_n * var);
        return b.finish();
    }
    b.term(info_label, -info_term);
    b.term("tilt bias -(gamma exp(gamma M)/2)(1 - 1/n) [" + var_label + "]",
           t.zero_limit() ? 0.0 : -g * std::exp(g * M) / 2.0 * finite_n * var);
    return b.finish(true);
}

BoundReport info_unbounded(const BoundQuery& q, BoundKind kind) {
    static constexpr const char* family = "info-unbounded";
    q.validate();
    require_kind(kind == BoundKind::Upper || kind == BoundKind::Lower, kind, family);
    require_negative_tilt(q, family);
    const double kappa = need(q.kappa_t, "kappa_t", family);
    const double I = need(q.mutual_information, "mutual_information", family);
    const double g = q.tilt.gamma();
    const double n = static_cast<double>(q.n);
    const double e = std::exp(-g * kappa);
    const double rate = I / n;
    const double split = g * g * kappa * kappa / 2.0;
    const bool branch_one = rate <= split;
    const double bias = 0.5 * g * kappa * kappa;
    const double sqrt_piece = e * std::sqrt(kappa * kappa * I / n);
    const double linear_piece = e / std::abs(g) * (rate + split);

    if (kind == BoundKind::Upper) {
        Builder b(q, family, kind);
        b.constant("branch", branch_one ? 1.0 : 2.0);
        b.constant("branch one value", sqrt_piece - bias);
        b.constant("branch two value", linear_piece - bias);
        if (branch_one) {
            b.term("branch one: exp(-gamma kappa_t) sqrt(kappa_t^2 I / n)", sqrt_piece);
        } else {
            b.term("branch two: -(exp(-gamma kappa_t)/gamma)(I/n + gamma^2 kappa_t^2 / 2)", linear_piece);
        }
        b.term("tilt bias -(gamma/2) kappa_t^2", -bias);
        return b.finish();
    }
    return resolve_zeta(q, [&](double zeta) {
        Builder b(q, family, kind);
        b.constant("branch", branch_one ? 1.0 : 2.0);
        b.constant("branch one value", -sqrt_piece + bias);
        b.constant("branch two value", -linear_piece + bias);
        if (branch_one) {
            const double need_n = g * g * kappa * kappa * I / (zeta * zeta * std::exp(2.0 * g * kappa));
            b.constant("branch one n threshold", need_n);
            if (n < need_n) b.violation("n below branch-one threshold: n = " + std::to_string(q.n) + " < " + fmt(need_n));
            b.term("branch one: -exp(-gamma kappa_t) sqrt(kappa_t^2 I / n)", -sqrt_piece);
        } else {
            const double cap_n = 4.0 * (4.0 / (zeta * zeta) - 1.0) * I / (g * g * kappa * kappa);
            b.constant("branch two n ceiling", cap_n);
            if (!(cap_n > n)) b.violation("n above branch-two ceiling: n = " + std::to_string(q.n) + " >= " + fmt(cap_n));
            b.term("branch two: (exp(-gamma kappa_t)/gamma)(I/n + gamma^2 kappa_t^2 / 2)", -linear_piece);
        }
        b.term("tilt bias (gamma/2) kappa_t^2", bias);
        return b.finish(true);
    });
}

BoundReport shift_bounds(const BoundQuery& q, double tv_value, BoundKind kind) {
    static constexpr const char* family = "shift";
    q.validate();
    require_kind(kind == BoundKind::Population || kind == BoundKind::Upper || kind == BoundKind::Lower ||
                     kind == BoundKind::Abs,
                 kind, family);
    require_negative_tilt(q, family);
    require(std::isfinite(tv_value) && tv_value >= 0.0 && tv_value <= 2.0, "tv must lie in [0, 2]");
    const double ku = need(q.kappa_u, "kappa_u", family);
    const double ks = need(q.kappa_s, "kappa_s", family);
    const double g = q.tilt.gamma();
    const double a = std::abs(g);
    const double n = static_cast<double>(q.n);
    const double l2 = std::log(2.0 / q.delta);

    // Divided difference of exp(|gamma| k) between kappa_s and kappa_u.
    double D;
    if (std::abs(ku - ks) < 1e-12) {
        D = a * std::exp(a * ku);
    } else {
        D = (std::expm1(a * ku) - std::expm1(a * ks)) / (ku - ks);
    }
    const double population = tv_value / (g * g) * D;
    const double es = std::exp(-g * ks);

    auto base = [&](BoundKind k) {
        Builder b(q, family, k);
        b.constant("D(kappa_s, kappa_u)", D);
        b.constant("tv", tv_value);
        return b;
    };

    if (kind == BoundKind::Population) {
        auto b = base(kind);
        b.term("distribution shift (tv / gamma^2) D(kappa_s, kappa_u)", population);
        return b.finish();
    }
    if (kind == BoundKind::Upper) {
        auto b = base(kind);
        b.term("Bernstein deviation", 2.0 * ks * es * std::sqrt(l2 / n));
        b.term("tilt bias -(gamma/2) kappa_u^2", -0.5 * g * ku * ku);
        b.term("Bernstein range", -4.0 * es * l2 / (3.0 * n * g));
        b.term("distribution shift (tv / gamma^2) D(kappa_s, kappa_u)", population);
        return b.finish();
    }
    if (kind == BoundKind::Lower) {
        return resolve_zeta(q, [&](double zeta) {
            auto b = base(kind);
            check_bernstein(b, q, ku, zeta);
            b.term("Bernstein deviation", -2.0 * ks * es / (1.0 - zeta) * std::sqrt(l2 / n));
            b.term("Bernstein range", 4.0 * es * l2 / (3.0 * n * g * (1.0 - zeta)));
            b.term("distribution shift", -population);
            return b.finish(true);
        });
    }
    const double B = log_card(q, family) + std::log(2.0 / q.delta);
    return resolve_zeta(q, [&](double zeta) {
        auto b = base(kind);
        b.constant("B(delta)", B);
        check_bernstein(b, q, ku, zeta);
        b.term("uniform Bernstein deviation", 2.0 * ks * es / (1.0 - zeta) * std::sqrt(B / n));
        b.term("uniform Bernstein range", -4.0 * es * B / (3.0 * n * g * (1.0 - zeta)));
        b.term("tilt bias -(gamma/2) kappa_u^2", -0.5 * g * ku * ku);
        b.term("distribution shift (tv / gamma^2) D(kappa_s, kappa_u)", population);
        return b.finish();
    });
}

BoundReport mcdiarmid_bounds(const BoundQuery& q, BoundKind kind) {
    static constexpr const char* family = "mcdiarmid";
    q.validate();
    require_kind(kind == BoundKind::Upper || kind == BoundKind::Lower, kind, family);
    const double M = need(q.M, "M", family);
    const Tilt& t = q.tilt;
    const double g = t.gamma();
    const double a = std::abs(g);
    const double n = static_cast<double>(q.n);

    Builder b(q, family, kind);
    double c;
    if (t.zero_limit()) {
        c = M / n;
    } else {
        const double limit = std::log(n + 1.0) / M;
        if (!(a < limit)) b.violation("|gamma| >= log(n+1)/M = " + fmt(limit));
        const double y = -std::expm1(a * M) / n;
        c = y > -1.0 ? std::abs(std::log1p(y) / g) : kInf;
    }
    b.constant("c(gamma)", c);
    const double spread = std::sqrt(n * std::log(1.0 / q.delta) / 2.0);
    const double conc = c * spread;
    if (kind == BoundKind::Upper) {
        const double bias = t.zero_limit() ? 0.0 : std::abs(a_gamma(t, M) / (8.0 * g) * (1.0 / n - std::exp(-2.0 * g * M)));
        b.term("tilt bias |A(gamma)/(8 gamma) (1/n - exp(-2 gamma M))|", bias);
        b.term("McDiarmid concentration c(gamma) sqrt(n log(1/delta)/2)", conc);
        return b.finish();
    }
    std::string var_label = "Var(exp(gamma l))";
    double var = a_gamma(t, M) / 4.0;
    if (q.variance_exp) {
        var = *q.variance_exp;
    } else {
        var_label = "worst-case Var cap A(gamma)/4";
    }
    b.term("tilt bias Var/(2 gamma) (exp(-2 gamma M)/n - 1) [" + var_label + "]",
           t.zero_limit() ? 0.0 : var / (2.0 * g) * (std::exp(-2.0 * g * M) / n - 1.0));
    b.term("McDiarmid concentration", -conc);
    return b.finish(true);
}

BoundReport supplementary_bounds(const BoundQuery& q, BoundKind kind) {
    static constexpr const char* family = "supplementary";
    q.validate();
    require_kind(kind == BoundKind::Rademacher || kind == BoundKind::Stability || kind == BoundKind::PacBayes ||
                     kind == BoundKind::GibbsLinear,
                 kind, family);
    const double M = need(q.M, "M", family);
    const Tilt& t = q.tilt;
    const double g = t.gamma();
    const double a = std::abs(g);
    const double n = static_cast<double>(q.n);
    const double capped_bias = t.zero_limit() ? 0.0 : max_one_exp(t, M) * a_gamma(t, M) / (8.0 * a);
    const double exp_abs = t.zero_limit() ? 1.0 : std::exp(a * M);

    Builder b(q, family, kind);
    switch (kind) {
        case BoundKind::Rademacher: {
            const double lip = need(q.lipschitz_loss, "lipschitz_loss", family);
            const double massart = need(q.massart_B, "massart_B", family);
            const double lc = log_card(q, family);
            b.constant("exp(|gamma| M)", exp_abs);
            b.term("tilt bias max(1, exp(-2 gamma M)) (exp(gamma M) - 1)^2 / (8 |gamma|)", capped_bias);
            b.term("Massart complexity 2 exp(|gamma| M) M_l' B sqrt(2 log card_H) / n",
                   2.0 * exp_abs * lip * massart * std::sqrt(2.0 * lc) / n);
            b.term("concentration 3 (exp(|gamma| M) - 1)/|gamma| sqrt(log(1/delta)/(2n))",
                   3.0 * log_lipschitz_coef(t, M) * std::sqrt(std::log(1.0 / q.delta) / (2.0 * n)));
            break;
        }
        case BoundKind::Stability: {
            const double beta = need(q.stability_beta, "stability_beta", family);
            b.term("tilt bias (1 - exp(gamma M))^2 (1 + exp(-2 gamma M)) / (8 |gamma|)",
                   t.zero_limit() ? 0.0 : a_gamma(t, M) * (1.0 + std::exp(-2.0 * g * M)) / (8.0 * a));
            b.term("stability exp(|gamma| M) beta", exp_abs * beta);
            break;
        }
        case BoundKind::PacBayes: {
            const double eta = need(q.pac_eta, "pac_eta", family);
            const double kl = need(q.pac_kl, "pac_kl", family);
            // L: Lipschitz constant of log over the range of exp(gamma l);
            // A: range of exp(gamma l) / |gamma|.
            const double L = g < 0.0 ? exp_abs : 1.0;
            const double A = t.zero_limit() ? M : std::abs(std::expm1(g * M)) / a;
            b.constant("L", L);
            b.constant("A", A);
            b.term("tilt bias max(1, exp(-2 gamma M)) A(gamma) / (8 |gamma|)", capped_bias);
            b.term("Catoni L eta A^2 / (8 n)", L * eta * A * A / (8.0 * n));
            b.term("Catoni L (KL + log(1/delta)) / eta", L * (kl + std::log(1.0 / q.delta)) / eta);
            break;
        }
        case BoundKind::GibbsLinear: {
            const double alpha = need(q.alpha, "alpha", family);
            b.term("Gibbs alpha M^2 / (2n)", alpha * M * M / (2.0 * n));
            b.term("tilt bias max(1, exp(-2 gamma M)) (1 - exp(gamma M))^2 / (8 |gamma|)", capped_bias);
            break;
        }
        default:
            break;
    }
    return b.finish();
}

BoundReport tilted_gibbs_bound(const BoundQuery& q, double alpha, BoundKind kind) {
    static constexpr const char* family = "tilted-gibbs";
    q.validate();
    require_kind(kind == BoundKind::Upper || kind == BoundKind::Abs, kind, family);
    require(std::isfinite(alpha) && alpha > 0.0, "tilted Gibbs bound needs alpha > 0");
    const double M = need(q.M, "M", family);
    const Tilt& t = q.tilt;
    const double g = t.gamma();
    const double a = std::abs(g);
    const double n = static_cast<double>(q.n);
    const double finite_n = 1.0 - 1.0 / n;

    Builder b(q, family, kind);
    const double e = std::expm1(a * M);
    b.term("information alpha (exp(|gamma| M) - 1)^2 / (2 gamma^2 n)",
           t.zero_limit() ? alpha * M * M / (2.0 * n) : alpha * e * e / (2.0 * g * g * n));
    if (kind == BoundKind::Abs) {
        b.term("tilt bias |gamma| M^2 exp(|gamma| M) (1 - 1/n) / 8",
               t.zero_limit() ? 0.0 : a * M * M * std::exp(a * M) / 8.0 * finite_n);
        return b.finish();
    }
    std::string var_label = "E[Var(l)]";
    double var = M * M / 4.0;
    if (q.variance_loss) {
        var = *q.variance_loss;
    } else {
        var_label = "worst-case cap M^2/4";
    }
    b.term("tilt bias -(gamma exp(-gamma M)/2)(1 - 1/n) [" + var_label + "]",
           t.zero_limit() ? 0.0 : -g * std::exp(-g * M) / 2.0 * finite_n * var);
    return b.finish();
}

const std::vector<std::string>& bound_families() {
    static const std::vector<std::string> names = {"uniform-bounded", "uniform-unbounded", "info-bounded",
                                                   "info-unbounded",  "shift",             "mcdiarmid",
                                                   "supplementary",   "tilted-gibbs"};
    return names;
}

BoundReport evaluate_bound(const BoundRequest& r) {
    const auto& f = r.family;
    if (f == "uniform-bounded") return uniform_bounded(r.query, r.kind);
    if (f == "uniform-unbounded") return uniform_unbounded(r.query, r.kind);
    if (f == "info-bounded") return info_bounded(r.query, r.kind, r.individual_mi);
    if (f == "info-unbounded") return info_unbounded(r.query, r.kind);
    if (f == "shift") {
        if (!r.tv) fail(ErrorCode::MissingField, "shift bound needs 'tv'");
        return shift_bounds(r.query, *r.tv, r.kind);
    }
    if (f == "mcdiarmid") return mcdiarmid_bounds(r.query, r.kind);
    if (f == "supplementary") return supplementary_bounds(r.query, r.kind);
    if (f == "tilted-gibbs") {
        if (!r.query.alpha) fail(ErrorCode::MissingField, "tilted-gibbs bound needs 'alpha'");
        return tilted_gibbs_bound(r.query, *r.query.alpha, r.kind);
    }
    fail(ErrorCode::InvalidInput, "unknown bound family '" + f + "'");
}

}  // namespace tilted
