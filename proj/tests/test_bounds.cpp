#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tilted/bounds.hpp"

using namespace tilted;
using oracle::big;

namespace {

BoundQuery base(double gamma, std::size_t n, double delta = 0.05) {
    BoundQuery q;
    q.tilt = Tilt(gamma);
    q.n = n;
    q.delta = delta;
    return q;
}

double sum_terms(const BoundReport& r) {
    double s = 0.0;
    for (const auto& t : r.terms) s += t.value;
    return s;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::InvalidInput;
}

double d(const big& x) {
    return static_cast<double>(x);
}

}  // namespace

TEST(Sandwich, Examples) {
    auto q = base(-1.0, 1);
    q.M = 1.0;
    auto s = sandwich_true_vs_tilted(q, 0.04);
    EXPECT_NEAR(s.lower, 0.02, 1e-16);
    EXPECT_NEAR(s.upper, d(big("0.02") * boost::multiprecision::exp(big(2))), 1e-15);
    EXPECT_NEAR(s.upper, 0.14778, 1e-5);
    s = sandwich_true_vs_tilted(q, 0.0);
    EXPECT_EQ(s.lower, 0.0);
    EXPECT_EQ(s.upper, 0.0);
    q.tilt = Tilt(1e-9);
    s = sandwich_true_vs_tilted(q, 0.3);
    EXPECT_EQ(s.lower, 0.0);
    EXPECT_EQ(s.upper, 0.0);
    BoundQuery noM = base(-1.0, 1);
    EXPECT_EQ(code_of([&] { sandwich_true_vs_tilted(noM, 0.1); }), ErrorCode::MissingField);
}

TEST(UniformBounded, ZeroLimitExample) {
    auto q = base(1e-9, 100);
    q.M = 1.0;
    q.card_H = 10;
    const auto r = uniform_bounded(q, BoundKind::Abs);
    const double want = d(boost::multiprecision::sqrt((boost::multiprecision::log(big(10)) +
                                                       boost::multiprecision::log(big(40))) / big(200)));
    EXPECT_NEAR(r.value, want, 1e-14);
    EXPECT_NEAR(r.value, 0.17308, 1e-5);
    EXPECT_TRUE(r.valid);
    EXPECT_EQ(r.terms.size(), 2u);
    EXPECT_EQ(r.terms[1].value, 0.0);
}

TEST(UniformBounded, AbsClosedForm) {
    for (double g : {-2.0, -0.3, 0.25, 1.5}) {
        auto q = base(g, 50, 0.1);
        q.M = 2.0;
        q.card_H = 7;
        const auto r = uniform_bounded(q, BoundKind::Abs);
        const big G(g), M(2), a = boost::multiprecision::abs(G);
        const big coef = (boost::multiprecision::exp(a * M) - 1) / a;
        const big B = boost::multiprecision::log(big(7)) + boost::multiprecision::log(big(2) / big("0.1"));
        const big A = boost::multiprecision::pow(1 - boost::multiprecision::exp(G * M), 2);
        const big cap = g < 0 ? boost::multiprecision::exp(-2 * G * M) : big(1);
        const big want = coef * boost::multiprecision::sqrt(B / big(100)) + cap * A / (8 * a);
        EXPECT_NEAR(r.value, d(want), 1e-12 * d(want)) << g;
        const auto e = uniform_bounded(q, BoundKind::Excess);
        EXPECT_NEAR(e.value, 2.0 * r.value, 1e-14 * r.value);
        EXPECT_EQ(e.terms.size(), r.terms.size());
    }
}

TEST(UniformBounded, UpperLowerVariance) {
    auto q = base(-0.5, 40);
    q.M = 1.0;
    q.variance_exp = 0.0;
    auto up = uniform_bounded(q, BoundKind::Upper);
    EXPECT_EQ(up.terms[0].value, 0.0);
    q.variance_exp = 0.01;
    up = uniform_bounded(q, BoundKind::Upper);
    const double conc = (std::expm1(0.5) / 0.5) * std::sqrt(std::log(40.0) / 80.0);
    EXPECT_NEAR(up.value, -std::exp(1.0) * 0.01 / -1.0 + conc, 1e-14);
    const auto lo = uniform_bounded(q, BoundKind::Lower);
    EXPECT_NEAR(lo.value, 0.01 - conc, 1e-14);
    q.variance_exp.reset();
    const auto worst = uniform_bounded(q, BoundKind::Upper);
    EXPECT_NE(worst.terms[0].label.find("worst-case"), std::string::npos);
    EXPECT_NEAR(*worst.constant("variance_exp used"), std::pow(std::expm1(-0.5), 2) / 4.0, 1e-16);
}

TEST(UniformBounded, Errors) {
    auto q = base(-0.5, 40);
    EXPECT_EQ(code_of([&] { uniform_bounded(q, BoundKind::Abs); }), ErrorCode::MissingField);
    q.M = 1.0;
    EXPECT_EQ(code_of([&] { uniform_bounded(q, BoundKind::Abs); }), ErrorCode::MissingField);
    q.card_H = 3;
    EXPECT_EQ(code_of([&] { uniform_bounded(q, BoundKind::Population); }), ErrorCode::InvalidInput);
    q.delta = 1.0;
    EXPECT_EQ(code_of([&] { uniform_bounded(q, BoundKind::Abs); }), ErrorCode::InvalidInput);
    q.delta = 0.05;
    q.n = 0;
    EXPECT_EQ(code_of([&] { uniform_bounded(q, BoundKind::Abs); }), ErrorCode::InvalidInput);
}

TEST(UniformBounded, MonotoneInSampleSizeAndConfidence) {
    auto q = base(-0.4, 10);
    q.M = 1.0;
    q.card_H = 5;
    double prev = uniform_bounded(q, BoundKind::Abs).value;
    for (std::size_t n = 20; n <= 20480; n *= 2) {
        q.n = n;
        const double v = uniform_bounded(q, BoundKind::Abs).value;
        EXPECT_LT(v, prev);
        prev = v;
    }
    q.n = 100;
    double last = 0.0;
    for (double delta : {0.5, 0.1, 0.05, 0.01, 0.001}) {
        q.delta = delta;
        const double v = uniform_bounded(q, BoundKind::Abs).value;
        EXPECT_GT(v, last);
        last = v;
    }
}

TEST(UniformBounded, SmallTiltIsContinuous) {
    auto q = base(1e-9, 100);
    q.M = 1.5;
    q.card_H = 12;
    const double limit = uniform_bounded(q, BoundKind::Abs).value;
    for (double g : {2e-7, -2e-7, 1e-6}) {
        q.tilt = Tilt(g);
        EXPECT_NEAR(uniform_bounded(q, BoundKind::Abs).value, limit, 1e-5 * limit) << g;
    }
}

TEST(UniformUnbounded, Examples) {
    auto q = base(0.5, 10);
    q.kappa_u = 1.0;
    EXPECT_EQ(code_of([&] { uniform_unbounded(q, BoundKind::Upper); }), ErrorCode::TiltSign);
    q = base(-0.5, 1);
    q.kappa_u = 1.0;
    q.zeta = 0.5;
    const auto lo = uniform_unbounded(q, BoundKind::Lower);
    EXPECT_FALSE(lo.valid);
    ASSERT_EQ(lo.violations.size(), 1u);
    EXPECT_NE(lo.violations[0].find("threshold"), std::string::npos);
    EXPECT_NEAR(*lo.constant("Bernstein n threshold"),
                (4 * 0.25 + 8 * 0.5 / 3) * std::log(40.0) / (0.25 * std::exp(-1.0)), 1e-12);
}

TEST(UniformUnbounded, DecreasesAlongSchedule) {
    auto at = [](std::size_t n) {
        auto q = base(-1.0 / std::sqrt(static_cast<double>(n)), n);
        q.kappa_u = 1.0;
        q.card_H = 8;
        return uniform_unbounded(q, BoundKind::Abs);
    };
    const auto a = at(4096), b = at(16384);
    EXPECT_TRUE(std::isfinite(a.value));
    EXPECT_TRUE(a.valid);
    EXPECT_LT(b.value, a.value);
}

TEST(UniformUnbounded, ClosedForms) {
    auto q = base(-0.3, 200, 0.1);
    q.kappa_u = 1.7;
    q.card_H = 4;
    q.zeta = 0.4;
    const double g = -0.3, k = 1.7, n = 200, l2 = std::log(20.0), B = std::log(4.0) + l2, z = 0.4;
    const double e = std::exp(-g * k);
    EXPECT_NEAR(uniform_unbounded(q, BoundKind::Upper).value,
                2 * k * e * std::sqrt(l2 / n) - 4 * e * l2 / (3 * n * g) - g / 2 * k * k, 1e-13);
    EXPECT_NEAR(uniform_unbounded(q, BoundKind::Lower).value,
                -2 * k * e / (1 - z) * std::sqrt(l2 / n) + 4 * e * l2 / (3 * n * g * (1 - z)), 1e-13);
    const double abs = 2 * k * e / (1 - z) * std::sqrt(B / n) - 4 * e * B / (3 * n * g * (1 - z)) - g / 2 * k * k;
    EXPECT_NEAR(uniform_unbounded(q, BoundKind::Abs).value, abs, 1e-13);
    EXPECT_NEAR(uniform_unbounded(q, BoundKind::Excess).value, 2 * abs, 1e-13);
}

TEST(UniformUnbounded, AutoZetaPicksSmallestValidValue) {
    auto q = base(-0.5, 300);
    q.kappa_u = 1.0;
    q.card_H = 3;
    const auto autor = uniform_unbounded(q, BoundKind::Abs);
    ASSERT_TRUE(autor.constant("zeta"));
    ASSERT_TRUE(autor.constant("zeta auto"));
    double best = INFINITY;
    for (double z : kZetaGrid) {
        q.zeta = z;
        const auto r = uniform_unbounded(q, BoundKind::Abs);
        if (r.valid) best = std::min(best, std::abs(r.value));
    }
    EXPECT_TRUE(autor.valid);
    EXPECT_EQ(std::abs(autor.value), best);
}

TEST(InfoBounded, Examples) {
    auto q = base(-0.1, 100);
    q.M = 1.0;
    q.mutual_information = 0.2;
    const auto r = info_bounded(q, BoundKind::Abs);
    const double want = (std::expm1(0.1) / 0.1) * std::sqrt(0.001) + (0.1 * std::exp(0.1) / 8) * 0.99;
    EXPECT_NEAR(r.value, want, 1e-14);
    q.mutual_information = 0.0;
    const auto zero = info_bounded(q, BoundKind::Abs);
    EXPECT_EQ(zero.terms[0].value, 0.0);
    EXPECT_NEAR(zero.value, (0.1 * std::exp(0.1) / 8) * 0.99, 1e-15);
    q.n = 1;
    q.mutual_information = 0.3;
    EXPECT_EQ(info_bounded(q, BoundKind::Abs).terms[1].value, 0.0);
    EXPECT_EQ(info_bounded(q, BoundKind::Upper).terms[1].value, 0.0);
}

TEST(InfoBounded, UpperLowerAndIndividual) {
    auto q = base(0.7, 10);
    q.M = 2.0;
    q.mutual_information = 0.5;
    q.variance_loss = 0.3;
    const double coef = std::expm1(1.4) / 0.7;
    const double info = coef * std::sqrt(0.5 / 20);
    EXPECT_NEAR(info_bounded(q, BoundKind::Upper).value, info - 0.7 * std::exp(-1.4) / 2 * 0.9 * 0.3, 1e-13);
    EXPECT_NEAR(info_bounded(q, BoundKind::Lower).value, -info - 0.7 * std::exp(1.4) / 2 * 0.9 * 0.3, 1e-13);
    const std::vector<double> ind(10, 0.02);
    const auto r = info_bounded(q, BoundKind::Abs, ind);
    EXPECT_NEAR(r.terms[0].value, coef * std::sqrt(0.01), 1e-14);
    EXPECT_THROW(info_bounded(q, BoundKind::Abs, std::vector<double>(3, 0.1)), Error);
    q.mutual_information.reset();
    EXPECT_EQ(code_of([&] { info_bounded(q, BoundKind::Abs); }), ErrorCode::MissingField);
}

TEST(InfoUnbounded, Examples) {
    auto q = base(-0.2, 1000);
    q.kappa_t = 1.0;
    q.mutual_information = 0.0;
    EXPECT_NEAR(info_unbounded(q, BoundKind::Upper).value, 0.1, 1e-16);
    q.mutual_information = 0.01;
    const auto r = info_unbounded(q, BoundKind::Upper);
    EXPECT_EQ(*r.constant("branch"), 1.0);
    EXPECT_NEAR(r.value, std::exp(0.2) * std::sqrt(0.01 / 1000) + 0.1, 1e-15);
    q.tilt = Tilt(0.2);
    EXPECT_EQ(code_of([&] { info_unbounded(q, BoundKind::Upper); }), ErrorCode::TiltSign);
}

TEST(InfoUnbounded, BranchBoundary) {
    auto q = base(-0.5, 8);
    q.kappa_t = 2.0;
    q.mutual_information = 8 * 0.25 * 4 / 2;  // I/n = gamma^2 kappa^2 / 2 exactly
    const auto r = info_unbounded(q, BoundKind::Upper);
    EXPECT_EQ(*r.constant("branch"), 1.0);
    const double one = std::exp(1.0) * std::sqrt(4.0 * 0.5) + 1.0;
    const double two = std::exp(1.0) / 0.5 * (0.5 + 0.5) + 1.0;
    EXPECT_NEAR(*r.constant("branch one value"), one, 1e-14);
    EXPECT_NEAR(*r.constant("branch two value"), two, 1e-14);
    EXPECT_NEAR(r.value, one, 1e-14);
    q.mutual_information = 5.0;
    EXPECT_EQ(*info_unbounded(q, BoundKind::Upper).constant("branch"), 2.0);
}

TEST(InfoUnbounded, LowerValidity) {
    auto q = base(-0.5, 4);
    q.kappa_t = 1.0;
    q.mutual_information = 0.1;
    q.zeta = 0.5;
    auto r = info_unbounded(q, BoundKind::Lower);
    EXPECT_EQ(*r.constant("branch"), 1.0);
    const double need = 0.25 * 0.1 / (0.25 * std::exp(-1.0));
    EXPECT_NEAR(*r.constant("branch one n threshold"), need, 1e-14);
    EXPECT_TRUE(r.valid);
    EXPECT_NEAR(r.value, -std::exp(0.5) * std::sqrt(0.1 / 4) - 0.25, 1e-14);
    q.mutual_information = 10.0;
    r = info_unbounded(q, BoundKind::Lower);
    EXPECT_EQ(*r.constant("branch"), 2.0);
    EXPECT_TRUE(r.valid);
    EXPECT_NEAR(r.value, std::exp(0.5) / -0.5 * (2.5 + 0.125) - 0.25, 1e-13);
}

TEST(Shift, Examples) {
    auto q = base(-1.0, 10);
    q.kappa_u = 1.0;
    q.kappa_s = 1.0;
    EXPECT_EQ(shift_bounds(q, 0.0, BoundKind::Population).value, 0.0);
    EXPECT_NEAR(shift_bounds(q, 0.5, BoundKind::Population).value, 0.5 * std::exp(1.0), 1e-15);
    q.kappa_u = 2.0;
    EXPECT_NEAR(shift_bounds(q, 0.4, BoundKind::Population).value, 0.4 * (std::exp(2.0) - std::exp(1.0)), 1e-14);
    EXPECT_THROW(shift_bounds(q, 2.5, BoundKind::Population), Error);
    q.tilt = Tilt(0.5);
    EXPECT_EQ(code_of([&] { shift_bounds(q, 0.1, BoundKind::Population); }), ErrorCode::TiltSign);
}

TEST(Shift, NearlyEqualMomentsAreContinuous) {
    auto q = base(-0.7, 10);
    q.kappa_u = 1.3;
    q.kappa_s = 1.3;
    const double limit = shift_bounds(q, 1.0, BoundKind::Population).value;
    q.kappa_s = 1.3 - 1e-7;
    EXPECT_NEAR(shift_bounds(q, 1.0, BoundKind::Population).value, limit, 1e-6 * limit);
}

TEST(Shift, ReducesToUnboundedWithoutShift) {
    auto q = base(-0.4, 500);
    q.kappa_u = 1.2;
    q.kappa_s = 1.2;
    q.card_H = 6;
    q.zeta = 0.7;
    EXPECT_NEAR(shift_bounds(q, 0.0, BoundKind::Abs).value, uniform_unbounded(q, BoundKind::Abs).value, 1e-14);
    EXPECT_NEAR(shift_bounds(q, 0.0, BoundKind::Upper).value, uniform_unbounded(q, BoundKind::Upper).value, 1e-14);
    EXPECT_NEAR(shift_bounds(q, 0.0, BoundKind::Lower).value, uniform_unbounded(q, BoundKind::Lower).value, 1e-14);
    const double pop = shift_bounds(q, 0.3, BoundKind::Population).value;
    EXPECT_NEAR(shift_bounds(q, 0.3, BoundKind::Abs).value, uniform_unbounded(q, BoundKind::Abs).value + pop, 1e-13);
}

TEST(McDiarmid, Examples) {
    auto q = base(-0.05, 100);
    q.M = 1.0;
    const auto up = mcdiarmid_bounds(q, BoundKind::Upper);
    EXPECT_TRUE(up.valid);
    const big G("-0.05"), n(100);
    const big A = boost::multiprecision::pow(1 - boost::multiprecision::exp(G), 2);
    const big t1 = boost::multiprecision::abs(A / (8 * G) * (1 / n - boost::multiprecision::exp(-2 * G)));
    const big c = boost::multiprecision::abs(boost::multiprecision::log(1 + (1 - boost::multiprecision::exp(-G)) / n) / G);
    const big t2 = c * boost::multiprecision::sqrt(n * boost::multiprecision::log(1 / big("0.05")) / 2);
    EXPECT_NEAR(up.value, d(t1 + t2), 1e-13);
    q.tilt = Tilt(1e-9);
    EXPECT_NEAR(*mcdiarmid_bounds(q, BoundKind::Upper).constant("c(gamma)"), 0.01, 1e-18);
    EXPECT_EQ(mcdiarmid_bounds(q, BoundKind::Upper).terms[0].value, 0.0);
    q.tilt = Tilt(-std::log(101.0));
    const auto bad = mcdiarmid_bounds(q, BoundKind::Upper);
    EXPECT_FALSE(bad.valid);
    EXPECT_NE(bad.violations.at(0).find("log(n+1)/M"), std::string::npos);
    q.tilt = Tilt(-6.0);
    EXPECT_TRUE(std::isinf(mcdiarmid_bounds(q, BoundKind::Upper).value));
    EXPECT_FALSE(std::isnan(mcdiarmid_bounds(q, BoundKind::Lower).value));
}

TEST(Supplementary, Examples) {
    auto q = base(-0.1, 100);
    q.M = 1.0;
    q.stability_beta = 0.0;
    const double A = std::pow(std::expm1(-0.1), 2);
    EXPECT_NEAR(supplementary_bounds(q, BoundKind::Stability).value, A * (1 + std::exp(0.2)) / 0.8, 1e-15);

    q.pac_kl = 0.0;
    q.pac_eta = 10.0;
    const auto pac = supplementary_bounds(q, BoundKind::PacBayes);
    EXPECT_TRUE(std::isfinite(pac.value));
    const double L = std::exp(0.1), Ar = -std::expm1(-0.1) / 0.1;
    EXPECT_NEAR(pac.value, std::exp(0.2) * A / 0.8 + L * 10 * Ar * Ar / 800 + L * std::log(20.0) / 10, 1e-14);

    auto r = base(1e-9, 100);
    r.M = 1.0;
    r.massart_B = 10.0;
    r.card_H = 10;
    r.lipschitz_loss = 1.0;
    const double want = 2 * std::sqrt(2 * std::log(10.0) / 100) + 3 * std::sqrt(std::log(20.0) / 200);
    EXPECT_NEAR(supplementary_bounds(r, BoundKind::Rademacher).value, want, 1e-12);

    auto g = base(0.3, 20);
    g.M = 1.0;
    g.alpha = 4.0;
    EXPECT_NEAR(supplementary_bounds(g, BoundKind::GibbsLinear).value,
                4.0 / 40 + std::pow(std::expm1(0.3), 2) / 2.4, 1e-15);
    g.alpha.reset();
    EXPECT_EQ(code_of([&] { supplementary_bounds(g, BoundKind::GibbsLinear); }), ErrorCode::MissingField);
    EXPECT_EQ(code_of([&] { supplementary_bounds(g, BoundKind::Abs); }), ErrorCode::InvalidInput);
}

TEST(TiltedGibbs, Examples) {
    auto q = base(0.5, 1);
    q.M = 1.0;
    const auto one = tilted_gibbs_bound(q, 2.0, BoundKind::Abs);
    EXPECT_EQ(one.terms[1].value, 0.0);
    EXPECT_NEAR(one.value, 2.0 * std::pow(std::expm1(0.5), 2) / (2 * 0.25), 1e-14);
    q.tilt = Tilt(1e-9);
    q.n = 10;
    const auto lim = tilted_gibbs_bound(q, 3.0, BoundKind::Abs);
    EXPECT_NEAR(lim.value, 3.0 / 20, 1e-16);
    q.tilt = Tilt(0.5);
    q.variance_loss = 0.1;
    EXPECT_NEAR(tilted_gibbs_bound(q, 3.0, BoundKind::Upper).value,
                3.0 * std::pow(std::expm1(0.5), 2) / (2 * 0.25 * 10) - 0.5 * std::exp(-0.5) / 2 * 0.9 * 0.1, 1e-14);
}

TEST(Reports, ValueIsSumOfTermsAndNeverNan) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> g(-3.0, 3.0), m(0.1, 4.0), u(0.0, 2.0);
    std::uniform_int_distribution<std::size_t> n(1, 5000);
    int evaluated = 0;
    for (int i = 0; i < 400; ++i) {
        BoundQuery q = base(g(rng), n(rng));
        q.M = m(rng);
        q.card_H = 1 + n(rng) % 50;
        q.kappa_u = m(rng);
        q.kappa_s = m(rng);
        q.kappa_t = m(rng);
        q.mutual_information = u(rng);
        q.stability_beta = u(rng);
        q.pac_eta = 1.0 + u(rng);
        q.pac_kl = u(rng);
        q.lipschitz_loss = u(rng);
        q.massart_B = u(rng);
        q.alpha = 1.0 + u(rng);
        std::vector<BoundReport> reports;
        for (auto k : {BoundKind::Upper, BoundKind::Lower, BoundKind::Abs, BoundKind::Excess})
            reports.push_back(uniform_bounded(q, k));
        for (auto k : {BoundKind::Upper, BoundKind::Lower}) reports.push_back(mcdiarmid_bounds(q, k));
        for (auto k : {BoundKind::Upper, BoundKind::Lower, BoundKind::Abs}) reports.push_back(info_bounded(q, k));
        for (auto k : {BoundKind::Rademacher, BoundKind::Stability, BoundKind::PacBayes, BoundKind::GibbsLinear})
            reports.push_back(supplementary_bounds(q, k));
        reports.push_back(tilted_gibbs_bound(q, 2.0, BoundKind::Abs));
        if (q.tilt.gamma() < 0.0) {
            for (auto k : {BoundKind::Upper, BoundKind::Lower, BoundKind::Abs, BoundKind::Excess})
                reports.push_back(uniform_unbounded(q, k));
            for (auto k : {BoundKind::Upper, BoundKind::Lower}) reports.push_back(info_unbounded(q, k));
            for (auto k : {BoundKind::Upper, BoundKind::Lower, BoundKind::Abs, BoundKind::Population})
                reports.push_back(shift_bounds(q, u(rng), k));
        }
        for (const auto& r : reports) {
            ++evaluated;
            ASSERT_FALSE(std::isnan(r.value)) << r.family << " " << to_string(r.kind);
            if (std::isfinite(r.value)) {
                EXPECT_NEAR(r.value, sum_terms(r), 1e-12 * std::max(1.0, std::abs(r.value)));
            }
            EXPECT_EQ(r.valid, r.violations.empty());
            if (r.kind == BoundKind::Abs || r.kind == BoundKind::Excess) EXPECT_GE(r.value, 0.0);
        }
    }
    EXPECT_GT(evaluated, 5000);
}

TEST(Reports, Dispatch) {
    BoundRequest req;
    req.family = "uniform-bounded";
    req.kind = parse_bound_kind("abs");
    req.query = base(-0.2, 30);
    req.query.M = 1.0;
    req.query.card_H = 2;
    EXPECT_EQ(evaluate_bound(req).value, uniform_bounded(req.query, BoundKind::Abs).value);
    req.family = "shift";
    req.kind = BoundKind::Population;
    req.query.kappa_u = 1.0;
    req.query.kappa_s = 1.0;
    EXPECT_EQ(code_of([&] { evaluate_bound(req); }), ErrorCode::MissingField);
    req.tv = 0.2;
    EXPECT_NEAR(evaluate_bound(req).value, 0.2 / 0.04 * 0.2 * std::exp(0.2), 1e-14);
    req.family = "nope";
    EXPECT_EQ(code_of([&] { evaluate_bound(req); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { parse_bound_kind("sideways"); }), ErrorCode::InvalidInput);
    EXPECT_EQ(bound_families().size(), 8u);
}
