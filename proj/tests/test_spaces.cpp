#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "tilted/info.hpp"
#include "tilted/spaces.hpp"

using namespace tilted;

TEST(Sampling, PointMasses) {
    const auto a = sample_dataset(DiscreteDistribution({1.0, 0.0}), 5, Seed{1, 2});
    EXPECT_EQ(a.samples, std::vector<std::size_t>(5, 0));
    const auto b = sample_dataset(DiscreteDistribution({0.0, 1.0}), 3, Seed{1, 2});
    EXPECT_EQ(b.samples, std::vector<std::size_t>(3, 1));
    const auto c = sample_dataset(DiscreteDistribution({0.5, 0.0, 0.5, 0.0}), 2000, Seed{3, 0});
    for (auto z : c.samples) EXPECT_TRUE(z == 0 || z == 2);
}

TEST(Sampling, Frequencies) {
    const auto s = sample_dataset(DiscreteDistribution({0.5, 0.5}), 100000, Seed{42, 7});
    std::size_t zeros = 0;
    for (auto z : s.samples) zeros += z == 0;
    EXPECT_NEAR(static_cast<double>(zeros) / 1e5, 0.5, 0.01);
}

TEST(Sampling, StreamsAreReproducibleAndDistinct) {
    const DiscreteDistribution mu({0.2, 0.3, 0.5});
    EXPECT_EQ(sample_dataset(mu, 50, Seed{9, 4}), sample_dataset(mu, 50, Seed{9, 4}));
    EXPECT_NE(sample_dataset(mu, 50, Seed{9, 4}), sample_dataset(mu, 50, Seed{9, 5}));
    EXPECT_NE(sample_dataset(mu, 50, Seed{9, 4}), sample_dataset(mu, 50, Seed{10, 4}));
    EXPECT_THROW(sample_dataset(mu, 0, Seed{}), Error);
}

TEST(Sampling, UniformDrawRange) {
    Rng r(Seed{0, 0});
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Contaminate, Examples) {
    const DiscreteDistribution mu({1.0, 0.0});
    const DiscreteDistribution out({0.0, 1.0});
    EXPECT_EQ(contaminate(mu, out, 0.0), mu);
    EXPECT_EQ(contaminate(mu, out, 1.0), out);
    const auto mix = contaminate(mu, out, 0.3);
    EXPECT_NEAR(mix[0], 0.7, 1e-15);
    EXPECT_NEAR(mix[1], 0.3, 1e-15);
    EXPECT_THROW(contaminate(mu, out, 1.5), Error);
    EXPECT_THROW(contaminate(mu, out, -0.1), Error);
    EXPECT_THROW(contaminate(mu, DiscreteDistribution::uniform(3), 0.5), Error);
}

TEST(Contaminate, TotalVariationScales) {
    const DiscreteDistribution mu({0.4, 0.35, 0.25, 0.0});
    const DiscreteDistribution nu({0.1, 0.0, 0.2, 0.7});
    const double full = tv(mu, nu);
    for (double e = 0.0; e <= 1.0; e += 0.125) EXPECT_NEAR(tv(mu, contaminate(mu, nu, e)), e * full, 1e-14);
}

TEST(Instances, BuiltinsAreConsistent) {
    ASSERT_EQ(builtin_instances().size(), 4u);
    for (const auto& inst : builtin_instances()) {
        EXPECT_NO_THROW(inst.validate());
        EXPECT_EQ(inst.mu.size(), inst.loss.symbols());
    }
    const auto b = find_builtin("bernoulli-2h");
    ASSERT_TRUE(b);
    EXPECT_EQ(b->loss.upper_bound(), 1.0);
    EXPECT_NEAR(b->mu[0], 0.7, 1e-15);
    const auto o = find_builtin("outlier-mix");
    ASSERT_TRUE(o);
    EXPECT_FALSE(o->loss.upper_bound());
    EXPECT_TRUE(o->mu_tilde);
    EXPECT_FALSE(find_builtin("nope"));
}

TEST(Instances, ThresholdLosses) {
    const auto t = *find_builtin("threshold-k");
    const std::vector<std::vector<double>> want = {{1, 0, 1, 0}, {0, 0, 1, 0}, {0, 1, 1, 0}, {0, 1, 0, 0}};
    EXPECT_EQ(t.loss.to_rows(), want);
}

TEST(Instances, FormatParseRoundTrip) {
    for (const auto& inst : builtin_instances()) {
        const auto back = parse_instance(format_instance(inst));
        EXPECT_EQ(back.name, inst.name);
        EXPECT_EQ(back.loss, inst.loss);
        EXPECT_EQ(back.mu, inst.mu);
        EXPECT_EQ(back.mu_tilde, inst.mu_tilde);
    }
}

TEST(Instances, ParseErrors) {
    EXPECT_THROW(parse_instance("not json"), Error);
    EXPECT_THROW(parse_instance(R"({"loss": [[0, 1]]})"), Error);
    EXPECT_THROW(parse_instance(R"({"loss": [[0, 1]], "mu": [0.5, 0.5], "bogus": 1})"), Error);
    EXPECT_THROW(parse_instance(R"({"loss": [[0, 1]], "mu": [0.5, 0.25, 0.25]})"), Error);
    EXPECT_THROW(parse_instance(R"({"loss": [[0, 3]], "mu": [0.5, 0.5], "M": 1})"), Error);
    const auto ok = parse_instance(R"({"name": "c", "loss": [[2, 2]], "mu": [0.5, 0.5], "M": 2})");
    EXPECT_EQ(ok.name, "c");
    EXPECT_EQ(ok.loss.upper_bound(), 2.0);
}

TEST(Instances, ResolveFromFile) {
    const std::string path = ::testing::TempDir() + "tilted_instance.json";
    {
        std::ofstream f(path);
        f << R"({"name": "file-inst", "loss": [[0, 1], [1, 1]], "mu": [0.5, 0.5], "M": 1})";
    }
    EXPECT_EQ(resolve_instance(path).name, "file-inst");
    EXPECT_EQ(resolve_instance("threshold-k").name, "threshold-k");
    try {
        resolve_instance("/nonexistent/file.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
    std::remove(path.c_str());
}
