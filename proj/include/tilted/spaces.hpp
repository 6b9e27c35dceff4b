#pragma once

// Finite problem instances, seeded sampling and epsilon-mixture contamination.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tilted/core.hpp"

namespace tilted {

struct Seed {
    std::uint64_t base = 0;
    std::uint64_t stream = 0;
};

// Deterministic stream keyed by (base, stream). Uniform doubles are built
// from the top 53 bits of the engine output, so draws are identical across
// standard library implementations.
class Rng {
public:
    explicit Rng(Seed seed);

    std::uint64_t next() { return engine_(); }
    double uniform();  // [0, 1)

private:
    std::mt19937_64 engine_;
};

struct Instance {
    std::string name;
    LossTable loss;
    DiscreteDistribution mu;
    std::optional<DiscreteDistribution> mu_tilde;

    // Checks that every distribution matches the loss table's alphabet.
    void validate() const;
};

Dataset sample_dataset(const DiscreteDistribution& mu, std::size_t n, Seed seed);

// (1 - epsilon) mu + epsilon outlier.
DiscreteDistribution contaminate(const DiscreteDistribution& mu, const DiscreteDistribution& outlier, double epsilon);

const std::vector<Instance>& builtin_instances();
std::optional<Instance> find_builtin(std::string_view name);

// JSON instance files: {"name", "loss": [[...], ...], "mu", "mu_tilde"?, "M"?}.
Instance parse_instance(std::string_view text);
std::string format_instance(const Instance& instance);
Instance load_instance_file(const std::string& path);

// Builtin name first, otherwise a path to an instance file.
Instance resolve_instance(const std::string& name_or_path);

}  // namespace tilted
