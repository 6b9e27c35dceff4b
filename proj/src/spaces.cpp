#include "tilted/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tilted {

Rng::Rng(Seed seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed.base), static_cast<std::uint32_t>(seed.base >> 32),
                      static_cast<std::uint32_t>(seed.stream), static_cast<std::uint32_t>(seed.stream >> 32)};
    engine_.seed(seq);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

void Instance::validate() const {
    require(mu.size() == loss.symbols(), "instance '" + name + "': mu size does not match the loss table");
    if (mu_tilde)
        require(mu_tilde->size() == loss.symbols(), "instance '" + name + "': mu_tilde size does not match the loss table");
}

Dataset sample_dataset(const DiscreteDistribution& mu, std::size_t n, Seed seed) {
    require(n >= 1, "sample_dataset needs n >= 1");
    std::vector<double> cdf(mu.size());
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t z = 0; z < mu.size(); ++z) {
        acc += mu[z];
        cdf[z] = acc;
        if (mu[z] > 0.0) last_positive = z;
    }
    Rng rng(seed);
    Dataset out;
    out.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        auto z = static_cast<std::size_t>(it - cdf.begin());
        out.samples.push_back(std::min(z, last_positive));
    }
    return out;
}

DiscreteDistribution contaminate(const DiscreteDistribution& mu, const DiscreteDistribution& outlier, double epsilon) {
    require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0, "contamination epsilon must lie in [0, 1]");
    require(mu.size() == outlier.size(), "contamination needs distributions on the same alphabet");
    if (epsilon == 0.0) return mu;
    if (epsilon == 1.0) return outlier;
    std::vector<double> w(mu.size());
    for (std::size_t z = 0; z < w.size(); ++z) w[z] = (1.0 - epsilon) * mu[z] + epsilon * outlier[z];
    return DiscreteDistribution(std::move(w));
}

namespace {

std::vector<Instance> make_builtins() {
    std::vector<Instance> out;

    // Two constant classifiers on a Bernoulli label with 0/1 loss.
    out.push_back(Instance{"bernoulli-2h", LossTable({{0.0, 1.0}, {1.0, 0.0}}, 1.0),
                           DiscreteDistribution({0.7, 0.3}), std::nullopt});

    // Threshold classifiers h_t(x) = [x >= t], t = 0..3, on x in {0,1,2,3}
    // with labels y = (0, 1, 0, 1).
    {
        const int labels[4] = {0, 1, 0, 1};
        std::vector<std::vector<double>> rows;
        for (int t = 0; t < 4; ++t) {
            std::vector<double> row;
            for (int x = 0; x < 4; ++x) row.push_back((x >= t ? 1 : 0) == labels[x] ? 0.0 : 1.0);
            rows.push_back(row);
        }
        out.push_back(Instance{"threshold-k", LossTable(rows, 1.0), DiscreteDistribution({0.3, 0.2, 0.2, 0.3}),
                               std::nullopt});
    }

    // Constant predictors theta against targets z with min((theta - z)^2, M).
    {
        const double M = 2.0;
        const double thetas[4] = {0.0, 0.5, 1.0, 1.5};
        const double targets[3] = {0.0, 1.0, 2.0};
        std::vector<std::vector<double>> rows;
        for (double th : thetas) {
            std::vector<double> row;
            for (double z : targets) row.push_back(std::min((th - z) * (th - z), M));
            rows.push_back(row);
        }
        out.push_back(Instance{"squared-small", LossTable(rows, M), DiscreteDistribution({0.3, 0.4, 0.3}),
                               std::nullopt});
    }

    // Three clean symbols plus an outlier symbol that mu never produces;
    // mu_tilde is the outlier component used for contamination.
    out.push_back(Instance{"outlier-mix",
                           LossTable({{0.2, 0.9, 0.5, 4.0}, {0.7, 0.1, 0.6, 6.0}, {0.4, 0.5, 0.0, 3.0}}),
                           DiscreteDistribution({0.4, 0.35, 0.25, 0.0}),
                           DiscreteDistribution({0.0, 0.0, 0.0, 1.0})});

    for (const auto& inst : out) inst.validate();
    return out;
}

std::vector<double> read_vector(const nlohmann::json& j, const char* key) {
    if (!j.is_array()) fail(ErrorCode::InvalidInput, std::string("instance key '") + key + "' must be an array");
    std::vector<double> v;
    for (const auto& x : j) {
        if (!x.is_number()) fail(ErrorCode::InvalidInput, std::string("instance key '") + key + "' must hold numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

}  // namespace

const std::vector<Instance>& builtin_instances() {
    static const std::vector<Instance> catalogue = make_builtins();
    return catalogue;
}

std::optional<Instance> find_builtin(std::string_view name) {
    for (const auto& inst : builtin_instances())
        if (inst.name == name) return inst;
    return std::nullopt;
}

Instance parse_instance(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::InvalidInput, std::string("instance file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(ErrorCode::InvalidInput, "instance file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "name" && key != "loss" && key != "mu" && key != "mu_tilde" && key != "M")
            fail(ErrorCode::InvalidInput, "unknown instance key '" + key + "'");
    }
    if (!j.contains("loss") || !j.contains("mu")) fail(ErrorCode::InvalidInput, "instance needs 'loss' and 'mu'");

    std::vector<std::vector<double>> rows;
    if (!j["loss"].is_array()) fail(ErrorCode::InvalidInput, "instance key 'loss' must be an array of rows");
    for (const auto& r : j["loss"]) rows.push_back(read_vector(r, "loss"));

    std::optional<double> M;
    if (j.contains("M")) {
        if (!j["M"].is_number()) fail(ErrorCode::InvalidInput, "instance key 'M' must be a number");
        M = j["M"].get<double>();
    }
    Instance inst{j.value("name", std::string("unnamed")), LossTable(std::move(rows), M),
                  DiscreteDistribution(read_vector(j["mu"], "mu")), std::nullopt};
    if (j.contains("mu_tilde")) inst.mu_tilde = DiscreteDistribution(read_vector(j["mu_tilde"], "mu_tilde"));
    inst.validate();
    return inst;
}

std::string format_instance(const Instance& instance) {
    nlohmann::ordered_json j;
    j["name"] = instance.name;
    j["loss"] = instance.loss.to_rows();
    j["mu"] = std::vector<double>(instance.mu.weights().begin(), instance.mu.weights().end());
    if (instance.mu_tilde)
        j["mu_tilde"] = std::vector<double>(instance.mu_tilde->weights().begin(), instance.mu_tilde->weights().end());
    if (instance.loss.upper_bound()) j["M"] = *instance.loss.upper_bound();
    return j.dump(2) + "\n";
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open instance file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

Instance resolve_instance(const std::string& name_or_path) {
    if (auto b = find_builtin(name_or_path)) return *b;
    return load_instance_file(name_or_path);
}

}  // namespace tilted
