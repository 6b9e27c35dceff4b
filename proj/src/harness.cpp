#include "tilted/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "tilted/info.hpp"
#include "tilted/gibbs.hpp"
#include "tilted/reduce.hpp"

namespace tilted {

namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& what) {
    fail(ErrorCode::Config, what);
}

double parse_double(std::string_view key, std::string_view text) {
    std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        config_error("config key '" + std::string(key) + "': '" + s + "' is not a number");
    return v;
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
    std::uint64_t v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last)
        config_error("config key '" + std::string(key) + "': '" + std::string(text) +
                     "' is not a non-negative integer");
    return v;
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        out.push_back(text.substr(start, end - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

TiltSchedule parse_schedule(std::string_view text) {
    if (text == "constant") return TiltSchedule::Constant;
    if (text == "power") return TiltSchedule::Power;
    config_error("tilt_schedule must be 'constant' or 'power', got '" + std::string(text) + "'");
}

const char* schedule_name(TiltSchedule s) {
    return s == TiltSchedule::Constant ? "constant" : "power";
}

double json_number(const ojson& v, const std::string& key) {
    if (!v.is_number()) config_error("config key '" + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t json_count(const ojson& v, const std::string& key) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        config_error("config key '" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

void apply_json(ExperimentConfig& c, const std::string& key, const ojson& v) {
    if (key == "instance" || key == "family" || key == "tilt_schedule") {
        if (!v.is_string()) config_error("config key '" + key + "' must be a string");
        const auto s = v.get<std::string>();
        if (key == "instance") c.instance = s;
        else if (key == "family") c.family = s;
        else c.tilt_schedule = parse_schedule(s);
    } else if (key == "n_grid") {
        if (!v.is_array()) config_error("config key 'n_grid' must be a list");
        c.n_grid.clear();
        for (const auto& e : v) c.n_grid.push_back(static_cast<std::size_t>(json_count(e, key)));
    } else if (key == "epsilon_grid") {
        if (!v.is_array()) config_error("config key 'epsilon_grid' must be a list");
        c.epsilon_grid.clear();
        for (const auto& e : v) c.epsilon_grid.push_back(json_number(e, key));
    } else if (key == "trials") {
        c.trials = static_cast<std::size_t>(json_count(v, key));
    } else if (key == "seed") {
        c.seed = json_count(v, key);
    } else if (key == "tilt_sign") {
        c.tilt_sign = static_cast<int>(json_number(v, key));
        if (c.tilt_sign != json_number(v, key)) config_error("tilt_sign must be -1 or +1");
    } else if (key == "zeta") {
        if (v.is_null() || (v.is_string() && v.get<std::string>() == "auto")) c.zeta.reset();
        else c.zeta = json_number(v, key);
    } else if (key == "delta") {
        c.delta = json_number(v, key);
    } else if (key == "gamma") {
        c.gamma = json_number(v, key);
    } else if (key == "tilt_c") {
        c.tilt_c = json_number(v, key);
    } else if (key == "beta") {
        c.beta = json_number(v, key);
    } else if (key == "alpha") {
        c.alpha = json_number(v, key);
    } else if (key == "shift_epsilon") {
        c.shift_epsilon = json_number(v, key);
    } else {
        config_error("unknown config key '" + key + "'");
    }
}

bool has_family(const std::string& f) {
    return f == "uniform-bounded" || f == "uniform-unbounded" || f == "shift";
}

DiscreteDistribution sampling_distribution(const ExperimentConfig& c, const Instance& inst) {
    if (c.family == "shift") return contaminate(inst.mu, *inst.mu_tilde, c.shift_epsilon);
    return inst.mu;
}

void check_instance(const ExperimentConfig& c, const Instance& inst) {
    if (!has_family(c.family))
        config_error("experiment family must be uniform-bounded, uniform-unbounded or shift, got '" + c.family + "'");
    if (c.family == "uniform-bounded" && !inst.loss.upper_bound())
        config_error("family uniform-bounded assumes a loss bound M, but instance '" + inst.name + "' has none");
    if (c.family == "shift" && !inst.mu_tilde)
        config_error("family shift assumes a shifted distribution mu_tilde, but instance '" + inst.name +
                     "' has none");
}

Instance config_instance(const ExperimentConfig& c) {
    c.validate();
    try {
        return resolve_instance(c.instance);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Io || e.code() == ErrorCode::InvalidInput) config_error(e.what());
        throw;
    }
}

std::vector<double> population_risks(const Instance& inst) {
    std::vector<double> r(inst.loss.hypotheses());
    for (std::size_t h = 0; h < r.size(); ++h) r[h] = population_risk(h, inst.loss, inst.mu);
    return r;
}

double sup_gen(const Instance& inst, const std::vector<double>& risk, const Dataset& s, const Tilt& tilt) {
    double worst = 0.0;
    for (std::size_t h = 0; h < risk.size(); ++h)
        worst = std::max(worst, std::abs(risk[h] - tilted_empirical_risk(h, s, inst.loss, tilt)));
    return worst;
}

std::string line(std::initializer_list<std::string> cells) {
    std::string out;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out += ',';
        out += c;
        first = false;
    }
    out += '\n';
    return out;
}

std::string flag(bool b) {
    return b ? "1" : "0";
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void ExperimentConfig::validate() const {
    if (n_grid.empty()) config_error("n_grid must not be empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) config_error("n_grid entries must be >= 1");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) config_error("n_grid must be strictly increasing");
    }
    if (trials < 1) config_error("trials must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) config_error("delta must lie in (0, 1)");
    if (!std::isfinite(gamma)) config_error("gamma must be finite");
    if (!(std::isfinite(tilt_c) && tilt_c >= 0.0)) config_error("tilt_c must be finite and >= 0");
    if (!(std::isfinite(beta) && beta >= 0.0)) config_error("beta must be finite and >= 0");
    if (tilt_sign != 1 && tilt_sign != -1) config_error("tilt_sign must be -1 or +1");
    for (double e : epsilon_grid)
        if (!(e >= 0.0 && e <= 1.0)) config_error("epsilon_grid entries must lie in [0, 1]");
    if (!(std::isfinite(alpha) && alpha > 0.0)) config_error("alpha must be > 0");
    if (!(shift_epsilon >= 0.0 && shift_epsilon <= 1.0)) config_error("shift_epsilon must lie in [0, 1]");
    if (zeta && !(*zeta > 0.0 && *zeta < 1.0)) config_error("zeta must lie in (0, 1)");
}

Tilt ExperimentConfig::tilt_at(std::size_t n) const {
    if (tilt_schedule == TiltSchedule::Constant) return Tilt(gamma);
    return Tilt(static_cast<double>(tilt_sign) * tilt_c * std::pow(static_cast<double>(n), -beta));
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {"instance", "family",   "n_grid",       "trials", "delta",
                                                  "tilt_schedule", "gamma", "tilt_c",   "beta",   "tilt_sign",
                                                  "epsilon_grid",  "alpha", "seed",     "shift_epsilon", "zeta"};
    return keys;
}

ExperimentConfig parse_config(std::string_view json_text) {
    ojson j;
    try {
        j = ojson::parse(json_text);
    } catch (const ojson::exception& e) {
        config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) config_error("config must be a JSON object");
    ExperimentConfig c;
    for (const auto& [key, value] : j.items()) apply_json(c, key, value);
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
    ojson j;
    j["instance"] = c.instance;
    j["family"] = c.family;
    j["n_grid"] = c.n_grid;
    j["trials"] = c.trials;
    j["delta"] = c.delta;
    j["tilt_schedule"] = schedule_name(c.tilt_schedule);
    j["gamma"] = c.gamma;
    j["tilt_c"] = c.tilt_c;
    j["beta"] = c.beta;
    j["tilt_sign"] = c.tilt_sign;
    j["epsilon_grid"] = c.epsilon_grid;
    j["alpha"] = c.alpha;
    j["seed"] = c.seed;
    j["shift_epsilon"] = c.shift_epsilon;
    j["zeta"] = c.zeta ? ojson(*c.zeta) : ojson(nullptr);
    return j.dump(2) + "\n";
}

void set_config_key(ExperimentConfig& c, std::string_view key, std::string_view value) {
    const std::string k(key);
    if (k == "instance") {
        c.instance = std::string(value);
    } else if (k == "family") {
        c.family = std::string(value);
    } else if (k == "tilt_schedule") {
        c.tilt_schedule = parse_schedule(value);
    } else if (k == "n_grid") {
        c.n_grid.clear();
        for (auto part : split_list(value)) c.n_grid.push_back(static_cast<std::size_t>(parse_u64(key, part)));
    } else if (k == "epsilon_grid") {
        c.epsilon_grid.clear();
        for (auto part : split_list(value)) c.epsilon_grid.push_back(parse_double(key, part));
    } else if (k == "trials") {
        c.trials = static_cast<std::size_t>(parse_u64(key, value));
    } else if (k == "seed") {
        c.seed = parse_u64(key, value);
    } else if (k == "tilt_sign") {
        const double s = parse_double(key, value);
        if (s != 1.0 && s != -1.0) config_error("tilt_sign must be -1 or +1");
        c.tilt_sign = static_cast<int>(s);
    } else if (k == "zeta") {
        if (value == "auto") c.zeta.reset();
        else c.zeta = parse_double(key, value);
    } else if (k == "delta") {
        c.delta = parse_double(key, value);
    } else if (k == "gamma") {
        c.gamma = parse_double(key, value);
    } else if (k == "tilt_c") {
        c.tilt_c = parse_double(key, value);
    } else if (k == "beta") {
        c.beta = parse_double(key, value);
    } else if (k == "alpha") {
        c.alpha = parse_double(key, value);
    } else if (k == "shift_epsilon") {
        c.shift_epsilon = parse_double(key, value);
    } else {
        config_error("unknown config key '" + k + "'");
    }
}

SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) config_error("slope fit needs matching x and y");
    if (x.size() < 2) config_error("slope fit needs at least 2 grid points");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (!(*lo > 0.0) || !(*hi > *lo)) config_error("slope fit needs distinct positive grid points");
    SlopeFit fit;
    for (double v : y) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            fit.slope = fit.intercept = std::numeric_limits<double>::quiet_NaN();
            fit.status = v == 0.0 ? "undefined: a mean is zero, log-log slope does not exist"
                                  : "undefined: a value is negative or not finite";
            return fit;
        }
    }
    const double k = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / k, my = sy / k;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

double realized_sup_gen(const Instance& instance, const Dataset& dataset, const Tilt& tilt) {
    return sup_gen(instance, population_risks(instance), dataset, tilt);
}

BoundReport coverage_bound(const ExperimentConfig& c, const Instance& inst, std::size_t n) {
    check_instance(c, inst);
    BoundQuery q;
    q.delta = c.delta;
    q.n = n;
    q.tilt = c.tilt_at(n);
    q.card_H = inst.loss.hypotheses();
    q.zeta = c.zeta;
    if (c.family == "uniform-bounded") {
        q.M = inst.loss.upper_bound();
        return uniform_bounded(q, BoundKind::Abs);
    }
    if (c.family == "uniform-unbounded") {
        q.set_moments(compute_moment_bounds(inst.loss, inst.mu));
        return uniform_unbounded(q, BoundKind::Abs);
    }
    const auto shifted = sampling_distribution(c, inst);
    q.set_moments(compute_moment_bounds(inst.loss, inst.mu, shifted));
    return shift_bounds(q, tv(inst.mu, shifted), BoundKind::Abs);
}

CoverageResult run_coverage(const ExperimentConfig& c, unsigned threads) {
    const Instance inst = config_instance(c);
    check_instance(c, inst);
    const auto risk = population_risks(inst);
    const auto dist = sampling_distribution(c, inst);
    const std::size_t T = c.trials;

    CoverageResult out;
    std::vector<BoundReport> bounds;
    for (std::size_t n : c.n_grid) bounds.push_back(coverage_bound(c, inst, n));

    out.records.resize(c.n_grid.size() * T);
    parallel_for(out.records.size(), threads, [&](std::size_t k) {
        const std::size_t i = k / T;
        const std::size_t n = c.n_grid[i];
        const Tilt tilt = c.tilt_at(n);
        TrialRecord& r = out.records[k];
        r.n = n;
        r.trial = k % T;
        r.gamma = tilt.gamma();
        r.seed_stream = k;
        r.realized_sup_gen = sup_gen(inst, risk, sample_dataset(dist, n, Seed{c.seed, r.seed_stream}), tilt);
        r.bound = bounds[i].value;
        r.valid = bounds[i].valid;
        r.violated = r.valid && r.realized_sup_gen > r.bound;
    });

    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        CoverageSummary s;
        s.n = c.n_grid[i];
        s.gamma = c.tilt_at(s.n).gamma();
        s.bound = bounds[i].value;
        s.valid = bounds[i].valid;
        for (std::size_t t = 0; t < T; ++t) s.violations += out.records[i * T + t].violated ? 1 : 0;
        s.violation_rate = static_cast<double>(s.violations) / static_cast<double>(T);
        out.summary.push_back(s);
    }
    return out;
}

RateResult run_rate(const ExperimentConfig& c, unsigned threads) {
    std::vector<double> grid(c.n_grid.begin(), c.n_grid.end());
    if (grid.size() < 4) config_error("rate experiment needs at least 4 n_grid points");
    if (grid.back() / grid.front() < 100.0) config_error("rate experiment needs n_grid spanning at least 2 decades");
    const auto coverage = run_coverage(c, threads);
    const std::size_t T = c.trials;

    RateResult out;
    std::vector<double> means, bound_values;
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        double sum = 0.0;
        for (std::size_t t = 0; t < T; ++t) sum += coverage.records[i * T + t].realized_sup_gen;
        const double mean = sum / static_cast<double>(T);
        double ss = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const double d = coverage.records[i * T + t].realized_sup_gen - mean;
            ss += d * d;
        }
        RateRow row;
        row.n = c.n_grid[i];
        row.mean_realized = mean;
        row.std_err = T > 1 ? std::sqrt(ss / static_cast<double>(T - 1) / static_cast<double>(T)) : 0.0;
        row.bound_value = coverage.summary[i].bound;
        row.gamma = coverage.summary[i].gamma;
        out.rows.push_back(row);
        means.push_back(mean);
        bound_values.push_back(row.bound_value);
    }
    out.realized = fit_loglog_slope(grid, means);
    out.bound = fit_loglog_slope(grid, bound_values);
    return out;
}

RobustnessResult run_robustness(const ExperimentConfig& c, unsigned threads) {
    const Instance inst = config_instance(c);
    if (!inst.mu_tilde)
        config_error("robustness needs a shifted distribution mu_tilde, but instance '" + inst.name + "' has none");
    RobustnessResult out;
    out.n = c.n_grid.back();
    const Tilt tilt = c.tilt_at(out.n);
    out.gamma = tilt.gamma();
    if (!(tilt.gamma() < 0.0))
        fail(ErrorCode::TiltSign, "robustness bounds hold only for gamma < 0 (got gamma = " +
                                      format_number(tilt.gamma()) + ")");
    const auto risk = population_risks(inst);
    const std::size_t T = c.trials;
    const std::size_t E = c.epsilon_grid.size();

    std::vector<DiscreteDistribution> mixtures;
    for (double eps : c.epsilon_grid) {
        const auto mix = contaminate(inst.mu, *inst.mu_tilde, eps);
        RobustnessRow row;
        row.epsilon = eps;
        row.tv = tv(inst.mu, mix);
        BoundQuery q;
        q.delta = c.delta;
        q.n = out.n;
        q.tilt = tilt;
        q.card_H = inst.loss.hypotheses();
        q.zeta = c.zeta;
        q.set_moments(compute_moment_bounds(inst.loss, inst.mu, mix));
        row.bound = shift_bounds(q, row.tv, BoundKind::Abs).value;
        row.population_term = shift_bounds(q, row.tv, BoundKind::Population).value;
        for (std::size_t h = 0; h < inst.loss.hypotheses(); ++h) {
            const double gap = std::abs(tilted_population_risk(h, inst.loss, inst.mu, tilt) -
                                        tilted_population_risk(h, inst.loss, mix, tilt));
            row.population_gap = std::max(row.population_gap, gap);
        }
        if (row.population_gap > row.population_term) out.population_check_passed = false;
        out.rows.push_back(row);
        mixtures.push_back(mix);
    }

    std::vector<double> realized(E * T);
    parallel_for(realized.size(), threads, [&](std::size_t k) {
        const auto s = sample_dataset(mixtures[k / T], out.n, Seed{c.seed, k});
        realized[k] = sup_gen(inst, risk, s, tilt);
    });
    for (std::size_t e = 0; e < E; ++e) {
        double sum = 0.0;
        for (std::size_t t = 0; t < T; ++t) sum += realized[e * T + t];
        out.rows[e].realized_sup_gen = sum / static_cast<double>(T);
    }
    return out;
}

GibbsResult run_gibbs(const ExperimentConfig& c, unsigned threads) {
    const Instance inst = config_instance(c);
    if (!inst.loss.upper_bound())
        config_error("gibbs experiment assumes a loss bound M, but instance '" + inst.name + "' has none");
    const auto prior = DiscreteDistribution::uniform(inst.loss.hypotheses());
    GibbsResult out;
    for (std::size_t n : c.n_grid) {
        const Tilt tilt(1.0 / static_cast<double>(n));
        const auto kernel = LearningKernel::tilted_gibbs(c.alpha, tilt, prior);
        GibbsRow row;
        row.n = n;
        row.gamma = tilt.gamma();
        row.alpha = c.alpha;
        row.expected_gen_exact = expected_tilted_gen_exact(inst, kernel, tilt, n, kDefaultEnumerationCap, threads);
        BoundQuery q;
        q.delta = c.delta;
        q.n = n;
        q.tilt = tilt;
        q.M = inst.loss.upper_bound();
        row.bound = tilted_gibbs_bound(q, c.alpha, BoundKind::Abs).value;
        row.iskl_gap =
            check_iskl_identity(inst, kernel, c.alpha, tilt, n, kDefaultEnumerationCap, threads).gap;
        out.rows.push_back(row);
    }
    return out;
}

std::string CoverageResult::csv() const {
    std::string out = "n,trial,gamma,realized_sup_gen,bound,valid,violated,seed_stream\n";
    for (const auto& r : records)
        out += line({std::to_string(r.n), std::to_string(r.trial), format_number(r.gamma),
                     format_number(r.realized_sup_gen), format_number(r.bound), flag(r.valid), flag(r.violated),
                     std::to_string(r.seed_stream)});
    return out;
}

std::string RateResult::csv() const {
    std::string out = "n,mean_realized,std_err,bound_value,gamma\n";
    for (const auto& r : rows)
        out += line({std::to_string(r.n), format_number(r.mean_realized), format_number(r.std_err),
                     format_number(r.bound_value), format_number(r.gamma)});
    return out;
}

std::string RobustnessResult::csv() const {
    std::string out = "epsilon,tv,realized_sup_gen,bound,population_term\n";
    for (const auto& r : rows)
        out += line({format_number(r.epsilon), format_number(r.tv), format_number(r.realized_sup_gen),
                     format_number(r.bound), format_number(r.population_term)});
    return out;
}

std::string GibbsResult::csv() const {
    std::string out = "n,gamma,alpha,expected_gen_exact,bound,iskl_gap\n";
    for (const auto& r : rows)
        out += line({std::to_string(r.n), format_number(r.gamma), format_number(r.alpha),
                     format_number(r.expected_gen_exact), format_number(r.bound), format_number(r.iskl_gap)});
    return out;
}

}  // namespace tilted
