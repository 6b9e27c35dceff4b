// Command-line front end. Everything goes through the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tilted/tilted.h"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct Failure {
    tilted_status status;
    std::string message;
};

int exit_code(tilted_status s) {
    switch (s) {
        case TILTED_OK: return 0;
        case TILTED_TILT_SIGN:
        case TILTED_ABSOLUTE_CONTINUITY:
        case TILTED_ENUMERATION_TOO_LARGE:
        case TILTED_INTERNAL: return kExitDomain;
        default: return kExitUsage;
    }
}

void check(tilted_status s) {
    if (s != TILTED_OK) throw Failure{s, tilted_last_error()};
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { tilted_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Failure{TILTED_IO, "cannot open output file '" + out_path + "'"};
    out << text;
}

struct InstanceHandle {
    tilted_instance* p = nullptr;
    ~InstanceHandle() { tilted_instance_free(p); }
};

// Options shared by the experiment subcommands.
struct ExperimentArgs {
    std::string config;
    std::vector<std::string> overrides;
    std::string out;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool dump = false;
    CLI::Option* seed_opt = nullptr;
};

void add_experiment_options(CLI::App* sub, ExperimentArgs& a) {
    sub->add_option("--config", a.config, "JSON experiment config");
    sub->add_option("overrides", a.overrides, "key=value overrides applied after the config file");
    a.seed_opt = sub->add_option("--seed", a.seed, "base seed");
    sub->add_option("--threads", a.threads, "worker threads (does not change output)")->check(CLI::PositiveNumber);
    sub->add_option("--out", a.out, "output path (default stdout)");
    sub->add_flag("--dump-config", a.dump, "print the resolved config and exit");
}

int run_experiment(const ExperimentArgs& a, tilted_experiment kind) {
    tilted_config* raw = nullptr;
    if (a.config.empty()) {
        raw = tilted_config_new();
        if (!raw) throw Failure{TILTED_INTERNAL, "out of memory"};
    } else {
        check(tilted_config_load(a.config.c_str(), &raw));
    }
    std::unique_ptr<tilted_config, decltype(&tilted_config_free)> cfg(raw, &tilted_config_free);
    for (const auto& kv : a.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Failure{TILTED_CONFIG, "override '" + kv + "' is not of the form key=value"};
        check(tilted_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    if (a.seed_opt->count() > 0) check(tilted_config_set(cfg.get(), "seed", std::to_string(a.seed).c_str()));
    if (a.dump) {
        OwnedString json;
        check(tilted_config_dump(cfg.get(), &json.p));
        emit(json.str(), a.out);
        return 0;
    }
    OwnedString csv, summary;
    check(tilted_run(cfg.get(), kind, a.threads, &csv.p, &summary.p));
    emit(csv.str(), a.out);
    std::cerr << summary.str();
    return 0;
}

void print_report(const tilted_bound_report* r, const std::string& out) {
    std::string text;
    auto row = [&](const std::string& label, const std::string& value) {
        std::string l = "  " + label;
        if (l.size() < 78) l.resize(78, ' ');
        text += l + " " + value + "\n";
    };
    text += "family     " + std::string(tilted_bound_report_family(r)) + "\n";
    text += "kind       " + std::string(tilted_bound_report_kind(r)) + "\n";
    text += "value      " + num(tilted_bound_report_value(r)) + "\n";
    text += "valid      " + std::string(tilted_bound_report_valid(r) ? "1" : "0") + "\n";
    text += "terms\n";
    for (size_t i = 0; i < tilted_bound_report_term_count(r); ++i)
        row(tilted_bound_report_term_label(r, i), num(tilted_bound_report_term_value(r, i)));
    if (tilted_bound_report_constant_count(r) > 0) {
        text += "constants\n";
        for (size_t i = 0; i < tilted_bound_report_constant_count(r); ++i)
            row(tilted_bound_report_constant_label(r, i), num(tilted_bound_report_constant_value(r, i)));
    }
    text += "violations\n";
    if (tilted_bound_report_violation_count(r) == 0) text += "  none\n";
    for (size_t i = 0; i < tilted_bound_report_violation_count(r); ++i)
        text += "  " + std::string(tilted_bound_report_violation(r, i)) + "\n";
    emit(text, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tilted empirical risk: evaluator, bounds and experiments"};
    app.require_subcommand(1);

    // ter
    auto* ter = app.add_subcommand("ter", "tilted empirical risk of a loss vector");
    std::vector<double> losses;
    double ter_gamma = 0.0;
    ter->add_option("--losses", losses, "comma-separated losses")->delimiter(',')->required();
    ter->add_option("--gamma", ter_gamma, "tilt")->required();

    // bound
    auto* bound = app.add_subcommand("bound", "evaluate a closed-form bound");
    std::string family, kind = "abs", bound_out;
    bound->add_option("--family", family, "bound family")->required();
    bound->add_option("--kind", kind, "upper, lower, abs, excess, population, rademacher, stability, pac-bayes, gibbs-linear");
    bound->add_option("--out", bound_out, "output path (default stdout)");
    const std::vector<std::pair<std::string, std::string>> bound_flags = {
        {"--gamma", "gamma"},          {"--n", "n"},
        {"--delta", "delta"},          {"--M", "M"},
        {"--cardH", "card_H"},         {"--kappa-u", "kappa_u"},
        {"--kappa-s", "kappa_s"},      {"--kappa-t", "kappa_t"},
        {"--zeta", "zeta"},            {"--mi", "mutual_information"},
        {"--beta", "stability_beta"},  {"--pac-eta", "pac_eta"},
        {"--pac-kl", "pac_kl"},        {"--lipschitz", "lipschitz_loss"},
        {"--massart-B", "massart_B"},  {"--variance-exp", "variance_exp"},
        {"--variance-loss", "variance_loss"}, {"--alpha", "alpha"},
        {"--tv", "tv"}};
    std::map<std::string, double> bound_values;
    std::map<std::string, CLI::Option*> bound_opts;
    for (const auto& [flag, key] : bound_flags) bound_opts[key] = bound->add_option(flag, bound_values[key], key);
    std::vector<double> individual_mi;
    auto* individual_opt =
        bound->add_option("--individual-mi", individual_mi, "comma-separated I(W;Z_i)")->delimiter(',');

    // info
    auto* info = app.add_subcommand("info", "exact mutual information of a learning kernel");
    std::string info_instance, info_kernel = "tilted-gibbs", info_out;
    double info_alpha = 1.0, info_gamma = -1.0;
    std::size_t info_n = 1;
    unsigned info_threads = 1;
    info->add_option("--instance", info_instance, "builtin name or instance file")->required();
    info->add_option("--kernel", info_kernel, "tilted-gibbs, plain-gibbs or argmin-ter");
    info->add_option("--alpha", info_alpha, "Gibbs inverse temperature");
    info->add_option("--gamma", info_gamma, "tilt");
    info->add_option("--n", info_n, "dataset size")->required();
    info->add_option("--threads", info_threads, "worker threads")->check(CLI::PositiveNumber);
    info->add_option("--out", info_out, "output path (default stdout)");

    ExperimentArgs gibbs_args, coverage_args, rate_args, robustness_args;
    add_experiment_options(app.add_subcommand("gibbs", "exact tilted Gibbs generalization table"), gibbs_args);
    add_experiment_options(app.add_subcommand("coverage", "bound coverage experiment"), coverage_args);
    add_experiment_options(app.add_subcommand("rate", "convergence-rate experiment"), rate_args);
    add_experiment_options(app.add_subcommand("robustness", "distribution-shift sweep"), robustness_args);

    auto* catalog = app.add_subcommand("catalog", "list builtin instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (ter->parsed()) {
            double v = 0.0;
            check(tilted_ter(losses.data(), losses.size(), ter_gamma, &v));
            std::cout << num(v) << "\n";
            return 0;
        }
        if (bound->parsed()) {
            std::unique_ptr<tilted_bound_query, decltype(&tilted_bound_query_free)> q(tilted_bound_query_new(),
                                                                                      &tilted_bound_query_free);
            for (const auto& [key, opt] : bound_opts)
                if (opt->count() > 0) check(tilted_bound_query_set(q.get(), key.c_str(), bound_values[key]));
            if (individual_opt->count() > 0)
                check(tilted_bound_query_set_individual_mi(q.get(), individual_mi.data(), individual_mi.size()));
            tilted_bound_report* raw = nullptr;
            check(tilted_bound_evaluate(q.get(), family.c_str(), kind.c_str(), &raw));
            std::unique_ptr<tilted_bound_report, decltype(&tilted_bound_report_free)> r(raw,
                                                                                        &tilted_bound_report_free);
            print_report(r.get(), bound_out);
            return 0;
        }
        if (info->parsed()) {
            tilted_kernel_kind k;
            if (info_kernel == "tilted-gibbs") k = TILTED_KERNEL_TILTED_GIBBS;
            else if (info_kernel == "plain-gibbs") k = TILTED_KERNEL_PLAIN_GIBBS;
            else if (info_kernel == "argmin-ter") k = TILTED_KERNEL_ARGMIN_TER;
            else throw Failure{TILTED_INVALID_INPUT, "unknown kernel '" + info_kernel + "'"};
            InstanceHandle inst;
            check(tilted_instance_load(info_instance.c_str(), &inst.p));
            tilted_info* raw = nullptr;
            check(tilted_info_exact(inst.p, k, info_alpha, info_gamma, info_n, info_threads, &raw));
            std::unique_ptr<tilted_info, decltype(&tilted_info_free)> r(raw, &tilted_info_free);
            std::string text = "quantity,index,value\n";
            text += "mutual_information,," + num(tilted_info_mutual_information(r.get())) + "\n";
            text += "symmetrized_kl_information,," + num(tilted_info_symmetrized_kl(r.get())) + "\n";
            text += "enumerated_datasets,," + std::to_string(tilted_info_enumerated(r.get())) + "\n";
            for (size_t h = 0; h < tilted_info_hypotheses(r.get()); ++h)
                text += "marginal_posterior," + std::to_string(h) + "," + num(tilted_info_marginal(r.get(), h)) + "\n";
            for (size_t i = 0; i < tilted_info_samples(r.get()); ++i)
                text += "individual_mutual_information," + std::to_string(i) + "," +
                        num(tilted_info_individual(r.get(), i)) + "\n";
            emit(text, info_out);
            return 0;
        }
        if (catalog->parsed()) {
            std::string text = "name,hypotheses,symbols,M,mu_tilde\n";
            for (size_t i = 0; i < tilted_catalog_count(); ++i) {
                InstanceHandle inst;
                check(tilted_instance_builtin(tilted_catalog_name(i), &inst.p));
                double M = 0.0;
                const bool bounded = tilted_instance_loss_bound(inst.p, &M) != 0;
                text += std::string(tilted_instance_name(inst.p)) + "," +
                        std::to_string(tilted_instance_hypotheses(inst.p)) + "," +
                        std::to_string(tilted_instance_symbols(inst.p)) + "," + (bounded ? num(M) : "") + "," +
                        (tilted_instance_has_shift(inst.p) ? "1" : "0") + "\n";
            }
            std::cout << text;
            return 0;
        }
        if (app.got_subcommand("gibbs")) return run_experiment(gibbs_args, TILTED_RUN_GIBBS);
        if (app.got_subcommand("coverage")) return run_experiment(coverage_args, TILTED_RUN_COVERAGE);
        if (app.got_subcommand("rate")) return run_experiment(rate_args, TILTED_RUN_RATE);
        if (app.got_subcommand("robustness")) return run_experiment(robustness_args, TILTED_RUN_ROBUSTNESS);
    } catch (const Failure& f) {
        std::cerr << "error (" << tilted_status_name(f.status) << "): " << f.message << "\n";
        return exit_code(f.status);
    }
    return kExitUsage;
}
