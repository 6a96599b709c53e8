// fpplab: command-line front end. Settings come from defaults, then a JSON
// --config file, then explicit flags.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fpp/config.hpp"
#include "fpp/errors.hpp"
#include "fpp/experiment.hpp"
#include "fpp/parallel.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("fpplab");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("FPP_LOG");
    const std::string level = env ? env : "info";
    if (level == "error") spdlog::set_level(spdlog::level::err);
    else if (level == "debug") spdlog::set_level(spdlog::level::debug);
    else spdlog::set_level(spdlog::level::info);
    if (level != "error" && level != "info" && level != "debug") {
        spdlog::warn("FPP_LOG='{}' not in {{error, info, debug}}; using info", level);
    }
}

// Raw flag values; applied to the config only when given on the command line.
struct Flags {
    std::string out;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string config;
    int n = 0;
    int r = 0;
    double a = 0.0;
    std::uint64_t replicas = 0;
    std::string depths;
    double s_max = 0.0;
    std::uint64_t samples = 0;
    bool no_compensate = false;
    int steps = 0;
    std::string t_grid;
    std::string z_grid;
    std::uint64_t environments = 0;
    std::uint64_t inner = 0;
    std::string suite;
};

struct Binding {
    CLI::Option* opt;
    std::function<void(fpp::ExperimentConfig&)> apply;
};

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Oriented first-passage percolation on the hypercube: exact engines, limit objects and checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(fpp::kArtifactVersion));

    Flags f;
    std::vector<std::pair<CLI::App*, std::vector<Binding>>> commands;

    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        std::vector<Binding> b;
        b.push_back({sub->add_option("--out", f.out, "Output directory")->required(),
                     [&](fpp::ExperimentConfig& c) { c.out = f.out; }});
        b.push_back({sub->add_option("--seed", f.seed, "Environment seed (u64)"),
                     [&](fpp::ExperimentConfig& c) { c.seed = f.seed; }});
        b.push_back({sub->add_option("--workers", f.workers, "Worker threads (default: logical cores)"),
                     [&](fpp::ExperimentConfig& c) { c.workers = f.workers; }});
        sub->add_option("--config", f.config, "JSON config file; flags override it");
        commands.emplace_back(sub, std::move(b));
        return sub;
    };
    auto bind = [&](CLI::Option* opt, std::function<void(fpp::ExperimentConfig&)> apply) {
        commands.back().second.push_back({opt, std::move(apply)});
    };

    {
        CLI::App* s = add("simulate", "Exact m_n and extremal counts over replicas");
        bind(s->add_option("--n", f.n, "Dimension (<= 28)"), [&](auto& c) { c.n = f.n; });
        bind(s->add_option("--replicas", f.replicas, "Number of environments"), [&](auto& c) { c.replicas = f.replicas; });
        bind(s->add_option("--a", f.a, "Threshold a of (-inf, a]"), [&](auto& c) { c.a = f.a; });
    }
    {
        CLI::App* s = add("cascade", "Samples of the cascade mass Z_r");
        bind(s->add_option("--depths,--r", f.depths, "Comma list of depths r"),
             [&](auto& c) { c.depths = fpp::parse_int_list(f.depths); });
        bind(s->add_option("--s-max", f.s_max, "Cumulative-weight cutoff"), [&](auto& c) { c.s_max = f.s_max; });
        bind(s->add_option("--samples", f.samples, "Samples per depth"), [&](auto& c) { c.samples = f.samples; });
        bind(s->add_flag("--no-compensate", f.no_compensate, "Plain truncation without the e^{-S} correction"),
             [&](auto& c) { c.compensate = !f.no_compensate; });
    }
    {
        CLI::App* s = add("contraction", "W2 trace of T^j(delta_1) against T^j(Exp(1))");
        bind(s->add_option("--steps", f.steps, "Number of T applications"), [&](auto& c) { c.steps = f.steps; });
        bind(s->add_option("--samples", f.samples, "Sample size N"), [&](auto& c) { c.samples = f.samples; });
    }
    {
        CLI::App* s = add("limit-law", "Limit CDF, Cox avoidance and mixture density grids");
        bind(s->add_option("--t-grid", f.t_grid, "lo:hi:step or comma list"), [&](auto& c) { c.t_grid = f.t_grid; });
        bind(s->add_option("--z-grid", f.z_grid, "lo:hi:step or comma list, z > 0"),
             [&](auto& c) { c.z_grid = f.z_grid; });
    }
    {
        CLI::App* s = add("chenstein", "Conditional Chen-Stein bound and TV per environment");
        bind(s->add_option("--n", f.n, "Dimension (<= 10)"), [&](auto& c) { c.n = f.n; });
        bind(s->add_option("--r", f.r, "Conditioning depth, 2r < n"), [&](auto& c) { c.r = f.r; });
        bind(s->add_option("--a", f.a, "Threshold a"), [&](auto& c) { c.a = f.a; });
        bind(s->add_option("--environments", f.environments, "Outer environments"),
             [&](auto& c) { c.environments = f.environments; });
        bind(s->add_option("--inner", f.inner, "Middle resamples per environment (>= 10000)"),
             [&](auto& c) { c.inner = f.inner; });
    }
    {
        CLI::App* s = add("count-paths", "Overlap censuses f(n,k) and f(n,k,r) up to n");
        bind(s->add_option("--n", f.n, "Largest dimension (<= 10)"), [&](auto& c) { c.n = f.n; });
        bind(s->add_option("--r", f.r, "Middle-region depth"), [&](auto& c) { c.r = f.r; });
    }
    {
        CLI::App* s = add("verify", "Deterministic identity and bound checks");
        bind(s->add_option("--suite", f.suite, "appendix | counting | gamma | limit-law | engine | all"),
             [&](auto& c) { c.suite = f.suite; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : fpp::kExitConfig;
    }

    for (auto& [sub, bindings] : commands) {
        if (!sub->parsed()) continue;
        fpp::ExperimentConfig cfg;
        cfg.workers = fpp::default_workers();
        try {
            if (!f.config.empty()) cfg = fpp::load_config_file(f.config, cfg);
            cfg.command = sub->get_name();
            for (const auto& b : bindings) {
                if (b.opt->count() > 0) b.apply(cfg);
            }
        } catch (const fpp::ConfigError& e) {
            spdlog::error("config: {}", e.what());
            return fpp::kExitConfig;
        }
        return fpp::run_to_exit_code(cfg);
    }
    return fpp::kExitConfig;
}
