#include "fpp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>

#include <spdlog/spdlog.h>

#include "fpp/cascade.hpp"
#include "fpp/chen_stein.hpp"
#include "fpp/csv.hpp"
#include "fpp/errors.hpp"
#include "fpp/fpp_engine.hpp"
#include "fpp/gamma_tails.hpp"
#include "fpp/limit_law.hpp"
#include "fpp/parallel.hpp"
#include "fpp/path_counting.hpp"
#include "fpp/stats.hpp"

namespace fpp {
namespace {

namespace fs = std::filesystem;

// Stream ids within one command's seed.
constexpr std::uint64_t kStreamContractionStart = 1;
constexpr std::uint64_t kStreamContractionTrace = 2;

void write_preamble(CsvWriter& csv, const ExperimentConfig& c) {
    csv.meta("fpplab", kArtifactVersion);
    csv.meta("command", c.command);
    csv.meta("config", c.to_json(false).dump());
}

double exp1_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

nlohmann::json run_simulate(const ExperimentConfig& c, RunManifest& m) {
    const int n = c.n;
    const std::uint64_t reps = c.replicas;
    std::vector<double> mins(reps);
    std::vector<std::uint64_t> counts(reps);

    const int w = std::min<int>(table_workers(n, c.workers), static_cast<int>(std::min<std::uint64_t>(reps, 1 << 20)));
    spdlog::info("simulate: n={} replicas={} a={} workers={}", n, reps, c.a, w);
    parallel_for(static_cast<std::size_t>(w), w, [&](std::size_t t) {
        SuffixMinTable table;
        const std::uint64_t lo = reps * t / w;
        const std::uint64_t hi = reps * (t + 1) / w;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const WeightField field(HypercubeInstance{n, *c.seed, i});
            build_suffix_min(field, table);
            mins[i] = table.first_passage_time();
            counts[i] = count_extremal(field, table, c.a);
        }
    });

    const fs::path path = c.out / "simulate.csv";
    CsvWriter csv(path);
    write_preamble(csv, c);
    csv.header({"replica", "m_n", "centered_min", "count_a"});
    std::vector<double> centered(reps);
    std::vector<double> count_d(reps);
    std::uint64_t empty = 0;
    for (std::uint64_t i = 0; i < reps; ++i) {
        centered[i] = n * (mins[i] - 1.0);
        count_d[i] = static_cast<double>(counts[i]);
        if (counts[i] == 0) ++empty;
        csv.row(i, mins[i], centered[i], counts[i]);
    }
    csv.close();
    m.add_file(path);

    const EmpiricalDist ecdf(centered);
    const MeanEstimate mc = mean_with_stderr(count_d);
    nlohmann::json s;
    s["ks_limit_cdf"] = ks_distance(ecdf, [](double t) { return limit_cdf(t); });
    s["dkw_epsilon_99"] = dkw_epsilon(reps);
    s["count_mean"] = mc.mean;
    s["count_stderr"] = mc.se;
    s["exact_intensity"] = exact_intensity(n, c.a);
    s["avoidance_empirical"] = static_cast<double>(empty) / static_cast<double>(reps);
    s["avoidance_cox"] = cox_avoidance(c.a);
    return s;
}

nlohmann::json run_cascade(const ExperimentConfig& c, RunManifest& m) {
    const fs::path path = c.out / "cascade.csv";
    CsvWriter csv(path);
    write_preamble(csv, c);
    csv.header({"sample_id", "r", "z"});
    nlohmann::json s = nlohmann::json::array();
    for (const int r : c.depths) {
        const CascadeParams params{r, c.s_max, c.compensate};
        spdlog::info("cascade: r={} samples={} s_max={}", r, c.samples, c.s_max);
        const std::vector<double> z =
            sample_cascades(params, static_cast<std::size_t>(c.samples), Rng(*c.seed, static_cast<std::uint64_t>(r)),
                            c.workers);
        for (std::size_t i = 0; i < z.size(); ++i) csv.row(i, r, z[i]);
        const MeanEstimate mean = mean_with_stderr(z);
        const EmpiricalDist d(z);
        s.push_back({{"r", r},
                     {"mean", mean.mean},
                     {"mean_stderr", mean.se},
                     {"second_moment", d.moment(2)},
                     {"second_moment_expected", 2.0 - std::ldexp(1.0, -r)},
                     {"ks_exp1", ks_distance(d, exp1_cdf)},
                     {"truncated_mass_uncompensated", truncated_mass(params)}});
    }
    csv.close();
    m.add_file(path);
    return {{"depths", s}};
}

nlohmann::json run_contraction(const ExperimentConfig& c, RunManifest& m) {
    const auto count = static_cast<std::size_t>(c.samples);
    Rng start(*c.seed, kStreamContractionStart);
    std::vector<double> exp_draws(count);
    for (auto& x : exp_draws) x = start.exponential();
    const EmpiricalDist mu0 = EmpiricalDist::point_mass(1.0, count);
    // Recentre so the start lies in P_{2,1} exactly; the shift is O(N^{-1/2}).
    const double mean = EmpiricalDist(exp_draws).mean();
    for (auto& x : exp_draws) x = x / mean;
    const EmpiricalDist nu0(exp_draws);

    spdlog::info("contraction: steps={} samples={}", c.steps, count);
    const std::vector<double> trace =
        contraction_trace(mu0, nu0, c.steps, count, Rng(*c.seed, kStreamContractionTrace));

    const fs::path path = c.out / "contraction.csv";
    CsvWriter csv(path);
    write_preamble(csv, c);
    csv.header({"step", "w2"});
    double worst_ratio = 0.0;
    for (std::size_t j = 0; j < trace.size(); ++j) {
        csv.row(j, trace[j]);
        if (j > 0 && trace[j - 1] > 0.01) worst_ratio = std::max(worst_ratio, trace[j] / trace[j - 1]);
    }
    csv.close();
    m.add_file(path);
    return {{"w2_start", trace.front()}, {"w2_final", trace.back()}, {"max_ratio_above_0.01", worst_ratio}};
}

nlohmann::json run_limit_law(const ExperimentConfig& c, RunManifest& m) {
    const std::vector<double> ts = parse_grid(c.t_grid);
    const fs::path path = c.out / "limit_law.csv";
    CsvWriter csv(path);
    write_preamble(csv, c);
    csv.header({"t", "F", "avoid"});
    bool monotone = true;
    double prev = -1.0;
    for (const double t : ts) {
        const double f = limit_cdf(t);
        if (!(f > prev)) monotone = false;
        prev = f;
        csv.row(t, f, cox_avoidance(t));
    }
    csv.close();
    m.add_file(path);

    const fs::path dpath = c.out / "density.csv";
    CsvWriter dens(dpath);
    write_preamble(dens, c);
    dens.header({"z", "oracle", "claimed"});
    for (const double z : parse_grid(c.z_grid)) {
        dens.row(z, mixture_density_oracle(z), mixture_density_claimed(z));
    }
    dens.close();
    m.add_file(dpath);

    const double norm_oracle = mixture_moment(DensityCurve::oracle, 0);
    const double norm_claimed = mixture_moment(DensityCurve::claimed, 0);
    return {{"grid_points", ts.size()},
            {"F_strictly_increasing", monotone},
            {"density_oracle_integral", norm_oracle},
            {"density_oracle_second_moment", mixture_moment(DensityCurve::oracle, 2)},
            {"density_claimed_integral", norm_claimed},
            {"density_claimed_normalized", std::fabs(norm_claimed - 1.0) < 1e-6}};
}

nlohmann::json run_chenstein(const ExperimentConfig& c, RunManifest& m) {
    const std::uint64_t envs = c.environments;
    std::vector<CsReport> reports(envs);
    spdlog::info("chenstein: n={} r={} a={} environments={} inner={}", c.n, c.r, c.a, envs, c.inner);
    parallel_for(static_cast<std::size_t>(envs), c.workers, [&](std::size_t j) {
        const WeightField field(HypercubeInstance{c.n, *c.seed, j});
        CsReport rep = cs_bound(field, c.r, c.a);
        const TvEstimate tv = conditional_tv(field, c.r, c.a, c.inner);
        rep.tv = tv.tv;
        rep.tv_se = tv.se;
        reports[j] = rep;
    });

    const fs::path path = c.out / "chenstein.csv";
    CsvWriter csv(path);
    write_preamble(csv, c);
    csv.header({"env_id", "lambda", "term1", "term2", "term3", "bound", "tv", "stderr"});
    std::uint64_t violations = 0;
    double bound_sum = 0.0;
    for (std::uint64_t j = 0; j < envs; ++j) {
        const CsReport& r = reports[j];
        csv.row(j, r.lambda, r.term1, r.term2, r.term3, r.bound, r.tv, r.tv_se);
        if (r.tv > r.bound + 3.0 * r.tv_se) ++violations;
        bound_sum += r.bound;
    }
    csv.close();
    m.add_file(path);
    return {{"environments", envs},
            {"mean_bound", bound_sum / static_cast<double>(envs)},
            {"violations_tv_gt_bound_plus_3se", violations}};
}

double factorial(int k) { return std::tgamma(k + 1.0); }

nlohmann::json run_count_paths(const ExperimentConfig& c, RunManifest& m) {
    const fs::path path = c.out / "count_paths.csv";
    const fs::path apath = c.out / "count_paths_audit.csv";
    CsvWriter csv(path);
    CsvWriter audit(apath);
    write_preamble(csv, c);
    write_preamble(audit, c);
    csv.header({"n", "k", "f", "f_r"});
    audit.header({"n", "k", "f", "f_r", "bound_i", "bound_ii", "bound_iii"});
    bool bounds_ii = true;
    bool bounds_iii = true;
    for (int n = 2 * c.r + 1; n <= c.n; ++n) {
        const OverlapCensus census = middle_census(n, c.r);
        const double b3 = middle_overlap_bound(n, c.r);
        for (int k = 0; k <= n; ++k) {
            const auto f = census.f[static_cast<std::size_t>(k)];
            const auto fr = census.f_r[static_cast<std::size_t>(k)];
            const double b1 = (k + 1) * factorial(n - k);
            const double b2 = overlap_bound(n, k);
            csv.row(n, k, f, fr);
            audit.row(n, k, f, fr, b1, b2, b3);
            if (static_cast<double>(f) > b2) bounds_ii = false;
            if (static_cast<double>(fr) > b3) bounds_iii = false;
        }
    }
    csv.close();
    audit.close();
    m.add_file(path);
    m.add_file(apath);
    return {{"overlap_bound_holds", bounds_ii}, {"middle_overlap_bound_holds", bounds_iii}};
}

nlohmann::json run_verify_command(const ExperimentConfig& c, RunManifest& m) {
    const std::uint64_t seed = c.seed.value_or(kVerifyDefaultSeed);
    const std::vector<VerifyRow> rows = run_verify(c.suite, seed);
    const fs::path path = c.out / "verify.csv";
    CsvWriter csv(path);
    write_preamble(csv, c);
    csv.meta("seed_used", std::to_string(seed));
    csv.header({"suite", "check", "kind", "observed", "threshold", "pass"});
    std::uint64_t failed = 0;
    std::uint64_t audits = 0;
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& r : rows) {
        csv.row(r.suite, r.check, r.audit ? "audit" : "check", r.observed, r.threshold, r.pass ? 1 : 0);
        if (r.audit) {
            ++audits;
        } else if (!r.pass) {
            ++failed;
            failures.push_back(r.suite + "/" + r.check);
            spdlog::error("verify: {}/{} failed: observed {} threshold {}", r.suite, r.check, r.observed,
                          r.threshold);
        }
    }
    csv.close();
    m.add_file(path);
    return {{"checks", rows.size() - audits}, {"audits", audits}, {"failed", failed}, {"failures", failures},
            {"passed", failed == 0}};
}

}  // namespace

int table_workers(int n, int requested) {
    const std::uint64_t table_bytes = sizeof(double) << n;
    const auto cap = std::max<std::uint64_t>(1, kTableMemoryBudget / table_bytes);
    return static_cast<int>(std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(requested, 1)), 1, cap));
}

RunManifest run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    std::error_code ec;
    fs::create_directories(config.out, ec);
    if (ec || !fs::is_directory(config.out)) {
        throw IoError("cannot create output directory " + config.out.string());
    }

    RunManifest m;
    m.config = config.to_json(true);
    const std::string& cmd = config.command;
    if (cmd == "simulate") m.summary = run_simulate(config, m);
    else if (cmd == "cascade") m.summary = run_cascade(config, m);
    else if (cmd == "contraction") m.summary = run_contraction(config, m);
    else if (cmd == "limit-law") m.summary = run_limit_law(config, m);
    else if (cmd == "chenstein") m.summary = run_chenstein(config, m);
    else if (cmd == "count-paths") m.summary = run_count_paths(config, m);
    else if (cmd == "verify") m.summary = run_verify_command(config, m);

    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.write(config.out / "manifest.json");
    spdlog::info("{}: done in {:.2f} s, outputs in {}", cmd, m.wall_time_s, config.out.string());
    return m;
}

int run_to_exit_code(const ExperimentConfig& config) {
    try {
        const RunManifest m = run_experiment(config);
        if (m.summary.is_object() && !m.summary.value("passed", true)) return kExitCheckFailed;
        return kExitOk;
    } catch (const CapacityError& e) {
        spdlog::error("capacity: {}", e.what());
        return kExitCapacity;
    } catch (const IoError& e) {
        spdlog::error("io: {}", e.what());
        return kExitIo;
    } catch (const ConfigError& e) {
        spdlog::error("config: {}", e.what());
        return kExitConfig;
    } catch (const DomainError& e) {
        spdlog::error("domain: {}", e.what());
        return kExitConfig;
    } catch (const ContractViolation& e) {
        spdlog::error("contract: {}", e.what());
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        spdlog::error("io: {}", e.what());
        return kExitIo;
    }
}

}  // namespace fpp
