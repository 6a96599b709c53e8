#include "fpp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fpp/chen_stein.hpp"
#include "fpp/core_model.hpp"
#include "fpp/errors.hpp"
#include "fpp/path_counting.hpp"

namespace fpp {
namespace {

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ConfigError("not a finite number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        std::string p;
        while (std::getline(ss, p, ':')) parts.push_back(p);
        if (parts.size() != 3) throw ConfigError("grid must be lo:hi:step, got '" + spec + "'");
        const double lo = parse_number(parts[0]);
        const double hi = parse_number(parts[1]);
        const double step = parse_number(parts[2]);
        if (!(step > 0.0) || hi < lo) throw ConfigError("grid needs step > 0 and hi >= lo: '" + spec + "'");
        const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
        if (count > 10'000'000) throw ConfigError("grid too large: '" + spec + "'");
        // Snap to 12 decimals relative to the grid's magnitude so that 0.1
        // steps print cleanly and -5 + 50 * 0.1 lands on 0.
        const double mag = std::max({std::fabs(lo), std::fabs(hi), step});
        const double inv = std::pow(10.0, 12 - static_cast<int>(std::floor(std::log10(mag))));
        for (long long i = 0; i < count; ++i) {
            const double v = lo + static_cast<double>(i) * step;
            out.push_back(std::round(v * inv) / inv + 0.0);
        }
    } else {
        std::stringstream ss(spec);
        std::string p;
        while (std::getline(ss, p, ',')) out.push_back(parse_number(p));
    }
    if (out.empty()) throw ConfigError("empty grid");
    return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    std::stringstream ss(spec);
    std::string p;
    while (std::getline(ss, p, ',')) {
        const double v = parse_number(p);
        if (v != std::floor(v) || std::fabs(v) > 1e9) throw ConfigError("not an integer: '" + p + "'");
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

void ExperimentConfig::validate() const {
    const auto& cmds = known_commands();
    if (std::find(cmds.begin(), cmds.end(), command) == cmds.end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    const bool random = command == "simulate" || command == "cascade" || command == "contraction" ||
                        command == "chenstein";
    if (random && !seed) throw ConfigError("--seed is required for " + command + " (there is no default seed)");
    if (workers < 1) throw ConfigError("--workers must be >= 1");
    if (!std::isfinite(a)) throw ConfigError("--a must be finite");

    if (command == "simulate") {
        if (n < 1) throw ConfigError("--n must be >= 1");
        if (n > kMaxTableDimension) {
            throw CapacityError("simulate: n = " + std::to_string(n) + " exceeds the limit of " +
                                std::to_string(kMaxTableDimension));
        }
        if (replicas < 1) throw ConfigError("--replicas must be >= 1");
    } else if (command == "cascade") {
        if (depths.empty()) throw ConfigError("--depths must not be empty");
        for (const int d : depths) {
            if (d < 0 || d > 12) throw ConfigError("cascade depth must lie in [0, 12]");
        }
        if (!(s_max > 0.0) || s_max > 40.0) throw ConfigError("--s-max must lie in (0, 40]");
        if (samples < 1) throw ConfigError("--samples must be >= 1");
    } else if (command == "contraction") {
        if (steps < 0 || steps > 100) throw ConfigError("--steps must lie in [0, 100]");
        if (samples < 1) throw ConfigError("--samples must be >= 1");
    } else if (command == "limit-law") {
        parse_grid(t_grid);
        for (const double z : parse_grid(z_grid)) {
            if (!(z > 0.0)) throw ConfigError("--z-grid values must be positive");
        }
    } else if (command == "chenstein") {
        if (n < 2) throw ConfigError("--n must be >= 2");
        if (r < 0 || 2 * r >= n) throw ConfigError("chenstein needs 0 <= r and 2r < n");
        if (n > kMaxBoundDimension) {
            throw CapacityError("chenstein: n = " + std::to_string(n) + " exceeds the pair-enumeration limit of " +
                                std::to_string(kMaxBoundDimension));
        }
        if (environments < 1) throw ConfigError("--environments must be >= 1");
        if (inner < 10000) throw ConfigError("--inner must be >= 10000");
    } else if (command == "count-paths") {
        if (n < 1) throw ConfigError("--n must be >= 1");
        if (n > kMaxCensusDimension) {
            throw CapacityError("count-paths: n = " + std::to_string(n) + " exceeds the census limit of " +
                                std::to_string(kMaxCensusDimension));
        }
        if (r < 0 || 2 * r >= n) throw ConfigError("count-paths needs 0 <= r and 2r < n");
    } else if (command == "verify") {
        const auto& s = known_suites();
        if (std::find(s.begin(), s.end(), suite) == s.end()) throw ConfigError("unknown suite '" + suite + "'");
    }
}

nlohmann::json ExperimentConfig::to_json(bool include_runtime) const {
    nlohmann::json j;
    j["command"] = command;
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    if (command == "simulate") {
        j["n"] = n;
        j["a"] = a;
        j["replicas"] = replicas;
    } else if (command == "cascade") {
        j["depths"] = depths;
        j["s_max"] = s_max;
        j["samples"] = samples;
        j["compensate"] = compensate;
    } else if (command == "contraction") {
        j["steps"] = steps;
        j["samples"] = samples;
    } else if (command == "limit-law") {
        j["t_grid"] = t_grid;
        j["z_grid"] = z_grid;
    } else if (command == "chenstein") {
        j["n"] = n;
        j["r"] = r;
        j["a"] = a;
        j["environments"] = environments;
        j["inner"] = inner;
    } else if (command == "count-paths") {
        j["n"] = n;
        j["r"] = r;
    } else if (command == "verify") {
        j["suite"] = suite;
    }
    if (include_runtime) {
        j["workers"] = workers;
        j["out"] = out.string();
    }
    return j;
}

ExperimentConfig apply_json(const nlohmann::json& doc, ExperimentConfig c) {
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "command") c.command = v.get<std::string>();
            else if (key == "n") c.n = v.get<int>();
            else if (key == "r") c.r = v.get<int>();
            else if (key == "a") c.a = v.get<double>();
            else if (key == "replicas") c.replicas = v.get<std::uint64_t>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "depths") c.depths = v.get<std::vector<int>>();
            else if (key == "s_max") c.s_max = v.get<double>();
            else if (key == "samples") c.samples = v.get<std::uint64_t>();
            else if (key == "compensate") c.compensate = v.get<bool>();
            else if (key == "steps") c.steps = v.get<int>();
            else if (key == "t_grid") c.t_grid = v.get<std::string>();
            else if (key == "z_grid") c.z_grid = v.get<std::string>();
            else if (key == "environments") c.environments = v.get<std::uint64_t>();
            else if (key == "inner") c.inner = v.get<std::uint64_t>();
            else if (key == "suite") c.suite = v.get<std::string>();
            else if (key == "out") c.out = v.get<std::string>();
            else if (key == "workers") c.workers = v.get<int>();
            else throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
    return apply_json(doc, std::move(base));
}

}  // namespace fpp
