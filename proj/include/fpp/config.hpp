#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fpp {

struct ExperimentConfig {
    std::string command;

    // environment / engine
    int n = 12;
    int r = 1;
    double a = 0.0;
    std::uint64_t replicas = 1000;
    std::optional<std::uint64_t> seed;

    // cascade
    std::vector<int> depths{8};
    double s_max = 8.0;
    std::uint64_t samples = 100000;
    bool compensate = true;

    // contraction
    int steps = 10;

    // limit-law
    std::string t_grid = "-5:5:0.1";
    std::string z_grid = "0.05:10:0.05";

    // chenstein
    std::uint64_t environments = 20;
    std::uint64_t inner = 10000;

    // verify
    std::string suite = "all";

    std::filesystem::path out = "out";
    int workers = 1;

    // Throws ConfigError for malformed settings and CapacityError for
    // requests beyond module limits.
    void validate() const;

    // Echo for CSV metadata and the manifest. The worker count is left out
    // of the CSV echo so outputs do not depend on it.
    nlohmann::json to_json(bool include_runtime) const;
};

// Overlays the keys present in a JSON document onto `base`. Unknown keys are an error.
ExperimentConfig apply_json(const nlohmann::json& doc, ExperimentConfig base);
ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base);

// "lo:hi:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec);
std::vector<int> parse_int_list(const std::string& spec);

inline const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> c{"simulate",  "cascade",     "contraction", "limit-law",
                                            "chenstein", "count-paths", "verify"};
    return c;
}

inline const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> s{"appendix", "counting", "gamma", "limit-law", "engine", "all"};
    return s;
}

}  // namespace fpp
