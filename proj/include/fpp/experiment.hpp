#pragma once

// Pipelines behind the fpplab subcommands.

#include <cstdint>
#include <string>
#include <vector>

#include "fpp/config.hpp"
#include "fpp/manifest.hpp"

namespace fpp {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,  // bad configuration, domain or contract error
    kExitCapacity = 3,
    kExitCheckFailed = 4,
    kExitIo = 5,
};

// Seed used by `verify` when none is given. The suites are deterministic either way.
inline constexpr std::uint64_t kVerifyDefaultSeed = 20240917;

// Peak bytes of suffix tables held at once by `simulate`.
inline constexpr std::uint64_t kTableMemoryBudget = std::uint64_t{4} << 30;

// Worker count for `simulate` at dimension n, capped by kTableMemoryBudget.
int table_workers(int n, int requested);

// Runs config.command, writes its CSVs and manifest.json into config.out and
// returns the manifest. summary["passed"] is false when a verify check failed.
RunManifest run_experiment(const ExperimentConfig& config);

// Validates, runs and maps exceptions to exit codes, logging the reason.
int run_to_exit_code(const ExperimentConfig& config);

struct VerifyRow {
    std::string suite;
    std::string check;
    bool audit = false;  // reported, never fails the run
    double observed = 0.0;
    double threshold = 0.0;
    bool pass = true;
};

// suite is one of known_suites(); "all" runs every suite.
std::vector<VerifyRow> run_verify(const std::string& suite, std::uint64_t seed);

}  // namespace fpp
