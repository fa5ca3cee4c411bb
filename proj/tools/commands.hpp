#pragma once

#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "srlab/config.hpp"

namespace srlab::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kConfig = 2,
    kNumerical = 3,
    kConvergence = 4,
    kPropertyFailure = 5,
};

// Exit code for an exception escaping a command.
int exit_code(const std::exception& e);

// Each command writes its files below cfg.out and a short report to `log`.
int cmd_simulate(const config::RunConfig& cfg, std::ostream& log);
int cmd_measure(const config::RunConfig& cfg, std::ostream& log);
int cmd_pullback(const config::RunConfig& cfg, std::ostream& log);
int cmd_sweep(const config::RunConfig& cfg, std::ostream& log);
int cmd_check(const config::RunConfig& cfg, std::ostream& log);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// The property suite behind cmd_check.
std::vector<CheckResult> run_checks(const config::RunConfig& cfg);

// Seed of the i-th pullback sample.
inline std::uint64_t sample_seed(const config::RunConfig& cfg, int i) {
    return cfg.seed + static_cast<std::uint64_t>(i);
}

// Coarsening factor used when comparing MC and PDE densities, chosen so
// that cells are about 0.4 wide.
int comparison_factor(const measure::GridSpec& grid);

}  // namespace srlab::cli
