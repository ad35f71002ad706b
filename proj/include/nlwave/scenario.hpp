#pragma once

#include <string>

#include "nlwave/config.hpp"
#include "nlwave/errors.hpp"

namespace nlwave {

enum class Command {
    check_wellposed,
    solve_linear,
    solve,
    energy_report,
    convergence_study,
};

const char* to_string(Command cmd);

/// Stable process exit code for a failure class: validation and numeric
/// failures map to 1, singular_mode 2, no_convergence 3, blowup 4, io 5.
int exit_code_for(ErrorCode c);

struct ScenarioOutcome {
    int exit_code = 0;
    std::string status = "ok";
    std::string message;
};

/// Runs one scenario and writes manifest.json plus the command's artifacts
/// (CSV series, field dumps) into cfg.out_dir. The manifest is written even
/// when the run fails, carrying the error classification. `traj_dir` names
/// the field-dump directory consumed by energy-report; empty means
/// cfg.out_dir.
ScenarioOutcome run_scenario(Command cmd, const ScenarioConfig& cfg,
                             const std::string& traj_dir = "");

}  // namespace nlwave
