// Command-line front end: every run is driven by a key = value config file;
// the subcommand picks the scenario. Outputs land in the config's output
// directory (overridable with --out) together with a manifest.json that
// echoes the resolved configuration and the outcome.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlwave/config.hpp"
#include "nlwave/io.hpp"
#include "nlwave/scenario.hpp"

namespace {

// Best-effort failure manifest when the config itself cannot be parsed.
void write_parse_failure_manifest(const std::string& dir, const nlwave::ValidationError& e) {
    try {
        nlwave::ensure_directory(dir);
        nlohmann::ordered_json manifest;
        manifest["command"] = "parse-config";
        manifest["status"] = "validation";
        manifest["error"] = {{"code", "validation"}, {"problems", e.problems()}};
        nlwave::write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
    } catch (...) {
        // Reporting the parse failure on stderr is all that is left.
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Pseudo-spectral solver for a nonlocal nonlinear wave equation with "
        "multipoint (nonlocal-in-time) initial conditions"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::string traj_dir;
    std::optional<std::uint64_t> seed_override;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (key = value lines)")
            ->required();
        sub->add_option("--out", out_override, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed_override, "RNG seed (overrides run.seed)");
        return sub;
    };

    CLI::App* cmd_check =
        add_common(app.add_subcommand("check-wellposed",
                                      "audit the multipoint determinant, dispersion "
                                      "positivity, and kernel decay on the lattice"));
    CLI::App* cmd_lin = add_common(
        app.add_subcommand("solve-linear", "solve the linear multipoint problem (f = 0)"));
    CLI::App* cmd_solve = add_common(app.add_subcommand(
        "solve", "solve the nonlinear problem by fixed-point iteration with continuation"));
    CLI::App* cmd_energy = add_common(app.add_subcommand(
        "energy-report", "evaluate both energy functionals along stored field dumps"));
    cmd_energy->add_option("--traj", traj_dir,
                           "directory holding u_*.bin / ut_*.bin dumps (default: output.dir)");
    CLI::App* cmd_study = add_common(app.add_subcommand(
        "convergence-study", "run the dt and N refinement ladders and report observed orders"));

    CLI11_PARSE(app, argc, argv);

    nlwave::Command cmd{};
    if (cmd_check->parsed()) cmd = nlwave::Command::check_wellposed;
    else if (cmd_lin->parsed()) cmd = nlwave::Command::solve_linear;
    else if (cmd_solve->parsed()) cmd = nlwave::Command::solve;
    else if (cmd_energy->parsed()) cmd = nlwave::Command::energy_report;
    else if (cmd_study->parsed()) cmd = nlwave::Command::convergence_study;

    nlwave::ScenarioConfig cfg;
    try {
        cfg = nlwave::parse_config(config_path);
    } catch (const nlwave::ValidationError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        write_parse_failure_manifest(out_override.empty() ? "out" : out_override, e);
        return 1;
    } catch (const nlwave::SolverError& e) {
        std::fprintf(stderr, "error (%s): %s\n", nlwave::to_string(e.code()), e.what());
        return nlwave::exit_code_for(e.code());
    }
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_override) cfg.seed = *seed_override;

    const nlwave::ScenarioOutcome outcome = nlwave::run_scenario(cmd, cfg, traj_dir);
    if (outcome.exit_code == 0) {
        std::printf("%s: ok (outputs in %s)\n", nlwave::to_string(cmd), cfg.out_dir.c_str());
    } else {
        std::fprintf(stderr, "%s: %s: %s\n", nlwave::to_string(cmd), outcome.status.c_str(),
                     outcome.message.c_str());
    }
    return outcome.exit_code;
}
