#include "nlwave/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <vector>

#include <json.hpp>

#include "nlwave/energy.hpp"
#include "nlwave/io.hpp"
#include "nlwave/linear_solver.hpp"
#include "nlwave/norms.hpp"
#include "nlwave/picard.hpp"

#ifndef NLWAVE_VERSION
#define NLWAVE_VERSION "0.0.0"
#endif

namespace nlwave {

using ordered_json = nlohmann::ordered_json;

const char* to_string(Command cmd) {
    switch (cmd) {
        case Command::check_wellposed:   return "check-wellposed";
        case Command::solve_linear:      return "solve-linear";
        case Command::solve:             return "solve";
        case Command::energy_report:     return "energy-report";
        case Command::convergence_study: return "convergence-study";
    }
    return "unknown";
}

int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::validation:     return 1;
        case ErrorCode::numeric:        return 1;
        case ErrorCode::singular_mode:  return 2;
        case ErrorCode::no_convergence: return 3;
        case ErrorCode::blowup:         return 4;
        case ErrorCode::io:             return 5;
    }
    return 1;
}

namespace {

std::string pad6(int v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d", v);
    return buf;
}

std::vector<int> strided_indices(int samples, int stride) {
    std::vector<int> idx;
    if (samples <= 0) return idx;
    if (stride < 1) stride = 1;
    for (int j = 0; j < samples; j += stride) idx.push_back(j);
    if (idx.back() != samples - 1) idx.push_back(samples - 1);
    return idx;
}

std::vector<int> snapped_lambda_indices(const MultipointSpec& mp, double dt) {
    std::vector<int> idx;
    for (double l : mp.lambda) idx.push_back(static_cast<int>(std::lround(l / dt)));
    return idx;
}

ordered_json xi_json(const std::array<double, 3>& xi) {
    return ordered_json::array({xi[0], xi[1], xi[2]});
}

// norms.csv: one row per (strided) time sample; the multipoint residual
// columns repeat the whole-trajectory residuals on every row.
void write_norms_csv(const std::string& dir, const Trajectory& traj, double res_value,
                     double res_slope, const ScenarioConfig& cfg) {
    CsvWriter csv(dir + "/norms.csv");
    csv.row({"t", "u_l2", "u_linf", "u_hs", "ut_l2", "res_value", "res_slope"});
    for (int j : strided_indices(traj.samples(), cfg.output_stride)) {
        const Field u = traj.u_field(j);
        const Field v = traj.ut_field(j);
        csv.numeric_row({traj.t(j), norm_lp(u, 2.0), norm_linf(u),
                         norm_hsp(u, cfg.sobolev_s, 2.0), norm_lp(v, 2.0), res_value,
                         res_slope});
    }
    csv.close();
}

void write_field_dumps(const std::string& dir, const Trajectory& traj,
                       const ScenarioConfig& cfg) {
    if (cfg.field_dumps == "none" || traj.samples() == 0) return;
    std::vector<int> idx;
    if (cfg.field_dumps == "endpoints") {
        idx.push_back(0);
        if (traj.samples() > 1) idx.push_back(traj.samples() - 1);
    } else {
        idx = strided_indices(traj.samples(), cfg.output_stride);
    }
    for (int j : idx) {
        write_field_dump(dir + "/u_" + pad6(j) + ".bin", traj.u_field(j), traj.t(j));
        write_field_dump(dir + "/ut_" + pad6(j) + ".bin", traj.ut_field(j), traj.t(j));
    }
}

void write_iteration_csv(const std::string& dir, const std::vector<WindowRecord>& windows) {
    CsvWriter csv(dir + "/iteration.csv");
    csv.row({"iter", "delta_y", "ratio"});
    for (const auto& w : windows)
        for (const auto& rec : w.log)
            csv.numeric_row({static_cast<double>(rec.iter), rec.delta_y, rec.ratio});
    csv.close();
}

void write_energy_csv(const std::string& dir, const EnergySeries& series) {
    CsvWriter csv(dir + "/energy.csv");
    csv.row({"t", "E_alt", "E_derived", "kinetic", "dispersive", "nonlocal", "potential",
             "drift_rel"});
    for (const auto& r : series.records)
        csv.numeric_row({r.t, r.e_alt, r.e_derived, r.kinetic, r.dispersive, r.nonlocal,
                         r.potential, r.drift_rel});
    csv.close();
}

void write_trajectory_outputs(const std::string& dir, const Trajectory& traj,
                              double res_value, double res_slope, const ScenarioConfig& cfg) {
    write_norms_csv(dir, traj, res_value, res_slope, cfg);
    write_field_dumps(dir, traj, cfg);
    if (cfg.dim == 1 && traj.samples() > 0)
        write_slice_csv(dir + "/u_final.csv", traj.u_field(traj.samples() - 1));
}

ordered_json localization_json(const LocalizationReport& loc) {
    ordered_json j;
    j["checked"] = loc.checked;
    j["localized"] = loc.localized;
    j["boundary_max"] = loc.boundary_max;
    j["field_max"] = loc.field_max;
    return j;
}

void run_check_wellposed(const ScenarioConfig& cfg, ordered_json& manifest,
                         ScenarioOutcome& outcome) {
    const Grid grid = cfg.make_grid();
    const KernelSpec kernel = cfg.make_kernel();
    const MultipointSpec mp = cfg.make_multipoint();
    mp.validate();

    const WellposedReport rep = check_wellposed(kernel, mp, grid, cfg.tol_d0);
    const PositivityReport pos = check_dispersion_positivity(kernel, grid);
    const DecayReport decay = check_decay_class(kernel, grid);

    auto& m = manifest["metrics"];
    m["wellposed"] = rep.pass;
    m["min_abs_d0"] = rep.min_abs_d0;
    m["argmin_xi"] = xi_json(rep.argmin_xi);
    m["tol_d0"] = rep.tol;
    m["offending_modes"] = rep.offending_total;
    m["weight_sum"] = mp.weight_sum();
    m["dispersion_positive"] = pos.pass;
    m["min_bhat"] = pos.min_bhat;
    m["min_dispersion"] = pos.min_combined;
    m["decay_class_ok"] = decay.pass;
    m["decay_worst_ratio"] = decay.worst_ratio;
    m["min_ghat"] = decay.min_ghat;

    if (!rep.pass) {
        outcome.exit_code = 2;
        outcome.status = "singular_mode";
        outcome.message = "multipoint determinant vanishes near xi = (" +
                          fmt_g17(rep.argmin_xi[0]) + ", " + fmt_g17(rep.argmin_xi[1]) + ", " +
                          fmt_g17(rep.argmin_xi[2]) + "): min |d0| = " +
                          fmt_g17(rep.min_abs_d0);
        manifest["status"] = "singular_mode";
    }
}

void run_solve_linear(const ScenarioConfig& cfg, ordered_json& manifest,
                      ScenarioOutcome& outcome) {
    (void)outcome;
    const Grid grid = cfg.make_grid();
    const KernelSpec kernel = cfg.make_kernel();
    const MultipointSpec mp = cfg.make_multipoint();
    const Field phi = cfg.make_phi(grid);
    const Field psi = cfg.make_psi(grid);

    const int steps = std::max(1, static_cast<int>(std::lround(cfg.t_total / cfg.dt)));
    LinearSolveOptions lopts;
    lopts.tol_d0 = cfg.tol_d0;
    LinearSolveReport rep;
    const Trajectory traj =
        solve_linear_sampled(phi, psi, nullptr, 0.0, cfg.dt, steps, kernel, mp, lopts, &rep);

    write_trajectory_outputs(cfg.out_dir, traj, rep.residual_value, rep.residual_slope, cfg);

    auto& m = manifest["metrics"];
    m["steps"] = steps;
    m["samples"] = traj.samples();
    m["T_reached"] = traj.t_end();
    m["min_abs_d0"] = rep.min_abs_d0;
    m["argmin_xi"] = xi_json(rep.argmin_xi);
    m["residual_value"] = rep.residual_value;
    m["residual_slope"] = rep.residual_slope;
    m["lambda_snap_error"] = rep.snapping.max_snap_error;
    m["localization"] = localization_json(rep.localization);
    const Field uT = traj.u_field(traj.samples() - 1);
    m["final_u_l2"] = norm_lp(uT, 2.0);
    m["final_u_linf"] = norm_linf(uT);
}

void run_solve(const ScenarioConfig& cfg, ordered_json& manifest, ScenarioOutcome& outcome) {
    const Grid grid = cfg.make_grid();
    const KernelSpec kernel = cfg.make_kernel();
    const MultipointSpec mp = cfg.make_multipoint();
    const NonlinearitySpec nl = cfg.make_f();
    const Field phi = cfg.make_phi(grid);
    const Field psi = cfg.make_psi(grid);
    auto& m = manifest["metrics"];

    if (nl.is_zero()) {
        // Zero forcing solves the linear problem exactly; run the direct
        // closed-form path over the whole horizon so the outputs match
        // solve-linear sample for sample.
        const int steps = std::max(1, static_cast<int>(std::lround(cfg.t_total / cfg.dt)));
        LinearSolveOptions lopts;
        lopts.tol_d0 = cfg.tol_d0;
        LinearSolveReport rep;
        const Trajectory traj = solve_linear_sampled(phi, psi, nullptr, 0.0, cfg.dt, steps,
                                                     kernel, mp, lopts, &rep);
        write_trajectory_outputs(cfg.out_dir, traj, rep.residual_value, rep.residual_slope,
                                 cfg);
        write_iteration_csv(cfg.out_dir, {});
        m["converged"] = true;
        m["iterations"] = 0;
        m["T_reached"] = traj.t_end();
        m["blowup"] = false;
        m["windows"] = ordered_json::array();
        m["residual_value"] = rep.residual_value;
        m["residual_slope"] = rep.residual_slope;
        m["min_abs_d0"] = rep.min_abs_d0;
        return;
    }

    const ContinuationResult run =
        continue_solution(phi, psi, kernel, mp, nl, cfg.dt, cfg.t_total,
                          cfg.continuation_options());

    double res_value = std::nan("");
    double res_slope = std::nan("");
    if (run.traj.samples() > 0) {
        try {
            const auto res = multipoint_residuals(run.traj, phi, psi, mp,
                                                  snapped_lambda_indices(mp, cfg.dt));
            res_value = res.first;
            res_slope = res.second;
        } catch (const SolverError&) {
            // Partial (blown-up) trajectories may not reach the coupling
            // times; the residual columns stay NaN then.
        }
    }

    if (run.traj.samples() > 0)
        write_trajectory_outputs(cfg.out_dir, run.traj, res_value, res_slope, cfg);
    else
        write_norms_csv(cfg.out_dir, run.traj, res_value, res_slope, cfg);
    write_iteration_csv(cfg.out_dir, run.windows);

    int total_iter = 0;
    ordered_json windows = ordered_json::array();
    for (const auto& w : run.windows) {
        total_iter += w.iterations;
        ordered_json wj;
        wj["t_start"] = w.t_start;
        wj["t_end"] = w.t_end;
        wj["iterations"] = w.iterations;
        wj["halvings"] = w.halvings;
        wj["y_norm_end"] = w.y_norm_end;
        windows.push_back(wj);
    }

    const bool blew_up = run.status == RunStatus::blowup;
    m["converged"] = !blew_up;
    m["iterations"] = total_iter;
    m["T_reached"] = run.traj.samples() > 0 ? run.traj.t_end() : 0.0;
    m["blowup"] = blew_up;
    if (blew_up) m["T_est"] = run.t_est;
    m["windows"] = windows;
    m["residual_value"] = res_value;
    m["residual_slope"] = res_slope;

    if (blew_up) {
        outcome.exit_code = 4;
        outcome.status = "blowup";
        outcome.message = "solution norm escaped; estimated blowup time " + fmt_g17(run.t_est);
        manifest["status"] = "blowup";
        manifest["error"] = ordered_json{{"code", "blowup"},
                                         {"message", outcome.message},
                                         {"T_est", run.t_est}};
    }
}

void run_energy_report(const ScenarioConfig& cfg, const std::string& traj_dir,
                       ordered_json& manifest, ScenarioOutcome& outcome) {
    (void)outcome;
    const std::string source = traj_dir.empty() ? cfg.out_dir : traj_dir;
    namespace fs = std::filesystem;

    std::map<int, std::string> u_files;
    std::map<int, std::string> ut_files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(source, ec)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        const auto grab = [&](const std::string& prefix, std::map<int, std::string>& into) {
            if (name.size() > prefix.size() + 4 && name.rfind(prefix, 0) == 0 &&
                name.substr(name.size() - 4) == ".bin") {
                const std::string digits = name.substr(prefix.size(), name.size() - prefix.size() - 4);
                if (!digits.empty() &&
                    digits.find_first_not_of("0123456789") == std::string::npos)
                    into[std::stoi(digits)] = entry.path().string();
            }
        };
        grab("u_", u_files);
        grab("ut_", ut_files);
    }
    if (ec)
        throw SolverError(ErrorCode::io, "cannot list trajectory directory: " + source + " (" +
                                             ec.message() + ")");
    if (u_files.empty())
        throw SolverError(ErrorCode::io,
                          "no field dumps (u_*.bin) found in: " + source +
                              "; run solve with output.field_dumps = all first");

    std::vector<EnergyRecord> records;
    const KernelSpec kernel = cfg.make_kernel();
    const NonlinearitySpec nl = cfg.make_f();
    const EnergyOptions opts = cfg.energy_options();
    for (const auto& [idx, upath] : u_files) {
        const auto it = ut_files.find(idx);
        if (it == ut_files.end())
            throw SolverError(ErrorCode::io, "dump " + upath + " has no matching ut dump");
        const FieldDump du = read_field_dump(upath);
        const FieldDump dv = read_field_dump(it->second);
        if (du.dim != dv.dim || du.n != dv.n || du.length != dv.length)
            throw SolverError(ErrorCode::io, "u/ut dump headers disagree at index " +
                                                 std::to_string(idx));
        const Grid g(du.dim, du.n, du.length);
        EnergyRecord r = energy(Field::from_physical(g, du.samples),
                                Field::from_physical(g, dv.samples), kernel, nl, opts);
        r.t = du.time;
        records.push_back(r);
    }

    EnergySeries series;
    series.records = std::move(records);
    const double e0d = series.records.front().e_derived;
    const double e0a = series.records.front().e_alt;
    double scale_d = 1e-300;
    double scale_a = 1e-300;
    for (const auto& r : series.records) {
        scale_d = std::max(scale_d, std::abs(r.e_derived));
        scale_a = std::max(scale_a, std::abs(r.e_alt));
    }
    for (auto& r : series.records) {
        r.drift_rel = std::abs(r.e_derived - e0d) / scale_d;
        series.max_drift_derived = std::max(series.max_drift_derived, r.drift_rel);
        series.max_drift_alt =
            std::max(series.max_drift_alt, std::abs(r.e_alt - e0a) / scale_a);
    }
    series.flagged = series.max_drift_derived > cfg.tol_e;

    write_energy_csv(cfg.out_dir, series);

    auto& m = manifest["metrics"];
    m["samples"] = series.records.size();
    m["e_derived_initial"] = e0d;
    m["e_alt_initial"] = e0a;
    m["max_drift_derived"] = series.max_drift_derived;
    m["max_drift_alt"] = series.max_drift_alt;
    m["drift_flagged"] = series.flagged;
    m["tol_E"] = cfg.tol_e;
}

// One converged trajectory on the full horizon at the given resolution.
Trajectory study_solve(const ScenarioConfig& cfg, const Grid& grid, const KernelSpec& kernel,
                       const MultipointSpec& mp, const NonlinearitySpec& nl, double dt) {
    const Field phi = cfg.make_phi(grid);
    const Field psi = cfg.make_psi(grid);
    const int steps = std::max(1, static_cast<int>(std::lround(cfg.t_total / dt)));
    if (nl.is_zero()) {
        LinearSolveOptions lopts;
        lopts.tol_d0 = cfg.tol_d0;
        return solve_linear_sampled(phi, psi, nullptr, 0.0, dt, steps, kernel, mp, lopts,
                                    nullptr);
    }
    FixedPointOptions fpo = cfg.fixed_point_options();
    fpo.t_local = cfg.t_total;
    fpo.auto_calibrate = false;  // the ladder needs a fixed horizon
    const LocalSolveResult res = solve_local(phi, psi, kernel, mp, nl, dt, fpo);
    return res.traj;
}

void run_convergence_study(const ScenarioConfig& cfg, ordered_json& manifest,
                           ScenarioOutcome& outcome) {
    (void)outcome;
    const KernelSpec kernel = cfg.make_kernel();
    const MultipointSpec mp = cfg.make_multipoint();
    const NonlinearitySpec nl = cfg.make_f();
    const int rungs = cfg.study_rungs;

    CsvWriter csv(cfg.out_dir + "/study.csv");
    csv.row({"ladder", "level", "param", "value", "observed_order"});

    // Temporal ladder: halve dt, measure the discretized-equation residual.
    const Grid grid = cfg.make_grid();
    std::vector<double> residuals;
    for (int i = 0; i < rungs; ++i) {
        const double dt = cfg.dt / std::pow(2.0, i);
        const Trajectory traj = study_solve(cfg, grid, kernel, mp, nl, dt);
        residuals.push_back(equation_residual(traj, kernel, nl));
    }
    std::vector<double> temporal_orders;
    for (int i = 0; i < rungs; ++i) {
        const double order =
            i == 0 ? std::nan("") : std::log2(residuals[i - 1] / residuals[i]);
        if (i > 0) temporal_orders.push_back(order);
        csv.row({"dt", std::to_string(i), fmt_g17(cfg.dt / std::pow(2.0, i)),
                 fmt_g17(residuals[i]), fmt_g17(order)});
    }

    // Spatial ladder: double N, measure the final-time gap to the finest
    // resolution on the shared modes.
    std::vector<std::vector<std::complex<double>>> finals;
    std::vector<Grid> grids;
    for (int i = 0; i < rungs; ++i) {
        const Grid gi(cfg.dim, cfg.points << i, cfg.length);
        const Trajectory traj = study_solve(cfg, gi, kernel, mp, nl, cfg.dt);
        grids.push_back(gi);
        finals.push_back(traj.u_hat(traj.samples() - 1));
    }
    const Grid& fine = grids.back();
    const auto embed_index = [&](const Grid& coarse, std::size_t flat) {
        std::size_t out = 0;
        std::size_t rest = flat;
        std::vector<int> signed_idx(coarse.dim());
        for (int d = coarse.dim() - 1; d >= 0; --d) {
            signed_idx[d] = coarse.signed_index(static_cast<int>(rest % coarse.n()));
            rest /= coarse.n();
        }
        for (int d = 0; d < coarse.dim(); ++d) {
            const int s = signed_idx[d];
            const int fi = s >= 0 ? s : s + fine.n();
            out = out * static_cast<std::size_t>(fine.n()) + static_cast<std::size_t>(fi);
        }
        return out;
    };
    std::vector<double> spatial_errors;
    for (int i = 0; i + 1 < rungs; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < grids[i].size(); ++k) {
            const auto d = finals[i][k] - finals.back()[embed_index(grids[i], k)];
            acc += std::norm(d);
        }
        spatial_errors.push_back(std::sqrt(acc / fine.volume()));
    }
    for (int i = 0; i < rungs; ++i) {
        double value = std::nan("");
        double order = std::nan("");
        if (i + 1 < rungs) value = spatial_errors[i];
        if (i > 0 && i + 1 < rungs && spatial_errors[i] > 0.0)
            order = std::log2(spatial_errors[i - 1] / spatial_errors[i]);
        csv.row({"N", std::to_string(i), std::to_string(cfg.points << i), fmt_g17(value),
                 fmt_g17(order)});
    }
    csv.close();

    auto& m = manifest["metrics"];
    m["temporal_residuals"] = residuals;
    m["temporal_orders"] = temporal_orders;
    double min_order = std::numeric_limits<double>::infinity();
    for (double o : temporal_orders) min_order = std::min(min_order, o);
    m["temporal_order_min"] = temporal_orders.empty() ? std::nan("") : min_order;
    m["spatial_errors"] = spatial_errors;
}

}  // namespace

ScenarioOutcome run_scenario(Command cmd, const ScenarioConfig& cfg,
                             const std::string& traj_dir) {
    const auto start = std::chrono::steady_clock::now();

    ordered_json manifest;
    manifest["command"] = to_string(cmd);
    manifest["version"] = NLWAVE_VERSION;
    ordered_json echo = ordered_json::object();
    for (const auto& [k, v] : cfg.echo()) echo[k] = v;
    manifest["config"] = echo;
    manifest["status"] = "ok";
    manifest["error"] = nullptr;
    manifest["metrics"] = ordered_json::object();

    ScenarioOutcome outcome;
    try {
        ensure_directory(cfg.out_dir);
        switch (cmd) {
            case Command::check_wellposed:
                run_check_wellposed(cfg, manifest, outcome);
                break;
            case Command::solve_linear:
                run_solve_linear(cfg, manifest, outcome);
                break;
            case Command::solve:
                run_solve(cfg, manifest, outcome);
                break;
            case Command::energy_report:
                run_energy_report(cfg, traj_dir, manifest, outcome);
                break;
            case Command::convergence_study:
                run_convergence_study(cfg, manifest, outcome);
                break;
        }
    } catch (const BlowupError& e) {
        outcome = {4, "blowup", e.what()};
        manifest["status"] = "blowup";
        manifest["error"] =
            ordered_json{{"code", "blowup"}, {"message", e.what()}, {"t_local", e.t_local()}};
    } catch (const ValidationError& e) {
        outcome = {1, "validation", e.what()};
        manifest["status"] = "validation";
        manifest["error"] = ordered_json{
            {"code", "validation"}, {"message", e.what()}, {"problems", e.problems()}};
    } catch (const SolverError& e) {
        outcome = {exit_code_for(e.code()), to_string(e.code()), e.what()};
        manifest["status"] = to_string(e.code());
        manifest["error"] = ordered_json{{"code", to_string(e.code())}, {"message", e.what()}};
    } catch (const std::exception& e) {
        outcome = {1, "error", e.what()};
        manifest["status"] = "error";
        manifest["error"] = ordered_json{{"code", "error"}, {"message", e.what()}};
    }

    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    manifest["timing"] = ordered_json{{"seconds", elapsed.count()}};

    try {
        ensure_directory(cfg.out_dir);
        write_text_file(cfg.out_dir + "/manifest.json", manifest.dump(2) + "\n");
    } catch (const SolverError& e) {
        if (outcome.exit_code == 0) outcome = {5, "io", e.what()};
    }
    return outcome;
}

}  // namespace nlwave
