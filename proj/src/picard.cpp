#include "nlwave/picard.hpp"

#include <algorithm>
#include <cmath>

#include "nlwave/norms.hpp"

namespace nlwave {

SampledForcing forcing_from_trajectory(const Trajectory& traj, const KernelSpec& kernel,
                                       const NonlinearitySpec& nl, double overflow_guard) {
    const Grid& g = traj.grid();
    SampledForcing out = SampledForcing::zeros(g.size(), traj.steps());
    if (nl.is_zero()) return out;

    const auto& xi2 = g.xi_squared();
    std::vector<double> fu(g.size());
    for (int j = 0; j <= traj.steps(); ++j) {
        const Field uj = traj.u_field(j);
        const auto& u = uj.physical();
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (std::abs(u[i]) > overflow_guard)
                throw BlowupError("iterate exceeded overflow guard |u| > " +
                                      std::to_string(overflow_guard) + " at t = " +
                                      std::to_string(traj.t(j)),
                                  j * traj.dt());
            fu[i] = nl.f(u[i]);
        }
        const Field fj = Field::from_physical(g, fu);
        const auto& fhat = fj.spectral();
        std::complex<double>* row = out.row(j);
        for (std::size_t k = 0; k < fhat.size(); ++k)
            row[k] = -xi2[k] * kernel.ghat(xi2[k]) * fhat[k];
    }
    return out;
}

Trajectory picard_map(const Trajectory& iterate, const Field& phi, const Field& psi,
                      const KernelSpec& kernel, const MultipointSpec& mp,
                      const NonlinearitySpec& nl, const FixedPointOptions& opts,
                      LinearSolveReport* report) {
    SampledForcing forcing =
        forcing_from_trajectory(iterate, kernel, nl, opts.overflow_guard);
    return solve_linear_sampled(phi, psi, &forcing, iterate.t0(), iterate.dt(),
                                iterate.steps(), kernel, mp, opts.linear, report);
}

double trajectory_y_norm(const Trajectory& traj, double s, double p) {
    double best = 0.0;
    for (int j = 0; j <= traj.steps(); ++j) {
        const Field uj = traj.u_field(j);
        best = std::max(best, norm_hsp(uj, s, p) + norm_linf(uj));
    }
    return best;
}

double trajectory_y_diff(const Trajectory& a, const Trajectory& b, double s, double p) {
    if (!a.grid().same_shape(b.grid()) || a.steps() != b.steps())
        throw SolverError(ErrorCode::validation, "trajectory_y_diff: shape mismatch");
    const Grid& g = a.grid();
    double best = 0.0;
    std::vector<std::complex<double>> diff(g.size());
    for (int j = 0; j <= a.steps(); ++j) {
        const auto& ua = a.u_hat(j);
        const auto& ub = b.u_hat(j);
        for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = ua[k] - ub[k];
        const Field d = Field::from_spectral(g, diff);
        best = std::max(best, norm_hsp(d, s, p) + norm_linf(d));
    }
    return best;
}

LocalSolveResult solve_local(const Field& phi, const Field& psi, const KernelSpec& kernel,
                             const MultipointSpec& mp, const NonlinearitySpec& nl, double dt,
                             const FixedPointOptions& opts) {
    mp.validate();
    if (!(dt > 0.0))
        throw SolverError(ErrorCode::validation, "solve_local: need dt > 0");

    const double data_norm = norm_hsp(phi, opts.s, opts.p) + norm_linf(phi) +
                             norm_hsp(psi, opts.s, opts.p) + norm_linf(psi);
    double t_guess = opts.t_local > 0.0 ? opts.t_local
                                        : choose_horizon(data_norm, nl, opts.c0, opts.c1);

    const int lam_steps =
        mp.m() > 0 ? static_cast<int>(std::lround(mp.lambda_max() / dt)) : 0;
    const int floor_steps = std::max({opts.min_steps, lam_steps, 1});
    int steps = std::max(static_cast<int>(std::lround(t_guess / dt)), floor_steps);

    LocalSolveResult res{Trajectory(phi.grid(), 0.0, dt), {}, false, 0.0, 0, 0, 0.0, {}};

    for (;;) {
        res.log.clear();
        res.max_valid_ratio = 0.0;
        res.converged = false;

        Trajectory prev = solve_linear_sampled(phi, psi, nullptr, 0.0, dt, steps, kernel, mp,
                                               opts.linear, &res.linear_report);
        const double scale = trajectory_y_norm(prev, opts.s, opts.p) + 1.0;
        const bool at_floor = steps <= floor_steps;
        double delta_prev = -1.0;
        bool want_smaller = false;

        for (int it = 1; it <= opts.max_iter; ++it) {
            Trajectory next =
                picard_map(prev, phi, psi, kernel, mp, nl, opts, &res.linear_report);
            const double delta = trajectory_y_diff(next, prev, opts.s, opts.p);

            IterationRecord rec;
            rec.iter = it;
            rec.delta_y = delta;
            rec.ratio_valid = delta_prev > 1e-13 * scale;
            rec.ratio = rec.ratio_valid ? delta / delta_prev : 0.0;
            if (rec.ratio_valid) res.max_valid_ratio = std::max(res.max_valid_ratio, rec.ratio);
            res.log.push_back(rec);
            res.iterations = it;

            prev = std::move(next);
            delta_prev = delta;

            if (delta < opts.tol_fp) {
                res.converged = true;
                break;
            }
            // When the window can still shrink, a weak contraction ratio aborts
            // the attempt early. At the floor we let the iteration run on: it
            // either settles, escapes through the overflow guard (blowup), or
            // exhausts the budget.
            if (opts.auto_calibrate && !at_floor && rec.ratio_valid &&
                (rec.ratio > opts.target_ratio || delta > 1e6 * scale)) {
                want_smaller = true;
                break;
            }
        }

        if (res.converged) {
            res.traj = std::move(prev);
            res.t_used = steps * dt;
            return res;
        }

        if (want_smaller || (opts.auto_calibrate && steps > floor_steps)) {
            steps = std::max(steps / 2, floor_steps);
            ++res.calibration_halvings;
            continue;
        }
        if (trajectory_y_norm(prev, opts.s, opts.p) > opts.escape_norm)
            throw BlowupError("fixed-point iterates escaped (Y-norm above " +
                                  std::to_string(opts.escape_norm) + " on the floor window)",
                              steps * dt);
        throw SolverError(ErrorCode::no_convergence,
                          "fixed-point iteration did not converge (window " +
                              std::to_string(steps * dt) + ", last delta " +
                              std::to_string(delta_prev) + ", worst ratio " +
                              std::to_string(res.max_valid_ratio) + ")");
    }
}

ContinuationResult continue_solution(const Field& phi, const Field& psi,
                                     const KernelSpec& kernel, const MultipointSpec& mp,
                                     const NonlinearitySpec& nl, double dt, double t_total,
                                     const ContinuationOptions& opts) {
    if (!(t_total > 0.0))
        throw SolverError(ErrorCode::validation, "continue_solution: need t_total > 0");
    mp.validate();

    ContinuationResult out{Trajectory(phi.grid(), 0.0, dt), RunStatus::completed, 0.0, {}};
    Field phi_cur = phi;
    Field psi_cur = psi;
    MultipointSpec mp_window = mp;
    double t_cur = 0.0;
    bool first = true;

    while (t_cur < t_total - 0.5 * dt) {
        const double s = opts.fp.s, p = opts.fp.p;
        const double data_y = norm_hsp(phi_cur, s, p) + norm_linf(phi_cur) +
                              norm_hsp(psi_cur, s, p) + norm_linf(psi_cur);
        if (data_y > opts.blowup_threshold) {
            out.status = RunStatus::blowup;
            out.t_est = t_cur;
            return out;
        }

        FixedPointOptions fpo = opts.fp;
        const double natural = fpo.t_local > 0.0
                                   ? fpo.t_local
                                   : choose_horizon(data_y, nl, fpo.c0, fpo.c1);
        fpo.t_local = std::min(natural, t_total - t_cur);

        LocalSolveResult res{Trajectory(phi.grid(), 0.0, dt), {}, false, 0.0, 0, 0, 0.0, {}};
        try {
            res = solve_local(phi_cur, psi_cur, kernel, mp_window, nl, dt, fpo);
        } catch (const BlowupError& e) {
            out.status = RunStatus::blowup;
            out.t_est = t_cur + e.t_local();
            WindowRecord w;
            w.t_start = t_cur;
            w.t_end = t_cur + e.t_local();
            out.windows.push_back(w);
            return out;
        }

        // Escape scan inside the completed window.
        int escape_at = -1;
        double y_end = 0.0;
        for (int j = 0; j <= res.traj.steps(); ++j) {
            const Field uj = res.traj.u_field(j);
            const double y = norm_hsp(uj, s, p) + norm_linf(uj);
            if (j == res.traj.steps()) y_end = y;
            if (y > opts.blowup_threshold && escape_at < 0) escape_at = j;
        }

        res.traj.set_t0(t_cur);
        if (first) {
            out.traj = res.traj;
            first = false;
        } else {
            out.traj.extend_with(res.traj);
        }

        WindowRecord w;
        w.t_start = t_cur;
        w.t_end = res.traj.t_end();
        w.iterations = res.iterations;
        w.halvings = res.calibration_halvings;
        w.y_norm_end = y_end;
        w.log = std::move(res.log);
        out.windows.push_back(w);

        if (escape_at >= 0) {
            out.status = RunStatus::blowup;
            out.t_est = t_cur + escape_at * dt;
            return out;
        }

        t_cur = out.traj.t_end();
        const int last = out.traj.steps();
        phi_cur = out.traj.u_field(last);
        psi_cur = out.traj.ut_field(last);
        if (opts.multipoint_first_window_only) mp_window = MultipointSpec::cauchy();
    }
    return out;
}

std::pair<ContinuationResult, SmalldataReport> solve_global_smalldata(
    const Field& phi, const Field& psi, const KernelSpec& kernel, const MultipointSpec& mp,
    const NonlinearitySpec& nl, double dt, double horizon, double delta,
    const ContinuationOptions& opts) {
    SmalldataReport rep;
    rep.delta = delta;
    const double s = opts.fp.s;
    rep.data_size = norm_hsp(phi, s, 2.0) + norm_lp(phi, 1.0) + norm_hsp(psi, s, 2.0) +
                    norm_lp(psi, 1.0);
    if (rep.data_size > delta)
        throw SolverError(ErrorCode::validation,
                          "small-data solve: data norm " + std::to_string(rep.data_size) +
                              " exceeds requested bound delta = " + std::to_string(delta));

    ContinuationResult run = continue_solution(phi, psi, kernel, mp, nl, dt, horizon, opts);
    rep.status = run.status;
    rep.t_reached = run.status == RunStatus::completed ? run.traj.t_end() : run.t_est;
    for (int j = 0; j <= run.traj.steps(); ++j) {
        const Field uj = run.traj.u_field(j);
        const Field vj = run.traj.ut_field(j);
        const double hs_u = norm_hsp(uj, s, 2.0);
        const double hs_v = norm_hsp(vj, s, 2.0);
        rep.sup_hs_pair = std::max(rep.sup_hs_pair, hs_u + hs_v);
        rep.sup_w_pair =
            std::max(rep.sup_w_pair, hs_u + norm_linf(uj) + hs_v + norm_linf(vj));
    }
    rep.bound_ratio = rep.sup_hs_pair / std::max(delta, 1e-300);
    rep.ws_ball_ok = rep.sup_w_pair <= 3.0 * opts.fp.c0 * delta;
    return {std::move(run), rep};
}

std::vector<double> equation_residual_series(const Trajectory& traj, const KernelSpec& kernel,
                                             const NonlinearitySpec& nl) {
    if (traj.samples() < 3)
        throw SolverError(ErrorCode::validation,
                          "equation_residual: need at least three time samples");
    const Grid& g = traj.grid();
    const auto& xi2 = g.xi_squared();
    const double dt2 = traj.dt() * traj.dt();
    const double inv_vol = 1.0 / g.volume();

    std::vector<double> eta2(g.size());
    std::vector<double> gw(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        eta2[k] = kernel.a * xi2[k] + kernel.bhat(xi2[k]);
        gw[k] = xi2[k] * kernel.ghat(xi2[k]);
    }

    const auto forcing_hat = [&](int j) {
        std::vector<std::complex<double>> out(g.size(), 0.0);
        if (nl.is_zero()) return out;
        const Field uf = traj.u_field(j);
        const auto& u = uf.physical();
        std::vector<double> fu(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) fu[i] = nl.f(u[i]);
        return Field::from_physical(g, std::move(fu)).spectral();
    };

    std::vector<double> series;
    series.reserve(traj.samples() - 2);
    for (int j = 1; j + 1 < traj.samples(); ++j) {
        const auto& um = traj.u_hat(j - 1);
        const auto& u0 = traj.u_hat(j);
        const auto& up = traj.u_hat(j + 1);
        const auto fhat = forcing_hat(j);
        double acc = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const std::complex<double> r =
                (up[k] - 2.0 * u0[k] + um[k]) / dt2 + eta2[k] * u0[k] + gw[k] * fhat[k];
            acc += std::norm(r);
        }
        series.push_back(std::sqrt(acc * inv_vol));
    }
    return series;
}

double equation_residual(const Trajectory& traj, const KernelSpec& kernel,
                         const NonlinearitySpec& nl) {
    const auto series = equation_residual_series(traj, kernel, nl);
    return *std::max_element(series.begin(), series.end());
}

}  // namespace nlwave
