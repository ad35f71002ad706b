#include "nlwave/energy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>

#include "nlwave/errors.hpp"
#include "nlwave/norms.hpp"

namespace nlwave {

namespace {

[[noreturn]] void throw_kernel_mode(double xi2, double value) {
    throw SolverError(ErrorCode::validation,
                      "smoothing kernel transform must be positive away from the zero mode "
                      "(value " +
                          std::to_string(value) + " at |xi|^2 = " + std::to_string(xi2) + ")");
}

// Strict-policy gate: `mean_scaled` is the zero-mode magnitude that the
// singular |xi|^{-1} weight would amplify. Returns true when the mode has to
// be dropped (projected policy); throws under the strict policy.
bool gate_zero_mode(double mean_scaled, double field_linf, const EnergyOptions& opts,
                    const char* what) {
    if (mean_scaled <= opts.mean_tol * (1.0 + field_linf)) return false;
    if (opts.zero_mode == ZeroModePolicy::strict)
        throw SolverError(ErrorCode::validation,
                          std::string(what) +
                              ": field mean must vanish where the |xi|^{-1} weight is singular "
                              "(|zero-mode residue| = " +
                              std::to_string(mean_scaled) +
                              "); switch to the projected zero-mode policy to drop it");
    return true;
}

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
    if (depth <= 0)
        throw SolverError(ErrorCode::numeric,
                          "potential quadrature did not reach tolerance (nonlinearity too "
                          "rough on the sampled range)");
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

Field apply_B(const Field& f, const RadialSymbol& ghat, const EnergyOptions& opts) {
    const Grid& g = f.grid();
    gate_zero_mode(std::abs(f.mean()), norm_linf(f), opts, "apply_B");
    auto spec = f.spectral();
    const auto& xi2 = g.xi_squared();
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (k == g.zero_mode()) {
            spec[k] = 0.0;
            continue;
        }
        const double gk = ghat(xi2[k]);
        if (!(gk > 0.0)) throw_kernel_mode(xi2[k], gk);
        spec[k] /= std::sqrt(xi2[k] * gk);
    }
    return Field::from_spectral(g, std::move(spec));
}

Field apply_B_inverse(const Field& f, const RadialSymbol& ghat, const EnergyOptions&) {
    const Grid& g = f.grid();
    auto spec = f.spectral();
    const auto& xi2 = g.xi_squared();
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (k == g.zero_mode()) {
            spec[k] = 0.0;
            continue;
        }
        const double gk = ghat(xi2[k]);
        if (!(gk > 0.0)) throw_kernel_mode(xi2[k], gk);
        spec[k] *= std::sqrt(xi2[k] * gk);
    }
    return Field::from_spectral(g, std::move(spec));
}

double potential_primitive(const NonlinearitySpec& nl, double v, double quad_tol) {
    if (v == 0.0 || nl.is_zero()) return 0.0;
    const auto& f = nl.f;
    const double fa = f(0.0);
    const double fb = f(v);
    const double fm = f(0.5 * v);
    const double whole = v / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = std::max(quad_tol, 1e-15 * std::abs(whole));
    const double out = simpson_rec(f, 0.0, v, fa, fm, fb, whole, tol, 40);
    if (!std::isfinite(out))
        throw SolverError(ErrorCode::numeric, "potential primitive evaluated non-finite at v = " +
                                                  std::to_string(v));
    return out;
}

double potential_integral(const Field& u, const NonlinearitySpec& nl, double quad_tol) {
    if (nl.is_zero()) return 0.0;
    const Grid& g = u.grid();
    const double cell = g.volume() / static_cast<double>(g.size());
    double acc = 0.0;
    for (double v : u.physical()) acc += potential_primitive(nl, v, quad_tol);
    return cell * acc;
}

double potential_lower_bound_constant(const NonlinearitySpec& nl, double r_max,
                                      std::size_t samples, double quad_tol) {
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw SolverError(ErrorCode::validation,
                          "potential_lower_bound_constant: r_max must be positive");
    if (samples < 2) samples = 2;
    double k_req = 0.0;
    for (std::size_t i = 0; i <= samples; ++i) {
        const double r = -r_max + 2.0 * r_max * static_cast<double>(i) / samples;
        if (std::abs(r) < 1e-12 * r_max) continue;
        const double gv = potential_primitive(nl, r, quad_tol);
        if (gv < 0.0) k_req = std::max(k_req, -gv / (r * r));
    }
    return k_req;
}

EnergyRecord energy(const Field& u, const Field& ut, const KernelSpec& kernel,
                    const NonlinearitySpec& nl, const EnergyOptions& opts) {
    if (!u.grid().same_shape(ut.grid()))
        throw SolverError(ErrorCode::validation, "energy: u and u_t live on different grids");
    const Grid& g = u.grid();
    const auto& xi2 = g.xi_squared();
    const auto& uh = u.spectral();
    const auto& vh = ut.spectral();
    const double inv_vol = 1.0 / g.volume();

    EnergyRecord rec;

    // Zero-mode policy. The kinetic weight hits u_t directly; the nonlocal
    // weights hit b*u, whose zero mode is bhat(0) * mean(u).
    const double b0 = kernel.bhat(0.0);
    const bool drop_ut = gate_zero_mode(std::abs(ut.mean()), norm_linf(ut), opts, "energy");
    const bool drop_u = gate_zero_mode(std::abs(b0) * std::abs(u.mean()), norm_linf(u), opts,
                                       "energy");
    rec.zero_mode_dropped = drop_ut || drop_u;

    double kin = 0.0;
    double disp = 0.0;
    double nonl = 0.0;
    double alt_disp = 0.0;
    double alt_nonl = 0.0;
    for (std::size_t k = 0; k < xi2.size(); ++k) {
        const double gk = kernel.ghat(xi2[k]);
        const double u2 = std::norm(uh[k]);
        const double v2 = std::norm(vh[k]);
        if (k == g.zero_mode()) {
            // Only weights that stay bounded at xi = 0 contribute; the
            // singular B-weighted pieces are governed by the policy above.
            if (kernel.a != 0.0 && u2 > 0.0) {
                if (!(gk > 0.0)) throw_kernel_mode(0.0, gk);
                disp += kernel.a * u2 / gk;
            }
            alt_disp += kernel.a * gk * gk * u2;
            continue;
        }
        if (!(gk > 0.0)) throw_kernel_mode(xi2[k], gk);
        const double bk = kernel.bhat(xi2[k]);
        const double w = 1.0 / (xi2[k] * gk);  // squared B symbol
        kin += v2 * w;
        disp += kernel.a * u2 / gk;
        nonl += bk * u2 * w;
        alt_disp += kernel.a * gk * gk * u2;
        alt_nonl += bk * bk * u2 * w;
    }

    rec.kinetic = inv_vol * kin;
    rec.dispersive = inv_vol * disp;
    rec.nonlocal = inv_vol * nonl;
    rec.potential = 2.0 * potential_integral(u, nl, opts.quad_tol);
    rec.e_derived = rec.kinetic + rec.dispersive + rec.nonlocal + rec.potential;
    rec.e_alt = rec.kinetic + inv_vol * (alt_disp + alt_nonl) + rec.potential;
    return rec;
}

EnergySeries energy_drift_monitor(const Trajectory& traj, const KernelSpec& kernel,
                                  const NonlinearitySpec& nl, std::size_t stride, double tol_e,
                                  const EnergyOptions& opts) {
    if (traj.samples() == 0)
        throw SolverError(ErrorCode::validation, "energy_drift_monitor: empty trajectory");
    if (stride == 0) stride = 1;

    EnergySeries out;
    for (int j = 0; j < traj.samples(); j += static_cast<int>(stride)) {
        EnergyRecord r = energy(traj.u_field(j), traj.ut_field(j), kernel, nl, opts);
        r.t = traj.t(j);
        out.records.push_back(r);
    }
    const int last = traj.samples() - 1;
    if (out.records.back().t != traj.t(last)) {
        EnergyRecord r = energy(traj.u_field(last), traj.ut_field(last), kernel, nl, opts);
        r.t = traj.t(last);
        out.records.push_back(r);
    }

    const double e0d = out.records.front().e_derived;
    const double e0a = out.records.front().e_alt;
    double scale_d = 0.0;
    double scale_a = 0.0;
    for (const auto& r : out.records) {
        scale_d = std::max(scale_d, std::abs(r.e_derived));
        scale_a = std::max(scale_a, std::abs(r.e_alt));
    }
    scale_d = std::max(scale_d, 1e-300);
    scale_a = std::max(scale_a, 1e-300);
    for (auto& r : out.records) {
        r.drift_rel = std::abs(r.e_derived - e0d) / scale_d;
        out.max_drift_derived = std::max(out.max_drift_derived, r.drift_rel);
        out.max_drift_alt = std::max(out.max_drift_alt, std::abs(r.e_alt - e0a) / scale_a);
    }
    out.flagged = out.max_drift_derived > tol_e;
    return out;
}

FirstIntegralReport check_first_integral(const Trajectory& traj, const Field& psi,
                                         const KernelSpec& kernel, const MultipointSpec& mp,
                                         const NonlinearitySpec& nl, double tol,
                                         std::size_t stride, const EnergyOptions&) {
    if (traj.samples() < 2)
        throw SolverError(ErrorCode::validation,
                          "check_first_integral: trajectory needs at least two samples");
    if (!traj.grid().same_shape(psi.grid()))
        throw SolverError(ErrorCode::validation, "check_first_integral: psi grid mismatch");
    if (std::abs(traj.t0()) > 1e-12)
        throw SolverError(ErrorCode::validation,
                          "check_first_integral: trajectory must start at t = 0");
    if (stride == 0) stride = 1;
    mp.validate();

    const Grid& g = traj.grid();
    const auto& xi2 = g.xi_squared();
    const std::size_t modes = g.size();
    const double dt = traj.dt();
    const int steps = traj.steps();

    // psi + sum_k beta_k u_t(lambda_k), fixed over time.
    std::vector<std::complex<double>> base(psi.spectral());
    for (std::size_t i = 0; i < mp.lambda.size(); ++i) {
        const long idx = std::lround(mp.lambda[i] / dt);
        if (idx < 0 || idx > steps)
            throw SolverError(ErrorCode::validation,
                              "check_first_integral: lambda_" + std::to_string(i + 1) +
                                  " lies outside the trajectory");
        const auto& row = traj.ut_hat(static_cast<int>(idx));
        for (std::size_t k = 0; k < modes; ++k) base[k] += mp.beta[i] * row[k];
    }

    const auto forcing_row = [&](int j) {
        std::vector<std::complex<double>> out(modes, 0.0);
        if (nl.is_zero()) return out;
        const Field uf = traj.u_field(j);
        const auto& phys = uf.physical();
        std::vector<double> fv(phys.size());
        for (std::size_t k = 0; k < phys.size(); ++k) fv[k] = nl.f(phys[k]);
        out = Field::from_physical(g, std::move(fv)).spectral();
        for (std::size_t k = 0; k < modes; ++k) out[k] *= xi2[k] * kernel.ghat(xi2[k]);
        return out;
    };

    const double sqrt_inv_vol = std::sqrt(1.0 / g.volume());
    const double psi_norm = norm_l2_spectral(psi);

    FirstIntegralReport rep;
    // Cumulative trapezoid accumulators for
    //   int_0^t (a|xi|^2 + bhat) u_hat dtau  and  int_0^t |xi|^2 ghat fhat dtau.
    std::vector<std::complex<double>> acc_lin(modes, 0.0);
    std::vector<std::complex<double>> acc_frc(modes, 0.0);
    std::vector<std::complex<double>> prev_frc = forcing_row(0);

    const auto sample = [&](int j) {
        const auto& utj = traj.ut_hat(j);
        double num2 = 0.0;
        double ut2 = 0.0;
        double but2 = 0.0;
        for (std::size_t k = 0; k < modes; ++k) {
            const std::complex<double> r = utj[k] - base[k] + acc_lin[k] + acc_frc[k];
            num2 += std::norm(r);
            ut2 += std::norm(utj[k]);
            if (k != g.zero_mode()) {
                const double gk = kernel.ghat(xi2[k]);
                if (gk > 0.0) but2 += std::norm(utj[k]) / (xi2[k] * gk);
            }
        }
        const double scale = std::max({std::sqrt(ut2) * sqrt_inv_vol, psi_norm, 1e-300});
        rep.times.push_back(traj.t(j));
        rep.residuals.push_back(std::sqrt(num2) * sqrt_inv_vol / scale);
        rep.but_norms.push_back(std::sqrt(but2) * sqrt_inv_vol);
    };

    sample(0);
    int next_sampled = static_cast<int>(stride);
    for (int j = 1; j <= steps; ++j) {
        const auto& u_prev = traj.u_hat(j - 1);
        const auto& u_cur = traj.u_hat(j);
        auto cur_frc = forcing_row(j);
        for (std::size_t k = 0; k < modes; ++k) {
            const double wk = kernel.a * xi2[k] + kernel.bhat(xi2[k]);
            acc_lin[k] += 0.5 * dt * wk * (u_prev[k] + u_cur[k]);
            acc_frc[k] += 0.5 * dt * (prev_frc[k] + cur_frc[k]);
        }
        prev_frc = std::move(cur_frc);
        if (j == next_sampled || j == steps) {
            sample(j);
            while (next_sampled <= j) next_sampled += static_cast<int>(stride);
        }
    }

    rep.max_residual = *std::max_element(rep.residuals.begin(), rep.residuals.end());
    rep.pass = rep.max_residual < tol;
    return rep;
}

}  // namespace nlwave
