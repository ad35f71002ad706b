#include "nlwave/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlwave {

namespace {

constexpr std::size_t kOffendingCap = 16;

double spectral_l2(const std::vector<std::complex<double>>& c, double volume) {
    double acc = 0.0;
    for (const auto& z : c) acc += std::norm(z);
    return std::sqrt(acc / volume);
}

std::string xi_to_string(const std::array<double, 3>& xi, int dim) {
    std::ostringstream os;
    os << "(";
    for (int d = 0; d < dim; ++d) os << (d ? ", " : "") << xi[d];
    os << ")";
    return os.str();
}

// Worst |data| within 10% of the box boundary (outer band of each axis).
LocalizationReport localization_scan(const Field& phi, const Field& psi) {
    LocalizationReport rep;
    rep.checked = true;
    const Grid& g = phi.grid();
    const double band = 0.45 * g.length();  // within 0.05 L of |x_d| = L/2
    for (const Field* f : {&phi, &psi}) {
        const auto& u = f->physical();
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double a = std::abs(u[i]);
            rep.field_max = std::max(rep.field_max, a);
            const auto x = g.point(i);
            double worst = 0.0;
            for (int d = 0; d < g.dim(); ++d) worst = std::max(worst, std::abs(x[d]));
            if (worst >= band) rep.boundary_max = std::max(rep.boundary_max, a);
        }
    }
    return rep;
}

void forced_response_into(double eta_v, double dt, int steps, const std::complex<double>* f,
                          std::size_t stride, std::complex<double>* value,
                          std::complex<double>* slope) {
    const double z = eta_v * dt;
    const double c = std::cos(z);
    const double s_over = dt * trig::sinc(z);
    const double eta_sin = eta_v * eta_v * s_over;
    const double j_s = dt * dt * trig::cosc1(z);
    const double k_s = dt * dt * trig::flo(z);
    const double j_c = s_over;
    const double k_c = dt * trig::cosc1(z);

    std::complex<double> p{0.0, 0.0}, q{0.0, 0.0};
    value[0] = slope[0] = {0.0, 0.0};
    for (int j = 0; j < steps; ++j) {
        std::complex<double> f0{0.0, 0.0}, f1{0.0, 0.0};
        if (f) {
            f0 = f[static_cast<std::size_t>(j) * stride];
            f1 = f[(static_cast<std::size_t>(j) + 1) * stride];
        }
        const std::complex<double> pn = p * c + q * s_over + f0 * (j_s - k_s) + f1 * k_s;
        const std::complex<double> qn = -p * eta_sin + q * c + f0 * (j_c - k_c) + f1 * k_c;
        p = pn;
        q = qn;
        value[j + 1] = p;
        slope[j + 1] = q;
    }
}

}  // namespace

WellposedReport check_wellposed(const KernelSpec& k, const MultipointSpec& mp, const Grid& g,
                                double tol_d0) {
    mp.validate();
    WellposedReport rep;
    rep.tol = tol_d0;
    rep.min_abs_d0 = std::numeric_limits<double>::infinity();
    const auto& xi2 = g.xi_squared();
    for (std::size_t i = 0; i < xi2.size(); ++i) {
        const double a = std::abs(wellposedness_determinant(k, mp, xi2[i]));
        if (a < rep.min_abs_d0) {
            rep.min_abs_d0 = a;
            rep.argmin_xi = g.xi(i);
        }
        if (a < tol_d0) {
            ++rep.offending_total;
            if (rep.offending.size() < kOffendingCap) rep.offending.push_back({g.xi(i), a});
        }
    }
    rep.pass = rep.offending_total == 0;
    return rep;
}

Trajectory solve_linear_sampled(const Field& phi, const Field& psi,
                                const SampledForcing* forcing, double t0, double dt, int steps,
                                const KernelSpec& kernel, const MultipointSpec& mp,
                                const LinearSolveOptions& opts, LinearSolveReport* report) {
    mp.validate();
    const Grid& g = phi.grid();
    if (!g.same_shape(psi.grid()))
        throw SolverError(ErrorCode::validation, "solve_linear: phi and psi grids differ");
    if (!(dt > 0.0) || steps < 1)
        throw SolverError(ErrorCode::validation, "solve_linear: need dt > 0 and steps >= 1");
    if (forcing && (forcing->modes != g.size() || forcing->steps != steps))
        throw SolverError(ErrorCode::validation, "solve_linear: forcing shape mismatch");

    LinearSolveReport rep;

    // Snap coupling times onto the grid.
    const int m = mp.m();
    rep.snapping.index.resize(m);
    rep.snapping.value.resize(m);
    for (int k = 0; k < m; ++k) {
        const long idx = std::lround(mp.lambda[k] / dt);
        if (idx < 1 || idx > steps)
            throw SolverError(ErrorCode::validation,
                              "solve_linear: coupling time lambda = " +
                                  std::to_string(mp.lambda[k]) +
                                  " does not fall inside the time window");
        rep.snapping.index[k] = static_cast<int>(idx);
        rep.snapping.value[k] = idx * dt;
        rep.snapping.max_snap_error =
            std::max(rep.snapping.max_snap_error, std::abs(mp.lambda[k] - idx * dt));
    }

    if (opts.localization != LocalizationPolicy::off) {
        rep.localization = localization_scan(phi, psi);
        rep.localization.localized = rep.localization.boundary_max < opts.localization_tol;
        if (!rep.localization.localized && opts.localization == LocalizationPolicy::strict)
            throw SolverError(ErrorCode::validation,
                              "solve_linear: data is not localized away from the box boundary "
                              "(strict policy)");
    }

    const auto etas = eta_table(kernel, g);
    const auto& phi_hat = phi.spectral();
    const auto& psi_hat = psi.spectral();
    const std::size_t total = g.size();

    std::vector<std::vector<std::complex<double>>> u(steps + 1), ut(steps + 1);
    for (int j = 0; j <= steps; ++j) {
        u[j].assign(total, {0.0, 0.0});
        ut[j].assign(total, {0.0, 0.0});
    }

    std::vector<std::complex<double>> fr_value(steps + 1), fr_slope(steps + 1);
    std::vector<std::complex<double>> fv(m), fs(m);
    rep.min_abs_d0 = std::numeric_limits<double>::infinity();

    for (std::size_t k = 0; k < total; ++k) {
        const double eta_v = etas[k];
        const std::complex<double>* col = forcing ? forcing->data.data() + k : nullptr;
        forced_response_into(eta_v, dt, steps, col, total, fr_value.data(), fr_slope.data());

        for (int q = 0; q < m; ++q) {
            fv[q] = fr_value[rep.snapping.index[q]];
            fs[q] = fr_slope[rep.snapping.index[q]];
        }
        ModeSystem sys = build_mode_system(eta_v, mp, rep.snapping.value, phi_hat[k],
                                           psi_hat[k], fv, fs);
        const double ad0 = std::abs(sys.d0);
        if (ad0 < rep.min_abs_d0) {
            rep.min_abs_d0 = ad0;
            rep.argmin_xi = g.xi(k);
        }
        if (ad0 < opts.tol_d0)
            throw SolverError(ErrorCode::singular_mode,
                              "solve_linear: mode system singular at xi = " +
                                  xi_to_string(g.xi(k), g.dim()) +
                                  " (|d0| = " + std::to_string(ad0) + ")");

        for (int j = 0; j <= steps; ++j) {
            const double tj = j * dt;
            const double cj = std::cos(eta_v * tj);
            const double sj = sine_over_eta(eta_v, tj);
            const double eta_sin = eta_v * eta_v * sj;
            u[j][k] = sys.u0 * cj + sys.v0 * sj + fr_value[j];
            ut[j][k] = -sys.u0 * eta_sin + sys.v0 * cj + fr_slope[j];
        }
    }

    Trajectory traj(g, t0, dt);
    traj.reserve(steps + 1);
    for (int j = 0; j <= steps; ++j) traj.append(std::move(u[j]), std::move(ut[j]));

    const auto res = multipoint_residuals(traj, phi, psi, mp, rep.snapping.index);
    rep.residual_value = res.first;
    rep.residual_slope = res.second;
    if (report) *report = rep;
    return traj;
}

Trajectory solve_linear(const Field& phi, const Field& psi,
                        const std::function<Field(double)>& forcing, double T, double dt,
                        const KernelSpec& kernel, const MultipointSpec& mp,
                        const LinearSolveOptions& opts, LinearSolveReport* report) {
    if (!(T > 0.0) || !(dt > 0.0))
        throw SolverError(ErrorCode::validation, "solve_linear: need T > 0 and dt > 0");
    const int steps = static_cast<int>(std::lround(T / dt));
    if (steps < 1)
        throw SolverError(ErrorCode::validation, "solve_linear: window shorter than one step");

    const Grid& g = phi.grid();
    std::optional<SampledForcing> samples;
    if (forcing) {
        samples = SampledForcing::zeros(g.size(), steps);
        for (int j = 0; j <= steps; ++j) {
            Field fj = forcing(j * dt);
            if (!fj.grid().same_shape(g))
                throw SolverError(ErrorCode::validation, "solve_linear: forcing grid mismatch");
            const auto& c = fj.spectral();
            std::copy(c.begin(), c.end(), samples->row(j));
        }
    }
    return solve_linear_sampled(phi, psi, samples ? &*samples : nullptr, 0.0, dt, steps, kernel,
                                mp, opts, report);
}

std::pair<double, double> multipoint_residuals(const Trajectory& traj, const Field& phi,
                                               const Field& psi, const MultipointSpec& mp,
                                               const std::vector<int>& lambda_idx) {
    const Grid& g = traj.grid();
    const std::size_t total = g.size();
    const double vol = g.volume();
    const auto& phi_hat = phi.spectral();
    const auto& psi_hat = psi.spectral();

    std::vector<std::complex<double>> rv(total), rs(total);
    for (std::size_t k = 0; k < total; ++k) {
        std::complex<double> av = traj.u_hat(0)[k] - phi_hat[k];
        std::complex<double> as = traj.ut_hat(0)[k] - psi_hat[k];
        for (int q = 0; q < mp.m(); ++q) {
            av -= mp.alpha[q] * traj.u_hat(lambda_idx[q])[k];
            as -= mp.beta[q] * traj.ut_hat(lambda_idx[q])[k];
        }
        rv[k] = av;
        rs[k] = as;
    }
    const double den_v =
        std::max({spectral_l2(traj.u_hat(0), vol), spectral_l2(phi_hat, vol), 1e-300});
    const double den_s =
        std::max({spectral_l2(traj.ut_hat(0), vol), spectral_l2(psi_hat, vol), 1e-300});
    return {spectral_l2(rv, vol) / den_v, spectral_l2(rs, vol) / den_s};
}

EstimateReport estimate_diagnostics(const Trajectory& traj, const Field& phi, const Field& psi,
                                    const SampledForcing* forcing, double s, double p) {
    EstimateReport rep;
    for (int j = 0; j <= traj.steps(); ++j) {
        const Field uj = traj.u_field(j);
        const Field vj = traj.ut_field(j);
        rep.sup_inf_pair = std::max(rep.sup_inf_pair, norm_linf(uj) + norm_linf(vj));
        rep.sup_hsp_pair =
            std::max(rep.sup_hsp_pair, norm_hsp(uj, s, p) + norm_hsp(vj, s, p));
    }

    const double phi_hsp = norm_hsp(phi, s, p);
    const double psi_hsp = norm_hsp(psi, s, p);
    const double phi_y1 = phi_hsp + norm_lp(phi, 1.0);
    const double psi_y1 = psi_hsp + norm_lp(psi, 1.0);

    double forcing_y1 = 0.0, forcing_hsp = 0.0;
    if (forcing) {
        const Grid& g = traj.grid();
        std::vector<double> y1(forcing->steps + 1), hs(forcing->steps + 1);
        for (int j = 0; j <= forcing->steps; ++j) {
            std::vector<std::complex<double>> c(forcing->row(j),
                                                forcing->row(j) + forcing->modes);
            const Field fj = Field::from_spectral(g, std::move(c));
            hs[j] = norm_hsp(fj, s, p);
            y1[j] = hs[j] + norm_lp(fj, 1.0);
        }
        for (int j = 0; j < forcing->steps; ++j) {
            forcing_y1 += 0.5 * (y1[j] + y1[j + 1]) * traj.dt();
            forcing_hsp += 0.5 * (hs[j] + hs[j + 1]) * traj.dt();
        }
    }

    rep.data_bound_inf = phi_y1 + psi_y1 + forcing_y1;
    rep.data_bound_hsp = phi_hsp + psi_hsp + forcing_hsp;
    rep.ratio_inf = rep.sup_inf_pair / std::max(rep.data_bound_inf, 1e-300);
    rep.ratio_hsp = rep.sup_hsp_pair / std::max(rep.data_bound_hsp, 1e-300);
    return rep;
}

}  // namespace nlwave
