#include "nlwave/mode_solver.hpp"

#include <cmath>

namespace nlwave {

namespace trig {

double sinc(double z) {
    const double z2 = z * z;
    if (std::abs(z) < 0.1)
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0;
    return std::sin(z) / z;
}

double cosc1(double z) {
    const double z2 = z * z;
    if (std::abs(z) < 0.1)
        return 0.5 - z2 / 24.0 + z2 * z2 / 720.0 - z2 * z2 * z2 / 40320.0;
    const double sh = std::sin(0.5 * z);
    return 2.0 * sh * sh / z2;  // 1 - cos z = 2 sin^2(z/2), no cancellation
}

double flo(double z) {
    const double z2 = z * z;
    if (std::abs(z) < 0.1)
        return 1.0 / 6.0 - z2 / 120.0 + z2 * z2 / 5040.0 - z2 * z2 * z2 / 362880.0;
    return (z - std::sin(z)) / (z2 * z);
}

}  // namespace trig

std::complex<double> wellposedness_determinant(double eta_v, const MultipointSpec& mp) {
    std::complex<double> det{1.0, 0.0};
    const int m = mp.m();
    for (int k = 0; k < m; ++k)
        det -= (mp.alpha[k] + mp.beta[k]) * std::cos(mp.lambda[k] * eta_v);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            det += mp.alpha[i] * mp.beta[j] *
                   std::cos((mp.lambda[i] - mp.lambda[j]) * eta_v);
    return det;
}

std::complex<double> wellposedness_determinant(const KernelSpec& k, const MultipointSpec& mp,
                                               double xi2) {
    return wellposedness_determinant(eta(k, xi2), mp);
}

ForcedResponse forced_response(double eta_v, double dt, int steps,
                               const std::complex<double>* f, std::size_t stride) {
    ForcedResponse out;
    out.value.assign(static_cast<std::size_t>(steps) + 1, {0.0, 0.0});
    out.slope.assign(static_cast<std::size_t>(steps) + 1, {0.0, 0.0});
    if (steps == 0) return out;

    const double z = eta_v * dt;
    const double c = std::cos(z);
    const double s_over = dt * trig::sinc(z);       // sin(eta dt)/eta
    const double eta_sin = eta_v * eta_v * s_over;  // eta sin(eta dt)
    // Exact integrals of the two basis responses against the linear-in-step
    // forcing hat functions (see header comment).
    const double j_s = dt * dt * trig::cosc1(z);
    const double k_s = dt * dt * trig::flo(z);
    const double j_c = s_over;
    const double k_c = dt * trig::cosc1(z);

    std::complex<double> p{0.0, 0.0}, q{0.0, 0.0};
    for (int j = 0; j < steps; ++j) {
        std::complex<double> f0{0.0, 0.0}, f1{0.0, 0.0};
        if (f) {
            f0 = f[static_cast<std::size_t>(j) * stride];
            f1 = f[(static_cast<std::size_t>(j) + 1) * stride];
        }
        const std::complex<double> pn =
            p * c + q * s_over + f0 * (j_s - k_s) + f1 * k_s;
        const std::complex<double> qn =
            -p * eta_sin + q * c + f0 * (j_c - k_c) + f1 * k_c;
        p = pn;
        q = qn;
        out.value[static_cast<std::size_t>(j) + 1] = p;
        out.slope[static_cast<std::size_t>(j) + 1] = q;
    }
    return out;
}

ModeSystem build_mode_system(double eta_v, const MultipointSpec& mp,
                             const std::vector<double>& lambda_snapped,
                             std::complex<double> phi, std::complex<double> psi,
                             const std::vector<std::complex<double>>& forced_value,
                             const std::vector<std::complex<double>>& forced_slope) {
    ModeSystem sys;
    sys.eta = eta_v;
    const int m = mp.m();

    std::complex<double> a_cos{0.0, 0.0}, a_sin{0.0, 0.0};
    std::complex<double> b_cos{0.0, 0.0}, b_sin{0.0, 0.0};
    std::complex<double> a_lam_sinc{0.0, 0.0}, b_lam_sinc{0.0, 0.0};
    for (int k = 0; k < m; ++k) {
        const double lam = lambda_snapped[k];
        const double kp = lam * eta_v;
        const double ck = std::cos(kp);
        const double sk = std::sin(kp);
        const double lsinc = lam * trig::sinc(kp);  // sin(kp)/eta, regular at 0
        a_cos += mp.alpha[k] * ck;
        a_sin += mp.alpha[k] * sk;
        b_cos += mp.beta[k] * ck;
        b_sin += mp.beta[k] * sk;
        a_lam_sinc += mp.alpha[k] * lsinc;
        b_lam_sinc += mp.beta[k] * lsinc;
    }
    sys.alpha_sin_sum = a_sin;
    sys.beta_sin_sum = b_sin;
    sys.alpha_cos_defect = 1.0 - a_cos;
    sys.beta_cos_defect = 1.0 - b_cos;
    sys.beta_cos_sum = b_cos;

    sys.a11 = sys.alpha_cos_defect;
    sys.a12 = -a_lam_sinc;
    sys.a21 = eta_v * eta_v * b_lam_sinc;
    sys.a22 = sys.beta_cos_defect;

    sys.r1 = phi;
    sys.r2 = psi;
    for (int k = 0; k < m; ++k) {
        sys.r1 += mp.alpha[k] * forced_value[k];
        sys.r2 += mp.beta[k] * forced_slope[k];
    }

    sys.d0 = sys.a11 * sys.a22 - sys.a12 * sys.a21;
    sys.d0_sum = [&] {
        MultipointSpec snapped = mp;
        snapped.lambda = lambda_snapped;
        return wellposedness_determinant(eta_v, snapped);
    }();
    sys.d = eta_v * sys.d0;
    sys.d1 = eta_v * sys.a22 * sys.r1 + sys.alpha_sin_sum * sys.r2;
    sys.d2 = sys.a11 * sys.r2 - eta_v * sys.beta_sin_sum * sys.r1;

    sys.forced_value = forced_value;
    sys.forced_slope = forced_slope;

    sys.u0 = (sys.r1 * sys.a22 - sys.a12 * sys.r2) / sys.d0;
    sys.v0 = (sys.a11 * sys.r2 - sys.a21 * sys.r1) / sys.d0;
    return sys;
}

namespace {

std::complex<double> simpson(const std::function<std::complex<double>(double)>& fn, double a,
                             double b, int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / n;
    std::complex<double> acc = fn(a) + fn(b);
    for (int i = 1; i < n; ++i) acc += fn(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

}  // namespace

std::complex<double> forced_value_at(double eta_v, double t, const ModeForcing& F,
                                     const QuadratureSpec& quad) {
    if (t == 0.0 || !F) return {0.0, 0.0};
    return simpson(
        [&](double tau) { return sine_over_eta(eta_v, t - tau) * F(tau); }, 0.0, t,
        quad.subdivisions);
}

std::complex<double> forced_slope_at(double eta_v, double t, const ModeForcing& F,
                                     const QuadratureSpec& quad) {
    if (t == 0.0 || !F) return {0.0, 0.0};
    return simpson([&](double tau) { return std::cos(eta_v * (t - tau)) * F(tau); }, 0.0, t,
                   quad.subdivisions);
}

ModeCoefficients mode_coefficients(double eta_v, const MultipointSpec& mp,
                                   std::complex<double> phi, std::complex<double> psi,
                                   const ModeForcing& F, const QuadratureSpec& quad,
                                   double tol_d0) {
    mp.validate();
    const int m = mp.m();
    std::vector<std::complex<double>> fv(m), fs(m);
    for (int k = 0; k < m; ++k) {
        fv[k] = forced_value_at(eta_v, mp.lambda[k], F, quad);
        fs[k] = forced_slope_at(eta_v, mp.lambda[k], F, quad);
    }
    ModeSystem sys = build_mode_system(eta_v, mp, mp.lambda, phi, psi, fv, fs);
    if (std::abs(sys.d0) < tol_d0)
        throw SolverError(ErrorCode::singular_mode,
                          "mode system singular: |d0| = " + std::to_string(std::abs(sys.d0)) +
                              " at eta = " + std::to_string(eta_v));
    return {sys.u0, sys.v0, std::move(sys)};
}

ModeState evolve_mode(double eta_v, const ModeCoefficients& c, const ModeForcing& F, double t,
                      const QuadratureSpec& quad) {
    ModeState st;
    const double cos_t = std::cos(eta_v * t);
    const double s_over = sine_over_eta(eta_v, t);
    const double eta_sin = eta_v * eta_v * s_over;  // eta sin(eta t)
    st.value = c.u0 * cos_t + c.v0 * s_over + forced_value_at(eta_v, t, F, quad);
    st.slope = -c.u0 * eta_sin + c.v0 * cos_t + forced_slope_at(eta_v, t, F, quad);
    return st;
}

}  // namespace nlwave
