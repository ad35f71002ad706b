#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "nlwave/kernels.hpp"
#include "nlwave/multipoint.hpp"

namespace nlwave {

// ---------------------------------------------------------------------------
// Stable trigonometric helpers. Each is analytic at z = 0; the closed forms
// suffer cancellation there, so small arguments switch to a truncated series
// (relative error < 3e-16 at the 0.1 crossover).
// ---------------------------------------------------------------------------
namespace trig {
double sinc(double z);    // sin(z)/z
double cosc1(double z);   // (1 - cos(z))/z^2
double flo(double z);     // (z - sin(z))/z^3
}  // namespace trig

// sin(eta*t)/eta, the slope-response factor; equals t at eta = 0.
inline double sine_over_eta(double eta_v, double t) {
    return t * trig::sinc(eta_v * t);
}

// ---------------------------------------------------------------------------
// For one frequency xi the equation diagonalizes to the driven oscillator
//
//     w'' + eta^2 w = F(t),      eta = eta(xi),
//
// with the multipoint data coupling
//
//     w(0)  = phi + sum_k alpha_k w(lambda_k),
//     w'(0) = psi + sum_k beta_k  w'(lambda_k).
//
// Writing w(t) = u0*cos(eta t) + v0*sin(eta t)/eta + I(t), where I is the
// zero-data forced response, the unknowns (u0, v0) = (w(0), w'(0)) satisfy a
// 2x2 system whose entries below are all regular as eta -> 0:
//
//     [ 1 - sum a_k cos(kp_k)          -sum a_k lambda_k sinc(kp_k) ] [u0]   [r1]
//     [ eta^2 sum b_k lambda_k sinc    1 - sum b_k cos(kp_k)        ] [v0] = [r2]
//
// with kp_k = lambda_k * eta, r1 = phi + sum a_k I(lambda_k),
// r2 = psi + sum b_k I'(lambda_k). Its determinant d0 equals the
// well-posedness determinant 1 - sum(a_k + b_k) cos kp_k
// + sum_ij a_i b_j cos(kp_i - kp_j), and eta * d0 is the determinant of the
// unreduced system in the (cos, sin) basis coefficients.
// ---------------------------------------------------------------------------

// Everything the 2x2 system consists of at one frequency, kept for
// diagnostics and cross-checks.
struct ModeSystem {
    double eta = 0.0;
    // Reduced matrix and right-hand side.
    std::complex<double> a11, a12, a21, a22;
    std::complex<double> r1, r2;
    // Determinants: d0 (reduced, = the well-posedness determinant), its
    // double-sum evaluation for cross-validation, d = eta * d0, and the
    // Cramer numerators of the unreduced (cos, sin)-basis system.
    std::complex<double> d0, d0_sum, d, d1, d2;
    // Display sums over the coupling coefficients.
    std::complex<double> alpha_sin_sum;     // sum alpha_k sin(kp_k)
    std::complex<double> alpha_cos_defect;  // 1 - sum alpha_k cos(kp_k)
    std::complex<double> beta_sin_sum;      // sum beta_k sin(kp_k)
    std::complex<double> beta_cos_defect;   // 1 - sum beta_k cos(kp_k)
    std::complex<double> beta_cos_sum;      // sum beta_k cos(kp_k)
    // Forced-response samples entering the right-hand side.
    std::vector<std::complex<double>> forced_value;  // I(lambda_k)
    std::vector<std::complex<double>> forced_slope;  // I'(lambda_k)
    // Solution of the system.
    std::complex<double> u0, v0;

    // Determinant-quotient coefficient pair of the unreduced system:
    // value_coefficient multiplies cos(eta t) and equals u0;
    // sine_basis_coefficient multiplies sin(eta t) and equals v0/eta
    // (only meaningful for eta > 0).
    std::complex<double> value_coefficient() const { return u0; }
    std::complex<double> sine_basis_coefficient() const { return v0 / eta; }
};

// Well-posedness determinant at one frequency, by the literal double sum.
std::complex<double> wellposedness_determinant(double eta_v, const MultipointSpec& mp);
std::complex<double> wellposedness_determinant(const KernelSpec& k, const MultipointSpec& mp,
                                               double xi2);

// Zero-data forced response of w'' + eta^2 w = F on a uniform time grid,
// where F is the piecewise-linear interpolant of the samples f[0..steps].
// The per-step update integrates that interpolant exactly (closed
// trigonometric forms), so the returned nodal values are exact for the
// interpolated forcing model up to roundoff. stride allows sampling a
// time-major array of many modes. f == nullptr means F == 0.
struct ForcedResponse {
    std::vector<std::complex<double>> value;  // I(t_j), j = 0..steps
    std::vector<std::complex<double>> slope;  // I'(t_j)
};
ForcedResponse forced_response(double eta_v, double dt, int steps,
                               const std::complex<double>* f, std::size_t stride);

// Assemble and solve the 2x2 system given data and the forced response at
// the (grid-snapped) coupling times. Does not throw on a small determinant;
// callers gate on |d0| themselves so they can attach frequency context.
ModeSystem build_mode_system(double eta_v, const MultipointSpec& mp,
                             const std::vector<double>& lambda_snapped,
                             std::complex<double> phi, std::complex<double> psi,
                             const std::vector<std::complex<double>>& forced_value,
                             const std::vector<std::complex<double>>& forced_slope);

// ---------------------------------------------------------------------------
// Standalone callable-forcing interface (used for cross-checks and for
// problems posed with an explicit forcing function rather than samples).
// Time integrals use composite Simpson with a fixed even subdivision count.
// ---------------------------------------------------------------------------

using ModeForcing = std::function<std::complex<double>(double)>;

struct QuadratureSpec {
    int subdivisions = 128;  // per integral; forced up to the next even count
};

// Integral responses at time t for callable forcing:
//   value: int_0^t sin(eta (t - tau))/eta * F(tau) dtau
//   slope: int_0^t cos(eta (t - tau))     * F(tau) dtau
std::complex<double> forced_value_at(double eta_v, double t, const ModeForcing& F,
                                     const QuadratureSpec& quad);
std::complex<double> forced_slope_at(double eta_v, double t, const ModeForcing& F,
                                     const QuadratureSpec& quad);

struct ModeCoefficients {
    std::complex<double> u0;  // w(0)
    std::complex<double> v0;  // w'(0)
    ModeSystem system;
};

// Solve the multipoint system for one frequency with callable forcing.
// Throws (singular_mode) when |d0| < tol_d0.
ModeCoefficients mode_coefficients(double eta_v, const MultipointSpec& mp,
                                   std::complex<double> phi, std::complex<double> psi,
                                   const ModeForcing& F, const QuadratureSpec& quad = {},
                                   double tol_d0 = 1e-8);

// Evaluate w and w' at time t from solved coefficients plus the Duhamel term.
struct ModeState {
    std::complex<double> value;
    std::complex<double> slope;
};
ModeState evolve_mode(double eta_v, const ModeCoefficients& c, const ModeForcing& F, double t,
                      const QuadratureSpec& quad = {});

}  // namespace nlwave
