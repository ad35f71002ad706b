#pragma once

#include <functional>
#include <string>

namespace nlwave {

// Pointwise nonlinearity f with its first two derivatives. f(0) = 0 is
// required so the nonlinear term vanishes on the zero solution.
struct NonlinearitySpec {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
    // Leading homogeneity near 0 (f(u) ~ u^(order+1)); informational.
    int alpha_order = 1;
    std::string name = "zero";

    bool is_zero() const noexcept { return !f || name == "zero"; }
};

// Built-ins by name: "zero", "quadratic" (u^2), "cubic" (u^3),
// "focusing-cubic" (-u^3), "sine" (sin u - u).
NonlinearitySpec make_nonlinearity(const std::string& name);

// Compares df/d2f against central differences of f on [-range, range];
// throws (validation) if the relative mismatch exceeds rel_tol.
void check_derivative_consistency(const NonlinearitySpec& nl, double range,
                                  double rel_tol = 1e-4);

// Envelope max_{|x| <= m} max(|f'(x)|, |f''(x)|), sampled on a uniform grid
// plus the endpoints and 0. Throws (numeric) on non-finite values.
double derivative_envelope(const NonlinearitySpec& nl, double m);

// Local existence horizon from the contraction estimates:
//   min( 1 / ((M+1)(1 + 2 C0 (M+1) fbar(M+1))),
//        1 / (2 (1 + C1 (M+1)^2 fbar(M+1))) )
// where fbar is derivative_envelope.
double choose_horizon(double data_norm, const NonlinearitySpec& nl, double c0 = 1.0,
                      double c1 = 1.0);

}  // namespace nlwave
