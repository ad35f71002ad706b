#pragma once

#include "nlwave/field.hpp"

namespace nlwave {

// Lebesgue norm with box quadrature weight h^dim; p may be infinity.
// Complex-valued content is measured by modulus. Throws (validation) for p < 1.
double norm_lp(const Field& f, double p);

double norm_linf(const Field& f);

// Bessel-potential norm: || F^-1[(1+|xi|^2)^(s/2) u_hat] ||_Lp.
double norm_hsp(const Field& f, double s, double p);

// L2 via Parseval on the coefficients (cross-check for the physical route).
double norm_l2_spectral(const Field& f);

// The norm components every composite space here is built from:
// H^{s,p}, L^inf, L^1, L^2 of one field.
struct NormBundle {
    double hsp;
    double linf;
    double l1;
    double l2;
};

NormBundle norm_bundle(const Field& f, double s, double p);

// Composite data norm || . ||_{H^{s,p}} + || . ||_{L^q} (q may be infinity).
double norm_y(const Field& f, double s, double p, double q);

}  // namespace nlwave
