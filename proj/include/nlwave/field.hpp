#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "nlwave/grid.hpp"

namespace nlwave {

// A scalar field on a Grid, carried in whichever representation was touched
// last and converted lazily.
//
// Transform convention (quadrature-weighted DFT approximating the integral
// transform on the box):
//
//   u_hat(xi_k) = h^dim * (-1)^(i1+...+id) * DFT[u]_k
//   u(x_j)      = L^-dim * sum_k (-1)^(...) u_hat_k * exp(i xi_k . x_j)
//
// so continuum symbols (|xi|^2 for -Laplacian, kernel transforms, dispersion
// relations) apply to the coefficients unchanged, and Parseval reads
// h^dim sum |u_j|^2 = L^-dim sum |u_hat_k|^2.
//
// physical() returns the real part of the inverse transform; the worst
// imaginary residue seen during that realization is kept for diagnostics so
// callers can detect broken conjugate symmetry instead of silently losing it.
class Field {
public:
    static Field zero(const Grid& g);
    static Field from_physical(const Grid& g, std::vector<double> samples);
    static Field from_spectral(const Grid& g, std::vector<std::complex<double>> coeffs);

    const Grid& grid() const noexcept { return grid_; }

    const std::vector<std::complex<double>>& spectral() const;
    const std::vector<double>& physical() const;
    // Inverse transform without dropping the imaginary part; this is what the
    // norm routines consume so complex-coefficient fields are measured fully.
    const std::vector<std::complex<double>>& complex_physical() const;

    // max |Im u(x_j)| recorded by the last physical()/complex_physical() call.
    double realization_imag_max() const;

    // Mean over the box, read off the zero spectral coefficient.
    std::complex<double> mean() const;

    // max_k |u_hat(k) - conj(u_hat(-k))|; zero for real-valued fields.
    double conjugate_symmetry_defect() const;

private:
    explicit Field(const Grid& g) : grid_(g) {}

    void ensure_spectral() const;
    void ensure_complex_physical() const;
    void ensure_physical() const;

    Grid grid_;
    mutable std::vector<std::complex<double>> spec_;
    mutable std::vector<std::complex<double>> phys_c_;
    mutable std::vector<double> phys_;
    mutable bool spec_ok_ = false;
    mutable bool phys_c_ok_ = false;
    mutable bool phys_ok_ = false;
    mutable double imag_max_ = 0.0;
};

// Fourier multiplier m(xi) applied coefficient-wise; throws (numeric) if the
// multiplier evaluates non-finite anywhere on the lattice.
Field apply_multiplier(
    const Field& f,
    const std::function<std::complex<double>(const std::array<double, 3>&, int dim)>& m);

// Fast path for radial real symbols m = m(|xi|^2).
Field apply_radial_multiplier(const Field& f, const std::function<double(double)>& m);

}  // namespace nlwave
