#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "nlwave/grid.hpp"

namespace nlwave {

// Radial Fourier symbol, evaluated on |xi|^2. All built-in convolution
// kernels are radial, so this is the whole kernel interface: a kernel enters
// the solver only through its transform.
using RadialSymbol = std::function<double(double)>;

// Built-in symbol factories. Parameters are checked here (validation error on
// a bad one) so a kernel spec is usable without further guards.
RadialSymbol symbol_bessel(double r);        // (1 + |xi|^2)^(-r/2), r > 0
RadialSymbol symbol_gaussian(double sigma);  // exp(-sigma |xi|^2), sigma > 0
RadialSymbol symbol_constant(double c);      // c > 0
RadialSymbol symbol_zero();                  // identically 0 (valid only with a > 0)

// By-name construction used by the config layer: "bessel", "gaussian",
// "constant", "zero". The parameter is ignored for "zero".
RadialSymbol make_symbol(const std::string& name, double param);

// The linear part of the equation: coefficient a of the Laplacian term and
// the transforms of the two convolution kernels. r is the decay-envelope
// exponent claimed for ghat, used by check_decay_class.
struct KernelSpec {
    double a = 0.0;
    RadialSymbol bhat = symbol_zero();
    RadialSymbol ghat = symbol_bessel(2.0);
    double r = 2.0;
    std::string b_desc = "zero";
    std::string g_desc = "bessel(2)";
};

// Dispersion symbol eta(xi) = sqrt(a |xi|^2 + bhat(xi)). Throws (numeric) if
// the radicand is negative or non-finite.
double eta(const KernelSpec& k, double xi2);
double eta_of_vec(const KernelSpec& k, const std::array<double, 3>& xi, int dim);

// eta over the whole frequency lattice of a grid.
std::vector<double> eta_table(const KernelSpec& k, const Grid& g);

// Positivity preconditions for the linear theory: a >= 0, bhat >= 0 on the
// lattice, and a + bhat(xi) > 0 everywhere.
struct PositivityReport {
    bool pass = false;
    double min_bhat = 0.0;
    double min_combined = 0.0;  // min over lattice of a + bhat(xi)
    std::vector<std::array<double, 3>> violations;
};
PositivityReport check_dispersion_positivity(const KernelSpec& k, const Grid& g);

// Verifies 0 <= ghat(xi) <= C (1+|xi|^2)^(-r/2) on the lattice and reports
// the worst ratio ghat * (1+|xi|^2)^(r/2) together with where it occurs.
struct DecayReport {
    bool pass = false;
    double worst_ratio = 0.0;
    std::array<double, 3> worst_xi{0.0, 0.0, 0.0};
    double min_ghat = 0.0;
    double constant = 1.0;
};
DecayReport check_decay_class(const KernelSpec& k, const Grid& g, double C = 1.0);

}  // namespace nlwave
