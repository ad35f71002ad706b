#include "nlwave/kernels.hpp"

#include <cmath>
#include <limits>

#include "nlwave/errors.hpp"

namespace nlwave {

RadialSymbol symbol_bessel(double r) {
    if (!(r > 0.0))
        throw SolverError(ErrorCode::validation, "bessel symbol requires r > 0");
    return [r](double xi2) { return std::pow(1.0 + xi2, -0.5 * r); };
}

RadialSymbol symbol_gaussian(double sigma) {
    if (!(sigma > 0.0))
        throw SolverError(ErrorCode::validation, "gaussian symbol requires sigma > 0");
    return [sigma](double xi2) { return std::exp(-sigma * xi2); };
}

RadialSymbol symbol_constant(double c) {
    if (!(c > 0.0))
        throw SolverError(ErrorCode::validation, "constant symbol requires c > 0");
    return [c](double) { return c; };
}

RadialSymbol symbol_zero() {
    return [](double) { return 0.0; };
}

RadialSymbol make_symbol(const std::string& name, double param) {
    if (name == "bessel") return symbol_bessel(param);
    if (name == "gaussian") return symbol_gaussian(param);
    if (name == "constant") return symbol_constant(param);
    if (name == "zero") return symbol_zero();
    throw SolverError(ErrorCode::validation, "unknown kernel symbol '" + name +
                                                 "' (expected bessel|gaussian|constant|zero)");
}

double eta(const KernelSpec& k, double xi2) {
    const double v = k.a * xi2 + k.bhat(xi2);
    if (!(v >= 0.0) || !std::isfinite(v))
        throw SolverError(ErrorCode::numeric,
                          "dispersion symbol: a|xi|^2 + bhat(xi) negative or non-finite");
    return std::sqrt(v);
}

double eta_of_vec(const KernelSpec& k, const std::array<double, 3>& xi, int dim) {
    double xi2 = 0.0;
    for (int d = 0; d < dim; ++d) xi2 += xi[d] * xi[d];
    return eta(k, xi2);
}

std::vector<double> eta_table(const KernelSpec& k, const Grid& g) {
    const auto& xi2 = g.xi_squared();
    std::vector<double> out(xi2.size());
    for (std::size_t i = 0; i < xi2.size(); ++i) out[i] = eta(k, xi2[i]);
    return out;
}

PositivityReport check_dispersion_positivity(const KernelSpec& k, const Grid& g) {
    PositivityReport rep;
    const auto& xi2 = g.xi_squared();
    double min_b = std::numeric_limits<double>::infinity();
    double min_c = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xi2.size(); ++i) {
        const double b = k.bhat(xi2[i]);
        min_b = std::min(min_b, b);
        min_c = std::min(min_c, k.a + b);
        if (b < 0.0 || !(k.a + b > 0.0)) rep.violations.push_back(g.xi(i));
    }
    rep.min_bhat = min_b;
    rep.min_combined = min_c;
    rep.pass = (k.a >= 0.0) && rep.violations.empty();
    if (k.a < 0.0) rep.violations.push_back({0.0, 0.0, 0.0});
    return rep;
}

DecayReport check_decay_class(const KernelSpec& k, const Grid& g, double C) {
    DecayReport rep;
    rep.constant = C;
    rep.min_ghat = std::numeric_limits<double>::infinity();
    const auto& xi2 = g.xi_squared();
    for (std::size_t i = 0; i < xi2.size(); ++i) {
        const double gh = k.ghat(xi2[i]);
        rep.min_ghat = std::min(rep.min_ghat, gh);
        const double ratio = gh * std::pow(1.0 + xi2[i], 0.5 * k.r);
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_xi = g.xi(i);
        }
    }
    rep.pass = rep.worst_ratio <= C && rep.min_ghat >= 0.0;
    return rep;
}

}  // namespace nlwave
