#include "nlwave/norms.hpp"

#include <cmath>
#include <limits>

namespace nlwave {

double norm_lp(const Field& f, double p) {
    if (std::isinf(p)) return norm_linf(f);
    if (!(p >= 1.0))
        throw SolverError(ErrorCode::validation, "norm_lp: exponent must satisfy p >= 1");
    const auto& u = f.complex_physical();
    const Grid& g = f.grid();
    const double w = std::pow(g.h(), g.dim());
    double acc = 0.0;
    if (p == 2.0) {
        for (const auto& z : u) acc += std::norm(z);
        return std::sqrt(w * acc);
    }
    if (p == 1.0) {
        for (const auto& z : u) acc += std::abs(z);
        return w * acc;
    }
    for (const auto& z : u) acc += std::pow(std::abs(z), p);
    return std::pow(w * acc, 1.0 / p);
}

double norm_linf(const Field& f) {
    const auto& u = f.complex_physical();
    double m = 0.0;
    for (const auto& z : u) m = std::max(m, std::abs(z));
    return m;
}

double norm_hsp(const Field& f, double s, double p) {
    if (s == 0.0) return norm_lp(f, p);
    Field lifted =
        apply_radial_multiplier(f, [s](double xi2) { return std::pow(1.0 + xi2, 0.5 * s); });
    return norm_lp(lifted, p);
}

double norm_l2_spectral(const Field& f) {
    const auto& c = f.spectral();
    double acc = 0.0;
    for (const auto& z : c) acc += std::norm(z);
    return std::sqrt(acc / f.grid().volume());
}

NormBundle norm_bundle(const Field& f, double s, double p) {
    NormBundle b;
    b.hsp = norm_hsp(f, s, p);
    b.linf = norm_linf(f);
    b.l1 = norm_lp(f, 1.0);
    b.l2 = norm_lp(f, 2.0);
    return b;
}

double norm_y(const Field& f, double s, double p, double q) {
    return norm_hsp(f, s, p) + norm_lp(f, q);
}

}  // namespace nlwave
