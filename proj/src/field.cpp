#include "nlwave/field.hpp"

#include <cmath>

namespace nlwave {

Field Field::zero(const Grid& g) {
    Field f(g);
    f.spec_.assign(g.size(), {0.0, 0.0});
    f.spec_ok_ = true;
    return f;
}

Field Field::from_physical(const Grid& g, std::vector<double> samples) {
    if (samples.size() != g.size())
        throw SolverError(ErrorCode::validation,
                          "Field::from_physical: sample count does not match grid");
    for (double v : samples)
        if (!std::isfinite(v))
            throw SolverError(ErrorCode::numeric,
                              "Field::from_physical: non-finite sample");
    Field f(g);
    f.phys_ = std::move(samples);
    f.phys_ok_ = true;
    return f;
}

Field Field::from_spectral(const Grid& g, std::vector<std::complex<double>> coeffs) {
    if (coeffs.size() != g.size())
        throw SolverError(ErrorCode::validation,
                          "Field::from_spectral: coefficient count does not match grid");
    for (const auto& c : coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw SolverError(ErrorCode::numeric,
                              "Field::from_spectral: non-finite coefficient");
    Field f(g);
    f.spec_ = std::move(coeffs);
    f.spec_ok_ = true;
    return f;
}

void Field::ensure_spectral() const {
    if (spec_ok_) return;
    // Source is physical data (real or complex).
    const std::size_t total = grid_.size();
    spec_.resize(total);
    if (phys_c_ok_) {
        spec_ = phys_c_;
    } else {
        for (std::size_t i = 0; i < total; ++i) spec_[i] = {phys_[i], 0.0};
    }
    grid_.engine().forward(spec_.data());
    const double w = std::pow(grid_.h(), grid_.dim());
    const auto& parity = grid_.phase_parity();
    for (std::size_t k = 0; k < total; ++k) spec_[k] *= w * static_cast<double>(parity[k]);
    spec_ok_ = true;
}

void Field::ensure_complex_physical() const {
    if (phys_c_ok_) return;
    const std::size_t total = grid_.size();
    if (phys_ok_ && !spec_ok_) {
        phys_c_.resize(total);
        for (std::size_t i = 0; i < total; ++i) phys_c_[i] = {phys_[i], 0.0};
        phys_c_ok_ = true;
        return;
    }
    ensure_spectral();
    phys_c_ = spec_;
    const auto& parity = grid_.phase_parity();
    for (std::size_t k = 0; k < total; ++k) phys_c_[k] *= static_cast<double>(parity[k]);
    grid_.engine().backward(phys_c_.data());
    const double w = 1.0 / grid_.volume();
    double imax = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        phys_c_[i] *= w;
        imax = std::max(imax, std::abs(phys_c_[i].imag()));
    }
    imag_max_ = imax;
    phys_c_ok_ = true;
}

void Field::ensure_physical() const {
    if (phys_ok_) return;
    ensure_complex_physical();
    phys_.resize(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) phys_[i] = phys_c_[i].real();
    phys_ok_ = true;
}

const std::vector<std::complex<double>>& Field::spectral() const {
    ensure_spectral();
    return spec_;
}

const std::vector<double>& Field::physical() const {
    ensure_physical();
    return phys_;
}

const std::vector<std::complex<double>>& Field::complex_physical() const {
    ensure_complex_physical();
    return phys_c_;
}

double Field::realization_imag_max() const {
    ensure_complex_physical();
    return imag_max_;
}

std::complex<double> Field::mean() const {
    ensure_spectral();
    return spec_[grid_.zero_mode()] / grid_.volume();
}

double Field::conjugate_symmetry_defect() const {
    ensure_spectral();
    const int n = grid_.n();
    const int dim = grid_.dim();
    const std::size_t total = grid_.size();
    double worst = 0.0;
    for (std::size_t flat = 0; flat < total; ++flat) {
        // Mirror index: negate each signed axis index mod n.
        std::size_t rest = flat, mirror = 0, stride = 1;
        for (int d = 0; d < dim; ++d) {
            const int i = static_cast<int>(rest % n);
            rest /= n;
            const int mi = (n - i) % n;
            mirror += static_cast<std::size_t>(mi) * stride;
            stride *= static_cast<std::size_t>(n);
        }
        worst = std::max(worst, std::abs(spec_[flat] - std::conj(spec_[mirror])));
    }
    return worst;
}

Field apply_multiplier(
    const Field& f,
    const std::function<std::complex<double>(const std::array<double, 3>&, int dim)>& m) {
    const Grid& g = f.grid();
    const auto& in = f.spectral();
    std::vector<std::complex<double>> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const std::complex<double> mv = m(g.xi(k), g.dim());
        if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
            throw SolverError(ErrorCode::numeric,
                              "apply_multiplier: non-finite symbol value on lattice");
        out[k] = mv * in[k];
    }
    return Field::from_spectral(g, std::move(out));
}

Field apply_radial_multiplier(const Field& f, const std::function<double(double)>& m) {
    const Grid& g = f.grid();
    const auto& in = f.spectral();
    const auto& xi2 = g.xi_squared();
    std::vector<std::complex<double>> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double mv = m(xi2[k]);
        if (!std::isfinite(mv))
            throw SolverError(ErrorCode::numeric,
                              "apply_radial_multiplier: non-finite symbol value on lattice");
        out[k] = mv * in[k];
    }
    return Field::from_spectral(g, std::move(out));
}

}  // namespace nlwave
