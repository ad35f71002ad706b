#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "nlwave/errors.hpp"
#include "nlwave/fft.hpp"

namespace nlwave {

// Uniform periodic grid on the centered cube [-L/2, L/2)^dim with n points
// per axis, plus the matching discrete frequency lattice.
//
// Storage is row-major over per-axis indices i_d in [0, n). Physical nodes
// are x_d = -L/2 + i_d * (L/n). Frequencies use the FFT-natural wrap: the
// signed integer index is k_d = i_d for i_d < n/2 and i_d - n otherwise, and
// the continuous frequency is xi_d = 2*pi*k_d / L.
//
// Grids are cheap value types; copies share the FFT engine and the cached
// |xi|^2 / phase-parity tables.
class Grid {
public:
    Grid(int dim, int n, double length) {
        if (dim < 1 || dim > 3)
            throw SolverError(ErrorCode::validation, "Grid: dim must be 1..3");
        if (n < 4 || (n & (n - 1)) != 0)
            throw SolverError(ErrorCode::validation,
                              "Grid: n must be a power of two >= 4");
        if (!(length > 0.0) || !std::isfinite(length))
            throw SolverError(ErrorCode::validation, "Grid: length must be positive");
        d_ = std::make_shared<Data>();
        d_->dim = dim;
        d_->n = n;
        d_->length = length;
        d_->total = 1;
        for (int k = 0; k < dim; ++k) d_->total *= static_cast<std::size_t>(n);
        d_->engine = std::make_shared<FftEngine>(dim, n);
        build_tables();
    }

    int dim() const noexcept { return d_->dim; }
    int n() const noexcept { return d_->n; }
    double length() const noexcept { return d_->length; }
    std::size_t size() const noexcept { return d_->total; }
    double h() const noexcept { return d_->length / d_->n; }
    double volume() const noexcept { return std::pow(d_->length, d_->dim); }

    // Signed lattice integer for a per-axis storage index.
    int signed_index(int i) const noexcept { return i < d_->n / 2 ? i : i - d_->n; }

    // Frequency vector at a flat spectral index (unused axes stay 0).
    std::array<double, 3> xi(std::size_t flat) const noexcept {
        std::array<double, 3> out{0.0, 0.0, 0.0};
        const double base = 2.0 * M_PI / d_->length;
        for (int k = d_->dim - 1; k >= 0; --k) {
            int i = static_cast<int>(flat % d_->n);
            flat /= d_->n;
            out[k] = base * signed_index(i);
        }
        return out;
    }

    // Physical node at a flat index.
    std::array<double, 3> point(std::size_t flat) const noexcept {
        std::array<double, 3> out{0.0, 0.0, 0.0};
        for (int k = d_->dim - 1; k >= 0; --k) {
            int i = static_cast<int>(flat % d_->n);
            flat /= d_->n;
            out[k] = -0.5 * d_->length + i * h();
        }
        return out;
    }

    // Cached |xi|^2 over the whole lattice.
    const std::vector<double>& xi_squared() const noexcept { return d_->xi2; }

    // Centering phase (-1)^(sum of storage indices) per flat spectral index.
    const std::vector<signed char>& phase_parity() const noexcept { return d_->parity; }

    FftEngine& engine() const noexcept { return *d_->engine; }

    bool same_shape(const Grid& other) const noexcept {
        return d_->dim == other.d_->dim && d_->n == other.d_->n &&
               d_->length == other.d_->length;
    }

    // Flat index of the spectral coefficient whose signed indices are all 0.
    std::size_t zero_mode() const noexcept { return 0; }

private:
    struct Data {
        int dim;
        int n;
        double length;
        std::size_t total;
        std::shared_ptr<FftEngine> engine;
        std::vector<double> xi2;
        std::vector<signed char> parity;
    };

    void build_tables() {
        d_->xi2.resize(d_->total);
        d_->parity.resize(d_->total);
        const double base = 2.0 * M_PI / d_->length;
        for (std::size_t flat = 0; flat < d_->total; ++flat) {
            std::size_t rest = flat;
            double s = 0.0;
            int psum = 0;
            for (int k = 0; k < d_->dim; ++k) {
                int i = static_cast<int>(rest % d_->n);
                rest /= d_->n;
                psum += i;
                const double x = base * signed_index(i);
                s += x * x;
            }
            d_->xi2[flat] = s;
            d_->parity[flat] = static_cast<signed char>((psum & 1) ? -1 : 1);
        }
    }

    std::shared_ptr<Data> d_;
};

}  // namespace nlwave
