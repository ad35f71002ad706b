#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "nlwave/field.hpp"
#include "nlwave/grid.hpp"

namespace nlwave {

// Discrete-time solution record: spectral coefficients of u and u_t on a
// uniform time grid t_j = t0 + j*dt. Coefficients are the primary storage;
// physical realizations are produced on demand through Field.
class Trajectory {
public:
    Trajectory(Grid g, double t0, double dt) : grid_(std::move(g)), t0_(t0), dt_(dt) {}

    void append(std::vector<std::complex<double>> u_hat,
                std::vector<std::complex<double>> ut_hat) {
        if (u_hat.size() != grid_.size() || ut_hat.size() != grid_.size())
            throw SolverError(ErrorCode::validation,
                              "Trajectory::append: coefficient count does not match grid");
        u_.push_back(std::move(u_hat));
        ut_.push_back(std::move(ut_hat));
    }

    void reserve(std::size_t samples) {
        u_.reserve(samples);
        ut_.reserve(samples);
    }

    const Grid& grid() const noexcept { return grid_; }
    double t0() const noexcept { return t0_; }
    // Relabel the window start (used when chaining continuation windows).
    void set_t0(double t0) noexcept { t0_ = t0; }
    double dt() const noexcept { return dt_; }
    int samples() const noexcept { return static_cast<int>(u_.size()); }
    int steps() const noexcept { return samples() - 1; }
    double t(int j) const noexcept { return t0_ + j * dt_; }
    double t_end() const noexcept { return t(steps()); }

    const std::vector<std::complex<double>>& u_hat(int j) const { return u_.at(j); }
    const std::vector<std::complex<double>>& ut_hat(int j) const { return ut_.at(j); }

    Field u_field(int j) const { return Field::from_spectral(grid_, u_.at(j)); }
    Field ut_field(int j) const { return Field::from_spectral(grid_, ut_.at(j)); }

    // Append a follow-on window that starts where this one ends; the
    // duplicate boundary sample of `next` is skipped.
    void extend_with(const Trajectory& next) {
        if (!grid_.same_shape(next.grid_))
            throw SolverError(ErrorCode::validation, "Trajectory::extend_with: grid mismatch");
        if (std::abs(next.t0_ - t_end()) > 1e-9 * (1.0 + std::abs(t_end())) ||
            std::abs(next.dt_ - dt_) > 1e-12)
            throw SolverError(ErrorCode::validation,
                              "Trajectory::extend_with: windows are not contiguous");
        for (int j = 1; j < next.samples(); ++j) {
            u_.push_back(next.u_[j]);
            ut_.push_back(next.ut_[j]);
        }
    }

private:
    Grid grid_;
    double t0_;
    double dt_;
    std::vector<std::vector<std::complex<double>>> u_;
    std::vector<std::vector<std::complex<double>>> ut_;
};

}  // namespace nlwave
