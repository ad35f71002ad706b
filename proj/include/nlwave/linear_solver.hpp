#pragma once

#include <array>
#include <functional>
#include <optional>

#include "nlwave/kernels.hpp"
#include "nlwave/mode_solver.hpp"
#include "nlwave/multipoint.hpp"
#include "nlwave/norms.hpp"
#include "nlwave/trajectory.hpp"

namespace nlwave {

// Scan of the well-posedness determinant over the frequency lattice.
struct WellposedReport {
    bool pass = false;
    double tol = 0.0;
    double min_abs_d0 = 0.0;
    std::array<double, 3> argmin_xi{0.0, 0.0, 0.0};
    // Frequencies with |d0| below tolerance, capped to keep reports small.
    std::vector<std::pair<std::array<double, 3>, double>> offending;
    std::size_t offending_total = 0;
};

WellposedReport check_wellposed(const KernelSpec& k, const MultipointSpec& mp, const Grid& g,
                                double tol_d0 = 1e-8);

// The periodic method silently wraps anything that touches the box boundary,
// so solvers check whether the data actually decays there. strict turns a
// failure into an error, warn records it, off skips the check.
enum class LocalizationPolicy { off, warn, strict };

struct LocalizationReport {
    bool checked = false;
    bool localized = true;
    double boundary_max = 0.0;  // worst |data| within 10% of the boundary
    double field_max = 0.0;
};

struct LinearSolveOptions {
    double tol_d0 = 1e-8;
    LocalizationPolicy localization = LocalizationPolicy::warn;
    double localization_tol = 1e-10;  // absolute negligibility threshold
};

// Coupling times are snapped to the time grid; the solve then imposes the
// conditions exactly at the snapped times.
struct SnappedTimes {
    std::vector<int> index;
    std::vector<double> value;
    double max_snap_error = 0.0;
};

struct LinearSolveReport {
    SnappedTimes snapping;
    double min_abs_d0 = 0.0;
    std::array<double, 3> argmin_xi{0.0, 0.0, 0.0};
    // Relative L2 residuals of the two data conditions, measured on the
    // discrete solution.
    double residual_value = 0.0;
    double residual_slope = 0.0;
    LocalizationReport localization;
};

// Forcing given by spectral samples on the time grid, interpreted between
// nodes as piecewise linear in t. Time-major contiguous storage so one mode
// is a strided column.
struct SampledForcing {
    std::size_t modes = 0;
    int steps = 0;
    std::vector<std::complex<double>> data;  // (steps+1) * modes

    static SampledForcing zeros(std::size_t modes, int steps) {
        SampledForcing f;
        f.modes = modes;
        f.steps = steps;
        f.data.assign((static_cast<std::size_t>(steps) + 1) * modes, {0.0, 0.0});
        return f;
    }
    std::complex<double>* row(int j) { return data.data() + static_cast<std::size_t>(j) * modes; }
    const std::complex<double>* row(int j) const {
        return data.data() + static_cast<std::size_t>(j) * modes;
    }
};

// Solve the linear multipoint problem with forcing samples on the solver's
// own time grid. Throws (singular_mode) if any lattice mode has |d0| below
// tolerance. The spatial problem splits per frequency; each mode is solved
// by the closed-form machinery in mode_solver.
Trajectory solve_linear_sampled(const Field& phi, const Field& psi,
                                const SampledForcing* forcing, double t0, double dt, int steps,
                                const KernelSpec& kernel, const MultipointSpec& mp,
                                const LinearSolveOptions& opts = {},
                                LinearSolveReport* report = nullptr);

// Convenience wrapper: callable forcing t -> Field, sampled on the grid.
Trajectory solve_linear(const Field& phi, const Field& psi,
                        const std::function<Field(double)>& forcing, double T, double dt,
                        const KernelSpec& kernel, const MultipointSpec& mp,
                        const LinearSolveOptions& opts = {},
                        LinearSolveReport* report = nullptr);

// A-priori estimate diagnostics: sup-in-time solution norms against the
// data norms that are supposed to control them. Ratios should stay O(1)
// under grid refinement. forcing may be null.
struct EstimateReport {
    double sup_inf_pair = 0.0;    // sup_t (||u||_inf + ||u_t||_inf)
    double sup_hsp_pair = 0.0;    // sup_t (||u||_hsp + ||u_t||_hsp)
    double data_bound_inf = 0.0;  // sum of (hsp + L1) data norms + forcing integral
    double data_bound_hsp = 0.0;  // sum of hsp data norms + forcing integral
    double ratio_inf = 0.0;
    double ratio_hsp = 0.0;
};

EstimateReport estimate_diagnostics(const Trajectory& traj, const Field& phi, const Field& psi,
                                    const SampledForcing* forcing, double s, double p);

// Multipoint residuals of an arbitrary trajectory against given data
// (relative L2, measured spectrally). Used by solver reports and tests.
std::pair<double, double> multipoint_residuals(const Trajectory& traj, const Field& phi,
                                               const Field& psi, const MultipointSpec& mp,
                                               const std::vector<int>& lambda_idx);

}  // namespace nlwave
