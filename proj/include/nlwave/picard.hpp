#pragma once

#include <cmath>

#include "nlwave/linear_solver.hpp"
#include "nlwave/nonlinearity.hpp"

namespace nlwave {

// Spectral forcing induced by an iterate: row j holds -|xi|^2 ghat(xi) *
// transform of f(u(., t_j)), the nonlinear term moved to the right-hand
// side. f acts on the real part of the realized field. Throws (blowup) when
// |u| exceeds overflow_guard anywhere — iterates that escape are classified,
// not propagated as NaNs.
SampledForcing forcing_from_trajectory(const Trajectory& traj, const KernelSpec& kernel,
                                       const NonlinearitySpec& nl, double overflow_guard);

struct FixedPointOptions {
    double c0 = 1.0;             // calibration constant in the horizon bound
    double c1 = 1.0;
    double t_local = 0.0;        // 0 = derive from the data norm
    double tol_fp = 1e-9;        // Y-norm difference for convergence
    int max_iter = 30;
    double overflow_guard = 1e8;
    bool auto_calibrate = true;  // halve the window while contraction is weak
    double target_ratio = 0.5;   // calibration aims below this measured ratio
    int min_steps = 8;           // window floor, in time steps
    double escape_norm = 1e6;    // iterate Y-norm above this classifies as blowup
    double s = 2.0;              // Y-norm Sobolev index
    double p = 2.0;              // Y-norm Lebesgue index
    LinearSolveOptions linear;
};

// One application of the solution map: linear multipoint solve driven by the
// forcing of the given iterate.
Trajectory picard_map(const Trajectory& iterate, const Field& phi, const Field& psi,
                      const KernelSpec& kernel, const MultipointSpec& mp,
                      const NonlinearitySpec& nl, const FixedPointOptions& opts = {},
                      LinearSolveReport* report = nullptr);

// max over samples of ||u||_{H^{s,p}} + ||u||_inf — the iteration space norm.
double trajectory_y_norm(const Trajectory& traj, double s, double p);
// Same norm of the difference of two trajectories on a common grid.
double trajectory_y_diff(const Trajectory& a, const Trajectory& b, double s, double p);

struct IterationRecord {
    int iter = 0;
    double delta_y = 0.0;  // ||u_k - u_{k-1}||_Y
    double ratio = 0.0;    // delta_k / delta_{k-1}; 0 when not yet defined
    bool ratio_valid = false;
};

struct LocalSolveResult {
    Trajectory traj;
    std::vector<IterationRecord> log;
    bool converged = false;
    double t_used = 0.0;
    int iterations = 0;
    int calibration_halvings = 0;
    double max_valid_ratio = 0.0;
    LinearSolveReport linear_report;
};

// Fixed-point solve on one local window. Starting iterate is the homogeneous
// linear solution; the window length comes from choose_horizon unless pinned,
// is floored by the largest multipoint coupling time, and is halved while the
// measured contraction ratio stays above target_ratio (auto_calibrate).
// Throws: no_convergence (iteration budget exhausted or window floor reached
// while still not contracting), blowup (overflow guard), singular_mode.
LocalSolveResult solve_local(const Field& phi, const Field& psi, const KernelSpec& kernel,
                             const MultipointSpec& mp, const NonlinearitySpec& nl, double dt,
                             const FixedPointOptions& opts = {});

enum class RunStatus { completed, blowup };

struct ContinuationOptions {
    FixedPointOptions fp;
    double blowup_threshold = 1e6;  // Y-norm escape level
    // false: every window re-imposes the multipoint coupling relative to its
    // own start; true: coupling only on the first window, plain Cauchy after.
    bool multipoint_first_window_only = false;
};

struct WindowRecord {
    double t_start = 0.0;
    double t_end = 0.0;
    int iterations = 0;
    int halvings = 0;
    double y_norm_end = 0.0;
    std::vector<IterationRecord> log;  // of the final (accepted) window length
};

struct ContinuationResult {
    Trajectory traj;
    RunStatus status = RunStatus::completed;
    double t_est = 0.0;  // blowup time estimate when status == blowup
    std::vector<WindowRecord> windows;
};

// Chain local solves until t_total. Windows re-derive their length from the
// current data norm, so shrinking windows + the escape threshold provide the
// blowup classification. With multipoint coupling the final window may
// overrun t_total (it can never be shorter than the largest coupling time).
ContinuationResult continue_solution(const Field& phi, const Field& psi,
                                     const KernelSpec& kernel, const MultipointSpec& mp,
                                     const NonlinearitySpec& nl, double dt, double t_total,
                                     const ContinuationOptions& opts = {});

// Small-data global driver: validates the data is below delta in the
// H^s + L1 composite, runs continuation over the horizon, and reports the
// sup-in-time norm growth relative to delta.
struct SmalldataReport {
    double delta = 0.0;          // requested bound
    double data_size = 0.0;      // measured composite data norm
    double sup_hs_pair = 0.0;    // sup_t (||u||_{H^s} + ||u_t||_{H^s})
    double bound_ratio = 0.0;    // sup_hs_pair / delta
    double sup_w_pair = 0.0;     // sup_t of (H^s + L^inf) composites of u, u_t
    bool ws_ball_ok = false;     // sup_w_pair <= 3 c0 delta
    RunStatus status = RunStatus::completed;
    double t_reached = 0.0;
};

std::pair<ContinuationResult, SmalldataReport> solve_global_smalldata(
    const Field& phi, const Field& psi, const KernelSpec& kernel, const MultipointSpec& mp,
    const NonlinearitySpec& nl, double dt, double horizon, double delta,
    const ContinuationOptions& opts = {});

// Discretized-equation residual: per interior time sample, the spectral L2
// norm of (u_{j+1} - 2 u_j + u_{j-1})/dt^2 + (a|xi|^2 + bhat) u_j
// + |xi|^2 ghat fhat(u_j). Second-order small for a converged solution.
std::vector<double> equation_residual_series(const Trajectory& traj, const KernelSpec& kernel,
                                             const NonlinearitySpec& nl);

// Max of the series; needs at least three samples.
double equation_residual(const Trajectory& traj, const KernelSpec& kernel,
                         const NonlinearitySpec& nl);

}  // namespace nlwave
