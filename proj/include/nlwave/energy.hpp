#pragma once

#include <cstddef>
#include <vector>

#include "nlwave/field.hpp"
#include "nlwave/kernels.hpp"
#include "nlwave/multipoint.hpp"
#include "nlwave/nonlinearity.hpp"
#include "nlwave/trajectory.hpp"

namespace nlwave {

// How to treat the zero Fourier mode where the B-operator symbol
// |xi|^{-1} ghat^{-1/2} is singular.
enum class ZeroModePolicy {
    strict,     ///< require the affected field to be mean-zero; error otherwise
    projected,  ///< silently drop the zero mode and annotate the record
};

struct EnergyOptions {
    ZeroModePolicy zero_mode = ZeroModePolicy::strict;
    /// Mean magnitude above mean_tol * (1 + |field|_inf) violates "strict".
    double mean_tol = 1e-8;
    /// Absolute tolerance target for the adaptive quadrature in G(v).
    double quad_tol = 1e-12;
};

/// B = (-Δ g∗)^{-1/2}: Fourier multiplier |xi|^{-1} ghat(xi)^{-1/2}.
/// The zero mode is always mapped to zero; under the strict policy the
/// input must be (numerically) mean-zero. Requires ghat > 0 away from 0.
Field apply_B(const Field& f, const RadialSymbol& ghat, const EnergyOptions& opts = {});

/// B^{-1}: multiplier |xi| ghat(xi)^{1/2}; annihilates the zero mode.
Field apply_B_inverse(const Field& f, const RadialSymbol& ghat, const EnergyOptions& opts = {});

/// G(v) = ∫_0^v f(s) ds by adaptive Simpson quadrature (node-reusing
/// bisection). Throws ErrorCode::numeric if the requested tolerance is
/// unreachable within the depth budget.
double potential_primitive(const NonlinearitySpec& nl, double v, double quad_tol = 1e-12);

/// ∫ G(u(x)) dx over the box, by cell quadrature of the primitive.
double potential_integral(const Field& u, const NonlinearitySpec& nl, double quad_tol = 1e-12);

/// Smallest k >= 0 with G(r) >= -k r^2 on [-r_max, r_max], estimated on a
/// uniform sample. Returns 0 when G is nonnegative on the range.
double potential_lower_bound_constant(const NonlinearitySpec& nl, double r_max,
                                      std::size_t samples = 512, double quad_tol = 1e-12);

/// One energy evaluation. Two variants of the functional are reported:
///   e_derived = |B u_t|^2 + |F^{-1}[(a|xi|^2 + bhat)^{1/2} |xi|^{-1} ghat^{-1/2} uhat]|^2
///               + 2 ∫ G(u) dx,
/// whose time derivative vanishes along the flow (obtained by pairing the
/// equation with B^2 u_t), split here into kinetic / dispersive / nonlocal /
/// potential summands; and
///   e_alt = |B u_t|^2 + a |F^{-1}[ghat uhat]|^2 + |B(b∗u)|^2 + 2 ∫ G(u) dx,
/// an alternative quadratic-weight form reported for comparison only (it is
/// not conserved in general and never gates anything).
struct EnergyRecord {
    double t = 0.0;
    double e_alt = 0.0;
    double e_derived = 0.0;
    double kinetic = 0.0;     ///< |B u_t|^2
    double dispersive = 0.0;  ///< a * sum ghat^{-1} |uhat|^2
    double nonlocal = 0.0;    ///< sum bhat |xi|^{-2} ghat^{-1} |uhat|^2
    double potential = 0.0;   ///< 2 ∫ G(u) dx
    double drift_rel = 0.0;   ///< filled by energy_drift_monitor
    bool zero_mode_dropped = false;  ///< a singular zero mode was projected out
};

EnergyRecord energy(const Field& u, const Field& ut, const KernelSpec& kernel,
                    const NonlinearitySpec& nl, const EnergyOptions& opts = {});

struct EnergySeries {
    std::vector<EnergyRecord> records;
    double max_drift_derived = 0.0;  ///< max relative drift of e_derived
    double max_drift_alt = 0.0;      ///< max relative drift of e_alt
    bool flagged = false;            ///< derived drift exceeded tol_e
};

/// Evaluates the energy along a trajectory every `stride` samples (always
/// including the first and last) and reports relative drift against the
/// initial value. Only the derived variant is compared against tol_e.
EnergySeries energy_drift_monitor(const Trajectory& traj, const KernelSpec& kernel,
                                  const NonlinearitySpec& nl, std::size_t stride = 1,
                                  double tol_e = 1e-5, const EnergyOptions& opts = {});

/// Check of the first time-integral of the equation for a = 0:
///   u_t(t) = psi + sum_k beta_k u_t(lambda_k)
///            - ∫_0^t b∗u dτ + ∫_0^t Δ[g∗f(u)] dτ,
/// evaluated spectrally with cumulative trapezoid quadrature in time. Also
/// reports the |B u_t|_{L^2} series as a finiteness diagnostic.
struct FirstIntegralReport {
    std::vector<double> times;
    std::vector<double> residuals;  ///< relative L^2 residual per sampled time
    double max_residual = 0.0;
    std::vector<double> but_norms;  ///< |B u_t|_{L^2} at the sampled times
    bool pass = false;              ///< max_residual < tol
};

FirstIntegralReport check_first_integral(const Trajectory& traj, const Field& psi,
                                         const KernelSpec& kernel, const MultipointSpec& mp,
                                         const NonlinearitySpec& nl, double tol,
                                         std::size_t stride = 1,
                                         const EnergyOptions& opts = {});

}  // namespace nlwave
