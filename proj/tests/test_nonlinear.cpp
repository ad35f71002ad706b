#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nlwave/errors.hpp"
#include "nlwave/field.hpp"
#include "nlwave/grid.hpp"
#include "nlwave/kernels.hpp"
#include "nlwave/nonlinearity.hpp"
#include "nlwave/norms.hpp"
#include "nlwave/picard.hpp"
#include "support/helpers.hpp"

using namespace nlwave;
using Cx = std::complex<double>;

namespace {

KernelSpec bessel_kernel() {
    KernelSpec k;
    k.a = 0.0;
    k.bhat = symbol_bessel(2.0);
    k.ghat = symbol_bessel(2.0);
    return k;
}

Field gaussian_bump(const Grid& g, double amplitude, double width = 1.0) {
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.point(j)[0];
        v[j] = amplitude * std::exp(-x * x / (width * width));
    }
    return Field::from_physical(g, std::move(v));
}

// Odd derivative-of-gaussian profile; discretely mean-free by symmetry.
Field bump_ddx(const Grid& g, double amplitude, double width = 1.0) {
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.point(j)[0];
        v[j] = amplitude * (-2.0 * x / (width * width)) * std::exp(-x * x / (width * width));
    }
    return Field::from_physical(g, std::move(v));
}

}  // namespace

TEST_CASE("builtin nonlinearities evaluate and differentiate correctly") {
    auto quad = make_nonlinearity("quadratic");
    CHECK(quad.f(3.0) == doctest::Approx(9.0));
    CHECK(quad.df(3.0) == doctest::Approx(6.0));
    CHECK(quad.d2f(3.0) == doctest::Approx(2.0));

    auto cubic = make_nonlinearity("cubic");
    CHECK(cubic.f(2.0) == doctest::Approx(8.0));
    CHECK(cubic.df(2.0) == doctest::Approx(12.0));
    CHECK(cubic.d2f(2.0) == doctest::Approx(12.0));

    auto foc = make_nonlinearity("focusing-cubic");
    CHECK(foc.f(2.0) == doctest::Approx(-8.0));
    CHECK(foc.df(2.0) == doctest::Approx(-12.0));

    auto sine = make_nonlinearity("sine");
    CHECK(sine.f(1.0) == doctest::Approx(std::sin(1.0) - 1.0));
    CHECK(sine.df(1.0) == doctest::Approx(std::cos(1.0) - 1.0));
    CHECK(sine.d2f(1.0) == doctest::Approx(-std::sin(1.0)));

    auto zero = make_nonlinearity("zero");
    CHECK(zero.is_zero());
    CHECK_FALSE(quad.is_zero());

    // f(0) = 0 across the board.
    for (const auto& nl : {quad, cubic, foc, sine}) CHECK(nl.f(0.0) == 0.0);

    CHECK_THROWS_AS(make_nonlinearity("quartic"), SolverError);
}

TEST_CASE("derivative consistency checker accepts builtins and rejects a mismatch") {
    for (const char* name : {"quadratic", "cubic", "focusing-cubic", "sine"})
        CHECK_NOTHROW(check_derivative_consistency(make_nonlinearity(name), 2.0));

    NonlinearitySpec wrong;
    wrong.name = "custom";
    wrong.f = [](double u) { return u * u; };
    wrong.df = [](double u) { return 3.0 * u; };  // should be 2u
    wrong.d2f = [](double) { return 2.0; };
    CHECK_THROWS_AS(check_derivative_consistency(wrong, 2.0), SolverError);
}

TEST_CASE("derivative envelope: hand-evaluated cases") {
    auto quad = make_nonlinearity("quadratic");
    // max(|2x|, 2) on [-2, 2] = 4.
    CHECK(derivative_envelope(quad, 2.0) == doctest::Approx(4.0));
    // max(|2x|, 2) on [-0.5, 0.5] = 2 (the second derivative dominates).
    CHECK(derivative_envelope(quad, 0.5) == doctest::Approx(2.0));

    auto cubic = make_nonlinearity("cubic");
    // max(3x^2, |6x|) on [-1, 1] = 6.
    CHECK(derivative_envelope(cubic, 1.0) == doctest::Approx(6.0));
    // At m = 3: max(27, 18) = 27.
    CHECK(derivative_envelope(cubic, 3.0) == doctest::Approx(27.0));

    // A plain-sine custom spec has envelope 1 at every radius (|cos| peaks
    // at the origin).
    NonlinearitySpec plain_sine;
    plain_sine.name = "custom";
    plain_sine.f = [](double u) { return std::sin(u); };
    plain_sine.df = [](double u) { return std::cos(u); };
    plain_sine.d2f = [](double u) { return -std::sin(u); };
    for (double m : {0.5, 1.0, 2.0, 5.0})
        CHECK(derivative_envelope(plain_sine, m) == doctest::Approx(1.0).epsilon(1e-6));

    // Monotone nondecreasing in the radius.
    double prev = 0.0;
    for (double m = 0.25; m <= 4.0; m += 0.25) {
        const double v = derivative_envelope(quad, m);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("local horizon: hand-evaluated bound and monotonicity") {
    // With f == 0 the bound is min(1/(M+1), 1/2); at M = 5 that is 1/6.
    auto zero = make_nonlinearity("zero");
    CHECK(choose_horizon(5.0, zero) == doctest::Approx(1.0 / 6.0));
    CHECK(choose_horizon(0.0, zero) == doctest::Approx(1.0 / 2.0));

    auto quad = make_nonlinearity("quadratic");
    // M = 1: fbar(2) = 4, so
    //   1 / ((M+1)(1 + 2 C0 (M+1) fbar)) = 1 / (2 * 17) = 1/34 and
    //   1 / (2 (1 + C1 (M+1)^2 fbar))    = 1 / (2 * 17) = 1/34.
    CHECK(choose_horizon(1.0, quad) == doctest::Approx(1.0 / 34.0));

    double prev = 1e9;
    for (double m = 0.1; m <= 3.0; m += 0.1) {
        const double t = choose_horizon(m, quad);
        CHECK(t > 0.0);
        CHECK(t <= 0.5);
        CHECK(t <= prev + 1e-12);
        prev = t;
    }

    // Larger calibration constants shrink the window.
    CHECK(choose_horizon(1.0, quad, 2.0, 2.0) < choose_horizon(1.0, quad, 1.0, 1.0));
}

TEST_CASE("forcing rows hold -|xi|^2 ghat * transform of f(u)") {
    Grid g(1, 64, 40.0);
    KernelSpec kern = bessel_kernel();
    auto quad = make_nonlinearity("quadratic");
    Trajectory tr(g, 0.0, 0.1);
    Field u0 = gaussian_bump(g, 0.5);
    Field v0 = Field::zero(g);
    tr.append(u0.spectral(), v0.spectral());

    const SampledForcing f = forcing_from_trajectory(tr, kern, quad, 1e8);
    REQUIRE(f.modes == g.size());
    REQUIRE(f.steps == 0);

    std::vector<double> squared(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double v = u0.physical()[j];
        squared[j] = v * v;
    }
    const Field fsq = Field::from_physical(g, std::move(squared));
    const auto& fhat = fsq.spectral();
    const auto& xi2 = g.xi_squared();
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        worst = std::max(worst,
                         std::abs(f.row(0)[k] + xi2[k] * kern.ghat(xi2[k]) * fhat[k]));
    CHECK(worst < 1e-13);
}

TEST_CASE("forcing construction trips the overflow guard on huge iterates") {
    Grid g(1, 32, 40.0);
    Trajectory tr(g, 0.0, 0.1);
    Field huge = gaussian_bump(g, 1e9);
    tr.append(huge.spectral(), Field::zero(g).spectral());
    CHECK_THROWS_AS(forcing_from_trajectory(tr, bessel_kernel(), make_nonlinearity("quadratic"),
                                            1e8),
                    BlowupError);
}

TEST_CASE("picard map with zero nonlinearity reproduces the linear solution") {
    Grid g(1, 64, 40.0);
    KernelSpec kern = bessel_kernel();
    Field phi = gaussian_bump(g, 0.3);
    Field psi = Field::zero(g);
    auto zero = make_nonlinearity("zero");
    FixedPointOptions fpo;
    fpo.t_local = 0.25;
    fpo.auto_calibrate = false;

    const LocalSolveResult res = solve_local(phi, psi, kern, MultipointSpec::cauchy(), zero,
                                             1e-2, fpo);
    CHECK(res.converged);
    CHECK(res.iterations == 1);
    REQUIRE(res.log.size() == 1);
    CHECK(res.log[0].delta_y < 1e-14);

    Trajectory lin = solve_linear_sampled(phi, psi, nullptr, 0.0, 1e-2, 25, kern,
                                          MultipointSpec::cauchy());
    CHECK(trajectory_y_diff(res.traj, lin, 2.0, 2.0) < 1e-13);
}

TEST_CASE("small-data quadratic solve contracts and satisfies the equation") {
    Grid g(1, 128, 40.0);
    KernelSpec kern = bessel_kernel();
    auto quad = make_nonlinearity("quadratic");
    Field phi = bump_ddx(g, 0.05);
    Field psi = Field::zero(g);
    const double dt = 1e-3;

    FixedPointOptions fpo;
    fpo.tol_fp = 1e-11;
    const LocalSolveResult res = solve_local(phi, psi, kern, MultipointSpec::cauchy(), quad,
                                             dt, fpo);
    CHECK(res.converged);
    CHECK(res.iterations <= 30);
    CHECK(res.max_valid_ratio <= 0.55);
    CHECK(res.t_used > 0.0);

    // Deltas shrink monotonically once the ratio is defined.
    for (std::size_t i = 1; i < res.log.size(); ++i)
        CHECK(res.log[i].delta_y <= res.log[i - 1].delta_y);

    // The converged iterate satisfies the centered-difference equation to
    // second order; at dt = 1e-3 that is far below 1e-6.
    CHECK(equation_residual(res.traj, kern, quad) < 1e-6);
}

TEST_CASE("multipoint coupling holds on converged nonlinear solves") {
    Grid g(1, 128, 40.0);
    KernelSpec kern = bessel_kernel();
    auto quad = make_nonlinearity("quadratic");
    MultipointSpec mp;
    mp.alpha = {Cx(0.2, 0.0)};
    mp.beta = {Cx(0.1, 0.0)};
    mp.lambda = {0.5};
    Field phi = bump_ddx(g, 0.05);
    Field psi = Field::zero(g);

    FixedPointOptions fpo;
    fpo.tol_fp = 1e-11;
    fpo.t_local = 0.5;  // window must reach the coupling time
    fpo.auto_calibrate = false;
    LocalSolveResult res = solve_local(phi, psi, kern, mp, quad, 1e-3, fpo);
    REQUIRE(res.converged);

    const auto residuals =
        multipoint_residuals(res.traj, phi, psi, mp, res.linear_report.snapping.index);
    CHECK(residuals.first < 1e-9);
    CHECK(residuals.second < 1e-9);
}

TEST_CASE("window floor covers the largest coupling time") {
    Grid g(1, 64, 40.0);
    KernelSpec kern = bessel_kernel();
    auto quad = make_nonlinearity("quadratic");
    MultipointSpec mp;
    mp.alpha = {Cx(0.1, 0.0)};
    mp.beta = {Cx(0.0, 0.0)};
    mp.lambda = {0.4};
    Field phi = bump_ddx(g, 0.02);
    const LocalSolveResult res =
        solve_local(phi, Field::zero(g), kern, mp, quad, 1e-2, {});
    CHECK(res.converged);
    CHECK(res.t_used >= 0.4 - 1e-12);
}

TEST_CASE("continuation with zero nonlinearity splits exactly") {
    Grid g(1, 64, 40.0);
    KernelSpec kern = bessel_kernel();
    auto zero = make_nonlinearity("zero");
    Field phi = gaussian_bump(g, 0.4);
    Field psi = bump_ddx(g, 0.1);
    const double dt = 1e-2;
    const double T = 2.0;

    ContinuationOptions copts;
    copts.fp.t_local = 0.25;  // force eight windows
    const ContinuationResult windowed =
        continue_solution(phi, psi, kern, MultipointSpec::cauchy(), zero, dt, T, copts);
    CHECK(windowed.status == RunStatus::completed);
    CHECK(windowed.windows.size() == 8);

    Trajectory whole = solve_linear_sampled(phi, psi, nullptr, 0.0, dt, 200, kern,
                                            MultipointSpec::cauchy());
    REQUIRE(windowed.traj.samples() == whole.samples());
    // Per-step propagation is exact, so stitching windows changes nothing
    // beyond roundoff.
    CHECK(trajectory_y_diff(windowed.traj, whole, 2.0, 2.0) < 1e-10);
}

TEST_CASE("continuation windows agree with a single long window for small data") {
    Grid g(1, 128, 40.0);
    KernelSpec kern = bessel_kernel();
    auto quad = make_nonlinearity("quadratic");
    Field phi = bump_ddx(g, 0.02);
    Field psi = Field::zero(g);
    const double dt = 1e-3;
    const double T = 0.5;

    ContinuationOptions split;
    split.fp.t_local = 0.125;
    split.fp.tol_fp = 1e-12;
    const auto a = continue_solution(phi, psi, kern, MultipointSpec::cauchy(), quad, dt, T,
                                     split);

    ContinuationOptions whole;
    whole.fp.t_local = T;
    whole.fp.tol_fp = 1e-12;
    whole.fp.auto_calibrate = false;
    const auto b = continue_solution(phi, psi, kern, MultipointSpec::cauchy(), quad, dt, T,
                                     whole);

    REQUIRE(a.status == RunStatus::completed);
    REQUIRE(b.status == RunStatus::completed);
    REQUIRE(a.traj.samples() == b.traj.samples());
    CHECK(a.windows.size() == 4);
    CHECK(b.windows.size() == 1);
    CHECK(trajectory_y_diff(a.traj, b.traj, 2.0, 2.0) < 1e-6);
}

TEST_CASE("continuation records window metadata and iteration logs") {
    Grid g(1, 64, 40.0);
    KernelSpec kern = bessel_kernel();
    auto quad = make_nonlinearity("quadratic");
    Field phi = bump_ddx(g, 0.05);
    const ContinuationResult res = continue_solution(phi, Field::zero(g), kern,
                                                     MultipointSpec::cauchy(), quad, 1e-3, 0.3,
                                                     {});
    REQUIRE(res.status == RunStatus::completed);
    REQUIRE(!res.windows.empty());
    double t = 0.0;
    for (const auto& w : res.windows) {
        CHECK(w.t_start == doctest::Approx(t).epsilon(1e-9));
        CHECK(w.t_end > w.t_start);
        CHECK(w.iterations >= 1);
        CHECK(!w.log.empty());
        CHECK(w.y_norm_end > 0.0);
        t = w.t_end;
    }
    CHECK(t >= 0.3 - 1e-9);
    CHECK(res.traj.t_end() == doctest::Approx(t).epsilon(1e-9));
}

TEST_CASE("large focusing data is classified as blowup") {
    Grid g(1, 128, 40.0);
    KernelSpec kern = bessel_kernel();
    auto foc = make_nonlinearity("focusing-cubic");
    Field phi = gaussian_bump(g, 5.0);
    Field psi = Field::zero(g);

    const ContinuationResult res = continue_solution(phi, psi, kern, MultipointSpec::cauchy(),
                                                     foc, 1e-3, 5.0, {});
    CHECK(res.status == RunStatus::blowup);
    CHECK(res.t_est > 0.0);
    CHECK(res.t_est <= 5.0);
}

TEST_CASE("small-data driver: validation and report") {
    Grid g(1, 128, 40.0);
    KernelSpec kern = bessel_kernel();
    auto quad = make_nonlinearity("quadratic");
    const double delta = 1e-3;

    // Data above the requested ball is rejected up front.
    Field big = bump_ddx(g, 1.0);
    CHECK_THROWS_AS(solve_global_smalldata(big, Field::zero(g), kern, MultipointSpec::cauchy(),
                                           quad, 1e-3, 0.5, delta),
                    SolverError);

    // Genuinely small data runs to the horizon and stays within a modest
    // multiple of delta.
    Field small = bump_ddx(g, 1e-4);
    REQUIRE(norm_hsp(small, 2.0, 2.0) + norm_lp(small, 1.0) < delta);
    const auto [cont, rep] = solve_global_smalldata(small, Field::zero(g), kern,
                                                    MultipointSpec::cauchy(), quad, 1e-3, 0.5,
                                                    delta);
    CHECK(cont.status == RunStatus::completed);
    CHECK(rep.delta == delta);
    CHECK(rep.data_size < delta);
    CHECK(rep.t_reached >= 0.5 - 1e-9);
    CHECK(rep.sup_hs_pair < 10.0 * delta);
    CHECK(rep.bound_ratio == doctest::Approx(rep.sup_hs_pair / delta));
    CHECK(rep.ws_ball_ok);
}

TEST_CASE("equation residual needs at least three samples") {
    Grid g(1, 32, 40.0);
    Trajectory tr(g, 0.0, 0.1);
    tr.append(Field::zero(g).spectral(), Field::zero(g).spectral());
    tr.append(Field::zero(g).spectral(), Field::zero(g).spectral());
    CHECK_THROWS_AS(equation_residual(tr, bessel_kernel(), make_nonlinearity("zero")),
                    SolverError);
}

TEST_CASE("equation residual decreases at second order in dt") {
    Grid g(1, 64, 40.0);
    KernelSpec kern = bessel_kernel();
    auto quad = make_nonlinearity("quadratic");
    Field phi = bump_ddx(g, 0.1);
    Field psi = Field::zero(g);

    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
        const double dt = 2e-3 / (1 << level);
        FixedPointOptions fpo;
        fpo.t_local = 0.25;
        fpo.auto_calibrate = false;
        fpo.tol_fp = 1e-12;
        const auto res = solve_local(phi, psi, kern, MultipointSpec::cauchy(), quad, dt, fpo);
        REQUIRE(res.converged);
        const double r = equation_residual(res.traj, kern, quad);
        if (level > 0) {
            const double factor = prev / r;
            CHECK(factor > 3.5);
            CHECK(factor < 4.5);
        }
        prev = r;
    }
}
