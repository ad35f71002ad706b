#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlwave/errors.hpp"
#include "nlwave/grid.hpp"
#include "nlwave/kernels.hpp"

using namespace nlwave;

TEST_CASE("builtin symbols evaluate their closed forms") {
    auto bessel = symbol_bessel(2.0);
    CHECK(bessel(0.0) == doctest::Approx(1.0));
    CHECK(bessel(3.0) == doctest::Approx(0.25));
    CHECK(symbol_bessel(4.0)(1.0) == doctest::Approx(0.25));

    auto gauss = symbol_gaussian(0.5);
    CHECK(gauss(0.0) == doctest::Approx(1.0));
    CHECK(gauss(2.0) == doctest::Approx(std::exp(-1.0)));

    CHECK(symbol_constant(4.0)(123.0) == doctest::Approx(4.0));
    CHECK(symbol_zero()(7.0) == 0.0);
}

TEST_CASE("symbol factories reject bad parameters") {
    CHECK_THROWS_AS(symbol_bessel(0.0), SolverError);
    CHECK_THROWS_AS(symbol_bessel(-1.0), SolverError);
    CHECK_THROWS_AS(symbol_gaussian(0.0), SolverError);
    CHECK_THROWS_AS(symbol_constant(-2.0), SolverError);
    CHECK_THROWS_AS(symbol_constant(0.0), SolverError);
    CHECK_THROWS_AS(make_symbol("triangle", 1.0), SolverError);
    try {
        symbol_gaussian(-1.0);
        FAIL("expected a throw");
    } catch (const SolverError& e) {
        CHECK(e.code() == ErrorCode::validation);
    }
}

TEST_CASE("make_symbol dispatches by name") {
    CHECK(make_symbol("bessel", 2.0)(3.0) == doctest::Approx(0.25));
    CHECK(make_symbol("gaussian", 1.0)(1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(make_symbol("constant", 9.0)(0.0) == doctest::Approx(9.0));
    CHECK(make_symbol("zero", 42.0)(5.0) == 0.0);
}

TEST_CASE("dispersion symbol eta") {
    KernelSpec k;
    k.a = 2.0;
    k.bhat = symbol_constant(9.0);
    CHECK(eta(k, 0.0) == doctest::Approx(3.0));
    CHECK(eta(k, 8.0) == doctest::Approx(5.0));
    CHECK(eta_of_vec(k, {3.0, 4.0, 0.0}, 2) == doctest::Approx(std::sqrt(2.0 * 25.0 + 9.0)));

    KernelSpec zero_b;
    zero_b.a = 1.0;
    zero_b.bhat = symbol_zero();
    CHECK(eta(zero_b, 0.0) == 0.0);

    KernelSpec bad;
    bad.a = 0.0;
    bad.bhat = [](double) { return -1.0; };
    CHECK_THROWS_AS(eta(bad, 1.0), SolverError);
    try {
        eta(bad, 1.0);
        FAIL("expected a throw");
    } catch (const SolverError& e) {
        CHECK(e.code() == ErrorCode::numeric);
    }
}

TEST_CASE("eta_table matches pointwise evaluation") {
    Grid g(2, 8, 10.0);
    KernelSpec k;
    k.a = 0.5;
    k.bhat = symbol_bessel(2.0);
    const auto table = eta_table(k, g);
    REQUIRE(table.size() == g.size());
    const auto& xi2 = g.xi_squared();
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(table[i] == doctest::Approx(eta(k, xi2[i])).epsilon(1e-15));
}

TEST_CASE("dispersion positivity check") {
    Grid g(1, 64, 40.0);

    KernelSpec ok;
    ok.a = 0.0;
    ok.bhat = symbol_bessel(2.0);
    auto rep = check_dispersion_positivity(ok, g);
    CHECK(rep.pass);
    CHECK(rep.violations.empty());
    CHECK(rep.min_bhat > 0.0);
    CHECK(rep.min_combined == doctest::Approx(rep.min_bhat));

    // a = 0 with a vanishing bhat leaves no dispersion anywhere.
    KernelSpec flat;
    flat.a = 0.0;
    flat.bhat = symbol_zero();
    rep = check_dispersion_positivity(flat, g);
    CHECK_FALSE(rep.pass);
    CHECK(rep.violations.size() == g.size());
    CHECK(rep.min_combined == 0.0);

    // A pure Laplacian term keeps a + bhat positive.
    KernelSpec lap;
    lap.a = 1.0;
    lap.bhat = symbol_zero();
    rep = check_dispersion_positivity(lap, g);
    CHECK(rep.pass);

    KernelSpec negative;
    negative.a = 1.0;
    negative.bhat = [](double xi2) { return xi2 > 20.0 ? -0.5 : 1.0; };
    rep = check_dispersion_positivity(negative, g);
    CHECK_FALSE(rep.pass);
    CHECK(rep.min_bhat == doctest::Approx(-0.5));
    CHECK(!rep.violations.empty());

    KernelSpec neg_a;
    neg_a.a = -1.0;
    neg_a.bhat = symbol_constant(100.0);
    rep = check_dispersion_positivity(neg_a, g);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("decay class: bessel(r) saturates its own envelope exactly") {
    Grid g(1, 128, 40.0);
    KernelSpec k;
    k.ghat = symbol_bessel(3.0);
    k.r = 3.0;
    // The ratio is identically 1, so sitting exactly on the envelope; give
    // the constant one ulp of headroom against pow() rounding.
    auto rep = check_decay_class(k, g, 1.0 + 1e-12);
    CHECK(rep.pass);
    CHECK(rep.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.min_ghat > 0.0);
}

TEST_CASE("decay class: gaussian against a polynomial envelope") {
    // ghat = exp(-|xi|^2) versus (1+|xi|^2)^(-2): the ratio
    // exp(-t)(1+t)^2 (t = |xi|^2) peaks at t = 1 with value 4/e ~ 1.4715.
    // The lattice does not hit t = 1 exactly; the nearby nodes give ~1.467.
    Grid g(1, 256, 40.0);
    KernelSpec k;
    k.ghat = symbol_gaussian(1.0);
    k.r = 4.0;

    auto tight = check_decay_class(k, g, 1.0);
    CHECK_FALSE(tight.pass);
    CHECK(tight.worst_ratio > 1.4);
    CHECK(tight.worst_ratio < 4.0 / std::exp(1.0) + 1e-9);
    const double wt = tight.worst_xi[0] * tight.worst_xi[0];
    CHECK(std::abs(wt - 1.0) < 0.3);  // peak of the ratio sits near |xi|^2 = 1

    auto loose = check_decay_class(k, g, 1.5);
    CHECK(loose.pass);
    CHECK(loose.worst_ratio == doctest::Approx(tight.worst_ratio));
}

TEST_CASE("decay class: passing at r implies passing at any smaller r") {
    Grid g(1, 256, 40.0);
    KernelSpec k;
    k.ghat = symbol_gaussian(1.0);
    k.r = 4.0;
    const double C = 1.5;
    REQUIRE(check_decay_class(k, g, C).pass);
    double prev_ratio = check_decay_class(k, g, C).worst_ratio;
    for (double r : {3.0, 2.0, 1.0, 0.5}) {
        k.r = r;
        auto rep = check_decay_class(k, g, C);
        CHECK(rep.pass);
        CHECK(rep.worst_ratio <= prev_ratio + 1e-12);
        prev_ratio = rep.worst_ratio;
    }
}

TEST_CASE("decay class flags a negative symbol") {
    Grid g(1, 64, 40.0);
    KernelSpec k;
    k.ghat = [](double xi2) { return 1.0 - 0.1 * xi2; };
    k.r = 0.5;
    auto rep = check_decay_class(k, g, 100.0);
    CHECK_FALSE(rep.pass);
    CHECK(rep.min_ghat < 0.0);
}
