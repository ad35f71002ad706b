#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nlwave/field.hpp"
#include "nlwave/grid.hpp"
#include "nlwave/kernels.hpp"
#include "nlwave/norms.hpp"
#include "support/helpers.hpp"

using namespace nlwave;
using Cx = std::complex<double>;

namespace {

// Dense evaluation of the quadrature-weighted transform straight from its
// definition: u_hat(xi_k) = h^dim * sum_j u(x_j) exp(-i xi_k . x_j).
std::vector<Cx> dense_forward(const Grid& g, const std::vector<double>& u) {
    const double w = std::pow(g.h(), g.dim());
    std::vector<Cx> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto xi = g.xi(k);
        Cx acc = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const auto x = g.point(j);
            double phase = 0.0;
            for (int d = 0; d < g.dim(); ++d)
                phase -= xi[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
            acc += u[j] * Cx(std::cos(phase), std::sin(phase));
        }
        out[k] = w * acc;
    }
    return out;
}

std::vector<Cx> dense_inverse(const Grid& g, const std::vector<Cx>& coeffs) {
    const double w = 1.0 / g.volume();
    std::vector<Cx> out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto x = g.point(j);
        Cx acc = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const auto xi = g.xi(k);
            double phase = 0.0;
            for (int d = 0; d < g.dim(); ++d)
                phase += xi[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
            acc += coeffs[k] * Cx(std::cos(phase), std::sin(phase));
        }
        out[j] = w * acc;
    }
    return out;
}

}  // namespace

TEST_CASE("grid construction and lattice geometry") {
    Grid g(1, 8, 16.0);
    CHECK(g.h() == doctest::Approx(2.0));
    CHECK(g.volume() == doctest::Approx(16.0));
    CHECK(g.size() == 8);
    CHECK(g.point(0)[0] == doctest::Approx(-8.0));
    CHECK(g.point(4)[0] == doctest::Approx(0.0));
    CHECK(g.signed_index(3) == 3);
    CHECK(g.signed_index(4) == -4);
    CHECK(g.xi(1)[0] == doctest::Approx(2.0 * M_PI / 16.0));
    CHECK(g.xi(7)[0] == doctest::Approx(-2.0 * M_PI / 16.0));
    CHECK(g.xi_squared()[g.zero_mode()] == 0.0);

    Grid g3(3, 4, 5.0);
    CHECK(g3.size() == 64);
    CHECK(g3.volume() == doctest::Approx(125.0));

    CHECK_THROWS_AS(Grid(0, 8, 1.0), SolverError);
    CHECK_THROWS_AS(Grid(4, 8, 1.0), SolverError);
    CHECK_THROWS_AS(Grid(1, 12, 1.0), SolverError);  // not a power of two
    CHECK_THROWS_AS(Grid(1, 2, 1.0), SolverError);
    CHECK_THROWS_AS(Grid(1, 8, -1.0), SolverError);
}

TEST_CASE("forward transform matches the dense definition") {
    std::mt19937_64 rng(11);
    for (int dim : {1, 2}) {
        Grid g(dim, 8, 12.5);
        std::vector<double> u(g.size());
        for (auto& v : u) v = testutil::uniform(rng, -1.0, 1.0);
        const auto fast = Field::from_physical(g, u).spectral();
        const auto slow = dense_forward(g, u);
        REQUIRE(fast.size() == slow.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < fast.size(); ++k)
            worst = std::max(worst, std::abs(fast[k] - slow[k]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("inverse transform matches the dense definition") {
    std::mt19937_64 rng(12);
    Grid g(1, 16, 7.0);
    // Conjugate-symmetric coefficients so the field is real.
    std::vector<double> u(g.size());
    for (auto& v : u) v = testutil::uniform(rng, -1.0, 1.0);
    auto coeffs = Field::from_physical(g, u).spectral();
    const auto back = Field::from_spectral(g, coeffs).physical();
    const auto slow = dense_inverse(g, coeffs);
    for (std::size_t j = 0; j < g.size(); ++j) {
        CHECK(std::abs(back[j] - slow[j].real()) < 1e-12);
        CHECK(std::abs(slow[j].imag()) < 1e-12);
    }
}

TEST_CASE("round trip physical -> spectral -> physical") {
    std::mt19937_64 rng(13);
    for (int dim : {1, 2, 3}) {
        Grid g(dim, dim == 3 ? 8 : 32, 20.0);
        std::vector<double> u(g.size());
        for (auto& v : u) v = testutil::uniform(rng, -2.0, 2.0);
        Field f = Field::from_physical(g, u);
        const auto coeffs = f.spectral();
        const auto back = Field::from_spectral(g, coeffs).physical();
        double worst = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            worst = std::max(worst, std::abs(back[j] - u[j]));
        CHECK(worst < 1e-13);
    }
}

TEST_CASE("Parseval identity in the scaled convention") {
    std::mt19937_64 rng(14);
    Grid g(2, 16, 9.0);
    std::vector<double> u(g.size());
    for (auto& v : u) v = testutil::uniform(rng, -1.0, 1.0);
    Field f = Field::from_physical(g, u);

    const double w = std::pow(g.h(), g.dim());
    double phys = 0.0;
    for (double v : u) phys += w * v * v;
    double spec = 0.0;
    for (const auto& c : f.spectral()) spec += std::norm(c);
    spec /= g.volume();
    CHECK(phys == doctest::Approx(spec).epsilon(1e-12));
    CHECK(norm_l2_spectral(f) == doctest::Approx(norm_lp(f, 2.0)).epsilon(1e-12));
}

TEST_CASE("single harmonic: norm closed forms") {
    Grid g(1, 256, 40.0);
    const double A = 0.7;
    const int k0 = 5;
    const double xi0 = 2.0 * M_PI * k0 / g.length();
    std::vector<double> u(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) u[j] = A * std::cos(xi0 * g.point(j)[0]);
    Field f = Field::from_physical(g, u);

    CHECK(norm_lp(f, 2.0) == doctest::Approx(A * std::sqrt(g.length() / 2.0)).epsilon(1e-12));
    CHECK(norm_linf(f) == doctest::Approx(A).epsilon(1e-12));
    // H^{s,2} multiplies the L2 norm by (1+xi0^2)^(s/2) for a pure harmonic.
    for (double s : {0.5, 1.0, 2.0}) {
        const double expect = A * std::sqrt(g.length() / 2.0) * std::pow(1.0 + xi0 * xi0, 0.5 * s);
        CHECK(norm_hsp(f, s, 2.0) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(norm_y(f, 2.0, 2.0, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(norm_hsp(f, 2.0, 2.0) + norm_linf(f)).epsilon(1e-12));

    // cos^2 is a trig polynomial, so box quadrature integrates it exactly:
    // L1 norm = A * L / 2.
    std::vector<double> u2(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double c = std::cos(xi0 * g.point(j)[0]);
        u2[j] = A * c * c;
    }
    Field f2 = Field::from_physical(g, u2);
    CHECK(norm_lp(f2, 1.0) == doctest::Approx(A * g.length() / 2.0).epsilon(1e-12));
    CHECK(f2.mean().real() == doctest::Approx(A / 2.0).epsilon(1e-12));
    CHECK(f2.mean().imag() == doctest::Approx(0.0));
}

TEST_CASE("norm_lp rejects p < 1") {
    Grid g(1, 8, 1.0);
    Field f = Field::zero(g);
    CHECK_THROWS_AS(norm_lp(f, 0.5), SolverError);
}

TEST_CASE("norm bundle is consistent with individual norms") {
    std::mt19937_64 rng(900);
    Grid g(1, 64, 25.0);
    Field f = testutil::random_smooth_field(g, rng, 1.0);
    const auto nb = norm_bundle(f, 1.5, 2.0);
    CHECK(nb.hsp == doctest::Approx(norm_hsp(f, 1.5, 2.0)).epsilon(1e-13));
    CHECK(nb.linf == doctest::Approx(norm_linf(f)).epsilon(1e-13));
    CHECK(nb.l1 == doctest::Approx(norm_lp(f, 1.0)).epsilon(1e-13));
    CHECK(nb.l2 == doctest::Approx(norm_lp(f, 2.0)).epsilon(1e-13));
}

TEST_CASE("Fourier multipliers against the dense oracle") {
    std::mt19937_64 rng(15);
    Grid g(1, 16, 10.0);
    std::vector<double> u(g.size());
    for (auto& v : u) v = testutil::uniform(rng, -1.0, 1.0);
    Field f = Field::from_physical(g, u);

    const auto symbol = symbol_bessel(2.0);
    Field fast = apply_radial_multiplier(f, symbol);

    auto coeffs = dense_forward(g, u);
    const auto& xi2 = g.xi_squared();
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= symbol(xi2[k]);
    const auto slow = dense_inverse(g, coeffs);

    const auto& out = fast.physical();
    for (std::size_t j = 0; j < g.size(); ++j)
        CHECK(std::abs(out[j] - slow[j].real()) < 1e-12);

    // The general multiplier path agrees with the radial fast path.
    Field gen = apply_multiplier(f, [&](const std::array<double, 3>& xi, int dim) {
        double s = 0.0;
        for (int d = 0; d < dim; ++d) s += xi[static_cast<std::size_t>(d)] * xi[static_cast<std::size_t>(d)];
        return Cx(symbol(s), 0.0);
    });
    const auto& gp = gen.physical();
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(gp[j] - out[j]) < 1e-13);
}

TEST_CASE("multiplier rejects non-finite symbols") {
    Grid g(1, 8, 5.0);
    Field f = Field::zero(g);
    CHECK_THROWS_AS(apply_radial_multiplier(f, [](double xi2) { return 1.0 / xi2; }),
                    SolverError);
}

TEST_CASE("conjugate symmetry diagnostics") {
    std::mt19937_64 rng(16);
    Grid g(1, 32, 12.0);
    std::vector<double> u(g.size());
    for (auto& v : u) v = testutil::uniform(rng, -1.0, 1.0);
    Field real_field = Field::from_physical(g, u);
    CHECK(real_field.conjugate_symmetry_defect() < 1e-13);

    auto coeffs = real_field.spectral();
    coeffs[3] += Cx(0.0, 0.4);  // break u_hat(k) == conj(u_hat(-k))
    Field broken = Field::from_spectral(g, coeffs);
    CHECK(broken.conjugate_symmetry_defect() > 0.3);
    broken.physical();
    CHECK(broken.realization_imag_max() > 1e-3);
}

TEST_CASE("derivative via |xi|^2 multiplier reproduces the Laplacian of a harmonic") {
    Grid g(1, 64, 2.0 * M_PI);
    const int k0 = 3;
    std::vector<double> u(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) u[j] = std::sin(k0 * g.point(j)[0]);
    Field f = Field::from_physical(g, u);
    Field lap = apply_radial_multiplier(f, [](double xi2) { return -xi2; });
    const auto& out = lap.physical();
    for (std::size_t j = 0; j < g.size(); ++j)
        CHECK(out[j] == doctest::Approx(-double(k0 * k0) * u[j]).epsilon(1e-10).scale(1.0));
}
