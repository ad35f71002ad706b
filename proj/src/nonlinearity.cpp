#include "nlwave/nonlinearity.hpp"

#include <cmath>

#include "nlwave/errors.hpp"

namespace nlwave {

NonlinearitySpec make_nonlinearity(const std::string& name) {
    NonlinearitySpec nl;
    nl.name = name;
    if (name == "zero") {
        nl.f = nullptr;
        return nl;
    }
    if (name == "quadratic") {
        nl.f = [](double u) { return u * u; };
        nl.df = [](double u) { return 2.0 * u; };
        nl.d2f = [](double) { return 2.0; };
        nl.alpha_order = 1;
        return nl;
    }
    if (name == "cubic") {
        nl.f = [](double u) { return u * u * u; };
        nl.df = [](double u) { return 3.0 * u * u; };
        nl.d2f = [](double u) { return 6.0 * u; };
        nl.alpha_order = 2;
        return nl;
    }
    if (name == "focusing-cubic") {
        nl.f = [](double u) { return -u * u * u; };
        nl.df = [](double u) { return -3.0 * u * u; };
        nl.d2f = [](double u) { return -6.0 * u; };
        nl.alpha_order = 2;
        return nl;
    }
    if (name == "sine") {
        // sin(u) - u: vanishes to third order at 0.
        nl.f = [](double u) { return std::sin(u) - u; };
        nl.df = [](double u) { return std::cos(u) - 1.0; };
        nl.d2f = [](double u) { return -std::sin(u); };
        nl.alpha_order = 2;
        return nl;
    }
    throw SolverError(ErrorCode::validation,
                      "unknown nonlinearity '" + name +
                          "' (expected zero|quadratic|cubic|focusing-cubic|sine)");
}

void check_derivative_consistency(const NonlinearitySpec& nl, double range, double rel_tol) {
    if (nl.is_zero()) return;
    const int samples = 41;
    const double h = 1e-5 * std::max(1.0, range);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = -range + 2.0 * range * i / (samples - 1);
        const double fd1 = (nl.f(x + h) - nl.f(x - h)) / (2.0 * h);
        const double fd2 = (nl.f(x + h) - 2.0 * nl.f(x) + nl.f(x - h)) / (h * h);
        const double scale1 = std::max(1.0, std::abs(nl.df(x)));
        const double scale2 = std::max(1.0, std::abs(nl.d2f(x)));
        worst = std::max(worst, std::abs(fd1 - nl.df(x)) / scale1);
        worst = std::max(worst, std::abs(fd2 - nl.d2f(x)) / scale2);
    }
    if (!(worst <= rel_tol))
        throw SolverError(ErrorCode::validation,
                          "nonlinearity '" + nl.name +
                              "': derivatives inconsistent with finite differences "
                              "(worst relative error " +
                              std::to_string(worst) + ")");
}

double derivative_envelope(const NonlinearitySpec& nl, double m) {
    if (nl.is_zero()) return 0.0;
    if (!(m >= 0.0) || !std::isfinite(m))
        throw SolverError(ErrorCode::validation, "derivative_envelope: bad argument");
    const int samples = 1024;
    double best = 0.0;
    auto eat = [&](double x) {
        const double d1 = std::abs(nl.df(x));
        const double d2 = std::abs(nl.d2f(x));
        if (!std::isfinite(d1) || !std::isfinite(d2))
            throw SolverError(ErrorCode::numeric,
                              "derivative_envelope: non-finite derivative of '" + nl.name + "'");
        best = std::max({best, d1, d2});
    };
    for (int i = 0; i < samples; ++i) eat(-m + 2.0 * m * i / (samples - 1));
    eat(-m);
    eat(0.0);
    eat(m);
    return best;
}

double choose_horizon(double data_norm, const NonlinearitySpec& nl, double c0, double c1) {
    if (!(data_norm >= 0.0) || !std::isfinite(data_norm))
        throw SolverError(ErrorCode::validation, "choose_horizon: bad data norm");
    const double m1 = data_norm + 1.0;
    const double fb = derivative_envelope(nl, m1);
    const double t_fixed = 1.0 / (m1 * (1.0 + 2.0 * c0 * m1 * fb));
    const double t_contract = 0.5 / (1.0 + c1 * m1 * m1 * fb);
    return std::min(t_fixed, t_contract);
}

}  // namespace nlwave
