#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "nlwave/errors.hpp"

namespace nlwave {

// The nonlocal-in-time data coupling: the initial value picks up
// sum_k alpha_k * u(., lambda_k) and the initial velocity picks up
// sum_k beta_k * u_t(., lambda_k). Empty spec (m = 0) is the classical
// Cauchy problem.
struct MultipointSpec {
    std::vector<std::complex<double>> alpha;
    std::vector<std::complex<double>> beta;
    std::vector<double> lambda;

    int m() const noexcept { return static_cast<int>(lambda.size()); }

    static MultipointSpec cauchy() { return {}; }

    double lambda_max() const noexcept {
        double v = 0.0;
        for (double l : lambda) v = std::max(v, l);
        return v;
    }

    // Magnitude budget sum |alpha_k| + |beta_k|; < 1/4 guarantees a
    // uniformly nonsingular mode system.
    double weight_sum() const noexcept {
        double s = 0.0;
        for (const auto& a : alpha) s += std::abs(a);
        for (const auto& b : beta) s += std::abs(b);
        return s;
    }

    void validate() const {
        std::vector<std::string> bad;
        if (alpha.size() != lambda.size() || beta.size() != lambda.size())
            bad.push_back("multipoint: alpha, beta, lambda must have equal length");
        for (std::size_t k = 0; k < lambda.size(); ++k) {
            if (!(lambda[k] > 0.0) || !std::isfinite(lambda[k]))
                bad.push_back("multipoint: lambda[" + std::to_string(k) +
                              "] must be positive and finite");
            for (std::size_t j = 0; j < k; ++j)
                if (lambda[j] == lambda[k])
                    bad.push_back("multipoint: lambda values must be pairwise distinct (" +
                                  std::to_string(j) + ", " + std::to_string(k) + ")");
        }
        for (const auto& c : alpha)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                bad.push_back("multipoint: non-finite alpha coefficient");
        for (const auto& c : beta)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                bad.push_back("multipoint: non-finite beta coefficient");
        if (!bad.empty()) throw ValidationError(std::move(bad));
    }
};

}  // namespace nlwave
