#pragma once

#include <complex>
#include <cstddef>

#include <fftw3.h>

namespace nlwave {

// Thin RAII wrapper around FFTW complex-to-complex plans for an n^dim cube.
//
// Plans are created once with FFTW_ESTIMATE (deterministic plan choice, no
// wisdom lookup) and executed on an internal buffer; callers pass their own
// arrays which are copied through the buffer. That keeps alignment concerns
// out of the rest of the code at the cost of a memcpy, which is negligible
// next to the transform itself at the sizes used here.
//
// forward()/backward() are the raw unnormalized FFTW sums; the sampled-
// transform normalization (grid weights and centering phases) is applied by
// the Field layer, not here. Not thread-safe: one engine serves one thread.
class FftEngine {
public:
    FftEngine(int dim, int n);
    ~FftEngine();
    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    // data must hold size() elements; transformed in place.
    void forward(std::complex<double>* data) const;
    void backward(std::complex<double>* data) const;

    std::size_t size() const noexcept { return total_; }

private:
    void run(fftw_plan plan, std::complex<double>* data) const;

    std::size_t total_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

}  // namespace nlwave
