#include "nlwave/fft.hpp"

#include <cstring>

#include "nlwave/errors.hpp"

namespace nlwave {

FftEngine::FftEngine(int dim, int n) {
    if (dim < 1 || dim > 3)
        throw SolverError(ErrorCode::validation, "FftEngine: dim must be 1..3");
    if (n < 4 || (n & (n - 1)) != 0)
        throw SolverError(ErrorCode::validation,
                          "FftEngine: n must be a power of two >= 4");
    total_ = 1;
    int dims[3];
    for (int d = 0; d < dim; ++d) {
        dims[d] = n;
        total_ *= static_cast<std::size_t>(n);
    }
    buf_ = fftw_alloc_complex(total_);
    if (!buf_) throw SolverError(ErrorCode::numeric, "FftEngine: allocation failed");
    fwd_ = fftw_plan_dft(dim, dims, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(dim, dims, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd_ || !bwd_)
        throw SolverError(ErrorCode::numeric, "FftEngine: plan creation failed");
}

FftEngine::~FftEngine() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
}

void FftEngine::run(fftw_plan plan, std::complex<double>* data) const {
    // std::complex<double> and fftw_complex share layout per the C++
    // standard's array-compatibility guarantee.
    std::memcpy(static_cast<void*>(buf_), static_cast<const void*>(data),
                total_ * sizeof(fftw_complex));
    fftw_execute(plan);
    std::memcpy(static_cast<void*>(data), static_cast<const void*>(buf_),
                total_ * sizeof(fftw_complex));
}

void FftEngine::forward(std::complex<double>* data) const { run(fwd_, data); }
void FftEngine::backward(std::complex<double>* data) const { run(bwd_, data); }

}  // namespace nlwave
