#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace fkpp {

inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

/// Circular-embedding convolution with a fixed symmetric row:
///   out_i = sum_{k=1..max_offset} row_k * (in_{i-k} + in_{i+k}),  i = 0..n-1
/// with zero padding outside [0, n). Plans are created once (serialized);
/// execution uses the new-array interface with per-call buffers.
class FftConvolver {
public:
    FftConvolver(const std::vector<double>& row, int max_offset, int n)
        : n_(n), maxoff_(max_offset) {
        M_ = 1;
        while (M_ < n + 2 * max_offset + 1) M_ <<= 1;
        std::vector<double> g(static_cast<size_t>(M_), 0.0);
        for (int k = 1; k <= max_offset; ++k) {
            g[static_cast<size_t>(k)] += row[static_cast<size_t>(k)];
            g[static_cast<size_t>(M_ - k)] += row[static_cast<size_t>(k)];
        }
        kernel_hat_.resize(static_cast<size_t>(M_) / 2 + 1);
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        double* in = fftw_alloc_real(static_cast<size_t>(M_));
        fftw_complex* out = fftw_alloc_complex(static_cast<size_t>(M_) / 2 + 1);
        fwd_ = fftw_plan_dft_r2c_1d(M_, in, out, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(M_, out, in, FFTW_ESTIMATE);
        for (int i = 0; i < M_; ++i) in[i] = g[static_cast<size_t>(i)];
        fftw_execute_dft_r2c(fwd_, in, out);
        for (size_t j = 0; j < kernel_hat_.size(); ++j)
            kernel_hat_[j] = {out[j][0], out[j][1]};
        fftw_free(in);
        fftw_free(out);
    }

    ~FftConvolver() {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    FftConvolver(const FftConvolver&) = delete;
    FftConvolver& operator=(const FftConvolver&) = delete;

    int data_length() const { return n_; }

    void convolve(const double* in_data, double* out_data) const {
        double* buf = fftw_alloc_real(static_cast<size_t>(M_));
        fftw_complex* spec = fftw_alloc_complex(static_cast<size_t>(M_) / 2 + 1);
        for (int i = 0; i < n_; ++i) buf[i] = in_data[i];
        for (int i = n_; i < M_; ++i) buf[i] = 0.0;
        fftw_execute_dft_r2c(fwd_, buf, spec);
        for (size_t j = 0; j < kernel_hat_.size(); ++j) {
            std::complex<double> v{spec[j][0], spec[j][1]};
            v *= kernel_hat_[j];
            spec[j][0] = v.real();
            spec[j][1] = v.imag();
        }
        fftw_execute_dft_c2r(bwd_, spec, buf);
        const double scale = 1.0 / double(M_);
        for (int i = 0; i < n_; ++i) out_data[i] = buf[i] * scale;
        fftw_free(buf);
        fftw_free(spec);
    }

private:
    int n_;
    int maxoff_;
    int M_;
    std::vector<std::complex<double>> kernel_hat_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

} // namespace fkpp
