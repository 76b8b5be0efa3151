#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "cesaro/mean.hpp"
#include "cesaro/parallel.hpp"

namespace cesaro {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

FftwBuffer<double> alloc_real(std::size_t n) { return FftwBuffer<double>(fftw_alloc_real(n)); }

FftwBuffer<fftw_complex> alloc_complex(std::size_t n) {
    return FftwBuffer<fftw_complex>(fftw_alloc_complex(n));
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

// Causal linear convolution of many equal-length signals with one kernel:
// out_i[t] = sum_{s<=t} kernel[t-s] in_i[s], t < len.
class CausalConvolver {
public:
    CausalConvolver(std::span<const double> kernel) : len_(kernel.size()), size_(next_pow2(2 * kernel.size())) {
        const std::size_t spectrum = size_ / 2 + 1;
        auto in = alloc_real(size_);
        auto out = alloc_complex(spectrum);
        {
            std::lock_guard lock(planner_mutex());
            forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(size_), in.get(), out.get(), FFTW_ESTIMATE);
            backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(size_), out.get(), in.get(), FFTW_ESTIMATE);
        }
        std::fill(in.get(), in.get() + size_, 0.0);
        std::copy(kernel.begin(), kernel.end(), in.get());
        fftw_execute_dft_r2c(forward_, in.get(), out.get());
        kernel_spectrum_.resize(spectrum);
        for (std::size_t i = 0; i < spectrum; ++i) {
            kernel_spectrum_[i] = {out[i][0], out[i][1]};
        }
    }

    CausalConvolver(const CausalConvolver&) = delete;
    CausalConvolver& operator=(const CausalConvolver&) = delete;

    ~CausalConvolver() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    // Convolves `signals` rows of length len_ (stride len_) in place.
    void apply(double* signals, std::size_t count, unsigned threads) const {
        const std::size_t spectrum = size_ / 2 + 1;
        const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1));
        parallel_for(workers, threads, [&](std::size_t w) {
            auto buf = alloc_real(size_);
            auto spec = alloc_complex(spectrum);
            const double inv = 1.0 / static_cast<double>(size_);
            for (std::size_t i = w; i < count; i += workers) {
                double* row = signals + i * len_;
                std::copy(row, row + len_, buf.get());
                std::fill(buf.get() + len_, buf.get() + size_, 0.0);
                fftw_execute_dft_r2c(forward_, buf.get(), spec.get());
                for (std::size_t j = 0; j < spectrum; ++j) {
                    const std::complex<double> v = std::complex<double>(spec[j][0], spec[j][1]) * kernel_spectrum_[j];
                    spec[j][0] = v.real();
                    spec[j][1] = v.imag();
                }
                fftw_execute_dft_c2r(backward_, spec.get(), buf.get());
                for (std::size_t t = 0; t < len_; ++t) {
                    row[t] = buf[t] * inv;
                }
            }
        });
    }

private:
    std::size_t len_;
    std::size_t size_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
    std::vector<std::complex<double>> kernel_spectrum_;
};

Field transpose(const Field& f) {
    Field t(f.cols(), f.rows());
    for (std::size_t k = 0; k < f.rows(); ++k) {
        const double* row = f.row(k);
        for (std::size_t l = 0; l < f.cols(); ++l) {
            t(l, k) = row[l];
        }
    }
    return t;
}

}  // namespace

Field cesaro_mean_lattice(const Field& field, const CesaroOrder& order, unsigned threads) {
    require_theorem_range(order.alpha(), order.beta());
    const std::size_t rows = field.rows();
    const std::size_t cols = field.cols();
    if (rows == 0 || cols == 0) {
        return field;
    }
    const WeightTable lag_a = weight_row(order.alpha() - 1.0, rows - 1);
    const WeightTable norm_a = weight_row(order.alpha(), rows - 1);
    const WeightTable lag_b = weight_row(order.beta() - 1.0, cols - 1);
    const WeightTable norm_b = weight_row(order.beta(), cols - 1);

    Field work = field;
    {
        const std::vector<double> kernel = lag_b.weights();
        const CausalConvolver conv(kernel);
        conv.apply(work.data().data(), rows, threads);
    }
    Field t = transpose(work);
    {
        const std::vector<double> kernel = lag_a.weights();
        const CausalConvolver conv(kernel);
        conv.apply(t.data().data(), cols, threads);
    }
    Field out(rows, cols);
    for (std::size_t m = 0; m < rows; ++m) {
        const double la = norm_a.log_at(m);
        for (std::size_t n = 0; n < cols; ++n) {
            out(m, n) = t(n, m) * std::exp(-(la + norm_b.log_at(n)));
        }
    }
    return out;
}

}  // namespace cesaro
