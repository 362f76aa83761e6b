#include "rfwave/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace rfwave {
namespace {

// The FFTW planner is not thread-safe; executes on distinct plans are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

}  // namespace

SpectralGrid::SpectralGrid(const Grid& g) : grid_(g) {
    n_fft_ = next_pow2(g.n_points - 1);
    n_copy_ = std::min(g.n_points, n_fft_);
    buf_.assign(static_cast<size_t>(n_fft_), {0.0, 0.0});
    auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_1d(n_fft_, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(n_fft_, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("SpectralGrid: FFTW planning failed");
}

SpectralGrid::~SpectralGrid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

double SpectralGrid::freq(int j) const {
    const int js = (j <= n_fft_ / 2) ? j : j - n_fft_;
    return 2.0 * 3.141592653589793238462643383279502884 * js / (n_fft_ * grid_.dx);
}

std::vector<std::complex<double>> SpectralGrid::analyze(const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != grid_.n_points)
        throw std::invalid_argument("SpectralGrid::analyze: size mismatch");
    for (int i = 0; i < n_copy_; ++i) buf_[static_cast<size_t>(i)] = values[static_cast<size_t>(i)];
    for (int i = n_copy_; i < n_fft_; ++i) buf_[static_cast<size_t>(i)] = 0.0;
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    return buf_;
}

std::vector<double> SpectralGrid::synthesize(const std::vector<std::complex<double>>& spectrum,
                                             double* max_imag) {
    if (static_cast<int>(spectrum.size()) != n_fft_)
        throw std::invalid_argument("SpectralGrid::synthesize: size mismatch");
    buf_ = spectrum;
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const double scale = 1.0 / n_fft_;
    double mi = 0.0;
    std::vector<double> out(static_cast<size_t>(grid_.n_points));
    for (int i = 0; i < n_copy_; ++i) {
        out[static_cast<size_t>(i)] = buf_[static_cast<size_t>(i)].real() * scale;
        mi = std::max(mi, std::abs(buf_[static_cast<size_t>(i)].imag()) * scale);
    }
    // when the buffer holds n_points-1 samples, x=+L is the periodic image of x=-L
    if (n_copy_ < grid_.n_points) out.back() = out.front();
    if (max_imag) *max_imag = mi;
    return out;
}

}  // namespace rfwave
