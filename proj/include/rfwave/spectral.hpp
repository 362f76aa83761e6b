#pragma once

#include <complex>
#include <vector>

#include "rfwave/field.hpp"
#include "rfwave/riesz_feller.hpp"

namespace rfwave {

/// Padded complex FFT workspace tied to a Grid, under the probability-theory
/// transform convention F[f](xi) = integral e^{+i xi x} f(x) dx. Grid values
/// (zero-tail fields) are treated as one period of length n_fft*dx; n_fft is
/// the next power of two >= n_points-1, so frequencies are
/// xi_j = 2*pi*j/(n_fft*dx) (= pi*j/L when n_points-1 is already a power of
/// two).
class SpectralGrid {
  public:
    explicit SpectralGrid(const Grid& g);
    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    int n_fft() const { return n_fft_; }
    const Grid& grid() const { return grid_; }
    /// Signed frequency of bin j.
    double freq(int j) const;
    bool is_nyquist(int j) const { return 2 * j == n_fft_; }

    /// DFT of the field values (pads with zeros when n_fft > n_points).
    std::vector<std::complex<double>> analyze(const std::vector<double>& values);
    /// Inverse DFT back to grid samples; max_imag reports the largest
    /// imaginary residue before it is discarded.
    std::vector<double> synthesize(const std::vector<std::complex<double>>& spectrum,
                                   double* max_imag = nullptr);

  private:
    Grid grid_;
    int n_fft_ = 0;
    int n_copy_ = 0;  // grid samples that live in the transform buffer
    void* plan_fwd_ = nullptr;  // e^{-i}, synthesis
    void* plan_bwd_ = nullptr;  // e^{+i}, analysis
    std::vector<std::complex<double>> buf_;
};

/// Multiplier sample for real signals: the Nyquist bin is its own conjugate
/// pair, so only the real part of the symbol acts there.
inline std::complex<double> grid_symbol(const RFParams& p, const SpectralGrid& sg, int j) {
    std::complex<double> z = symbol(p, sg.freq(j));
    if (sg.is_nyquist(j)) z = {z.real(), 0.0};
    return z;
}

}  // namespace rfwave
