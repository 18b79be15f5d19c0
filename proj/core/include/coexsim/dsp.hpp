#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace coexsim {

using cd = std::complex<double>;

/// Complex baseband samples together with their subcarrier-grid context.
struct ComplexSignal {
    std::vector<cd> samples;
    int subcarriers = 0;      ///< FFT size M of the grid this signal lives on
    double delta_f_hz = 0.0;  ///< subcarrier spacing

    std::size_t size() const { return samples.size(); }
    double energy() const;
};

bool is_pow2(std::size_t n);

/// In-place radix-2 Cooley-Tukey transform, unnormalized. Size must be a power of two.
void fft_pow2(std::vector<cd>& a, bool inverse);

/// X[m] = sum_k x[k] e^{-j 2 pi k m / n}. Throws std::invalid_argument unless
/// x.size() == n and n is a power of two.
std::vector<cd> dft(std::span<const cd> x, std::size_t n);

/// Inverse transform scaled by 1/n, so idft(dft(x), n) == x.
std::vector<cd> idft(std::span<const cd> x, std::size_t n);

/// Compensated (Kahan) accumulator. Keeps long Monte-Carlo reductions
/// independent of summation batching to ~1e-12.
class KahanSum {
public:
    void add(double v) {
        const double y = v - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace coexsim
