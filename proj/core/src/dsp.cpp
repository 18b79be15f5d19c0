#include "coexsim/dsp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coexsim {

double ComplexSignal::energy() const {
    double e = 0.0;
    for (const cd& v : samples) e += std::norm(v);
    return e;
}

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<cd>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cd wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cd w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cd u = a[i + k];
                const cd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::vector<cd> dft(std::span<const cd> x, std::size_t n) {
    if (x.size() != n) throw std::invalid_argument("dft: input length does not match size");
    if (!is_pow2(n)) throw std::invalid_argument("dft: size must be a power of two");
    std::vector<cd> a(x.begin(), x.end());
    fft_pow2(a, false);
    return a;
}

std::vector<cd> idft(std::span<const cd> x, std::size_t n) {
    if (x.size() != n) throw std::invalid_argument("idft: input length does not match size");
    if (!is_pow2(n)) throw std::invalid_argument("idft: size must be a power of two");
    std::vector<cd> a(x.begin(), x.end());
    fft_pow2(a, true);
    const double inv = 1.0 / static_cast<double>(n);
    for (cd& v : a) v *= inv;
    return a;
}

}  // namespace coexsim
