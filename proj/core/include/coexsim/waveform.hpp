#pragma once

#include <cstddef>
#include <vector>

#include "coexsim/dsp.hpp"

namespace coexsim {

enum class WaveformKind { CpOfdm, OqamPhydyas };
enum class SymbolDomain { ComplexQam, RealPam };

/// All modulation parameters of one user.
struct WaveformConfig {
    WaveformKind kind = WaveformKind::CpOfdm;
    int subcarriers = 256;      ///< M, a power of two
    int cp_len = 18;            ///< cyclic prefix samples (CP-OFDM only)
    int overlap = 4;            ///< prototype overlap factor K (OQAM only)
    std::vector<int> active;    ///< active subcarrier indices, each in [0, M)
    double symbol_power = 1.0;  ///< constellation variance
    double delta_f_hz = 15e3;

    /// Samples between consecutive symbols: M+CP for CP-OFDM, M/2 for OQAM.
    int symbol_stride() const;
    void validate() const;
};

/// n_symbols x M matrix of constellation symbols. Real (PAM) grids keep
/// imaginary parts at exactly zero.
struct SymbolGrid {
    std::size_t n_symbols = 0;
    std::size_t subcarriers = 0;
    SymbolDomain domain = SymbolDomain::ComplexQam;
    std::vector<cd> data;

    SymbolGrid() = default;
    SymbolGrid(std::size_t n, std::size_t m, SymbolDomain d)
        : n_symbols(n), subcarriers(m), domain(d), data(n * m, cd(0.0, 0.0)) {}

    cd& at(std::size_t n, std::size_t sc) { return data[n * subcarriers + sc]; }
    const cd& at(std::size_t n, std::size_t sc) const { return data[n * subcarriers + sc]; }
};

/// Real symmetric prototype of length K*M with coeff[0] == 0 and
/// sum of squares M/2, which makes the analysis gain of an isolated
/// symbol exactly one and puts one unit of transmit power per subcarrier
/// at unit symbol variance (same as the CP-OFDM chain).
struct PrototypeFilter {
    std::vector<double> coeff;
    int overlap = 0;
    int subcarriers = 0;
    double energy = 0.0;  ///< sum of squared taps, equals M/2
};

/// Frequency-sampling prototype for overlap factor 4 (the only coefficient
/// set supported). DFT magnitudes at bins 0..3 of a KM-point transform are
/// proportional to (1, 0.971960, 1/sqrt(2), 0.235147), zero at bins 4..K*M-4.
PrototypeFilter build_phydyas(int subcarriers, int overlap);

/// CP-OFDM synthesis. Sample 0 of the returned signal is the first cyclic
/// prefix sample of symbol 0; each symbol occupies stride M+CP with the CP
/// replicating the body tail.
ComplexSignal cpofdm_modulate(const SymbolGrid& grid, const WaveformConfig& cfg);

/// CP-OFDM analysis: per symbol, skip the CP, M-point DFT scaled by 1/M.
/// Exactly inverts cpofdm_modulate on a clean signal.
SymbolGrid cpofdm_demodulate(const ComplexSignal& y, const WaveformConfig& cfg,
                             std::size_t n_symbols);

/// OQAM synthesis with half-symbol staggering. Symbol n's pulse occupies
/// samples [n*M/2, n*M/2 + K*M); overlapping pulses are summed.
ComplexSignal oqam_modulate(const SymbolGrid& grid, const WaveformConfig& cfg,
                            const PrototypeFilter& proto);

/// OQAM analysis: matched prototype filter, then the real part removes the
/// purely imaginary intrinsic interference of neighbouring slots.
SymbolGrid oqam_demodulate(const ComplexSignal& y, const WaveformConfig& cfg,
                           const PrototypeFilter& proto, std::size_t n_symbols);

}  // namespace coexsim
