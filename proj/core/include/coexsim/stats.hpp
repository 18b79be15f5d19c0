#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coexsim/dsp.hpp"
#include "coexsim/waveform.hpp"

namespace coexsim {

struct EvmResult {
    double evm2 = 0.0;    ///< E|d_hat - d|^2 / E|d|^2
    double evm_db = 0.0;  ///< 10 log10(evm2)
    std::vector<int> subcarriers;
    std::vector<double> per_subcarrier_evm2;
};

/// Normalized EVM over the given active subcarriers, skipping edge_skip
/// symbols at each end of the grids.
EvmResult evm(const SymbolGrid& estimated, const SymbolGrid& reference,
              const std::vector<int>& active, std::size_t edge_skip = 0);

struct BerResult {
    double ber = 0.0;
    long long bits = 0;
    long long errors = 0;
    double wilson_lo = 0.0;  ///< 95% Wilson interval
    double wilson_hi = 0.0;
};

BerResult ber_empirical(std::span<const std::uint8_t> tx_bits,
                        std::span<const std::uint8_t> rx_bits);
BerResult ber_from_counts(long long errors, long long bits);

/// Exact Gray-coded M-PAM bit error rate on AWGN at symbol SNR = Es/sigma^2.
double ber_awgn_pam(int order, double snr);
double ber_awgn_8pam(double snr);
/// Square 64-QAM at complex-symbol SNR; equals the 8-PAM rate at the same SNR
/// because each quadrature carries an 8-PAM at half the energy in half the noise.
double ber_awgn_64qam(double snr);

struct NoiseStats {
    long n_samples = 0;
    double component_variance = 0.0;  ///< moment-matched per-component Gaussian fit
    std::vector<double> bin_edges;    ///< histogram of pooled real/imag components
    std::vector<long> bin_counts;
    double ks_statistic = 0.0;        ///< KS distance of the real component vs the fit
    double ks_threshold_1pct = 0.0;   ///< accept Gaussianity at 1% iff ks <= this
    std::vector<cd> autocovariance;   ///< biased estimate, lags 0..max_lag
    double whiteness_score = 0.0;     ///< max |rho(lag)| over lags >= 1
};

/// Statistics of an interference sample stream. Segments are treated as
/// independent realizations: lagged products never straddle a boundary.
NoiseStats noise_statistics(const std::vector<std::vector<cd>>& segments, int max_lag);
NoiseStats noise_statistics(std::span<const cd> eta, int max_lag);

/// Hermitian Toeplitz covariance matrix built from the autocovariance,
/// row-major (max_lag+1) x (max_lag+1).
std::vector<cd> covariance_matrix(const NoiseStats& stats);

/// True when the Hermitian matrix a (n x n, row-major) admits a Cholesky
/// factorization after adding shift*I; used to check positive
/// semidefiniteness within a tolerance.
bool cholesky_psd(std::vector<cd> a, std::size_t n, double shift);

}  // namespace coexsim
