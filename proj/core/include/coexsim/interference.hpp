#pragma once

#include <string>
#include <vector>

#include "coexsim/rng.hpp"
#include "coexsim/waveform.hpp"

namespace coexsim {

/// Mean interference power versus spectral distance l = q - m between an
/// interfering subcarrier q and victim subcarrier m, normalized to unit
/// interferer symbol variance.
struct InterferenceTable {
    int max_distance = 0;               ///< covers l in [-max_distance, max_distance]
    std::vector<double> power;          ///< linear, index l + max_distance
    std::vector<double> stderr_linear;  ///< Monte-Carlo standard error (0 when exact)
    std::string label;

    /// Out-of-range distances return the edge value: the measured tables
    /// flatten at large |l|, so clamping avoids repeating the truncate-to-zero
    /// mistake the PSD model makes.
    double at(int distance) const;
    double at_db(int distance) const;
    double stderr_db(int distance) const;
};

/// Analytical PSD of one CP-OFDM subcarrier (rectangular window of
/// M+CP samples, CP transmitted). f is in subcarrier spacings; the integral
/// over all f is one.
double psd_cpofdm(double f, int subcarriers, int cp_len);

/// Squared-magnitude frequency response of the prototype filter, normalized
/// to unit integral over one period of M subcarrier spacings.
class PhydyasPsd {
public:
    explicit PhydyasPsd(const PrototypeFilter& proto);
    double operator()(double f) const;

private:
    const PrototypeFilter* proto_;
    double norm_;
};

/// PSD-model table: I(l) = integral of the interferer's PSD over the victim
/// band [l-1/2, l+1/2] subcarrier spacings.
InterferenceTable psd_table(const WaveformConfig& interferer, const PrototypeFilter* proto,
                            int max_distance, double rel_tol = 1e-6);

struct McTableOptions {
    long symbols_per_trial = 200;  ///< victim symbols per independent timing draw
    int threads = 1;
};

/// Demodulator-aware Monte-Carlo estimate: one interferer subcarrier at unit
/// symbol variance, random payload and random integer timing offset per
/// trial, the victim's full receive chain run on the interferer signal alone.
InterferenceTable mc_interference_table(const WaveformConfig& victim,
                                        const WaveformConfig& interferer, long n_symbols,
                                        RngStream rng, int max_distance,
                                        const McTableOptions& opt = {});

/// Total interference power injected into `victim_set` by `interferer_set`
/// transmitting at symbol variance sigma2: sigma2 * sum over pairs of
/// table(q - m). The sets must be disjoint.
double total_injected(const InterferenceTable& table, const std::vector<int>& victim_set,
                      const std::vector<int>& interferer_set, double sigma2);

/// White-noise surrogate for the interference on one victim subcarrier.
struct GaussianApprox {
    double variance = 0.0;
};

GaussianApprox gaussian_approx(const InterferenceTable& table, int victim_subcarrier,
                               const std::vector<int>& interferer_set);

}  // namespace coexsim
