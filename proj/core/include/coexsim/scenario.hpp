#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coexsim/rng.hpp"
#include "coexsim/stats.hpp"
#include "coexsim/waveform.hpp"

namespace coexsim {

enum class ScenarioKind { Hom, Het };
enum class TauMode { RandomUniform, Fixed };

/// Two-user coexistence experiment: incumbent user 1 is always CP-OFDM;
/// user 2 is CP-OFDM (Hom) or OFDM/OQAM (Het) on the adjacent subcarrier set.
struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::Het;
    int subcarriers = 256;
    int cp_len = 18;
    int overlap = 4;
    double delta_f_hz = 15e3;
    std::vector<int> l1;  ///< incumbent subcarriers, default 37..72
    std::vector<int> l2;  ///< secondary subcarriers, default 73..108
    double sigma1_db = 0.0;
    double sigma2_db = 0.0;
    TauMode tau_mode = TauMode::RandomUniform;
    int tau_fixed = 0;
    long n_symbols = 10000;  ///< incumbent symbols per experiment
    std::uint64_t seed = 1;

    ScenarioConfig();

    double sigma1() const;
    double sigma2() const;
    WaveformConfig user1_config() const;
    WaveformConfig user2_config() const;
    void validate() const;
};

/// Parses the line-oriented `key = value` scenario format. Unknown keys and
/// malformed values throw std::invalid_argument (fail-fast).
ScenarioConfig parse_scenario_config(std::istream& in);
ScenarioConfig load_scenario_config(const std::string& path);
/// Canonical echo of the resolved configuration, itself parseable.
std::string format_scenario_config(const ScenarioConfig& cfg);

struct TrialResult {
    SymbolGrid ref1, est1;  ///< incumbent reference and estimated grids
    SymbolGrid ref2, est2;  ///< secondary grids on its own symbol clock
    long valid1_lo = 0, valid1_hi = 0;  ///< symbols of user 1 counted in statistics
    long valid2_lo = 0, valid2_hi = 0;
    int tau = 0;
};

/// Runs one superposition trial of n1_symbols incumbent symbols: independent
/// payloads, integer timing offset, both receivers demodulating the composite.
TrialResult run_trial(const ScenarioConfig& cfg, RngStream rng, long n1_symbols);

/// eta = d_hat - d on one subcarrier of a victim, valid symbols only.
std::vector<cd> eta_on_subcarrier(const TrialResult& trial, int user, int subcarrier);

struct PowerPoint {
    double sigma2_db = 0.0;
    double evm1_db = 0.0, evm2_db = 0.0;
    BerResult ber1, ber2;
};

/// One Monte-Carlo run per power point with common random numbers across
/// points (same payloads and offsets, only the power scaling changes).
std::vector<PowerPoint> sweep_power(const ScenarioConfig& cfg,
                                    const std::vector<double>& sigma2_db_list,
                                    int threads = 1);

struct TauPoint {
    int tau = 0;
    BerResult ber1;
};

/// Fixed-offset trials over the given tau grid; reports the incumbent's BER.
std::vector<TauPoint> sweep_tau(const ScenarioConfig& cfg, const std::vector<int>& taus,
                                int threads = 1);

}  // namespace coexsim
