#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coexsim/dsp.hpp"

namespace coexsim {

// Gray-mapped unit-average-power constellations. Symbol power scaling is
// applied by the caller as sqrt(symbol_power).
inline constexpr int kBitsPerPamSymbol = 3;  // 8-PAM
inline constexpr int kBitsPerQamSymbol = 6;  // 64-QAM

/// 3 bits -> 8-PAM amplitude, levels {+-1,+-3,+-5,+-7}/sqrt(21).
double pam8_map(const std::uint8_t* bits);

/// Nearest-level hard decision; amplitude_scale is sqrt of the symbol power
/// the constellation was transmitted with.
void pam8_demap(double value, double amplitude_scale, std::uint8_t* bits);

/// 6 bits -> 64-QAM point (first 3 bits on I, last 3 on Q), unit mean power.
cd qam64_map(const std::uint8_t* bits);
void qam64_demap(cd value, double amplitude_scale, std::uint8_t* bits);

/// Bit-vector conveniences; throw std::invalid_argument when the bit count is
/// not a multiple of the bits-per-symbol.
std::vector<double> pam8_map_bits(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> pam8_demap_symbols(std::span<const double> symbols,
                                             double amplitude_scale);
std::vector<cd> qam64_map_bits(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> qam64_demap_symbols(std::span<const cd> symbols,
                                              double amplitude_scale);

}  // namespace coexsim
