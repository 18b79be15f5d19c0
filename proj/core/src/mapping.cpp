#include "coexsim/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coexsim {

namespace {

// level index 0..7 (amplitude -7..+7) -> binary-reflected Gray code
constexpr std::uint8_t kGray[8] = {0b000, 0b001, 0b011, 0b010, 0b110, 0b111, 0b101, 0b100};

constexpr std::uint8_t gray_inverse(std::uint8_t code) {
    for (std::uint8_t i = 0; i < 8; ++i)
        if (kGray[i] == code) return i;
    return 0;
}

const double kPamScale = 1.0 / std::sqrt(21.0);  // unit mean power for 8-PAM

}  // namespace

double pam8_map(const std::uint8_t* bits) {
    const std::uint8_t code =
        static_cast<std::uint8_t>((bits[0] & 1) << 2 | (bits[1] & 1) << 1 | (bits[2] & 1));
    const int level = gray_inverse(code);
    return (2 * level - 7) * kPamScale;
}

void pam8_demap(double value, double amplitude_scale, std::uint8_t* bits) {
    const double v = value / (amplitude_scale * kPamScale);
    int level = static_cast<int>(std::lround((v + 7.0) / 2.0));
    level = std::clamp(level, 0, 7);
    const std::uint8_t code = kGray[level];
    bits[0] = (code >> 2) & 1;
    bits[1] = (code >> 1) & 1;
    bits[2] = code & 1;
}

cd qam64_map(const std::uint8_t* bits) {
    const double i = pam8_map(bits);
    const double q = pam8_map(bits + 3);
    return cd(i, q) / std::sqrt(2.0);
}

void qam64_demap(cd value, double amplitude_scale, std::uint8_t* bits) {
    const double s = amplitude_scale / std::sqrt(2.0);
    pam8_demap(value.real(), s, bits);
    pam8_demap(value.imag(), s, bits + 3);
}

std::vector<double> pam8_map_bits(std::span<const std::uint8_t> bits) {
    if (bits.size() % kBitsPerPamSymbol != 0)
        throw std::invalid_argument("pam8_map_bits: bit count not a multiple of 3");
    std::vector<double> out(bits.size() / kBitsPerPamSymbol);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = pam8_map(&bits[3 * i]);
    return out;
}

std::vector<std::uint8_t> pam8_demap_symbols(std::span<const double> symbols,
                                             double amplitude_scale) {
    std::vector<std::uint8_t> out(symbols.size() * kBitsPerPamSymbol);
    for (std::size_t i = 0; i < symbols.size(); ++i)
        pam8_demap(symbols[i], amplitude_scale, &out[3 * i]);
    return out;
}

std::vector<cd> qam64_map_bits(std::span<const std::uint8_t> bits) {
    if (bits.size() % kBitsPerQamSymbol != 0)
        throw std::invalid_argument("qam64_map_bits: bit count not a multiple of 6");
    std::vector<cd> out(bits.size() / kBitsPerQamSymbol);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = qam64_map(&bits[6 * i]);
    return out;
}

std::vector<std::uint8_t> qam64_demap_symbols(std::span<const cd> symbols,
                                              double amplitude_scale) {
    std::vector<std::uint8_t> out(symbols.size() * kBitsPerQamSymbol);
    for (std::size_t i = 0; i < symbols.size(); ++i)
        qam64_demap(symbols[i], amplitude_scale, &out[6 * i]);
    return out;
}

}  // namespace coexsim
