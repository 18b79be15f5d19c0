#include "coexsim/waveform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coexsim {

namespace {

// Eq.-sampling coefficients of the length-KM PHYDYAS design, K = 4.
constexpr double kG1 = 0.971960;
constexpr double kG3 = 0.235147;
const double kG2 = 1.0 / std::sqrt(2.0);

void check_grid(const SymbolGrid& grid, const WaveformConfig& cfg, SymbolDomain want) {
    if (grid.subcarriers != static_cast<std::size_t>(cfg.subcarriers))
        throw std::invalid_argument("waveform: grid/config subcarrier mismatch");
    if (grid.domain != want)
        throw std::invalid_argument("waveform: grid symbol domain does not match waveform");
}

// Per-symbol subcarrier rotation putting the synthesis exponent on the
// absolute sample index k rather than on the local window index. Demodulation
// applies the conjugate, so loopback is exact either way; keeping absolute
// phases means per-symbol phase trajectories on a given subcarrier are
// continuous, which the interference covariance measurements rely on.
std::vector<cd> stride_rotation(int m_sub, long stride_offset, double sign) {
    std::vector<cd> rot(m_sub);
    const long r = stride_offset % m_sub;
    for (int m = 0; m < m_sub; ++m) {
        const double ang =
            sign * 2.0 * std::numbers::pi * static_cast<double>(m) * static_cast<double>(r) /
            static_cast<double>(m_sub);
        rot[m] = cd(std::cos(ang), std::sin(ang));
    }
    return rot;
}

}  // namespace

int WaveformConfig::symbol_stride() const {
    return kind == WaveformKind::CpOfdm ? subcarriers + cp_len : subcarriers / 2;
}

void WaveformConfig::validate() const {
    if (!is_pow2(static_cast<std::size_t>(subcarriers)))
        throw std::invalid_argument("WaveformConfig: subcarriers must be a power of two");
    if (cp_len < 0) throw std::invalid_argument("WaveformConfig: cp_len must be >= 0");
    if (overlap < 1) throw std::invalid_argument("WaveformConfig: overlap must be >= 1");
    if (symbol_power < 0.0)
        throw std::invalid_argument("WaveformConfig: symbol_power must be >= 0");
    for (int sc : active)
        if (sc < 0 || sc >= subcarriers)
            throw std::invalid_argument("WaveformConfig: active subcarrier out of range");
}

PrototypeFilter build_phydyas(int subcarriers, int overlap) {
    if (overlap != 4)
        throw std::invalid_argument(
            "build_phydyas: only overlap factor 4 has a published coefficient set");
    if (!is_pow2(static_cast<std::size_t>(subcarriers)))
        throw std::invalid_argument("build_phydyas: subcarriers must be a power of two");

    const int len = overlap * subcarriers;
    const double g_coef[4] = {1.0, kG1, kG2, kG3};
    PrototypeFilter p;
    p.overlap = overlap;
    p.subcarriers = subcarriers;
    p.coeff.resize(len);
    for (int k = 0; k < len; ++k) {
        double v = g_coef[0];
        for (int l = 1; l < overlap; ++l) {
            const double sgn = (l % 2 == 0) ? 1.0 : -1.0;
            v += 2.0 * sgn * g_coef[l] *
                 std::cos(2.0 * std::numbers::pi * l * k / static_cast<double>(len));
        }
        p.coeff[k] = v;
    }
    // The cosine series leaves a ~1e-7 residue at k = 0 (the published
    // coefficients only carry six decimals); the design's first tap is zero,
    // which also makes the taps exactly symmetric about KM/2.
    p.coeff[0] = 0.0;

    double e = 0.0;
    for (double c : p.coeff) e += c * c;
    const double scale = std::sqrt(subcarriers / (2.0 * e));
    for (double& c : p.coeff) c *= scale;
    p.energy = subcarriers / 2.0;
    return p;
}

ComplexSignal cpofdm_modulate(const SymbolGrid& grid, const WaveformConfig& cfg) {
    cfg.validate();
    if (cfg.kind != WaveformKind::CpOfdm)
        throw std::invalid_argument("cpofdm_modulate: config is not CP-OFDM");
    check_grid(grid, cfg, SymbolDomain::ComplexQam);

    const int m_sub = cfg.subcarriers;
    const int stride = cfg.subcarriers + cfg.cp_len;
    ComplexSignal out;
    out.subcarriers = m_sub;
    out.delta_f_hz = cfg.delta_f_hz;
    out.samples.assign(grid.n_symbols * stride, cd(0.0, 0.0));

    std::vector<cd> body(m_sub);
    for (std::size_t n = 0; n < grid.n_symbols; ++n) {
        const auto rot = stride_rotation(m_sub, static_cast<long>(n) * stride, +1.0);
        for (int m = 0; m < m_sub; ++m) body[m] = grid.at(n, m) * rot[m];
        fft_pow2(body, true);  // unnormalized inverse: sum_m d_m e^{+j2pi m k/M}
        cd* sym = &out.samples[n * stride];
        for (int i = 0; i < cfg.cp_len; ++i) sym[i] = body[m_sub - cfg.cp_len + i];
        for (int i = 0; i < m_sub; ++i) sym[cfg.cp_len + i] = body[i];
    }
    return out;
}

SymbolGrid cpofdm_demodulate(const ComplexSignal& y, const WaveformConfig& cfg,
                             std::size_t n_symbols) {
    cfg.validate();
    if (cfg.kind != WaveformKind::CpOfdm)
        throw std::invalid_argument("cpofdm_demodulate: config is not CP-OFDM");
    const int m_sub = cfg.subcarriers;
    const long stride = cfg.subcarriers + cfg.cp_len;
    if (y.samples.size() < n_symbols * static_cast<std::size_t>(stride))
        throw std::invalid_argument("cpofdm_demodulate: signal too short for n_symbols");

    SymbolGrid grid(n_symbols, m_sub, SymbolDomain::ComplexQam);
    std::vector<cd> w(m_sub);
    const double inv_m = 1.0 / m_sub;
    for (std::size_t n = 0; n < n_symbols; ++n) {
        const cd* win = &y.samples[n * stride + cfg.cp_len];
        w.assign(win, win + m_sub);
        fft_pow2(w, false);
        const auto rot = stride_rotation(m_sub, static_cast<long>(n) * stride, -1.0);
        for (int m = 0; m < m_sub; ++m) grid.at(n, m) = w[m] * rot[m] * inv_m;
    }
    return grid;
}

ComplexSignal oqam_modulate(const SymbolGrid& grid, const WaveformConfig& cfg,
                            const PrototypeFilter& proto) {
    cfg.validate();
    if (cfg.kind != WaveformKind::OqamPhydyas)
        throw std::invalid_argument("oqam_modulate: config is not OFDM/OQAM");
    check_grid(grid, cfg, SymbolDomain::RealPam);
    if (proto.subcarriers != cfg.subcarriers || proto.overlap != cfg.overlap)
        throw std::invalid_argument("oqam_modulate: prototype does not match config");
    for (const cd& v : grid.data)
        if (v.imag() != 0.0)
            throw std::invalid_argument("oqam_modulate: PAM grid must be real-valued");

    const int m_sub = cfg.subcarriers;
    const int half = m_sub / 2;
    const int km = proto.overlap * m_sub;
    ComplexSignal out;
    out.subcarriers = m_sub;
    out.delta_f_hz = cfg.delta_f_hz;
    if (grid.n_symbols == 0) return out;
    out.samples.assign((grid.n_symbols - 1) * half + km, cd(0.0, 0.0));

    // Phase factor i^{n+m} on top of the subcarrier exponential referenced to
    // the filter midpoint K*M/2; for even K that reference contributes no
    // per-subcarrier rotation, so the synthesis reduces to a periodically
    // extended M-point transform shaped by the prototype.
    static const cd kQuarter[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    std::vector<cd> v(m_sub);
    for (std::size_t n = 0; n < grid.n_symbols; ++n) {
        for (int m = 0; m < m_sub; ++m)
            v[m] = grid.at(n, m).real() * kQuarter[(n + m) % 4];
        fft_pow2(v, true);
        cd* dst = &out.samples[n * half];
        for (int k = 0; k < km; ++k) dst[k] += v[k % m_sub] * proto.coeff[k];
    }
    return out;
}

SymbolGrid oqam_demodulate(const ComplexSignal& y, const WaveformConfig& cfg,
                           const PrototypeFilter& proto, std::size_t n_symbols) {
    cfg.validate();
    if (cfg.kind != WaveformKind::OqamPhydyas)
        throw std::invalid_argument("oqam_demodulate: config is not OFDM/OQAM");
    if (proto.subcarriers != cfg.subcarriers || proto.overlap != cfg.overlap)
        throw std::invalid_argument("oqam_demodulate: prototype does not match config");
    const int m_sub = cfg.subcarriers;
    const int half = m_sub / 2;
    const int km = proto.overlap * m_sub;
    if (n_symbols > 0 &&
        y.samples.size() < (n_symbols - 1) * static_cast<std::size_t>(half) +
                               static_cast<std::size_t>(km))
        throw std::invalid_argument("oqam_demodulate: signal too short for n_symbols");

    SymbolGrid grid(n_symbols, m_sub, SymbolDomain::RealPam);
    static const cd kQuarterConj[4] = {cd(1, 0), cd(0, -1), cd(-1, 0), cd(0, 1)};
    std::vector<cd> folded(m_sub);
    const double inv_gain = 1.0 / proto.energy;
    for (std::size_t n = 0; n < n_symbols; ++n) {
        const cd* win = &y.samples[n * half];
        std::fill(folded.begin(), folded.end(), cd(0.0, 0.0));
        for (int k = 0; k < km; ++k) folded[k % m_sub] += win[k] * proto.coeff[k];
        fft_pow2(folded, false);
        for (int m = 0; m < m_sub; ++m) {
            const cd c = kQuarterConj[(n + m) % 4] * folded[m];
            grid.at(n, m) = cd(c.real() * inv_gain, 0.0);
        }
    }
    return grid;
}

}  // namespace coexsim
