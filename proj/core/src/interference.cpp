#include "coexsim/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "coexsim/mapping.hpp"
#include "coexsim/parallel.hpp"
#include "coexsim/quadrature.hpp"

namespace coexsim {

double InterferenceTable::at(int distance) const {
    const int l = std::clamp(distance, -max_distance, max_distance);
    return power[static_cast<std::size_t>(l + max_distance)];
}

double InterferenceTable::at_db(int distance) const {
    return 10.0 * std::log10(std::max(at(distance), 1e-30));
}

double InterferenceTable::stderr_db(int distance) const {
    const int l = std::clamp(distance, -max_distance, max_distance);
    const double p = at(l);
    const double se = stderr_linear[static_cast<std::size_t>(l + max_distance)];
    if (p <= 0.0) return 0.0;
    return 10.0 * std::log10(1.0 + se / p);
}

double psd_cpofdm(double f, int subcarriers, int cp_len) {
    const double tw = static_cast<double>(subcarriers + cp_len) / subcarriers;
    const double x = std::numbers::pi * f * tw;
    if (std::abs(x) < 1e-9) return tw;
    const double s = std::sin(x) / x;
    return tw * s * s;
}

PhydyasPsd::PhydyasPsd(const PrototypeFilter& proto) : proto_(&proto) {
    // Parseval over one period of M subcarrier spacings: integral equals
    // M * sum g^2, so the normalization needs no quadrature.
    norm_ = static_cast<double>(proto.subcarriers) * proto.energy;
}

double PhydyasPsd::operator()(double f) const {
    const auto& g = proto_->coeff;
    const double step = -2.0 * std::numbers::pi * f / proto_->subcarriers;
    const cd w_step(std::cos(step), std::sin(step));
    cd acc(0.0, 0.0);
    cd w(1.0, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (k % 64 == 0) w = cd(std::cos(step * k), std::sin(step * k));
        acc += g[k] * w;
        w *= w_step;
    }
    return std::norm(acc) / norm_;
}

InterferenceTable psd_table(const WaveformConfig& interferer, const PrototypeFilter* proto,
                            int max_distance, double rel_tol) {
    if (max_distance < 1) throw std::invalid_argument("psd_table: max_distance must be >= 1");
    InterferenceTable t;
    t.max_distance = max_distance;
    t.power.assign(2 * max_distance + 1, 0.0);
    t.stderr_linear.assign(2 * max_distance + 1, 0.0);

    std::function<double(double)> psd;
    if (interferer.kind == WaveformKind::CpOfdm) {
        t.label = "PSD-CP-OFDM";
        const int m = interferer.subcarriers;
        const int cp = interferer.cp_len;
        psd = [m, cp](double f) { return psd_cpofdm(f, m, cp); };
    } else {
        if (proto == nullptr)
            throw std::invalid_argument("psd_table: OQAM table needs the prototype filter");
        t.label = "PSD-PHYDYAS";
        psd = PhydyasPsd(*proto);
    }
    for (int l = -max_distance; l <= max_distance; ++l) {
        t.power[static_cast<std::size_t>(l + max_distance)] =
            integrate(psd, l - 0.5, l + 0.5, rel_tol);
    }
    return t;
}

namespace {

// Interferer signal carrying random unit-variance symbols on one subcarrier.
ComplexSignal single_subcarrier_burst(const WaveformConfig& cfg, const PrototypeFilter* proto,
                                      int subcarrier, std::size_t n_symbols, RngStream& rng) {
    WaveformConfig unit = cfg;
    unit.symbol_power = 1.0;
    unit.active = {subcarrier};
    if (cfg.kind == WaveformKind::CpOfdm) {
        SymbolGrid grid(n_symbols, cfg.subcarriers, SymbolDomain::ComplexQam);
        std::uint8_t bits[kBitsPerQamSymbol];
        for (std::size_t n = 0; n < n_symbols; ++n) {
            for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
            grid.at(n, subcarrier) = qam64_map(bits);
        }
        return cpofdm_modulate(grid, unit);
    }
    SymbolGrid grid(n_symbols, cfg.subcarriers, SymbolDomain::RealPam);
    std::uint8_t bits[kBitsPerPamSymbol];
    for (std::size_t n = 0; n < n_symbols; ++n) {
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
        grid.at(n, subcarrier) = cd(pam8_map(bits), 0.0);
    }
    return oqam_modulate(grid, unit, *proto);
}

// Places src into dst at signed offset, clipping to the destination range.
void add_at_offset(std::vector<cd>& dst, const std::vector<cd>& src, long offset) {
    const long lo = std::max<long>(0, offset);
    const long hi = std::min<long>(static_cast<long>(dst.size()),
                                   offset + static_cast<long>(src.size()));
    for (long i = lo; i < hi; ++i) dst[static_cast<std::size_t>(i)] += src[i - offset];
}

struct TrialPartial {
    std::vector<double> sum;  // per victim subcarrier, mean |eta|^2 of this trial
    long count = 0;
};

}  // namespace

InterferenceTable mc_interference_table(const WaveformConfig& victim,
                                        const WaveformConfig& interferer, long n_symbols,
                                        RngStream rng, int max_distance,
                                        const McTableOptions& opt) {
    victim.validate();
    interferer.validate();
    if (victim.subcarriers != interferer.subcarriers ||
        victim.delta_f_hz != interferer.delta_f_hz)
        throw std::invalid_argument("mc_interference_table: users must share M and delta_f");
    if (n_symbols < 100)
        throw std::invalid_argument(
            "mc_interference_table: fewer than 100 symbols is statistically meaningless");
    if (max_distance < 1 || max_distance > victim.subcarriers / 4)
        throw std::invalid_argument("mc_interference_table: max_distance out of range");

    const int m_sub = victim.subcarriers;
    const int q = m_sub / 2;  // probe subcarrier; couplings depend on q-m only
    // The timing offset is uniform over one CP-OFDM symbol period of whichever
    // side is CP-OFDM.
    const int tau_stride = victim.kind == WaveformKind::CpOfdm
                               ? victim.subcarriers + victim.cp_len
                               : (interferer.kind == WaveformKind::CpOfdm
                                      ? interferer.subcarriers + interferer.cp_len
                                      : victim.subcarriers);

    PrototypeFilter proto;
    if (victim.kind == WaveformKind::OqamPhydyas ||
        interferer.kind == WaveformKind::OqamPhydyas)
        proto = build_phydyas(m_sub, victim.kind == WaveformKind::OqamPhydyas
                                         ? victim.overlap
                                         : interferer.overlap);

    // When the two symbol clocks coincide (Hom), every window of a trial sees
    // the same boundary phase, so a trial contributes one effective timing
    // sample; short trials spread the symbol budget over many more offsets.
    const long per_trial = victim.symbol_stride() == interferer.symbol_stride()
                               ? 64
                               : std::max<long>(64, opt.symbols_per_trial);
    const long n_trials = (n_symbols + per_trial - 1) / per_trial;
    const int edge = victim.kind == WaveformKind::CpOfdm ? victim.overlap : 2 * victim.overlap;

    std::vector<TrialPartial> partials(static_cast<std::size_t>(n_trials));
    parallel_for_index(static_cast<std::size_t>(n_trials), opt.threads, [&](std::size_t t) {
        RngStream trial_rng = rng.child(t);
        const long tau = trial_rng.uniform_int(-(tau_stride / 2), tau_stride - tau_stride / 2);

        const long n_v = per_trial;
        const long stride_v = victim.symbol_stride();
        const long span = victim.kind == WaveformKind::CpOfdm
                              ? n_v * stride_v
                              : (n_v - 1) * stride_v +
                                    static_cast<long>(victim.overlap) * m_sub;
        const long stride_i = interferer.symbol_stride();
        const long tail_i = interferer.kind == WaveformKind::CpOfdm
                                ? stride_i
                                : static_cast<long>(interferer.overlap) * m_sub;
        // pad must not depend on tau, otherwise the burst alignment stops
        // tracking the drawn offset
        const long pad = tail_i + std::max<long>(stride_v, stride_i) + tau_stride;
        const auto n_i =
            static_cast<std::size_t>((span + 2 * pad - tail_i) / stride_i + 2);

        const ComplexSignal burst =
            single_subcarrier_burst(interferer, &proto, q, n_i, trial_rng);

        ComplexSignal y;
        y.subcarriers = m_sub;
        y.delta_f_hz = victim.delta_f_hz;
        y.samples.assign(static_cast<std::size_t>(span), cd(0.0, 0.0));
        add_at_offset(y.samples, burst.samples, -pad + tau);

        SymbolGrid eta = victim.kind == WaveformKind::CpOfdm
                             ? cpofdm_demodulate(y, victim, static_cast<std::size_t>(n_v))
                             : oqam_demodulate(y, victim, proto, static_cast<std::size_t>(n_v));

        TrialPartial part;
        part.sum.assign(static_cast<std::size_t>(m_sub), 0.0);
        std::vector<KahanSum> acc(static_cast<std::size_t>(m_sub));
        for (long n = edge; n < n_v - edge; ++n) {
            for (int m = 0; m < m_sub; ++m)
                acc[static_cast<std::size_t>(m)].add(
                    std::norm(eta.at(static_cast<std::size_t>(n), m)));
            ++part.count;
        }
        for (int m = 0; m < m_sub; ++m)
            part.sum[static_cast<std::size_t>(m)] = acc[static_cast<std::size_t>(m)].value();
        partials[t] = std::move(part);
    });

    // Per-trial means reduced in trial order: deterministic for any thread count.
    InterferenceTable table;
    table.max_distance = max_distance;
    table.power.assign(2 * max_distance + 1, 0.0);
    table.stderr_linear.assign(2 * max_distance + 1, 0.0);
    if (victim.kind == interferer.kind)
        table.label = victim.kind == WaveformKind::CpOfdm ? "MC-Hom" : "MC-Hom-OQAM";
    else
        table.label =
            victim.kind == WaveformKind::CpOfdm ? "MC-Het-2to1" : "MC-Het-1to2";

    for (int l = -max_distance; l <= max_distance; ++l) {
        const int m = q - l;
        KahanSum mean, sq;
        for (const auto& part : partials) {
            const double trial_mean = part.sum[static_cast<std::size_t>(m)] /
                                      static_cast<double>(part.count);
            mean.add(trial_mean);
            sq.add(trial_mean * trial_mean);
        }
        const double nt = static_cast<double>(n_trials);
        const double mu = mean.value() / nt;
        table.power[static_cast<std::size_t>(l + max_distance)] = mu;
        if (n_trials > 1) {
            const double var = std::max(0.0, sq.value() / nt - mu * mu);
            table.stderr_linear[static_cast<std::size_t>(l + max_distance)] =
                std::sqrt(var / (nt - 1.0));
        }
    }
    return table;
}

double total_injected(const InterferenceTable& table, const std::vector<int>& victim_set,
                      const std::vector<int>& interferer_set, double sigma2) {
    std::set<int> v(victim_set.begin(), victim_set.end());
    for (int q : interferer_set)
        if (v.count(q))
            throw std::invalid_argument("total_injected: victim and interferer sets overlap");
    KahanSum total;
    for (int m : victim_set)
        for (int q : interferer_set) total.add(table.at(q - m));
    return sigma2 * total.value();
}

GaussianApprox gaussian_approx(const InterferenceTable& table, int victim_subcarrier,
                               const std::vector<int>& interferer_set) {
    KahanSum v;
    for (int q : interferer_set) v.add(table.at(q - victim_subcarrier));
    return GaussianApprox{v.value()};
}

}  // namespace coexsim
