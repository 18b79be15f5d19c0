#include "coexsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "coexsim/mapping.hpp"
#include "coexsim/parallel.hpp"

namespace coexsim {

namespace {

std::vector<int> index_range(int lo, int hi) {
    std::vector<int> v(static_cast<std::size_t>(hi - lo + 1));
    std::iota(v.begin(), v.end(), lo);
    return v;
}

}  // namespace

ScenarioConfig::ScenarioConfig() : l1(index_range(37, 72)), l2(index_range(73, 108)) {}

double ScenarioConfig::sigma1() const { return std::pow(10.0, sigma1_db / 10.0); }
double ScenarioConfig::sigma2() const { return std::pow(10.0, sigma2_db / 10.0); }

WaveformConfig ScenarioConfig::user1_config() const {
    WaveformConfig c;
    c.kind = WaveformKind::CpOfdm;
    c.subcarriers = subcarriers;
    c.cp_len = cp_len;
    c.overlap = overlap;
    c.active = l1;
    c.symbol_power = sigma1();
    c.delta_f_hz = delta_f_hz;
    return c;
}

WaveformConfig ScenarioConfig::user2_config() const {
    WaveformConfig c;
    c.kind = scenario == ScenarioKind::Hom ? WaveformKind::CpOfdm : WaveformKind::OqamPhydyas;
    c.subcarriers = subcarriers;
    c.cp_len = cp_len;
    c.overlap = overlap;
    c.active = l2;
    c.symbol_power = sigma2();
    c.delta_f_hz = delta_f_hz;
    return c;
}

void ScenarioConfig::validate() const {
    user1_config().validate();
    user2_config().validate();
    for (int a : l1)
        for (int b : l2)
            if (a == b) throw std::invalid_argument("ScenarioConfig: l1 and l2 overlap");
    if (n_symbols < 1) throw std::invalid_argument("ScenarioConfig: n_symbols must be >= 1");
    const int stride = subcarriers + cp_len;
    if (tau_mode == TauMode::Fixed && (tau_fixed < -stride || tau_fixed > 2 * stride))
        throw std::invalid_argument("ScenarioConfig: fixed tau out of supported range");
}

namespace {

struct KeyValue {
    std::string key, value;
};

std::vector<int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        throw std::invalid_argument("scenario config: range must be lo..hi, got '" + text + "'");
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("scenario config: empty range '" + text + "'");
    return index_range(lo, hi);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

ScenarioConfig parse_scenario_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "scenario") {
                if (value == "hom")
                    cfg.scenario = ScenarioKind::Hom;
                else if (value == "het")
                    cfg.scenario = ScenarioKind::Het;
                else
                    throw std::invalid_argument("scenario must be hom or het");
            } else if (key == "m") {
                cfg.subcarriers = std::stoi(value);
            } else if (key == "n_cp") {
                cfg.cp_len = std::stoi(value);
            } else if (key == "k") {
                cfg.overlap = std::stoi(value);
            } else if (key == "delta_f_hz") {
                cfg.delta_f_hz = std::stod(value);
            } else if (key == "l1") {
                cfg.l1 = parse_range(value);
            } else if (key == "l2") {
                cfg.l2 = parse_range(value);
            } else if (key == "sigma1_db") {
                cfg.sigma1_db = std::stod(value);
            } else if (key == "sigma2_db") {
                cfg.sigma2_db = std::stod(value);
            } else if (key == "tau_mode") {
                if (value == "random")
                    cfg.tau_mode = TauMode::RandomUniform;
                else if (value == "fixed")
                    cfg.tau_mode = TauMode::Fixed;
                else
                    throw std::invalid_argument("tau_mode must be random or fixed");
            } else if (key == "tau_samples") {
                cfg.tau_fixed = std::stoi(value);
            } else if (key == "n_symbols") {
                cfg.n_symbols = std::stol(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else {
                throw std::invalid_argument("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            throw std::invalid_argument("scenario config line " + std::to_string(lineno) + ": " +
                                        e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return parse_scenario_config(in);
}

std::string format_scenario_config(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "scenario = " << (cfg.scenario == ScenarioKind::Hom ? "hom" : "het") << "\n"
       << "m = " << cfg.subcarriers << "\n"
       << "n_cp = " << cfg.cp_len << "\n"
       << "k = " << cfg.overlap << "\n"
       << "delta_f_hz = " << cfg.delta_f_hz << "\n"
       << "l1 = " << cfg.l1.front() << ".." << cfg.l1.back() << "\n"
       << "l2 = " << cfg.l2.front() << ".." << cfg.l2.back() << "\n"
       << "sigma1_db = " << cfg.sigma1_db << "\n"
       << "sigma2_db = " << cfg.sigma2_db << "\n"
       << "tau_mode = " << (cfg.tau_mode == TauMode::Fixed ? "fixed" : "random") << "\n"
       << "tau_samples = " << cfg.tau_fixed << "\n"
       << "n_symbols = " << cfg.n_symbols << "\n"
       << "seed = " << cfg.seed << "\n";
    return os.str();
}

namespace {

SymbolGrid random_payload(const WaveformConfig& cfg, std::size_t n_symbols, RngStream& rng) {
    const double amp = std::sqrt(cfg.symbol_power);
    if (cfg.kind == WaveformKind::CpOfdm) {
        SymbolGrid g(n_symbols, cfg.subcarriers, SymbolDomain::ComplexQam);
        std::uint8_t bits[kBitsPerQamSymbol];
        for (std::size_t n = 0; n < n_symbols; ++n)
            for (int sc : cfg.active) {
                for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
                g.at(n, sc) = qam64_map(bits) * amp;
            }
        return g;
    }
    SymbolGrid g(n_symbols, cfg.subcarriers, SymbolDomain::RealPam);
    std::uint8_t bits[kBitsPerPamSymbol];
    for (std::size_t n = 0; n < n_symbols; ++n)
        for (int sc : cfg.active) {
            for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
            g.at(n, sc) = cd(pam8_map(bits) * amp, 0.0);
        }
    return g;
}

void add_at_offset(std::vector<cd>& dst, const std::vector<cd>& src, long offset) {
    const long lo = std::max<long>(0, offset);
    const long hi =
        std::min<long>(static_cast<long>(dst.size()), offset + static_cast<long>(src.size()));
    for (long i = lo; i < hi; ++i) dst[static_cast<std::size_t>(i)] += src[i - offset];
}

ComplexSignal slice_signal(const std::vector<cd>& y, long from, long len, int m_sub,
                           double delta_f) {
    ComplexSignal s;
    s.subcarriers = m_sub;
    s.delta_f_hz = delta_f;
    s.samples.assign(y.begin() + from, y.begin() + from + len);
    return s;
}

}  // namespace

TrialResult run_trial(const ScenarioConfig& cfg, RngStream rng, long n1_symbols) {
    cfg.validate();
    const WaveformConfig u1 = cfg.user1_config();
    const WaveformConfig u2 = cfg.user2_config();
    const int m_sub = cfg.subcarriers;
    const long s1 = u1.symbol_stride();
    const long s2 = u2.symbol_stride();
    const long span1 = n1_symbols * s1;

    TrialResult out;
    out.tau = cfg.tau_mode == TauMode::Fixed
                  ? cfg.tau_fixed
                  : static_cast<int>(rng.uniform_int(-(s1 / 2), s1 - s1 / 2));

    // Secondary burst large enough that every counted symbol of either user
    // sees the other's full signal.
    const long tail2 = cfg.scenario == ScenarioKind::Hom
                           ? s2
                           : static_cast<long>(cfg.overlap) * m_sub;
    const long pad = tail2 + 2 * s1;
    const long n2_symbols = (span1 + 2 * pad - tail2) / s2 + 2;
    const long o2 = -pad + out.tau;  // user-2 burst origin on user 1's sample axis

    out.ref1 = random_payload(u1, static_cast<std::size_t>(n1_symbols), rng);
    out.ref2 = random_payload(u2, static_cast<std::size_t>(n2_symbols), rng);

    const ComplexSignal x1 = cpofdm_modulate(out.ref1, u1);
    PrototypeFilter proto;
    ComplexSignal x2;
    if (cfg.scenario == ScenarioKind::Hom) {
        x2 = cpofdm_modulate(out.ref2, u2);
    } else {
        proto = build_phydyas(m_sub, cfg.overlap);
        x2 = oqam_modulate(out.ref2, u2, proto);
    }

    const long kmin = std::min<long>(0, o2);
    const long kmax = std::max<long>(span1, o2 + static_cast<long>(x2.samples.size()));
    std::vector<cd> y(static_cast<std::size_t>(kmax - kmin), cd(0.0, 0.0));
    add_at_offset(y, x1.samples, -kmin);
    add_at_offset(y, x2.samples, o2 - kmin);

    const ComplexSignal y1 = slice_signal(y, -kmin, span1, m_sub, cfg.delta_f_hz);
    out.est1 = cpofdm_demodulate(y1, u1, static_cast<std::size_t>(n1_symbols));
    out.valid1_lo = cfg.overlap;
    out.valid1_hi = n1_symbols - cfg.overlap;

    const long win2 = cfg.scenario == ScenarioKind::Hom ? s2 : tail2;
    const ComplexSignal y2 =
        slice_signal(y, o2 - kmin, (n2_symbols - 1) * s2 + win2, m_sub, cfg.delta_f_hz);
    out.est2 = cfg.scenario == ScenarioKind::Hom
                   ? cpofdm_demodulate(y2, u2, static_cast<std::size_t>(n2_symbols))
                   : oqam_demodulate(y2, u2, proto, static_cast<std::size_t>(n2_symbols));
    // count only user-2 symbols whose analysis window lies inside user 1's burst
    long lo2 = (0 - o2 + s2 - 1) / s2;
    long hi2 = (span1 - win2 - o2) / s2 + 1;
    out.valid2_lo = std::max<long>(lo2, cfg.overlap);
    out.valid2_hi = std::min<long>(hi2, n2_symbols - cfg.overlap);
    if (out.valid2_lo >= out.valid2_hi)
        throw std::invalid_argument("run_trial: burst too short for any valid secondary symbol");
    return out;
}

std::vector<cd> eta_on_subcarrier(const TrialResult& trial, int user, int subcarrier) {
    const SymbolGrid& est = user == 1 ? trial.est1 : trial.est2;
    const SymbolGrid& ref = user == 1 ? trial.ref1 : trial.ref2;
    const long lo = user == 1 ? trial.valid1_lo : trial.valid2_lo;
    const long hi = user == 1 ? trial.valid1_hi : trial.valid2_hi;
    std::vector<cd> eta;
    eta.reserve(static_cast<std::size_t>(hi - lo));
    for (long n = lo; n < hi; ++n)
        eta.push_back(est.at(static_cast<std::size_t>(n), subcarrier) -
                      ref.at(static_cast<std::size_t>(n), subcarrier));
    return eta;
}

namespace {

constexpr long kSymbolsPerTrial = 200;

struct UserTally {
    double err_energy = 0.0;
    double ref_energy = 0.0;
    long long bit_errors = 0;
    long long bits = 0;
};

// Demaps reference and estimated grids over the valid range and tallies
// errors; reference demap recovers the exact transmitted bits (noiseless
// map/demap identity).
UserTally tally_user(const SymbolGrid& est, const SymbolGrid& ref, const std::vector<int>& active,
                     double symbol_power, long lo, long hi) {
    UserTally t;
    const double amp = std::sqrt(symbol_power);
    KahanSum err, refe;
    const bool qam = ref.domain == SymbolDomain::ComplexQam;
    std::uint8_t tx[kBitsPerQamSymbol], rx[kBitsPerQamSymbol];
    const int nb = qam ? kBitsPerQamSymbol : kBitsPerPamSymbol;
    for (long n = lo; n < hi; ++n) {
        for (int sc : active) {
            const cd r = ref.at(static_cast<std::size_t>(n), sc);
            const cd e = est.at(static_cast<std::size_t>(n), sc);
            err.add(std::norm(e - r));
            refe.add(std::norm(r));
            if (qam) {
                qam64_demap(r, amp, tx);
                qam64_demap(e, amp, rx);
            } else {
                pam8_demap(r.real(), amp, tx);
                pam8_demap(e.real(), amp, rx);
            }
            for (int b = 0; b < nb; ++b) t.bit_errors += (tx[b] ^ rx[b]) & 1;
            t.bits += nb;
        }
    }
    t.err_energy = err.value();
    t.ref_energy = refe.value();
    return t;
}

}  // namespace

std::vector<PowerPoint> sweep_power(const ScenarioConfig& cfg,
                                    const std::vector<double>& sigma2_db_list, int threads) {
    if (sigma2_db_list.empty()) throw std::invalid_argument("sweep_power: empty power list");
    const long n_trials = (cfg.n_symbols + kSymbolsPerTrial - 1) / kSymbolsPerTrial;
    std::vector<PowerPoint> points;
    points.reserve(sigma2_db_list.size());
    const RngStream base(cfg.seed, 0);
    for (double s2db : sigma2_db_list) {
        ScenarioConfig point_cfg = cfg;
        point_cfg.sigma2_db = s2db;
        std::vector<UserTally> t1(static_cast<std::size_t>(n_trials));
        std::vector<UserTally> t2(static_cast<std::size_t>(n_trials));
        parallel_for_index(static_cast<std::size_t>(n_trials), threads, [&](std::size_t t) {
            // same child stream for every power point: common random numbers
            const TrialResult trial = run_trial(point_cfg, base.child(t), kSymbolsPerTrial);
            t1[t] = tally_user(trial.est1, trial.ref1, point_cfg.l1, point_cfg.sigma1(),
                               trial.valid1_lo, trial.valid1_hi);
            t2[t] = tally_user(trial.est2, trial.ref2, point_cfg.l2, point_cfg.sigma2(),
                               trial.valid2_lo, trial.valid2_hi);
        });
        UserTally u1, u2;
        for (long t = 0; t < n_trials; ++t) {
            const auto& a = t1[static_cast<std::size_t>(t)];
            const auto& b = t2[static_cast<std::size_t>(t)];
            u1.err_energy += a.err_energy;
            u1.ref_energy += a.ref_energy;
            u1.bit_errors += a.bit_errors;
            u1.bits += a.bits;
            u2.err_energy += b.err_energy;
            u2.ref_energy += b.ref_energy;
            u2.bit_errors += b.bit_errors;
            u2.bits += b.bits;
        }
        PowerPoint p;
        p.sigma2_db = s2db;
        p.evm1_db = 10.0 * std::log10(std::max(u1.err_energy / u1.ref_energy, 1e-30));
        p.evm2_db = 10.0 * std::log10(std::max(u2.err_energy / u2.ref_energy, 1e-30));
        p.ber1 = ber_from_counts(u1.bit_errors, u1.bits);
        p.ber2 = ber_from_counts(u2.bit_errors, u2.bits);
        points.push_back(std::move(p));
    }
    return points;
}

std::vector<TauPoint> sweep_tau(const ScenarioConfig& cfg, const std::vector<int>& taus,
                                int threads) {
    if (taus.empty()) throw std::invalid_argument("sweep_tau: empty tau list");
    const long n_trials = (cfg.n_symbols + kSymbolsPerTrial - 1) / kSymbolsPerTrial;
    std::vector<TauPoint> points;
    points.reserve(taus.size());
    const RngStream base(cfg.seed, 0);
    for (int tau : taus) {
        ScenarioConfig point_cfg = cfg;
        point_cfg.tau_mode = TauMode::Fixed;
        point_cfg.tau_fixed = tau;
        std::vector<UserTally> t1(static_cast<std::size_t>(n_trials));
        parallel_for_index(static_cast<std::size_t>(n_trials), threads, [&](std::size_t t) {
            const TrialResult trial = run_trial(point_cfg, base.child(t), kSymbolsPerTrial);
            t1[t] = tally_user(trial.est1, trial.ref1, point_cfg.l1, point_cfg.sigma1(),
                               trial.valid1_lo, trial.valid1_hi);
        });
        UserTally u1;
        for (long t = 0; t < n_trials; ++t) {
            u1.bit_errors += t1[static_cast<std::size_t>(t)].bit_errors;
            u1.bits += t1[static_cast<std::size_t>(t)].bits;
        }
        TauPoint p;
        p.tau = tau;
        p.ber1 = ber_from_counts(u1.bit_errors, u1.bits);
        points.push_back(p);
    }
    return points;
}

}  // namespace coexsim
