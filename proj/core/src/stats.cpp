#include "coexsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coexsim {

namespace {

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

EvmResult evm(const SymbolGrid& estimated, const SymbolGrid& reference,
              const std::vector<int>& active, std::size_t edge_skip) {
    if (estimated.n_symbols != reference.n_symbols ||
        estimated.subcarriers != reference.subcarriers)
        throw std::invalid_argument("evm: grid shapes differ");
    if (2 * edge_skip >= estimated.n_symbols)
        throw std::invalid_argument("evm: edge_skip leaves no symbols");

    EvmResult r;
    r.subcarriers = active;
    r.per_subcarrier_evm2.reserve(active.size());
    KahanSum err_all, ref_all;
    for (int sc : active) {
        KahanSum err, ref;
        for (std::size_t n = edge_skip; n < estimated.n_symbols - edge_skip; ++n) {
            err.add(std::norm(estimated.at(n, sc) - reference.at(n, sc)));
            ref.add(std::norm(reference.at(n, sc)));
        }
        err_all.add(err.value());
        ref_all.add(ref.value());
        r.per_subcarrier_evm2.push_back(ref.value() > 0.0 ? err.value() / ref.value() : 0.0);
    }
    if (ref_all.value() <= 0.0) throw std::invalid_argument("evm: reference grid has no power");
    r.evm2 = err_all.value() / ref_all.value();
    r.evm_db = 10.0 * std::log10(std::max(r.evm2, 1e-30));
    return r;
}

BerResult ber_from_counts(long long errors, long long bits) {
    if (bits <= 0) throw std::invalid_argument("ber_from_counts: no bits");
    BerResult r;
    r.bits = bits;
    r.errors = errors;
    r.ber = static_cast<double>(errors) / static_cast<double>(bits);
    // 95% Wilson interval
    const double z = 1.959963984540054;
    const double n = static_cast<double>(bits);
    const double p = r.ber;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    r.wilson_lo = std::max(0.0, center - half);
    r.wilson_hi = std::min(1.0, center + half);
    return r;
}

BerResult ber_empirical(std::span<const std::uint8_t> tx_bits,
                        std::span<const std::uint8_t> rx_bits) {
    if (tx_bits.size() != rx_bits.size())
        throw std::invalid_argument("ber_empirical: bit stream lengths differ");
    long long errors = 0;
    for (std::size_t i = 0; i < tx_bits.size(); ++i)
        errors += (tx_bits[i] ^ rx_bits[i]) & 1;
    return ber_from_counts(errors, static_cast<long long>(tx_bits.size()));
}

double ber_awgn_pam(int order, double snr) {
    if (snr < 0.0) throw std::invalid_argument("ber_awgn_pam: snr must be >= 0");
    if (order < 2 || (order & (order - 1)) != 0)
        throw std::invalid_argument("ber_awgn_pam: order must be a power of two");
    const int nbits = static_cast<int>(std::lround(std::log2(order)));
    const double arg_scale = std::sqrt(3.0 * snr / (static_cast<double>(order) * order - 1.0));
    double total = 0.0;
    for (int k = 1; k <= nbits; ++k) {
        const double pow_k = std::pow(2.0, k - 1);
        const int imax = static_cast<int>((1.0 - std::pow(2.0, -k)) * order) - 1;
        double s = 0.0;
        for (int i = 0; i <= imax; ++i) {
            const double a = std::floor(i * pow_k / order);
            const double w = std::pow(-1.0, a) * (pow_k - std::floor(i * pow_k / order + 0.5));
            s += w * 2.0 * q_func((2.0 * i + 1.0) * arg_scale);
        }
        total += s / order;
    }
    return total / nbits;
}

double ber_awgn_8pam(double snr) { return ber_awgn_pam(8, snr); }
double ber_awgn_64qam(double snr) { return ber_awgn_pam(8, snr); }

NoiseStats noise_statistics(const std::vector<std::vector<cd>>& segments, int max_lag) {
    long n = 0;
    for (const auto& s : segments) n += static_cast<long>(s.size());
    if (n < 100) throw std::invalid_argument("noise_statistics: too few samples");
    if (max_lag < 1) throw std::invalid_argument("noise_statistics: max_lag must be >= 1");

    NoiseStats st;
    st.n_samples = n;

    // moment-matched zero-mean Gaussian fit per component
    KahanSum pow2;
    for (const auto& seg : segments)
        for (const cd& v : seg) pow2.add(std::norm(v));
    st.component_variance = pow2.value() / (2.0 * n);

    // histogram of pooled components, Freedman-Diaconis binning
    std::vector<double> pooled;
    pooled.reserve(2 * n);
    for (const auto& seg : segments)
        for (const cd& v : seg) {
            pooled.push_back(v.real());
            pooled.push_back(v.imag());
        }
    std::sort(pooled.begin(), pooled.end());
    const double q1 = pooled[pooled.size() / 4];
    const double q3 = pooled[(3 * pooled.size()) / 4];
    double width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(pooled.size()));
    if (width <= 0.0) width = 1.0;
    const double lo = pooled.front();
    const double hi = pooled.back();
    const int nbins = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    st.bin_edges.resize(nbins + 1);
    for (int b = 0; b <= nbins; ++b) st.bin_edges[b] = lo + width * b;
    st.bin_counts.assign(nbins, 0);
    for (double v : pooled) {
        int b = static_cast<int>((v - lo) / width);
        b = std::clamp(b, 0, nbins - 1);
        ++st.bin_counts[b];
    }

    // KS distance of the real component against N(0, component_variance)
    std::vector<double> re;
    re.reserve(n);
    for (const auto& seg : segments)
        for (const cd& v : seg) re.push_back(v.real());
    std::sort(re.begin(), re.end());
    const double sigma = std::sqrt(std::max(st.component_variance, 1e-300));
    double ks = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-re[i] / (sigma * std::sqrt(2.0)));
        const double hi_step = static_cast<double>(i + 1) / re.size();
        const double lo_step = static_cast<double>(i) / re.size();
        ks = std::max({ks, std::abs(cdf - hi_step), std::abs(cdf - lo_step)});
    }
    st.ks_statistic = ks;
    st.ks_threshold_1pct = 1.62762 / std::sqrt(static_cast<double>(re.size()));

    // biased autocovariance, segment-local lags
    st.autocovariance.assign(max_lag + 1, cd(0.0, 0.0));
    for (int lag = 0; lag <= max_lag; ++lag) {
        KahanSum acc_re, acc_im;
        for (const auto& seg : segments) {
            if (static_cast<int>(seg.size()) <= lag) continue;
            for (std::size_t i = 0; i + lag < seg.size(); ++i) {
                const cd p = seg[i + lag] * std::conj(seg[i]);
                acc_re.add(p.real());
                acc_im.add(p.imag());
            }
        }
        st.autocovariance[lag] = cd(acc_re.value() / n, acc_im.value() / n);
    }
    const double c0 = st.autocovariance[0].real();
    double w = 0.0;
    for (int lag = 1; lag <= max_lag; ++lag)
        w = std::max(w, std::abs(st.autocovariance[lag]) / std::max(c0, 1e-300));
    st.whiteness_score = w;
    return st;
}

NoiseStats noise_statistics(std::span<const cd> eta, int max_lag) {
    std::vector<std::vector<cd>> one{std::vector<cd>(eta.begin(), eta.end())};
    return noise_statistics(one, max_lag);
}

std::vector<cd> covariance_matrix(const NoiseStats& stats) {
    const std::size_t n = stats.autocovariance.size();
    std::vector<cd> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cd c = stats.autocovariance[i > j ? i - j : j - i];
            m[i * n + j] = i >= j ? c : std::conj(c);
        }
    return m;
}

bool cholesky_psd(std::vector<cd> a, std::size_t n, double shift) {
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] += shift;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j].real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(a[j * n + k]);
        if (d < 0.0) return false;
        const double rjj = std::sqrt(d);
        a[j * n + j] = rjj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cd s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k)
                s -= a[i * n + k] * std::conj(a[j * n + k]);
            a[i * n + j] = rjj > 0.0 ? s / rjj : cd(0.0, 0.0);
        }
    }
    return true;
}

}  // namespace coexsim
