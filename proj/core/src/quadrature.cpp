#include "coexsim/quadrature.hpp"

#include <cmath>

namespace coexsim {

namespace {

using Fn = std::function<double(double)>;

double eval(const Fn& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw QuadratureError("integrate: non-finite integrand value", x);
    return v;
}

struct Adaptive {
    const Fn& f;
    double rel_tol;
    double scale;  // running magnitude estimate for the relative test
    int max_depth;

    double simpson(double a, double b, double fa, double fm, double fb) const {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }

    double recurse(double a, double b, double fa, double fm, double fb, double whole, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(f, lm);
        const double frm = eval(f, rm);
        const double left = simpson(a, m, fa, flm, fm);
        const double right = simpson(m, b, fm, frm, fb);
        const double err = left + right - whole;
        const double tol = rel_tol * std::max(std::abs(left + right), scale);
        if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
            return left + right + err / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, depth - 1) +
               recurse(m, b, fm, frm, fb, right, depth - 1);
    }
};

}  // namespace

double integrate(const Fn& f, double lo, double hi, double rel_tol) {
    if (!(lo < hi)) throw std::invalid_argument("integrate: requires lo < hi");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("integrate: rel_tol must be positive");

    // Seed the interval split with a fixed coarse grid so narrow features
    // (PSD side lobes are ~1/K of a band wide) are not stepped over.
    constexpr int kSeed = 16;
    Adaptive ad{f, rel_tol, 0.0, 48};
    double fx[kSeed + 1];
    double total_coarse = 0.0;
    for (int i = 0; i <= kSeed; ++i) fx[i] = eval(f, lo + (hi - lo) * i / kSeed);
    for (int i = 0; i < kSeed; ++i) total_coarse += std::abs(fx[i]) + std::abs(fx[i + 1]);
    ad.scale = total_coarse * (hi - lo) / (2.0 * kSeed);

    double result = 0.0;
    for (int i = 0; i < kSeed; ++i) {
        const double a = lo + (hi - lo) * i / kSeed;
        const double b = lo + (hi - lo) * (i + 1) / kSeed;
        const double m = 0.5 * (a + b);
        const double fm = eval(f, m);
        const double whole = ad.simpson(a, b, fx[i], fm, fx[i + 1]);
        result += ad.recurse(a, b, fx[i], fm, fx[i + 1], whole, ad.max_depth);
    }
    return result;
}

}  // namespace coexsim
