#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace coexsim {

struct QuadratureError : std::runtime_error {
    double abscissa;
    QuadratureError(const std::string& msg, double x) : std::runtime_error(msg), abscissa(x) {}
};

/// Adaptive Simpson integration of f over [lo, hi].
///
/// Deterministic for a given (f, lo, hi, rel_tol). Throws std::invalid_argument
/// unless lo < hi, and QuadratureError (carrying the offending abscissa) if f
/// returns a non-finite value.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-6);

}  // namespace coexsim
