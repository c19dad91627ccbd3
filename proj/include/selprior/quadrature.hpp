#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace selprior::quad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Options {
    double abs_tol = 1e-10;   // per-integral absolute tolerance
    double tail_tol = 1e-12;  // stop extending an infinite tail below this mass
    int max_depth = 60;       // bisection depth cap per segment
    double tail_step = 1.0;   // initial width of tail-extension segments
};

// Integral of f over [a, b]; either endpoint may be infinite.  Finite
// segments use adaptive Gauss-Kronrod bisection; infinite ends are covered
// by segments of doubling width until the added mass falls below tail_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

// log of the integral of exp(log_f) over [a, b] (endpoints may be
// infinite).  The integrand is rescaled by its maximum before integrating,
// so values far below the double range are handled.  `hint` must lie in
// [a, b] and should be near the mode; `width` sets the initial scan scale.
// Returns -inf when the mass is zero.
double log_integrate(const std::function<double(double)>& log_f, double a, double b,
                     double hint, double width, const Options& opts = {});

// Fixed evaluation grid: `panels` 15-point Kronrod rules tiling [a, b].
// For smooth integrands this is accurate far beyond the adaptive target
// and lets callers reuse integrand values across related integrals.
struct FixedRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
FixedRule composite_gk15(double a, double b, int panels);

} // namespace selprior::quad
