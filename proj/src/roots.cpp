#include "selprior/roots.hpp"
#include "selprior/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <string>

namespace selprior {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw NumericError("find_root: endpoints do not bracket a root (f(" +
                           std::to_string(lo) + ") = " + std::to_string(flo) +
                           ", f(" + std::to_string(hi) + ") = " +
                           std::to_string(fhi) + ")");
    }
    boost::math::tools::eps_tolerance<double> tol(48);
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
}

double find_root_monotone(const std::function<double(double)>& f,
                          double seed_lo, double seed_hi, int max_expand) {
    double lo = seed_lo;
    double hi = seed_hi;
    double flo = f(lo);
    double fhi = f(hi);
    const bool increasing = fhi >= flo;
    for (int k = 0; k < max_expand; ++k) {
        if (flo == 0.0) return lo;
        if (fhi == 0.0) return hi;
        if ((flo > 0.0) != (fhi > 0.0)) {
            boost::math::tools::eps_tolerance<double> tol(48);
            std::uintmax_t iters = 200;
            const auto r =
                boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
            return 0.5 * (r.first + r.second);
        }
        const double w = hi - lo;
        const bool need_smaller = increasing ? (flo > 0.0) : (flo < 0.0);
        if (need_smaller) {
            lo -= w * std::pow(2.0, k);
            flo = f(lo);
        } else {
            hi += w * std::pow(2.0, k);
            fhi = f(hi);
        }
    }
    throw NumericError("find_root_monotone: failed to bracket a root after " +
                       std::to_string(max_expand) + " expansions; last interval [" +
                       std::to_string(lo) + ", " + std::to_string(hi) +
                       "] with values (" + std::to_string(flo) + ", " +
                       std::to_string(fhi) + ")");
}

} // namespace selprior
