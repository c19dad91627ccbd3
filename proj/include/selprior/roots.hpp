#pragma once

#include <functional>

namespace selprior {

// Root of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 int max_iter = 200);

// Root of a monotone f starting from a seed interval, expanding the
// bracket geometrically in the direction indicated by the endpoint values.
// Throws NumericError with diagnostics if no sign change is found within
// `max_expand` doublings.
double find_root_monotone(const std::function<double(double)>& f,
                          double seed_lo, double seed_hi, int max_expand = 60);

} // namespace selprior
