#include "selprior/rng.hpp"
#include "selprior/special.hpp"

#include <cmath>

namespace selprior {

double RngStream::normal() {
    return std_normal_quantile(uniform());
}

double RngStream::exponential(double rate) {
    return -std::log(uniform()) / rate;
}

// Michael/Schucany/Haas transformation method.
double RngStream::inverse_gaussian(double mean, double shape) {
    const double z = normal();
    const double v = z * z;
    const double x = mean + mean * mean * v / (2.0 * shape) -
                     (mean / (2.0 * shape)) *
                         std::sqrt(4.0 * mean * shape * v + mean * mean * v * v);
    if (uniform() <= mean / (mean + x)) {
        return x;
    }
    return mean * mean / x;
}

} // namespace selprior
