#include "selprior/special.hpp"
#include "selprior/errors.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <string>

namespace selprior {

namespace {

void require_finite(double x, const char* who) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(who) + ": non-finite argument");
    }
}

// Mills ratio R(z) = Phi(-z)/phi(z) for z > 0 via the Laplace continued
// fraction R(z) = 1/(z + 1/(z + 2/(z + 3/(...)))), evaluated with the
// modified Lentz algorithm.  Converges quickly for z >= 8.
double mills_ratio_cf(double z) {
    const double tiny = 1e-300;
    double f = tiny;
    double c = f;
    double d = 0.0;
    for (int k = 1; k <= 500; ++k) {
        const double a = (k == 1) ? 1.0 : static_cast<double>(k - 1);
        const double b = z;
        d = b + a * d;
        if (d == 0.0) d = tiny;
        c = b + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) {
            return f;
        }
    }
    throw NumericError("mills_ratio_cf: no convergence at z = " + std::to_string(z));
}

} // namespace

double std_normal_pdf(double x) {
    require_finite(x, "std_normal_pdf");
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_log_pdf(double x) {
    require_finite(x, "std_normal_log_pdf");
    return -0.5 * x * x - kLogSqrt2Pi;
}

double std_normal_cdf(double x) {
    require_finite(x, "std_normal_cdf");
    if (x <= -8.0) {
        return std::exp(std_normal_log_cdf(x));
    }
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double std_normal_log_cdf(double x) {
    require_finite(x, "std_normal_log_cdf");
    if (x <= -8.0) {
        // Phi(x) = phi(x) * R(-x)
        return std_normal_log_pdf(x) + std::log(mills_ratio_cf(-x));
    }
    if (x >= 8.0) {
        const double upper = 0.5 * std::erfc(x * M_SQRT1_2);
        return std::log1p(-upper);
    }
    return std::log(0.5 * std::erfc(-x * M_SQRT1_2));
}

double std_normal_quantile(double p) {
    if (!std::isfinite(p) || p <= 0.0 || p >= 1.0) {
        throw DomainError("std_normal_quantile: p must lie in (0,1)");
    }
    static const boost::math::normal_distribution<double> unit(0.0, 1.0);
    return boost::math::quantile(unit, p);
}

HazardPair hazard_pair(double x) {
    require_finite(x, "hazard_pair");
    const double h1 = std::exp(log_hazard_h1(x));
    const double h2 = -x * h1 - h1 * h1;
    return HazardPair{h1, h2};
}

double log_hazard_h1(double x) {
    require_finite(x, "log_hazard_h1");
    if (x <= -8.0) {
        return -std::log(mills_ratio_cf(-x));
    }
    return std_normal_log_pdf(x) - std_normal_log_cdf(x);
}

double one_plus_h2(double x) {
    require_finite(x, "one_plus_h2");
    if (x <= -30.0) {
        // 1 + h2(x) = e (1 - 6e + 50e^2 - 518e^3) + O(e^5), e = 1/x^2.
        // The direct form below cancels to roundoff jitter out here, and
        // smoothness matters more than its slightly better accuracy.
        const double e = 1.0 / (x * x);
        return e * (1.0 - e * (6.0 - e * (50.0 - 518.0 * e)));
    }
    return 1.0 + hazard_pair(x).h2;
}

double owen_linear_antiderivative(double x, double a, double b) {
    require_finite(x, "owen_linear_antiderivative");
    require_finite(a, "owen_linear_antiderivative");
    require_finite(b, "owen_linear_antiderivative");
    const double d = std::sqrt(1.0 + b * b);
    return (b / d) * std_normal_pdf(a / d) * std_normal_cdf(d * x + a * b / d)
         - std_normal_pdf(x) * std_normal_cdf(a + b * x);
}

double regularized_gamma_cdf(double shape, double rate, double x) {
    if (!(shape > 0.0) || !(rate > 0.0) || !(x > 0.0) ||
        !std::isfinite(shape) || !std::isfinite(rate)) {
        throw DomainError("regularized_gamma_cdf: parameters must be positive");
    }
    if (std::isinf(x)) return 1.0;
    return boost::math::gamma_p(shape, rate * x);
}

double inverse_gaussian_cdf(double mean, double shape, double x) {
    if (!(mean > 0.0) || !(shape > 0.0) || !(x > 0.0) ||
        !std::isfinite(mean) || !std::isfinite(shape)) {
        throw DomainError("inverse_gaussian_cdf: parameters must be positive");
    }
    if (std::isinf(x)) return 1.0;
    const double s = std::sqrt(shape / x);
    const double first = std_normal_cdf(s * (x / mean - 1.0));
    const double second = std::exp(2.0 * shape / mean +
                                   std_normal_log_cdf(-s * (x / mean + 1.0)));
    const double p = first + second;
    return p < 1.0 ? (p > 0.0 ? p : 0.0) : 1.0;
}

} // namespace selprior
