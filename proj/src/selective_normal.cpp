#include "selprior/selective_normal.hpp"
#include "selprior/errors.hpp"
#include "selprior/quadrature.hpp"
#include "selprior/roots.hpp"
#include "selprior/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace selprior {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double randomisation_scale(const SplitNormalModel& m) {
    // slope of the probit selection function: p(y) = Phi(b * (y - t))
    return std::sqrt(m.n1() / (1.0 - m.gamma));
}

// log of the selection function.
double log_selection_function(const SplitNormalModel& m, double y) {
    if (m.gamma == 1.0) {
        return y > m.t ? 0.0 : -kInf;
    }
    return std_normal_log_cdf(randomisation_scale(m) * (y - m.t));
}

// Mode of the tilted integrand phi(sqrt(n)(y~ - theta)) p(y~): for theta far
// below t the product behaves like a Gaussian centred at this point.
double tilted_centre(const SplitNormalModel& m, double theta) {
    return (1.0 - m.gamma) * theta + m.gamma * m.t;
}

// log of  integral_y^inf  sqrt(n) phi(sqrt(n)(y~-theta)) p(y~) dy~,
// the numerator of H; `upper` selects the region on either side of y.
double log_conf_numerator(const SplitNormalModel& m, double theta, double y,
                          bool upper) {
    const double rn = std::sqrt(m.n);
    if (m.gamma == 1.0) {
        // closed form: the selected region is (t, inf)
        const double cut = std::max(y, m.t);
        if (upper) {
            return std_normal_log_cdf(rn * (theta - cut));
        }
        if (y <= m.t) return -kInf;
        // mass of (t, y)
        const double la = std_normal_log_cdf(rn * (theta - m.t));
        const double lb = std_normal_log_cdf(rn * (theta - y));
        if (lb >= la) return -kInf;
        return la + std::log1p(-std::exp(lb - la));
    }
    const auto log_f = [&](double v) {
        return 0.5 * std::log(m.n) + std_normal_log_pdf(rn * (v - theta)) +
               log_selection_function(m, v);
    };
    const double c = tilted_centre(m, theta);
    if (upper) {
        return quad::log_integrate(log_f, y, kInf, std::max(y, c), 1.0 / rn);
    }
    return quad::log_integrate(log_f, -kInf, y, std::min(y, c), 1.0 / rn);
}

double logaddexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-std::fabs(a - b)));
}

// log(e^a - e^b) for a > b; -inf when the difference vanishes.
double logsubexp(double a, double b) {
    if (b == -kInf) return a;
    const double d = a - b;
    if (d <= 0.0) return -kInf;
    return a + std::log1p(-std::exp(-d));
}

double log_pmp_gamma1(const SplitNormalModel& m, double theta, double y) {
    const double rn = std::sqrt(m.n);
    const double a = rn * (theta - m.t);
    const double b = rn * (theta - y);
    // log h1(a) - log h1(b) < 0 since h1 decreases and a > b
    const double delta = log_hazard_h1(a) - log_hazard_h1(b);
    if (delta >= 0.0) return -kInf;
    // prior = 1 - exp(delta)
    return std::log(-std::expm1(delta));
}

double log_pmp_gamma_lt1(const SplitNormalModel& m, double theta, double y) {
    const double rn = std::sqrt(m.n);
    const double rn1 = std::sqrt(m.n1());
    const double g = m.gamma;
    const double u1 = rn1 * (theta - m.t);
    const double z = rn * (y - theta);
    const double w = rn * (y - theta + g * (theta - m.t)) / std::sqrt(1.0 - g);

    const double lsel = std_normal_log_cdf(u1);
    const double l_up = log_conf_numerator(m, theta, y, true) - lsel;  // log H
    const double l_lo = log_conf_numerator(m, theta, y, false) - lsel; // log (1-H)

    // bracket term 1 - Phi(w) - H, assembled from whichever pair of small
    // quantities avoids cancellation against 1
    double l1, l2;
    if (l_up <= l_lo) {
        l1 = std_normal_log_cdf(-w); // B = Phi(-w) - H
        l2 = l_up;
    } else {
        l1 = l_lo; // B = (1-H) - Phi(w)
        l2 = std_normal_log_cdf(w);
    }
    double sign = 1.0;
    double l_abs_b = -kInf;
    if (l1 == -kInf && l2 == -kInf) {
        l_abs_b = -kInf;
    } else if (l1 >= l2) {
        l_abs_b = logsubexp(l1, l2);
    } else {
        sign = -1.0;
        l_abs_b = logsubexp(l2, l1);
    }

    // log of phi(u1)/phi(z), written as a product to avoid squaring
    const double scale = 0.5 * (z - u1) * (z + u1);
    const double l_term1 = 0.5 * std::log(g) + scale + l_abs_b;
    const double l_py = std_normal_log_cdf(randomisation_scale(m) * (y - m.t));

    if (sign > 0.0) {
        return logaddexp(l_term1, l_py);
    }
    return logsubexp(l_py, l_term1); // -inf if roundoff pushed it negative
}

void require_admissible(const SplitNormalModel& m, double y) {
    if (!std::isfinite(y)) {
        throw DomainError("observation must be finite");
    }
    if (m.gamma == 1.0 && y <= m.t) {
        throw InvalidObservationError(
            "gamma = 1 requires y > t: the datum is incompatible with selection");
    }
}

} // namespace

SplitNormalModel::SplitNormalModel(double n_, double gamma_, double t_)
    : n(n_), gamma(gamma_), t(t_) {
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DomainError("SplitNormalModel: n must be positive");
    }
    if (!(gamma > 0.0) || !(gamma <= 1.0)) {
        throw DomainError("SplitNormalModel: gamma must lie in (0, 1]");
    }
    if (!std::isfinite(t)) {
        throw DomainError("SplitNormalModel: t must be finite");
    }
}

std::string SplitNormalModel::id() const {
    std::ostringstream os;
    os << "normal(n=" << n << ",gamma=" << gamma << ",t=" << t << ")";
    return os.str();
}

const char* to_string(PriorKind kind) {
    switch (kind) {
        case PriorKind::Uniform: return "uniform";
        case PriorKind::ExactMatching: return "exact-matching";
        case PriorKind::SelectiveJeffreys: return "selective-jeffreys";
        case PriorKind::NonSelectiveJeffreys: return "nonselective-jeffreys";
    }
    return "?";
}

double selection_function(const SplitNormalModel& m, double y) {
    if (!std::isfinite(y)) throw DomainError("selection_function: y must be finite");
    if (m.gamma == 1.0) {
        return y > m.t ? 1.0 : 0.0;
    }
    return std_normal_cdf(randomisation_scale(m) * (y - m.t));
}

double selection_probability(const SplitNormalModel& m, double theta) {
    return std_normal_cdf(std::sqrt(m.n1()) * (theta - m.t));
}

double log_selection_probability(const SplitNormalModel& m, double theta) {
    return std_normal_log_cdf(std::sqrt(m.n1()) * (theta - m.t));
}

double confidence_cdf(const SplitNormalModel& m, double theta, double y) {
    require_admissible(m, y);
    if (!std::isfinite(theta)) throw DomainError("confidence_cdf: theta must be finite");
    if (m.gamma == 1.0) {
        const double rn = std::sqrt(m.n);
        const double lh = std_normal_log_cdf(rn * (theta - y)) -
                          std_normal_log_cdf(rn * (theta - m.t));
        return std::min(1.0, std::exp(lh));
    }
    const double lh =
        log_conf_numerator(m, theta, y, true) - log_selection_probability(m, theta);
    return std::clamp(std::exp(lh), 0.0, 1.0);
}

double confidence_quantile(const SplitNormalModel& m, double alpha, double y) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw DomainError("confidence_quantile: alpha must lie in (0,1)");
    }
    require_admissible(m, y);
    const double rn = std::sqrt(m.n);
    const auto f = [&](double theta) { return confidence_cdf(m, theta, y) - alpha; };
    return find_root_monotone(f, y - 3.0 / rn, y + 3.0 / rn);
}

double log_pmp_prior_density(const SplitNormalModel& m, double theta, double y) {
    require_admissible(m, y);
    if (!std::isfinite(theta)) throw DomainError("pmp prior: theta must be finite");
    if (m.gamma == 1.0) {
        return log_pmp_gamma1(m, theta, y);
    }
    return log_pmp_gamma_lt1(m, theta, y);
}

double pmp_prior_density(const SplitNormalModel& m, double theta, double y) {
    return std::exp(log_pmp_prior_density(m, theta, y));
}

double pmp_prior_density_fd(const SplitNormalModel& m, double theta, double y) {
    require_admissible(m, y);
    const double d = 1e-4 / std::sqrt(m.n);
    const double dth = confidence_cdf(m, theta + d, y) - confidence_cdf(m, theta - d, y);
    const double dy = confidence_cdf(m, theta, y + d) - confidence_cdf(m, theta, y - d);
    if (!(std::fabs(dy) > 1e-13)) {
        throw NumericError("pmp_prior_density_fd: dH/dy vanished; the prior is not "
                           "evaluable at theta = " + std::to_string(theta));
    }
    // p(y) scaling matches the closed forms
    return -dth / dy * selection_function(m, y);
}

double jeffreys_prior_density(const SplitNormalModel& m, double theta) {
    if (!std::isfinite(theta)) throw DomainError("jeffreys prior: theta must be finite");
    const double x = std::sqrt(m.n1()) * (theta - m.t);
    const double v = (1.0 - m.gamma) + m.gamma * one_plus_h2(x);
    return std::sqrt(std::max(v, 0.0));
}

double log_prior_density(const SplitNormalModel& m, PriorKind kind, double theta,
                         double y) {
    switch (kind) {
        case PriorKind::Uniform:
        case PriorKind::NonSelectiveJeffreys:
            return 0.0;
        case PriorKind::SelectiveJeffreys:
            return std::log(jeffreys_prior_density(m, theta));
        case PriorKind::ExactMatching:
            return log_pmp_prior_density(m, theta, y);
    }
    throw DomainError("log_prior_density: unknown prior kind");
}

double log_posterior_density(const SplitNormalModel& m, double y,
                             const std::function<double(double)>& log_prior,
                             PosteriorMode mode, double theta) {
    const double rn = std::sqrt(m.n);
    double v = log_prior(theta) + std_normal_log_pdf(rn * (y - theta));
    if (mode == PosteriorMode::Selective) {
        v -= log_selection_probability(m, theta);
    }
    return v;
}

PosteriorCurve posterior_curve(const SplitNormalModel& m, double y,
                               const std::function<double(double)>& log_prior,
                               PosteriorMode mode, const std::string& prior_label) {
    if (mode == PosteriorMode::Selective) {
        require_admissible(m, y);
    }
    const double rn = std::sqrt(m.n);
    const auto log_post = [&, y, mode](double theta) {
        return log_posterior_density(m, y, log_prior, mode, theta);
    };
    return build_posterior_curve(log_post, y - 10.0 / rn, y + 10.0 / rn,
                                 CurveMeta{m.id(), prior_label, y}, -kInf, kInf);
}

PosteriorCurve posterior_curve(const SplitNormalModel& m, double y, PriorKind kind,
                               PosteriorMode mode) {
    const auto lp = [&m, kind, y](double theta) {
        return log_prior_density(m, kind, theta, y);
    };
    return posterior_curve(m, y, lp, mode, to_string(kind));
}

double posterior_cdf_at(const SplitNormalModel& m, double y,
                        const std::function<double(double)>& log_prior,
                        PosteriorMode mode, double theta0) {
    if (mode == PosteriorMode::Selective) {
        require_admissible(m, y);
    }
    if (!std::isfinite(theta0)) throw DomainError("posterior_cdf_at: theta0 must be finite");
    const double rn = std::sqrt(m.n);
    const auto log_post = [&, y, mode](double theta) {
        return log_posterior_density(m, y, log_prior, mode, theta);
    };
    const double left = quad::log_integrate(log_post, -kInf, theta0,
                                            std::min(y, theta0), 1.0 / rn);
    const double right = quad::log_integrate(log_post, theta0, kInf,
                                             std::max(y, theta0), 1.0 / rn);
    if (left == -kInf) return 0.0;
    if (right == -kInf) return 1.0;
    return 1.0 / (1.0 + std::exp(right - left));
}

double posterior_cdf_at(const SplitNormalModel& m, double y, PriorKind kind,
                        PosteriorMode mode, double theta0) {
    const auto lp = [&m, kind, y](double theta) {
        return log_prior_density(m, kind, theta, y);
    };
    return posterior_cdf_at(m, y, lp, mode, theta0);
}

} // namespace selprior
