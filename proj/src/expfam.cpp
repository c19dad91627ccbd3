#include "selprior/expfam.hpp"
#include "selprior/errors.hpp"
#include "selprior/quadrature.hpp"
#include "selprior/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace selprior {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double batch1_mle(const ExpFamModel1D& m, std::span<const double> data) {
    if (static_cast<int>(data.size()) != m.n()) {
        throw DomainError(m.name + ": data size does not match n1 + n2");
    }
    return m.mle(data.subspan(0, static_cast<std::size_t>(m.n1)));
}

void require_in_domain(const ExpFamModel1D& m, double theta) {
    if (!(theta > m.domain_lo) || !(theta < m.domain_hi)) {
        throw DomainError(m.name + ": theta outside the parameter domain");
    }
}

double log_selection_prob_floored(const ExpFamModel1D& m, double theta) {
    const double p = selection_probability_expfam(m, theta);
    return std::log(std::max(p, 1e-300));
}

} // namespace

bool ExpFamModel1D::selected(std::span<const double> data) const {
    const double est = batch1_mle(*this, data);
    return inclusive ? est >= threshold : est > threshold;
}

SplitNormalModel ExpFamModel1D::proxy() const {
    return SplitNormalModel(static_cast<double>(n()), gamma(), vst(threshold));
}

ExpFamModel1D make_binomial_model(int n1, int n2, double threshold) {
    if (n1 < 1 || n2 < 0) throw DomainError("binomial model: need n1 >= 1, n2 >= 0");
    ExpFamModel1D m;
    m.name = "binomial";
    m.domain_lo = 0.0;
    m.domain_hi = 1.0;
    m.n1 = n1;
    m.n2 = n2;
    m.threshold = threshold;
    m.inclusive = true; // rule: batch-1 success fraction >= threshold
    // The arcsine convention: g(theta) = asin(sqrt(theta)) with matching
    // information scaling, so the proxy threshold for 0.5 is pi/4.
    m.fisher_info = [](double th) { return 1.0 / (4.0 * th * (1.0 - th)); };
    m.vst = [](double th) { return std::asin(std::sqrt(th)); };
    m.vst_inv = [](double nu) {
        const double s = std::sin(std::clamp(nu, 0.0, M_PI / 2.0));
        return s * s;
    };
    m.mle = [](std::span<const double> xs) {
        return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    };
    m.log_lik = [](double th, std::span<const double> xs) {
        const double k = std::accumulate(xs.begin(), xs.end(), 0.0);
        const double n = static_cast<double>(xs.size());
        if (th <= 0.0 || th >= 1.0) return -kInf;
        return k * std::log(th) + (n - k) * std::log1p(-th);
    };
    m.analytic_selection_prob = [n1, threshold](double th) {
        const double exact = n1 * threshold;
        int kmin = static_cast<int>(std::ceil(exact - 1e-9));
        // inclusive rule keeps the boundary count
        double logp = std::log(th);
        double logq = std::log1p(-th);
        double total = 0.0;
        for (int k = kmin; k <= n1; ++k) {
            const double lc = std::lgamma(n1 + 1.0) - std::lgamma(k + 1.0) -
                              std::lgamma(n1 - k + 1.0);
            total += std::exp(lc + k * logp + (n1 - k) * logq);
        }
        return std::min(total, 1.0);
    };
    m.sample_one = [](double th, RngStream& rng) {
        return rng.bernoulli(th) ? 1.0 : 0.0;
    };
    return m;
}

ExpFamModel1D make_exponential_model(int n1, int n2, double threshold) {
    if (n1 < 1 || n2 < 0) throw DomainError("exponential model: need n1 >= 1, n2 >= 0");
    if (!(threshold > 0.0)) throw DomainError("exponential model: threshold must be positive");
    ExpFamModel1D m;
    m.name = "exponential";
    m.domain_lo = 0.0;
    m.domain_hi = kInf;
    m.n1 = n1;
    m.n2 = n2;
    m.threshold = threshold;
    m.inclusive = false; // rule: rate MLE of batch 1 exceeds the threshold
    m.fisher_info = [](double th) { return 1.0 / (th * th); };
    m.vst = [](double th) { return std::log(th); };
    m.vst_inv = [](double nu) { return std::exp(nu); };
    m.mle = [](std::span<const double> xs) {
        const double s = std::accumulate(xs.begin(), xs.end(), 0.0);
        return xs.size() / s;
    };
    m.log_lik = [](double th, std::span<const double> xs) {
        if (!(th > 0.0)) return -kInf;
        const double s = std::accumulate(xs.begin(), xs.end(), 0.0);
        return xs.size() * std::log(th) - th * s;
    };
    // MLE > c  <=>  sum of the batch < n1/c, a Gamma(n1, theta) event
    m.analytic_selection_prob = [n1, threshold](double th) {
        return regularized_gamma_cdf(static_cast<double>(n1), th, n1 / threshold);
    };
    m.sample_one = [](double th, RngStream& rng) { return rng.exponential(th); };
    return m;
}

ExpFamModel1D make_inverse_gaussian_model(int n1, int n2, double threshold) {
    if (n1 < 1 || n2 < 0) throw DomainError("inverse-gaussian model: need n1 >= 1, n2 >= 0");
    if (!(threshold > 0.0)) throw DomainError("inverse-gaussian model: threshold must be positive");
    ExpFamModel1D m;
    m.name = "inverse-gaussian";
    m.domain_lo = 0.0;
    m.domain_hi = kInf;
    m.n1 = n1;
    m.n2 = n2;
    m.threshold = threshold;
    m.inclusive = false;
    m.fisher_info = [](double th) { return 1.0 / (th * th * th); }; // shape 1
    m.vst = [](double th) { return -2.0 / std::sqrt(th); };
    m.vst_inv = [](double nu) { return 4.0 / (nu * nu); };
    m.mle = [](std::span<const double> xs) {
        return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    };
    m.log_lik = [](double th, std::span<const double> xs) {
        if (!(th > 0.0)) return -kInf;
        const double s = std::accumulate(xs.begin(), xs.end(), 0.0);
        return -0.5 * s / (th * th) + xs.size() / th;
    };
    // The sample mean of n1 unit-shape draws is IG(theta, n1).
    m.analytic_selection_prob = [n1, threshold](double th) {
        return 1.0 - inverse_gaussian_cdf(th, static_cast<double>(n1), threshold);
    };
    m.sample_one = [](double th, RngStream& rng) {
        return rng.inverse_gaussian(th, 1.0);
    };
    return m;
}

SelectionProbabilityFn make_selection_probability_fn(const ExpFamModel1D& model,
                                                     int mc_reps,
                                                     std::uint64_t mc_seed) {
    SelectionProbabilityFn fn;
    if (model.analytic_selection_prob) {
        fn.method = SelectionProbabilityFn::Method::Analytic;
        fn.evaluate = model.analytic_selection_prob;
        return fn;
    }
    fn.method = SelectionProbabilityFn::Method::MonteCarlo;
    fn.mc_reps = mc_reps;
    fn.mc_seed = mc_seed;
    const ExpFamModel1D* m = &model;
    fn.evaluate = [m, mc_reps, mc_seed](double theta) {
        RngStream rng(mc_seed); // one fixed stream for every theta
        std::vector<double> batch(static_cast<std::size_t>(m->n1));
        long hits = 0;
        for (int r = 0; r < mc_reps; ++r) {
            for (auto& x : batch) x = m->sample_one(theta, rng);
            const double est = m->mle(batch);
            const bool sel = m->inclusive ? est >= m->threshold : est > m->threshold;
            hits += sel ? 1 : 0;
        }
        if (hits == 0) {
            throw NumericError(m->name +
                               ": Monte-Carlo selection probability degenerate "
                               "(zero acceptances)");
        }
        return static_cast<double>(hits) / mc_reps;
    };
    return fn;
}

double selection_probability_expfam(const ExpFamModel1D& model, double theta) {
    require_in_domain(model, theta);
    if (model.analytic_selection_prob) {
        return model.analytic_selection_prob(theta);
    }
    return make_selection_probability_fn(model).evaluate(theta);
}

double log_induced_prior_density(const ExpFamModel1D& model, PriorKind kind,
                                 double theta, std::optional<double> observed_mle) {
    require_in_domain(model, theta);
    const double info = model.fisher_info(theta);
    if (!(info > 0.0)) {
        throw DomainError(model.name + ": Fisher information must be positive");
    }
    const double base = 0.5 * std::log(info);
    switch (kind) {
        case PriorKind::Uniform:
        case PriorKind::NonSelectiveJeffreys:
            // a flat prior on the VST scale maps back to i(theta)^{1/2}
            return base;
        case PriorKind::SelectiveJeffreys:
            return base + std::log(jeffreys_prior_density(model.proxy(),
                                                          model.vst(theta)));
        case PriorKind::ExactMatching: {
            if (!observed_mle) {
                throw DomainError(model.name +
                                  ": exact matching prior needs the observed MLE");
            }
            const double y_nu = model.vst(*observed_mle);
            return base + log_pmp_prior_density(model.proxy(), model.vst(theta), y_nu);
        }
    }
    throw DomainError("log_induced_prior_density: unknown prior kind");
}

double induced_prior_density(const ExpFamModel1D& model, PriorKind kind, double theta,
                             std::optional<double> observed_mle) {
    return std::exp(log_induced_prior_density(model, kind, theta, observed_mle));
}

namespace {

std::function<double(double)> selective_log_posterior(const ExpFamModel1D& model,
                                                      std::span<const double> data,
                                                      PriorKind kind) {
    if (!model.selected(data)) {
        throw InvalidObservationError(model.name +
                                      ": data violates the selection rule");
    }
    const double theta_hat = model.mle(data);
    std::vector<double> owned(data.begin(), data.end());
    const ExpFamModel1D* m = &model;
    return [m, kind, theta_hat, owned = std::move(owned)](double theta) {
        if (!(theta > m->domain_lo) || !(theta < m->domain_hi)) {
            return -kInf;
        }
        const double ll = m->log_lik(theta, owned);
        if (ll == -kInf) return -kInf;
        const double lp =
            log_induced_prior_density(*m, kind, theta, theta_hat);
        if (lp == -kInf) return -kInf;
        return lp + ll - log_selection_prob_floored(*m, theta);
    };
}

struct PilotRange {
    double lo, hi, centre, width;
};

PilotRange pilot_range(const ExpFamModel1D& model, double theta_hat) {
    // quantile band 1e-8 .. 1-1e-8 of the normal proxy, mapped back
    const double z = 5.6120012; // Phi^{-1}(1 - 1e-8)
    const double nu_hat = model.vst(theta_hat);
    const double half = z / std::sqrt(static_cast<double>(model.n()));
    double lo = model.vst_inv(nu_hat - half);
    double hi = model.vst_inv(nu_hat + half);
    if (!(lo < hi)) std::swap(lo, hi);
    lo = std::max(lo, model.domain_lo + 1e-12 * (theta_hat - model.domain_lo));
    if (std::isfinite(model.domain_hi)) {
        hi = std::min(hi, model.domain_hi - 1e-12 * (model.domain_hi - theta_hat));
    }
    return PilotRange{lo, hi, theta_hat, (hi - lo) / 8.0};
}

} // namespace

PosteriorCurve selective_posterior_expfam(const ExpFamModel1D& model,
                                          std::span<const double> data,
                                          PriorKind kind) {
    const auto log_post = selective_log_posterior(model, data, kind);
    const double theta_hat = model.mle(data);
    const auto range = pilot_range(model, theta_hat);
    return build_posterior_curve(log_post, range.lo, range.hi,
                                 CurveMeta{model.name, to_string(kind), theta_hat},
                                 model.domain_lo, model.domain_hi);
}

double selective_posterior_cdf_expfam(const ExpFamModel1D& model,
                                      std::span<const double> data, PriorKind kind,
                                      double theta0) {
    require_in_domain(model, theta0);
    const auto log_post = selective_log_posterior(model, data, kind);
    const double theta_hat = model.mle(data);
    const double width = pilot_range(model, theta_hat).width;
    const double left = quad::log_integrate(log_post, model.domain_lo, theta0,
                                            std::min(theta_hat, theta0), width);
    const double right = quad::log_integrate(log_post, theta0, model.domain_hi,
                                             std::max(theta_hat, theta0), width);
    if (left == -kInf) return 0.0;
    if (right == -kInf) return 1.0;
    return 1.0 / (1.0 + std::exp(right - left));
}

double solve_theta_for_selection_prob(const ExpFamModel1D& model, double prob) {
    if (!(prob > 0.0) || !(prob < 1.0)) {
        throw DomainError("solve_theta_for_selection_prob: prob must lie in (0,1)");
    }
    if (!model.analytic_selection_prob) {
        throw DomainError(model.name + ": no analytic selection probability");
    }
    const auto& phi = model.analytic_selection_prob;
    double lo = model.threshold, hi = model.threshold;
    for (int k = 0; k < 200 && phi(lo) > prob; ++k) lo *= 0.5;
    for (int k = 0; k < 200 && phi(hi) < prob; ++k) hi *= 2.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (phi(mid) < prob) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-10 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

Prior2D orthogonal_conditional_prior(std::function<double(double, double)> i_psipsi,
                                     std::function<double(double, double)> vst,
                                     std::function<double(double)> c_lambda,
                                     PriorKind kind, int n1, int n2,
                                     std::function<double(double)> nu_threshold,
                                     std::function<double(double)> nu_observed) {
    if (!c_lambda) throw DomainError("orthogonal_conditional_prior: c(lambda) required");
    if (kind == PriorKind::ExactMatching && !nu_observed) {
        throw DomainError("orthogonal_conditional_prior: exact matching needs the "
                          "observed proxy location");
    }
    const double total = n1 + n2;
    const double gamma = n1 / total;
    return [=](double psi, double lambda) {
        const double c = c_lambda(lambda);
        if (!(c > 0.0)) {
            throw DomainError("orthogonal_conditional_prior: c(lambda) must be positive");
        }
        const double info = i_psipsi(psi, lambda);
        if (!(info > 0.0)) {
            throw DomainError("orthogonal_conditional_prior: i_psipsi must be positive");
        }
        const double nu = vst(psi, lambda);
        const SplitNormalModel proxy(total, gamma, nu_threshold(lambda));
        double pn = 1.0;
        switch (kind) {
            case PriorKind::Uniform:
            case PriorKind::NonSelectiveJeffreys:
                pn = 1.0;
                break;
            case PriorKind::SelectiveJeffreys:
                pn = jeffreys_prior_density(proxy, nu);
                break;
            case PriorKind::ExactMatching:
                pn = pmp_prior_density(proxy, nu, nu_observed(lambda));
                break;
        }
        return c * std::sqrt(info) * pn;
    };
}

} // namespace selprior
