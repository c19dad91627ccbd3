#pragma once

#include "selprior/curve.hpp"
#include "selprior/rng.hpp"
#include "selprior/selective_normal.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

namespace selprior {

// One-parameter full exponential family with data-split selection on the
// first-batch MLE.  Data sets are flat vectors whose first n1 entries form
// the selection batch.
struct ExpFamModel1D {
    std::string name;
    double domain_lo = 0.0;
    double domain_hi = 0.0; // open interval (domain_lo, domain_hi) for theta
    int n1 = 0;
    int n2 = 0;
    double threshold = 0.0; // selection rule on the batch-1 MLE
    bool inclusive = false; // >= rather than >

    std::function<double(double)> fisher_info; // per-sample i(theta)
    std::function<double(double)> vst;         // g, with g' = i^{1/2}
    std::function<double(double)> vst_inv;
    std::function<double(std::span<const double>)> mle;
    std::function<double(double, std::span<const double>)> log_lik; // up to const
    std::function<double(double)> analytic_selection_prob; // empty -> Monte Carlo
    std::function<double(double, RngStream&)> sample_one;

    int n() const { return n1 + n2; }
    double gamma() const { return static_cast<double>(n1) / n(); }
    bool selected(std::span<const double> data) const;

    // Normal-location proxy acting on nu = g(theta): total size n, split
    // fraction gamma, threshold g(c).  Monotone MLE rules commute with g.
    SplitNormalModel proxy() const;
};

// Built-in instances.
ExpFamModel1D make_binomial_model(int n1, int n2, double threshold = 0.5);
ExpFamModel1D make_exponential_model(int n1, int n2, double threshold = 1.0);
ExpFamModel1D make_inverse_gaussian_model(int n1, int n2, double threshold = 1.0);

// Selection probability as a first-class object.  Monte-Carlo evaluation
// reuses one fixed seed per evaluation so the estimate is a smooth function
// of theta (common random numbers).
struct SelectionProbabilityFn {
    enum class Method { Analytic, MonteCarlo };
    Method method = Method::Analytic;
    int mc_reps = 0;
    std::uint64_t mc_seed = 0;
    std::function<double(double)> evaluate;
};
SelectionProbabilityFn make_selection_probability_fn(const ExpFamModel1D& model,
                                                     int mc_reps = 200000,
                                                     std::uint64_t mc_seed = 7340087);

double selection_probability_expfam(const ExpFamModel1D& model, double theta);

// Non-informative prior in the theta parametrisation:
// i(theta)^{1/2} * pi_nu(g(theta)), where pi_nu is the chosen prior of the
// normal proxy.  ExactMatching needs the observed full-data MLE to place
// the proxy observation.
double induced_prior_density(const ExpFamModel1D& model, PriorKind kind, double theta,
                             std::optional<double> observed_mle = std::nullopt);
double log_induced_prior_density(const ExpFamModel1D& model, PriorKind kind,
                                 double theta,
                                 std::optional<double> observed_mle = std::nullopt);

// Posterior under the selective likelihood prior(theta) L(theta)/phi(theta).
PosteriorCurve selective_posterior_expfam(const ExpFamModel1D& model,
                                          std::span<const double> data,
                                          PriorKind kind);
double selective_posterior_cdf_expfam(const ExpFamModel1D& model,
                                      std::span<const double> data, PriorKind kind,
                                      double theta0);

// theta0 with selection probability equal to `prob`, by bisection.
double solve_theta_for_selection_prob(const ExpFamModel1D& model, double prob);

// Conditional prior for an orthogonally parametrised (psi, lambda) model:
// c(lambda) * i_psipsi(psi,lambda)^{1/2} * pi_nu(g(psi; lambda)), where the
// proxy threshold (and, for ExactMatching, the proxy observation) may vary
// with lambda.
using Prior2D = std::function<double(double, double)>;
Prior2D orthogonal_conditional_prior(
    std::function<double(double, double)> i_psipsi,
    std::function<double(double, double)> vst,
    std::function<double(double)> c_lambda, PriorKind kind, int n1, int n2,
    std::function<double(double)> nu_threshold,
    std::function<double(double)> nu_observed = {});

} // namespace selprior
