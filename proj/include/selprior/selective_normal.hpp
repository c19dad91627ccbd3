#pragma once

#include "selprior/curve.hpp"

#include <functional>
#include <string>

namespace selprior {

// Normal-location model reduced by sufficiency: Y ~ N(theta, 1/n), with
// selection driven by the first gamma-fraction of the data exceeding t.
// gamma = 1 is hard one-sided truncation; gamma < 1 is equivalent to
// additive Gaussian randomised selection.
struct SplitNormalModel {
    double n;
    double gamma;
    double t;

    SplitNormalModel(double n_, double gamma_, double t_);

    double n1() const { return gamma * n; }
    double n2() const { return n - gamma * n; }
    std::string id() const;
};

enum class PriorKind {
    Uniform,
    ExactMatching,
    SelectiveJeffreys,
    NonSelectiveJeffreys,
};
const char* to_string(PriorKind kind);

enum class PosteriorMode { Selective, Unadjusted };

// p(y): probability that inference proceeds given the observed y.
double selection_function(const SplitNormalModel& m, double y);

// phi(theta) = P_theta(selection) and its logarithm.
double selection_probability(const SplitNormalModel& m, double theta);
double log_selection_probability(const SplitNormalModel& m, double theta);

// H(theta; y) = P_theta(Y >= y | selection), a distribution function in
// theta and the basis of the exact matching construction.
double confidence_cdf(const SplitNormalModel& m, double theta, double y);

// theta with H(theta; y) = alpha, found by bracketed root expansion.
double confidence_quantile(const SplitNormalModel& m, double alpha, double y);

// Exact probability-matching prior density (unnormalised, data-dependent).
// gamma = 1 uses the h1-ratio closed form; gamma < 1 the split-sample
// closed form, evaluated fully in log scale.
double pmp_prior_density(const SplitNormalModel& m, double theta, double y);
double log_pmp_prior_density(const SplitNormalModel& m, double theta, double y);

// Numeric route for the same prior: -(dH/dtheta)/(dH/dy) by central
// differences of the confidence distribution, scaled to agree with the
// closed form.  Kept as an independent cross-check.
double pmp_prior_density_fd(const SplitNormalModel& m, double theta, double y);

// Jeffreys prior of the selective model (unnormalised):
// [1 + gamma * h2(n1^{1/2}(theta - t))]^{1/2}.
double jeffreys_prior_density(const SplitNormalModel& m, double theta);

// log prior density for the given kind; y is consulted only by
// ExactMatching.  Uniform and NonSelectiveJeffreys coincide here because
// the non-selective Fisher information of a location model is constant.
double log_prior_density(const SplitNormalModel& m, PriorKind kind, double theta,
                         double y);

// Unnormalised log posterior density at theta.  Selective mode divides the
// likelihood by the selection probability; Unadjusted does not.
double log_posterior_density(const SplitNormalModel& m, double y,
                             const std::function<double(double)>& log_prior,
                             PosteriorMode mode, double theta);

PosteriorCurve posterior_curve(const SplitNormalModel& m, double y, PriorKind kind,
                               PosteriorMode mode);
PosteriorCurve posterior_curve(const SplitNormalModel& m, double y,
                               const std::function<double(double)>& log_prior,
                               PosteriorMode mode, const std::string& prior_label);

// Posterior distribution function evaluated at a single point by direct
// quadrature; cheaper than tabulating a curve when only one value is used.
double posterior_cdf_at(const SplitNormalModel& m, double y, PriorKind kind,
                        PosteriorMode mode, double theta0);
double posterior_cdf_at(const SplitNormalModel& m, double y,
                        const std::function<double(double)>& log_prior,
                        PosteriorMode mode, double theta0);

} // namespace selprior
