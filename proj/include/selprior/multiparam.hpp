#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace selprior {

// Normal sample with unknown mean and variance; the first batch must pass
// the t-test  v1^{-1/2} ybar1 > n1^{-1/2} t  for inference to happen.
// v1, v2 are the maximum-likelihood variance estimates of each batch.
struct UnknownVarModel {
    int n1;
    int n2;
    double t;
    double ybar1;
    double v1;
    double ybar2; // ignored when n2 == 0
    double v2;    // defined only when n2 >= 2

    UnknownVarModel(int n1, int n2, double t, double ybar1, double v1,
                    double ybar2 = 0.0, double v2 = 0.0);

    int n() const { return n1 + n2; }
    double ybar() const;
    double pooled_v() const; // full-data MLE of sigma^2
};

enum class UnknownVarPrior { JeffreysBased, PMPGamma1 };

// The gamma = 1 matching prior contains "t v^{1/2}" whose v admits two
// readings; both are implemented.  FirstBatch uses the v1 that defined the
// selection event (and is what the n2 = 0 exact construction produces).
enum class PmpVarianceReading { FirstBatch, Pooled };

// P(V1^{-1/2} Ybar1 > n1^{-1/2} t) under (mu, sigma2); depends on the pair
// only through mu/sigma.  Evaluated by quadrature against the scaled
// chi-square law of the batch-1 variance estimate.
double tstat_selection_probability(double mu, double sigma2, int n1, double t);
double log_tstat_selection_probability(double mu, double sigma2, int n1, double t);

double unadjusted_loglik_unknown_var(const UnknownVarModel& m, double mu,
                                     double sigma2);
// unadjusted log-likelihood minus the log selection probability
double selective_loglik_unknown_var(const UnknownVarModel& m, double mu,
                                    double sigma2);

double prior_unknown_var(const UnknownVarModel& m, UnknownVarPrior kind,
                         const std::function<double(double)>& c_sigma2, double mu,
                         double sigma2,
                         PmpVarianceReading reading = PmpVarianceReading::FirstBatch);

// m arms with batch means y[0..m-1], y[0] the largest; theta_1 earns a
// follow-up sample of size n2 with mean follow_up.
struct WinnerModel {
    int m;
    int n1;
    int n2;
    std::vector<double> y;
    double follow_up;

    WinnerModel(int n1, int n2, std::vector<double> y, double follow_up);

    double t() const; // max of the non-selected means
};

enum class WinnerLikelihood {
    L1, // denominator E_theta[Phi{n1^{1/2}(theta_1 - T)}], T = max(Y_2..Y_m)
    L2, // denominator Phi{n1^{1/2}(theta_1 - t)}, conditioning on y_2..y_m
};

double winner_loglik(const WinnerModel& model, WinnerLikelihood kind,
                     std::span<const double> theta);

// [1 + (n1/n) h2{n1^{1/2}(theta_1 - t)}]^{1/2}, flat over theta_2..theta_m.
double winner_prior(std::span<const double> theta, int n1, int n, double t);

// log(prior * likelihood) as a reusable target.  The L1 selection integral
// is evaluated on a fixed composite rule and memoised on the non-winner
// coordinates, which makes single-coordinate theta_1 updates cheap.
std::function<double(std::span<const double>)>
make_winner_log_posterior(const WinnerModel& model, WinnerLikelihood kind);

struct MHConfig {
    int steps = 0;
    int burn_in = 0;
    std::vector<double> proposal_scales;
    std::uint64_t seed = 0;
    bool adapt = true; // scale adaptation during burn-in only
    // Partition of the coordinates into update blocks; empty means one
    // joint update of all coordinates per step.  Each step sweeps every
    // block once (Metropolis within Gibbs).
    std::vector<std::vector<int>> update_blocks;
};

struct Chain {
    std::vector<std::vector<double>> samples; // post-burn-in draws
    double acceptance_rate = 0.0;
    MHConfig config;
};

// Joint Gaussian random-walk Metropolis-Hastings.  With adapt on, a global
// scale multiplier is tuned toward acceptance in [0.2, 0.4] during burn-in
// only; the post-burn-in kernel is fixed.  Deterministic given the seed.
Chain mh_sample(const std::function<double(std::span<const double>)>& log_target,
                std::span<const double> init, const MHConfig& config);

// min(1, exp(log_ratio)); the accept rule, exposed for kernel checks.
double acceptance_probability(double log_ratio);

// Equal-tailed interval from empirical quantiles of one coordinate.
std::pair<double, double> credible_interval(const Chain& chain, int coordinate,
                                            double level);
double chain_quantile(const Chain& chain, int coordinate, double p);

} // namespace selprior
