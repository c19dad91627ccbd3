#pragma once

#include "selprior/expfam.hpp"
#include "selprior/multiparam.hpp"
#include "selprior/selective_normal.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace selprior {

// Runs body(0..count-1); each index owns its work and random stream, so
// the result is independent of the thread count.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

enum class CoverageMethod { Deterministic, MonteCarlo };

struct CoverageSpec {
    std::variant<const ExpFamModel1D*, SplitNormalModel> model;
    PriorKind prior = PriorKind::Uniform;
    std::vector<double> theta_grid;
    std::vector<double> alpha_grid;
    int replications = 1;
    std::uint64_t seed = 0;
    CoverageMethod method = CoverageMethod::Deterministic;
    double acceptance_floor = 1e-3;
    int threads = 1;
};

struct CoverageEntry {
    double theta;
    double alpha;
    double estimate;
    double se; // Monte-Carlo standard error, or the root tolerance
    double matching_error() const { return estimate - alpha; }
};

struct CoverageReport {
    std::vector<CoverageEntry> entries; // sorted by (theta, alpha)
    std::string spec_echo;
    double runtime_seconds = 0.0;
};

// Rejection samplers from the conditional (selected) model.  Refuses when
// the selection probability sits below `floor`, and aborts with the
// empirical acceptance rate when the attempt budget is exhausted.
std::vector<double> sample_conditional(const SplitNormalModel& m, double theta,
                                       int count, std::uint64_t seed,
                                       double floor = 1e-3);
std::vector<std::vector<double>> sample_conditional(const ExpFamModel1D& m,
                                                    double theta, int count,
                                                    std::uint64_t seed,
                                                    double floor = 1e-3);

// Coverage of (-inf, Pi^{-1}(alpha | Y)] under repeated conditional
// sampling, computed without simulation: coverage = H(theta0; y_alpha)
// where y_alpha solves Pi(theta0 | y) = alpha in the observation.
CoverageReport coverage_deterministic(const CoverageSpec& spec);

// Monte-Carlo counterpart: the fraction of conditional replications with
// Pi(theta0 | data) <= alpha, with binomial standard errors.
CoverageReport coverage_mc(const CoverageSpec& spec);

// Posterior-CDF values at theta0 across conditional replications; the raw
// material for the Monte-Carlo coverage and calibration reports.
std::vector<double> pit_values_normal(const SplitNormalModel& m, PriorKind prior,
                                      double theta0, int reps, std::uint64_t seed,
                                      int threads, double floor = 1e-3);
std::vector<double> pit_values_expfam(const ExpFamModel1D& m, PriorKind prior,
                                      double theta0, int reps, std::uint64_t seed,
                                      int threads, double floor = 1e-3);

double ks_distance_uniform(std::vector<double> values);
double ks_distance_two_sample(std::vector<double> a, std::vector<double> b);

// Coverage study for the built-in exponential-family examples: true
// parameters are pinned implicitly by their selection probabilities.
enum class ExpFamKind { Exponential, InverseGaussian };

struct ExpFamStudySettings {
    ExpFamKind kind = ExpFamKind::Exponential;
    std::vector<int> n_list = {10, 30, 80};
    std::vector<double> phi_levels = {0.1, 0.5, 0.9};
    std::vector<double> alpha_grid;
    std::vector<PriorKind> priors = {PriorKind::NonSelectiveJeffreys,
                                     PriorKind::SelectiveJeffreys,
                                     PriorKind::ExactMatching};
    double split_fraction = 0.8;
    double threshold = 1.0;
    int reps = 2000;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct ExpFamStudyRow {
    int n;
    double phi_level;
    double theta0;
    std::string prior;
    double alpha;
    double coverage;
    double se;
};

std::vector<ExpFamStudyRow> expfam_coverage_study(const ExpFamStudySettings& s);

// PIT calibration study for the unknown-variance model: empirical CDF of
// the marginal posterior probability of mu0, one report per prior.
struct UnknownVarStudySettings {
    int n1 = 50;
    int n2 = 10;
    double t = 2.0;
    double mu0 = 0.0;
    double sigma20 = 1.0;
    int reps = 500;
    int mh_steps = 5000;
    std::uint64_t seed = 1;
    int threads = 1;
    PmpVarianceReading reading = PmpVarianceReading::FirstBatch;
};

struct PitReport {
    std::string prior_label;
    std::vector<double> pits; // sorted
    double ks;                // distance to the uniform diagonal
};

std::vector<PitReport> pit_ecdf_unknown_var(const UnknownVarStudySettings& s);

// Repeated-sampling comparison of the two winner likelihoods.
struct WinnerStudySettings {
    std::vector<int> m_list = {2, 5};
    int n1 = 5;
    int n2 = 5;
    int reps = 1000;
    double level = 0.9;
    int mh_steps = 4000;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct WinnerStudyRow {
    int m;
    WinnerLikelihood kind;
    double coverage;
    double coverage_se;
    double mean_length;
    double length_se;
};

std::vector<WinnerStudyRow> winner_study(const WinnerStudySettings& s);

// Coverage of central credible intervals for the truncated-observation
// model with an informative Gaussian prior, in the selective regime (with
// and without the selection adjustment) and the non-selective regime.
struct TruncationCoverageSettings {
    double n = 5.0; // observation variance 1/n
    double t = 0.0;
    double prior_mean = 0.0;
    double prior_var = 1.0;
    double level = 0.9;
    std::vector<double> theta_grid;
    int reps = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct TruncationCoverageRow {
    double theta;
    double cov_unadjusted_selective;
    double se_unadjusted_selective;
    double cov_unadjusted_nonselective;
    double se_unadjusted_nonselective;
    double cov_adjusted_selective;
    double se_adjusted_selective;
};

std::vector<TruncationCoverageRow>
truncation_coverage_study(const TruncationCoverageSettings& s);

} // namespace selprior
