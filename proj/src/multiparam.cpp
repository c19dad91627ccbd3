#include "selprior/multiparam.hpp"
#include "selprior/errors.hpp"
#include "selprior/quadrature.hpp"
#include "selprior/rng.hpp"
#include "selprior/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace selprior {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

UnknownVarModel::UnknownVarModel(int n1_, int n2_, double t_, double ybar1_,
                                 double v1_, double ybar2_, double v2_)
    : n1(n1_), n2(n2_), t(t_), ybar1(ybar1_), v1(v1_), ybar2(ybar2_), v2(v2_) {
    if (n1 < 2 || n2 < 0) {
        throw DomainError("UnknownVarModel: need n1 >= 2, n2 >= 0");
    }
    if (!(v1 > 0.0)) {
        throw DomainError("UnknownVarModel: v1 must be positive");
    }
    if (n2 >= 2 && !(v2 > 0.0)) {
        throw DomainError("UnknownVarModel: v2 must be positive when n2 >= 2");
    }
    if (!(ybar1 / std::sqrt(v1) > t / std::sqrt(static_cast<double>(n1)))) {
        throw InvalidObservationError(
            "UnknownVarModel: stored data does not pass the selection t-test");
    }
}

double UnknownVarModel::ybar() const {
    if (n2 == 0) return ybar1;
    return (n1 * ybar1 + n2 * ybar2) / (n1 + n2);
}

double UnknownVarModel::pooled_v() const {
    const double yb = ybar();
    double ss = n1 * v1 + n1 * (ybar1 - yb) * (ybar1 - yb);
    if (n2 >= 1) {
        ss += (n2 >= 2 ? n2 * v2 : 0.0) + n2 * (ybar2 - yb) * (ybar2 - yb);
    }
    return ss / n();
}

double log_tstat_selection_probability(double mu, double sigma2, int n1, double t) {
    if (!(sigma2 > 0.0)) {
        throw DomainError("tstat_selection_probability: sigma2 must be positive");
    }
    if (n1 < 2) {
        throw DomainError("tstat_selection_probability: need n1 >= 2");
    }
    if (t == -kInf) return 0.0;
    // With u = n1 V1 / sigma^2 ~ chi^2_{n1-1}, the conditional acceptance
    // probability is Phi(sqrt(n1) mu/sigma - t sqrt(u)/sqrt(n1)); only the
    // ratio mu/sigma enters.
    const double k = n1 - 1.0;
    const double ratio = mu / std::sqrt(sigma2);
    const double rn1 = std::sqrt(static_cast<double>(n1));
    const double log_norm = -0.5 * k * M_LN2 - std::lgamma(0.5 * k);
    const auto log_f = [&](double u) {
        if (!(u > 0.0)) return -kInf;
        return log_norm + (0.5 * k - 1.0) * std::log(u) - 0.5 * u +
               std_normal_log_cdf(rn1 * ratio - t * std::sqrt(u) / rn1);
    };
    return quad::log_integrate(log_f, 0.0, kInf, std::max(k, 1.0),
                               std::sqrt(2.0 * k));
}

double tstat_selection_probability(double mu, double sigma2, int n1, double t) {
    const double lp = log_tstat_selection_probability(mu, sigma2, n1, t);
    return std::min(1.0, std::exp(lp));
}

double unadjusted_loglik_unknown_var(const UnknownVarModel& m, double mu,
                                     double sigma2) {
    if (!(sigma2 > 0.0)) {
        throw DomainError("unknown-variance likelihood: sigma2 must be positive");
    }
    double ss = m.n1 * (m.v1 + (m.ybar1 - mu) * (m.ybar1 - mu));
    if (m.n2 >= 1) {
        ss += (m.n2 >= 2 ? m.n2 * m.v2 : 0.0) +
              m.n2 * (m.ybar2 - mu) * (m.ybar2 - mu);
    }
    const double n = m.n();
    return -0.5 * n * std::log(2.0 * M_PI * sigma2) - 0.5 * ss / sigma2;
}

double selective_loglik_unknown_var(const UnknownVarModel& m, double mu,
                                    double sigma2) {
    return unadjusted_loglik_unknown_var(m, mu, sigma2) -
           log_tstat_selection_probability(mu, sigma2, m.n1, m.t);
}

double prior_unknown_var(const UnknownVarModel& m, UnknownVarPrior kind,
                         const std::function<double(double)>& c_sigma2, double mu,
                         double sigma2, PmpVarianceReading reading) {
    if (!(sigma2 > 0.0)) {
        throw DomainError("prior_unknown_var: sigma2 must be positive");
    }
    const double sigma = std::sqrt(sigma2);
    const double c = c_sigma2 ? c_sigma2(sigma2) : 1.0;
    if (kind == UnknownVarPrior::JeffreysBased) {
        const double gamma = static_cast<double>(m.n1) / m.n();
        const double arg =
            std::sqrt(static_cast<double>(m.n1)) * mu / sigma -
            m.t * std::sqrt(m.v1) / sigma;
        const double v = (1.0 - gamma) + gamma * one_plus_h2(arg);
        return c * std::sqrt(std::max(v, 0.0));
    }
    const double v = (reading == PmpVarianceReading::FirstBatch) ? m.v1 : m.pooled_v();
    const double rn = std::sqrt(static_cast<double>(m.n()));
    const double arg_t = rn * mu / sigma - m.t * std::sqrt(v) / sigma;
    const double arg_y = rn * mu / sigma - rn * m.ybar() / sigma;
    const double delta = log_hazard_h1(arg_t) - log_hazard_h1(arg_y);
    if (delta >= 0.0) {
        return 0.0; // outside the region where the gamma = 1 form is a density
    }
    return c * (-std::expm1(delta));
}

WinnerModel::WinnerModel(int n1_, int n2_, std::vector<double> y_, double follow_up_)
    : m(static_cast<int>(y_.size())), n1(n1_), n2(n2_), y(std::move(y_)),
      follow_up(follow_up_) {
    if (m < 2) throw DomainError("WinnerModel: need at least two arms");
    if (n1 < 1 || n2 < 1) throw DomainError("WinnerModel: need n1, n2 >= 1");
    for (int i = 1; i < m; ++i) {
        if (y[0] < y[i]) {
            throw InvalidObservationError(
                "WinnerModel: y[0] must be the largest batch mean");
        }
    }
}

double WinnerModel::t() const {
    double best = -kInf;
    for (int i = 1; i < m; ++i) best = std::max(best, y[i]);
    return best;
}

namespace {

// density of max(Y_2..Y_m) at s, with Y_i ~ N(means[i], 1/n1):
// sum_j pdf_j(s) * prod_{i != j} cdf_i(s)
double max_mean_density(std::span<const double> means, double rn1, double s) {
    const std::size_t k = means.size();
    double f_t = 0.0;
    // two passes: suffix products of the cdfs, then a prefix sweep
    thread_local std::vector<double> cdfs, suffix;
    cdfs.resize(k);
    suffix.assign(k + 1, 1.0);
    for (std::size_t i = 0; i < k; ++i) {
        cdfs[i] = std_normal_cdf(rn1 * (s - means[i]));
    }
    for (std::size_t i = k; i-- > 0;) {
        suffix[i] = suffix[i + 1] * cdfs[i];
    }
    double prefix = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
        f_t += prefix * rn1 * std_normal_pdf(rn1 * (s - means[j])) * suffix[j + 1];
        prefix *= cdfs[j];
    }
    return f_t;
}

double winner_log_numerator(const WinnerModel& model, std::span<const double> theta) {
    double log_num = -0.5 * model.n2 * (theta[0] - model.follow_up) *
                     (theta[0] - model.follow_up);
    for (int i = 0; i < model.m; ++i) {
        const double d = theta[static_cast<std::size_t>(i)] -
                         model.y[static_cast<std::size_t>(i)];
        log_num += -0.5 * model.n1 * d * d;
    }
    return log_num;
}

// integration window for the law of the max of the non-winner means
std::pair<double, double> max_window(std::span<const double> means, double rn1) {
    double hi_env = -kInf;
    for (double v : means) hi_env = std::max(hi_env, v);
    const double sd = 1.0 / rn1;
    return {hi_env - 12.0 * sd, hi_env + 12.0 * sd};
}

} // namespace

double winner_loglik(const WinnerModel& model, WinnerLikelihood kind,
                     std::span<const double> theta) {
    if (static_cast<int>(theta.size()) != model.m) {
        throw DomainError("winner_loglik: theta dimension mismatch");
    }
    for (double th : theta) {
        if (!std::isfinite(th)) throw DomainError("winner_loglik: theta must be finite");
    }
    const double rn1 = std::sqrt(static_cast<double>(model.n1));
    const double log_num = winner_log_numerator(model, theta);

    if (kind == WinnerLikelihood::L2) {
        return log_num - std_normal_log_cdf(rn1 * (theta[0] - model.t()));
    }

    const auto tail = theta.subspan(1);
    const auto [lo, hi] = max_window(tail, rn1);
    const auto integrand = [&](double s) {
        return std_normal_cdf(rn1 * (theta[0] - s)) * max_mean_density(tail, rn1, s);
    };
    double denom = 0.0;
    try {
        quad::Options opts;
        opts.abs_tol = 1e-8;
        denom = quad::integrate(integrand, lo, hi, opts);
    } catch (const NumericError& e) {
        throw NumericError(std::string("winner_loglik: L1 selection integral failed "
                                       "on boundaries [") +
                           std::to_string(lo) + ", " + std::to_string(hi) +
                           "]: " + e.what());
    }
    if (!(denom > 0.0)) {
        return -kInf; // selection mass below the double range at this theta
    }
    return log_num - std::log(denom);
}

std::function<double(std::span<const double>)>
make_winner_log_posterior(const WinnerModel& model, WinnerLikelihood kind) {
    struct State {
        WinnerModel model;
        WinnerLikelihood kind;
        std::vector<double> tail; // non-winner coordinates of the last L1 eval
        quad::FixedRule rule;
        std::vector<double> f_t; // max density at the rule nodes
    };
    auto st = std::make_shared<State>(State{model, kind, {}, {}, {}});
    return [st](std::span<const double> theta) -> double {
        const WinnerModel& m = st->model;
        if (static_cast<int>(theta.size()) != m.m) {
            throw DomainError("winner log posterior: theta dimension mismatch");
        }
        const double t = m.t();
        const double prior = winner_prior(theta, m.n1, m.n1 + m.n2, t);
        if (!(prior > 0.0)) return -kInf;
        const double rn1 = std::sqrt(static_cast<double>(m.n1));
        const double base = std::log(prior) + winner_log_numerator(m, theta);
        if (st->kind == WinnerLikelihood::L2) {
            return base - std_normal_log_cdf(rn1 * (theta[0] - t));
        }
        const auto tail = theta.subspan(1);
        const bool hit = st->tail.size() == tail.size() &&
                         std::equal(st->tail.begin(), st->tail.end(), tail.begin());
        if (!hit) {
            const auto [lo, hi] = max_window(tail, rn1);
            st->rule = quad::composite_gk15(lo, hi, 16);
            st->f_t.resize(st->rule.nodes.size());
            for (std::size_t i = 0; i < st->rule.nodes.size(); ++i) {
                st->f_t[i] = max_mean_density(tail, rn1, st->rule.nodes[i]);
            }
            st->tail.assign(tail.begin(), tail.end());
        }
        double denom = 0.0;
        for (std::size_t i = 0; i < st->rule.nodes.size(); ++i) {
            denom += st->rule.weights[i] * st->f_t[i] *
                     std_normal_cdf(rn1 * (theta[0] - st->rule.nodes[i]));
        }
        if (!(denom > 0.0)) return -kInf;
        return base - std::log(denom);
    };
}

double winner_prior(std::span<const double> theta, int n1, int n, double t) {
    if (theta.empty()) throw DomainError("winner_prior: empty theta");
    const double gamma = static_cast<double>(n1) / n;
    const double arg = std::sqrt(static_cast<double>(n1)) * (theta[0] - t);
    const double v = (1.0 - gamma) + gamma * one_plus_h2(arg);
    return std::sqrt(std::max(v, 0.0));
}

double acceptance_probability(double log_ratio) {
    return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

Chain mh_sample(const std::function<double(std::span<const double>)>& log_target,
                std::span<const double> init, const MHConfig& config) {
    const int dim = static_cast<int>(init.size());
    if (dim < 1) throw DomainError("mh_sample: empty initial state");
    if (config.steps <= 0 || config.burn_in < 0 || config.burn_in >= config.steps) {
        throw DomainError("mh_sample: need 0 <= burn_in < steps");
    }
    if (static_cast<int>(config.proposal_scales.size()) != dim) {
        throw DomainError("mh_sample: proposal_scales dimension mismatch");
    }
    for (double s : config.proposal_scales) {
        if (!(s > 0.0)) throw DomainError("mh_sample: proposal scales must be positive");
    }
    std::vector<std::vector<int>> blocks = config.update_blocks;
    if (blocks.empty()) {
        blocks.emplace_back(dim);
        for (int j = 0; j < dim; ++j) blocks.front()[static_cast<std::size_t>(j)] = j;
    }
    {
        std::vector<int> seen(static_cast<std::size_t>(dim), 0);
        for (const auto& b : blocks) {
            for (int j : b) {
                if (j < 0 || j >= dim || seen[static_cast<std::size_t>(j)]++) {
                    throw DomainError(
                        "mh_sample: update_blocks must partition the coordinates");
                }
            }
        }
    }
    std::vector<double> x(init.begin(), init.end());
    double lt = log_target(x);
    if (!std::isfinite(lt)) {
        throw DomainError("mh_sample: log target not finite at the initial state");
    }

    RngStream rng(config.seed);
    Chain chain;
    chain.config = config;
    chain.samples.reserve(static_cast<std::size_t>(config.steps - config.burn_in));

    const std::size_t nb = blocks.size();
    std::vector<double> log_mult(nb, 0.0); // per-block multiplier, burn-in only
    constexpr int kWindow = 50;
    std::vector<int> window_accepts(nb, 0);
    long burn_accepts = 0;
    long post_accepts = 0;
    std::vector<double> prop(static_cast<std::size_t>(dim));

    for (int step = 0; step < config.steps; ++step) {
        const bool burning = step < config.burn_in;
        for (std::size_t b = 0; b < nb; ++b) {
            const double mult = std::exp(log_mult[b]);
            prop = x;
            for (int j : blocks[b]) {
                prop[static_cast<std::size_t>(j)] +=
                    mult * config.proposal_scales[static_cast<std::size_t>(j)] *
                    rng.normal();
            }
            const double lt_prop = log_target(prop);
            bool accept = false;
            if (lt_prop > -kInf) {
                const double log_ratio = lt_prop - lt;
                accept = log_ratio >= 0.0 || rng.uniform() < std::exp(log_ratio);
            }
            if (accept) {
                x = prop;
                lt = lt_prop;
                if (burning) {
                    ++burn_accepts;
                    ++window_accepts[b];
                } else {
                    ++post_accepts;
                }
            }
        }
        if (burning && config.adapt && (step + 1) % kWindow == 0) {
            for (std::size_t b = 0; b < nb; ++b) {
                const double rate = static_cast<double>(window_accepts[b]) / kWindow;
                if (rate < 0.2 || rate > 0.4) {
                    log_mult[b] += std::clamp(rate - 0.3, -0.2, 0.2);
                    log_mult[b] = std::clamp(log_mult[b], -8.0, 8.0);
                }
                window_accepts[b] = 0;
            }
        }
        if (!burning) {
            chain.samples.push_back(x);
        }
    }
    if (config.burn_in > 0 && burn_accepts == 0) {
        throw StuckChainError("mh_sample: no proposal accepted during burn-in");
    }
    chain.acceptance_rate = static_cast<double>(post_accepts) /
                            (static_cast<double>(config.steps - config.burn_in) * nb);
    return chain;
}

double chain_quantile(const Chain& chain, int coordinate, double p) {
    if (chain.samples.empty()) throw DomainError("chain_quantile: empty chain");
    if (coordinate < 0 ||
        coordinate >= static_cast<int>(chain.samples.front().size())) {
        throw DomainError("chain_quantile: coordinate out of range");
    }
    std::vector<double> col;
    col.reserve(chain.samples.size());
    for (const auto& row : chain.samples) {
        col.push_back(row[static_cast<std::size_t>(coordinate)]);
    }
    std::sort(col.begin(), col.end());
    const double h = p * (col.size() - 1);
    const std::size_t i = static_cast<std::size_t>(std::floor(h));
    if (i + 1 >= col.size()) return col.back();
    const double w = h - static_cast<double>(i);
    return (1.0 - w) * col[i] + w * col[i + 1];
}

std::pair<double, double> credible_interval(const Chain& chain, int coordinate,
                                            double level) {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw DomainError("credible_interval: level must lie in (0,1)");
    }
    const double tail = 0.5 * (1.0 - level);
    return {chain_quantile(chain, coordinate, tail),
            chain_quantile(chain, coordinate, 1.0 - tail)};
}

} // namespace selprior
