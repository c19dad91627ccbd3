#include "selprior/curve.hpp"
#include "selprior/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace selprior {

namespace {

// 4-point Gauss-Legendre on [-1, 1].
constexpr double kGlX[2] = {0.3399810435848562648, 0.8611363115940525752};
constexpr double kGlW[2] = {0.6521451548625461426, 0.3478548451374538574};

std::vector<double> hermite_slopes(const std::vector<double>& x,
                                   const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n - 1), m(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    }
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m[i] = 0.0;
        } else {
            const double h0 = x[i] - x[i - 1];
            const double h1 = x[i + 1] - x[i];
            const double w1 = 2.0 * h1 + h0;
            const double w2 = h1 + 2.0 * h0;
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    return m;
}

} // namespace

PosteriorCurve::PosteriorCurve(std::vector<double> grid, std::vector<double> cdf,
                               CurveMeta meta)
    : grid_(std::move(grid)), cdf_(std::move(cdf)), meta_(std::move(meta)) {
    if (grid_.size() < 4 || grid_.size() != cdf_.size()) {
        throw DomainError("PosteriorCurve: grid/cdf size mismatch");
    }
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        if (!(grid_[i] < grid_[i + 1])) {
            throw DomainError("PosteriorCurve: grid must be strictly increasing");
        }
        if (cdf_[i + 1] < cdf_[i] - 1e-12) {
            throw NumericError("PosteriorCurve: cdf not monotone");
        }
        cdf_[i + 1] = std::max(cdf_[i + 1], cdf_[i]);
    }
    if (cdf_.front() > 1e-6 || cdf_.back() < 1.0 - 1e-6) {
        throw NumericError("PosteriorCurve: tabulated mass incomplete");
    }
    slope_ = hermite_slopes(grid_, cdf_);
}

double PosteriorCurve::cdf_at(double theta) const {
    if (theta <= grid_.front()) return cdf_.front();
    if (theta >= grid_.back()) return cdf_.back();
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), theta);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    const double h = grid_[i + 1] - grid_[i];
    const double t = (theta - grid_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * cdf_[i] + h10 * h * slope_[i] + h01 * cdf_[i + 1] +
           h11 * h * slope_[i + 1];
}

double PosteriorCurve::quantile(double alpha) const {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw DomainError("PosteriorCurve::quantile: alpha must lie in (0,1)");
    }
    if (alpha <= cdf_.front()) return grid_.front();
    if (alpha >= cdf_.back()) return grid_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), alpha);
    std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
    i = (i == 0) ? 0 : i - 1;
    double lo = grid_[i];
    double hi = grid_[std::min(i + 1, grid_.size() - 1)];
    for (int k = 0; k < 80 && hi - lo > 0.0; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (cdf_at(mid) < alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

PosteriorCurve build_posterior_curve(const std::function<double(double)>& log_density,
                                     double lo, double hi, CurveMeta meta,
                                     double lo_bound, double hi_bound, int nodes) {
    if (!(lo < hi)) {
        throw DomainError("build_posterior_curve: empty seed interval");
    }
    constexpr double kEdgeDrop = 34.0; // boundary density exp(-34) below peak
    const int scan_n = 129;

    double L = std::max(lo, lo_bound);
    double R = std::min(hi, hi_bound);
    double peak = -std::numeric_limits<double>::infinity();
    bool settled = false;
    for (int iter = 0; iter < 80; ++iter) {
        peak = -std::numeric_limits<double>::infinity();
        const double h = (R - L) / (scan_n - 1);
        for (int i = 0; i < scan_n; ++i) {
            peak = std::max(peak, log_density(L + i * h));
        }
        if (!std::isfinite(peak)) {
            throw NumericError("build_posterior_curve: density vanishes on the seed interval");
        }
        const bool left_ok =
            (L <= lo_bound + 1e-300) || (log_density(L) <= peak - kEdgeDrop);
        const bool right_ok =
            (R >= hi_bound - 1e-300) || (log_density(R) <= peak - kEdgeDrop);
        if (left_ok && right_ok) {
            settled = true;
            break;
        }
        const double w = R - L;
        if (!left_ok) L = std::max(lo_bound, L - 0.5 * w);
        if (!right_ok) R = std::min(hi_bound, R + 0.5 * w);
    }
    if (!settled) {
        throw DivergedPosteriorError(
            "build_posterior_curve: posterior mass keeps growing as the grid expands");
    }

    for (int attempt = 0; attempt < 4; ++attempt) {
        const int n = nodes;
        std::vector<double> grid(n), cdf(n, 0.0);
        const double h = (R - L) / (n - 1);
        for (int i = 0; i < n; ++i) grid[i] = L + i * h;

        double running = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            const double c = 0.5 * (grid[i] + grid[i + 1]);
            const double hw = 0.5 * h;
            double cell = 0.0;
            for (int j = 0; j < 2; ++j) {
                const double lv = log_density(c - hw * kGlX[j]) - peak;
                const double rv = log_density(c + hw * kGlX[j]) - peak;
                cell += kGlW[j] * ((lv > -745.0 ? std::exp(lv) : 0.0) +
                                   (rv > -745.0 ? std::exp(rv) : 0.0));
            }
            running += cell * hw;
            cdf[i + 1] = running;
        }
        if (!(running > 0.0) || !std::isfinite(running)) {
            throw NumericError("build_posterior_curve: zero or non-finite total mass");
        }
        for (double& v : cdf) v /= running;

        PosteriorCurve curve(std::move(grid), std::move(cdf), meta);

        const double med = curve.quantile(0.5);
        const double sd =
            0.5 * (curve.quantile(0.841344746) - curve.quantile(0.158655254));
        const double need_lo = std::max(lo_bound, med - 10.5 * sd);
        const double need_hi = std::min(hi_bound, med + 10.5 * sd);
        if (L <= need_lo + 1e-6 * sd && R >= need_hi - 1e-6 * sd) {
            return curve;
        }
        // overshoot so the recomputed quantile band lands strictly inside
        L = std::min(L, std::max(lo_bound, need_lo - 0.5 * sd));
        R = std::max(R, std::min(hi_bound, need_hi + 0.5 * sd));
    }
    throw NumericError("build_posterior_curve: grid failed to cover +/-10 posterior sd");
}

} // namespace selprior
