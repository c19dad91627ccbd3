#pragma once

#include <functional>
#include <string>
#include <vector>

namespace selprior {

struct CurveMeta {
    std::string model_id;
    std::string prior;
    double observed = 0.0;
};

// Tabulated posterior distribution function on a strictly increasing grid,
// with monotone-cubic interpolation and quantile inversion.
class PosteriorCurve {
public:
    PosteriorCurve(std::vector<double> grid, std::vector<double> cdf, CurveMeta meta);

    double cdf_at(double theta) const;
    double quantile(double alpha) const;
    double median() const { return quantile(0.5); }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& cdf() const { return cdf_; }
    const CurveMeta& meta() const { return meta_; }

private:
    std::vector<double> grid_;
    std::vector<double> cdf_;
    std::vector<double> slope_; // monotone Hermite slopes
    CurveMeta meta_;
};

// Tabulates the normalised CDF of exp(log_density) starting from the seed
// interval [lo, hi], expanding outward (within [lo_bound, hi_bound]) until
// the boundary density is negligible and the grid covers the median +/- 10
// posterior standard deviations.  Throws DivergedPosteriorError when the
// mass keeps growing as the domain expands.
PosteriorCurve build_posterior_curve(const std::function<double(double)>& log_density,
                                     double lo, double hi, CurveMeta meta,
                                     double lo_bound, double hi_bound,
                                     int nodes = 1025);

} // namespace selprior
