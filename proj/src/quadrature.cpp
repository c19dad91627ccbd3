#include "selprior/quadrature.hpp"
#include "selprior/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace selprior::quad {

namespace {

// 15-point Kronrod rule with embedded 7-point Gauss rule.
constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct RuleResult {
    double value;
    double error;
};

RuleResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron = kKronrodW[7] * f(c);
    double gauss = kGaussW[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double lo = f(c - h * kKronrodX[i]);
        const double hi = f(c + h * kKronrodX[i]);
        kron += kKronrodW[i] * (lo + hi);
        if (i % 2 == 1) {
            gauss += kGaussW[i / 2] * (lo + hi);
        }
    }
    return RuleResult{kron * h, std::fabs((kron - gauss) * h)};
}

// Worst-first adaptive refinement with a bounded segment budget.  A small
// amount of integrand roundoff jitter must not stall convergence, so once
// the budget is spent the result is accepted if the residual error is at
// roundoff scale relative to the integral, and rejected otherwise.
double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const Options& opts) {
    if (a == b) return 0.0;
    struct Seg {
        double a, b, value, error;
        bool operator<(const Seg& o) const { return error < o.error; }
    };
    std::priority_queue<Seg> queue;
    const RuleResult first = gk15(f, a, b);
    queue.push(Seg{a, b, first.value, first.error});
    double total_value = first.value;
    double total_error = first.error;

    const int max_segments = 1 << std::min(opts.max_depth, 13); // budget
    int segments = 1;
    while (total_error > opts.abs_tol && segments < max_segments) {
        const Seg worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval exhausted at double resolution; keep as is
            total_error -= worst.error;
            total_value -= worst.value;
            queue.push(Seg{worst.a, worst.b, worst.value, 0.0});
            total_value += worst.value;
            continue;
        }
        const RuleResult left = gk15(f, worst.a, mid);
        const RuleResult right = gk15(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(Seg{worst.a, mid, left.value, left.error});
        queue.push(Seg{mid, worst.b, right.value, right.error});
        ++segments;
    }
    if (total_error > opts.abs_tol &&
        total_error > 1e-7 * (1.0 + std::fabs(total_value))) {
        throw NumericError("quad::integrate: no convergence on [" +
                           std::to_string(a) + ", " + std::to_string(b) +
                           "], residual error " + std::to_string(total_error));
    }
    return total_value;
}

// Extends the integral from `from` toward +inf (dir = +1) or -inf (dir = -1)
// with segments of doubling width.
double tail(const std::function<double(double)>& f, double from, int dir,
            const Options& opts) {
    double total = 0.0;
    double w = opts.tail_step;
    double edge = from;
    int quiet = 0;
    for (int k = 0; k < 100; ++k) {
        const double next = edge + dir * w;
        const double seg = (dir > 0) ? integrate_finite(f, edge, next, opts)
                                     : integrate_finite(f, next, edge, opts);
        total += seg;
        if (std::fabs(seg) <= opts.tail_tol * (1.0 + std::fabs(total))) {
            if (++quiet >= 2) return total;
        } else {
            quiet = 0;
        }
        edge = next;
        w *= 2.0;
    }
    throw NumericError("quad::integrate: tail mass fails to decay");
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts) {
    const bool lo_inf = std::isinf(a);
    const bool hi_inf = std::isinf(b);
    if (!lo_inf && !hi_inf) {
        return integrate_finite(f, a, b, opts);
    }
    if (lo_inf && hi_inf) {
        return tail(f, 0.0, -1, opts) + tail(f, 0.0, +1, opts);
    }
    if (hi_inf) {
        return tail(f, a, +1, opts);
    }
    return tail(f, b, -1, opts);
}

FixedRule composite_gk15(double a, double b, int panels) {
    if (!(a < b) || panels < 1) {
        throw DomainError("composite_gk15: bad interval or panel count");
    }
    FixedRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * 15);
    rule.weights.reserve(static_cast<std::size_t>(panels) * 15);
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * w;
        const double h = 0.5 * w;
        rule.nodes.push_back(c);
        rule.weights.push_back(kKronrodW[7] * h);
        for (int i = 0; i < 7; ++i) {
            rule.nodes.push_back(c - h * kKronrodX[i]);
            rule.weights.push_back(kKronrodW[i] * h);
            rule.nodes.push_back(c + h * kKronrodX[i]);
            rule.weights.push_back(kKronrodW[i] * h);
        }
    }
    return rule;
}

double log_integrate(const std::function<double(double)>& log_f, double a, double b,
                     double hint, double width, const Options& opts) {
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw DomainError("quad::log_integrate: width must be positive");
    }
    if (a >= b) {
        throw DomainError("quad::log_integrate: empty interval");
    }
    double x0 = hint;
    if (!std::isfinite(x0)) x0 = std::isfinite(a) ? a : b;
    x0 = std::min(std::max(x0, std::isfinite(a) ? a : -1e308),
                  std::isfinite(b) ? b : 1e308);

    // Scan outward from the hint until the integrand has decayed far below
    // its running maximum (or a finite endpoint is reached).
    constexpr double kDrop = 140.0;
    double peak = log_f(x0);
    const auto scan = [&](int dir, double bound) {
        double step = width;
        double edge = x0;
        for (int k = 0; k < 300; ++k) {
            double next = edge + dir * step;
            bool clipped = false;
            if ((dir > 0 && next >= bound) || (dir < 0 && next <= bound)) {
                next = bound;
                clipped = true;
            }
            const double v = log_f(next);
            if (v > peak) peak = v;
            edge = next;
            if (clipped) return edge;
            if (std::isfinite(peak) && v < peak - kDrop) return edge;
            step *= 1.6;
        }
        throw NumericError("quad::log_integrate: integrand fails to decay");
    };
    const double lo = scan(-1, std::isfinite(a) ? a : -kInf);
    const double hi = scan(+1, std::isfinite(b) ? b : kInf);
    if (!std::isfinite(peak)) {
        return -kInf; // no mass anywhere probed
    }

    const double m = peak;
    const auto scaled = [&](double x) {
        const double v = log_f(x) - m;
        return v > -745.0 ? std::exp(std::min(v, 700.0)) : 0.0;
    };
    Options inner = opts;
    inner.abs_tol = std::max(1e-13, 1e-11 * (hi - lo));
    const double integral = integrate_finite(scaled, lo, hi, inner);
    if (!(integral > 0.0)) {
        return -kInf;
    }
    return m + std::log(integral);
}

} // namespace selprior::quad
