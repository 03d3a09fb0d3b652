#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sweeplab {

struct SampleStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
};

inline SampleStats sample_stats(std::span<const double> xs) {
    SampleStats s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
        s.se = s.sd / std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

struct WilsonInterval {
    double p = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// 95% Wilson score interval for a binomial proportion.
inline WilsonInterval wilson_interval(std::size_t successes, std::size_t n) {
    WilsonInterval w;
    if (n == 0) return w;
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = phat + z2 / (2.0 * nn);
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    w.p = phat;
    w.lo = (center - half) / denom;
    w.hi = (center + half) / denom;
    return w;
}

// Weighted least squares fit of y = a + b / t (the subadditive tail model).
struct InverseTFit {
    double a = 0.0;      // extrapolated limit
    double b = 0.0;
    double a_se = 0.0;
    double rss = 0.0;    // weighted residual sum of squares
};

inline InverseTFit fit_inverse_t(std::span<const double> t, std::span<const double> y,
                                 std::span<const double> y_se) {
    const std::size_t n = t.size();
    if (n < 2 || y.size() != n || y_se.size() != n)
        throw std::invalid_argument("fit_inverse_t needs >= 2 ladder points");
    double s11 = 0, s1u = 0, suu = 0, s1y = 0, suy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 1.0 / std::max(1e-300, y_se[i] * y_se[i]);
        const double u = 1.0 / t[i];
        s11 += w;
        s1u += w * u;
        suu += w * u * u;
        s1y += w * y[i];
        suy += w * u * y[i];
    }
    const double det = s11 * suu - s1u * s1u;
    if (!(std::abs(det) > 0.0)) throw std::invalid_argument("degenerate ladder for fit");
    InverseTFit f;
    f.a = (suu * s1y - s1u * suy) / det;
    f.b = (s11 * suy - s1u * s1y) / det;
    f.a_se = std::sqrt(std::max(0.0, suu / det));
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 1.0 / std::max(1e-300, y_se[i] * y_se[i]);
        const double r = y[i] - (f.a + f.b / t[i]);
        f.rss += w * r * r;
    }
    return f;
}

}  // namespace sweeplab
