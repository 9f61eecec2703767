#include "icdsel/stats.hpp"

#include <cmath>
#include <limits>

#include "icdsel/errors.hpp"

namespace icdsel::stats {

namespace {

double beta_cont_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceFailure("incomplete beta continued fraction");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                 b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cont_fraction(a, b, x) / a;
    return 1.0 - front * beta_cont_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!std::isfinite(t)) return 0.0;
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

TTest paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw DimensionMismatch("paired t-test needs two equal-length vectors, n >= 2");
    const std::size_t n = a.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    bool identical = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d != a[0] - b[0]) identical = false;
        ss += (d - mean) * (d - mean);
    }
    TTest out;
    if (identical || ss == 0.0) {
        out.zero_variance = true;
        if (mean == 0.0) {
            out.t = 0.0;
            out.p = 1.0;
        } else {
            out.t = mean > 0.0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
            out.p = 0.0;
        }
        return out;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    out.p = student_t_two_sided_p(out.t, static_cast<double>(n - 1));
    return out;
}

}  // namespace icdsel::stats
