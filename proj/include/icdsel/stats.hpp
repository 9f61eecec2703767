#pragma once

#include <span>

namespace icdsel::stats {

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided p-value of Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct TTest {
    double t = 0.0;
    double p = 1.0;
    bool zero_variance = false;  // all differences identical
};

// Paired two-sided t-test across positions of a and b (n-1 df). When every
// difference is identical the variance is zero: p = 1 for zero differences,
// p = 0 otherwise, flagged either way.
TTest paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace icdsel::stats
