#include "icdsel/sym_eig.hpp"

#include <algorithm>
#include <cmath>

#include "icdsel/errors.hpp"

namespace icdsel {

namespace {

inline double sign_like(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Householder reduction to tridiagonal form; a is replaced by the orthogonal
// transform, d gets the diagonal and e the subdiagonal (e[0] unused).
void tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e) {
    const int n = a.rows;
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[static_cast<std::size_t>(i)] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[static_cast<std::size_t>(i)] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                std::vector<double> tmp(static_cast<std::size_t>(l) + 1);
#pragma omp parallel for schedule(static) if (l > 127)
                for (int j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    double gj = 0.0;
                    for (int k = 0; k <= j; ++k) gj += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) gj += a(k, j) * a(i, k);
                    tmp[static_cast<std::size_t>(j)] = gj / h;
                }
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    e[static_cast<std::size_t>(j)] = tmp[static_cast<std::size_t>(j)];
                    f += tmp[static_cast<std::size_t>(j)] * a(i, j);
                }
                const double hh = f / (h + h);
#pragma omp parallel for schedule(static) if (l > 127)
                for (int j = 0; j <= l; ++j) {
                    const double fj = a(i, j);
                    const double gj = e[static_cast<std::size_t>(j)] - hh * fj;
                    e[static_cast<std::size_t>(j)] = gj;
                    for (int k = 0; k <= j; ++k) a(j, k) -= fj * e[static_cast<std::size_t>(k)] + gj * a(i, k);
                }
            }
        } else {
            e[static_cast<std::size_t>(i)] = a(i, l);
        }
        d[static_cast<std::size_t>(i)] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[static_cast<std::size_t>(i)] != 0.0) {
#pragma omp parallel for schedule(static) if (l > 127)
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
                for (int k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[static_cast<std::size_t>(i)] = a(i, i);
        a(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

// Implicit-shift QL on the tridiagonal (d, e); rotations are accumulated into
// the columns of z.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix& z) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[static_cast<std::size_t>(i - 1)] = e[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(n - 1)] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[static_cast<std::size_t>(m)]) + std::abs(d[static_cast<std::size_t>(m + 1)]);
                if (std::abs(e[static_cast<std::size_t>(m)]) <= 1e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw ConvergenceFailure("QL iteration limit at eigenvalue " + std::to_string(l));
                double g = (d[static_cast<std::size_t>(l + 1)] - d[static_cast<std::size_t>(l)]) / (2.0 * e[static_cast<std::size_t>(l)]);
                double r = std::hypot(g, 1.0);
                g = d[static_cast<std::size_t>(m)] - d[static_cast<std::size_t>(l)] + e[static_cast<std::size_t>(l)] / (g + sign_like(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[static_cast<std::size_t>(i)];
                    const double b = c * e[static_cast<std::size_t>(i)];
                    r = std::hypot(f, g);
                    e[static_cast<std::size_t>(i + 1)] = r;
                    if (r == 0.0) {
                        d[static_cast<std::size_t>(i + 1)] -= p;
                        e[static_cast<std::size_t>(m)] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[static_cast<std::size_t>(i + 1)] - p;
                    r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[static_cast<std::size_t>(i + 1)] = g + p;
                    g = c * r - b;
                    const int nrows = z.rows;
#pragma omp parallel for schedule(static) if (nrows > 255)
                    for (int k = 0; k < nrows; ++k) {
                        const double fk = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * fk;
                        z(k, i) = c * z(k, i) - s * fk;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[static_cast<std::size_t>(l)] -= p;
                e[static_cast<std::size_t>(l)] = g;
                e[static_cast<std::size_t>(m)] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

SymEig sym_eigen(Matrix a) {
    if (a.rows != a.cols) throw DimensionMismatch("sym_eigen needs a square matrix");
    const int n = a.rows;
    SymEig out;
    if (n == 0) return out;
    std::vector<double> d(static_cast<std::size_t>(n), 0.0), e(static_cast<std::size_t>(n), 0.0);
    if (n == 1) {
        out.values = {a(0, 0)};
        out.vectors = Matrix(1, 1, 1.0);
        return out;
    }
    tridiagonalize(a, d, e);
    ql_implicit(d, e, a);

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return d[static_cast<std::size_t>(x)] < d[static_cast<std::size_t>(y)]; });

    out.values.resize(static_cast<std::size_t>(n));
    out.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        out.values[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(src)];
        int arg = 0;
        double best = -1.0;
        for (int k = 0; k < n; ++k) {
            const double mag = std::abs(a(k, src));
            if (mag > best) {
                best = mag;
                arg = k;
            }
        }
        const double flip = a(arg, src) < 0.0 ? -1.0 : 1.0;
        for (int k = 0; k < n; ++k) out.vectors(k, j) = flip * a(k, src);
    }
    return out;
}

}  // namespace icdsel
