#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "icdsel/errors.hpp"
#include "icdsel/spectral.hpp"

namespace icdsel::spectral {

namespace {

// Cholesky of an SPD matrix held as a flat lower triangle view; returns false
// when a pivot collapses (candidate collinear with the active set).
bool cholesky(const std::vector<std::vector<double>>& g, std::vector<std::vector<double>>& l) {
    const std::size_t n = g.size();
    l.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = g[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (s < 1e-10) return false;
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    return true;
}

std::vector<double> cholesky_solve(const std::vector<std::vector<double>>& l,
                                   const std::vector<double>& b) {
    const std::size_t n = l.size();
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i][k] * y[k];
        y[i] = s / l[i][i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l[k][ii] * x[k];
        x[ii] = s / l[ii][ii];
    }
    return x;
}

}  // namespace

LarsResult lars_lasso(const Matrix& x, std::span<const double> y, int max_nonzero) {
    const int n = x.rows, p = x.cols;
    if (static_cast<int>(y.size()) != n) throw DimensionMismatch("lars: y length vs rows");
    if (max_nonzero < 1) throw DimensionMismatch("lars: max_nonzero must be >= 1");

    LarsResult result;
    result.coef.assign(static_cast<std::size_t>(p), 0.0);

    // standardize: centered columns scaled to unit l2 norm, centered target
    Matrix xs(n, p);
    std::vector<double> col_scale(static_cast<std::size_t>(p), 0.0);
    std::vector<char> eligible(static_cast<std::size_t>(p), 1);
    for (int j = 0; j < p; ++j) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += x(i, j);
        mean /= n;
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = x(i, j) - mean;
            xs(i, j) = v;
            norm2 += v * v;
        }
        const double norm = std::sqrt(norm2);
        col_scale[static_cast<std::size_t>(j)] = norm;
        if (norm <= 1e-12 * std::sqrt(static_cast<double>(n))) {
            eligible[static_cast<std::size_t>(j)] = 0;  // zero variance, never activates
            result.skipped_columns.push_back(j);
            for (int i = 0; i < n; ++i) xs(i, j) = 0.0;
        } else {
            for (int i = 0; i < n; ++i) xs(i, j) /= norm;
        }
    }
    double ymean = 0.0;
    for (int i = 0; i < n; ++i) ymean += y[static_cast<std::size_t>(i)];
    ymean /= n;
    std::vector<double> resid(static_cast<std::size_t>(n));
    double ynorm = 0.0;
    for (int i = 0; i < n; ++i) {
        resid[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] - ymean;
        ynorm += resid[static_cast<std::size_t>(i)] * resid[static_cast<std::size_t>(i)];
    }
    ynorm = std::sqrt(ynorm);
    const double corr_tol = std::max(1e-12, 1e-10 * ynorm);

    std::vector<int> active;
    std::vector<char> in_active(static_cast<std::size_t>(p), 0);
    std::vector<double> beta(static_cast<std::size_t>(p), 0.0);  // standardized scale
    std::vector<std::vector<double>> gram;  // active x active

    auto gram_add = [&](int j) {
        const std::size_t a = active.size();
        gram.resize(a + 1);
        gram[a].assign(a + 1, 0.0);
        for (std::size_t t = 0; t <= a; ++t) {
            const int other = (t == a) ? j : active[t];
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += xs(i, j) * xs(i, other);
            gram[a][t] = dot;
        }
        for (std::size_t t = 0; t < a; ++t) gram[t].push_back(gram[a][t]);
    };
    auto gram_drop = [&](std::size_t pos) {
        gram.erase(gram.begin() + static_cast<long>(pos));
        for (auto& row : gram) row.erase(row.begin() + static_cast<long>(pos));
    };

    std::vector<double> corr(static_cast<std::size_t>(p));
    const int max_steps = 8 * p + 64;
    bool just_dropped = false;  // a dropped column still ties the active
                                // correlation level at its knot; adding is
                                // deferred one step so the tie can resolve
    for (int step = 0; step < max_steps; ++step) {
#pragma omp parallel for schedule(static) if (p > 255)
        for (int j = 0; j < p; ++j) {
            double c = 0.0;
            if (eligible[static_cast<std::size_t>(j)])
                for (int i = 0; i < n; ++i) c += xs(i, j) * resid[static_cast<std::size_t>(i)];
            corr[static_cast<std::size_t>(j)] = c;
        }
        double cmax = 0.0;
        for (int j = 0; j < p; ++j) cmax = std::max(cmax, std::abs(corr[static_cast<std::size_t>(j)]));
        result.knot_lambdas.push_back(cmax);
        result.knot_coefs.push_back(beta);
        if (cmax < corr_tol) break;  // residual orthogonal to every column

        if (static_cast<int>(active.size()) < max_nonzero && !just_dropped) {
            // activate the most correlated inactive column; reject candidates
            // that are collinear with the active set
            while (true) {
                int cand = -1;
                double best = -1.0;
                int tied = 0;
                for (int j = 0; j < p; ++j) {
                    if (!eligible[static_cast<std::size_t>(j)] || in_active[static_cast<std::size_t>(j)]) continue;
                    const double a = std::abs(corr[static_cast<std::size_t>(j)]);
                    if (a > best + 1e-12 * cmax) {
                        best = a;
                        cand = j;
                        tied = 0;
                    } else if (cand >= 0 && a > best - 1e-12 * cmax) {
                        ++tied;
                    }
                }
                if (cand < 0 || best < cmax - 1e-9 * std::max(cmax, 1.0)) break;
                result.ties += tied;
                gram_add(cand);
                std::vector<std::vector<double>> chol;
                std::vector<std::vector<double>> trial = gram;
                if (!cholesky(trial, chol)) {
                    gram_drop(active.size());
                    eligible[static_cast<std::size_t>(cand)] = 0;
                    result.skipped_columns.push_back(cand);
                    continue;
                }
                active.push_back(cand);
                in_active[static_cast<std::size_t>(cand)] = 1;
                break;
            }
        }
        if (active.empty()) break;

        const std::size_t a = active.size();
        std::vector<double> sgn(a);
        for (std::size_t t = 0; t < a; ++t)
            sgn[t] = corr[static_cast<std::size_t>(active[t])] >= 0.0 ? 1.0 : -1.0;
        std::vector<std::vector<double>> chol;
        if (!cholesky(gram, chol))
            throw ConvergenceFailure("lars: active Gram lost positive definiteness");
        const std::vector<double> w = cholesky_solve(chol, sgn);
        double anorm2 = 0.0;
        for (std::size_t t = 0; t < a; ++t) anorm2 += sgn[t] * w[t];
        if (anorm2 <= 0.0) throw ConvergenceFailure("lars: degenerate equiangular direction");
        const double anorm = 1.0 / std::sqrt(anorm2);

        std::vector<double> u(static_cast<std::size_t>(n), 0.0);
        for (std::size_t t = 0; t < a; ++t) {
            const double wj = anorm * w[t];
            const int j = active[t];
            for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] += wj * xs(i, j);
        }

        double gamma = cmax / anorm;  // full step to the active-set LS fit
        bool stop_at_activation = false;
        int drop_pos = -1;
        if (static_cast<int>(a) <= p) {
            for (int j = 0; j < p; ++j) {
                if (!eligible[static_cast<std::size_t>(j)] || in_active[static_cast<std::size_t>(j)]) continue;
                double aj = 0.0;
                for (int i = 0; i < n; ++i) aj += xs(i, j) * u[static_cast<std::size_t>(i)];
                const double c = corr[static_cast<std::size_t>(j)];
                for (const double t : {(cmax - c) / (anorm - aj), (cmax + c) / (anorm + aj)}) {
                    if (t > 1e-12 && t < gamma - 1e-15) {
                        gamma = t;
                        stop_at_activation = static_cast<int>(a) >= max_nonzero;
                        drop_pos = -1;
                    }
                }
            }
        }
        // lasso modification: drop the first active coefficient crossing zero
        for (std::size_t t = 0; t < a; ++t) {
            const double dir = anorm * w[t];
            if (dir == 0.0) continue;
            const double gd = -beta[static_cast<std::size_t>(active[t])] / dir;
            if (gd > 1e-12 && gd < gamma - 1e-15) {
                gamma = gd;
                drop_pos = static_cast<int>(t);
                stop_at_activation = false;
            }
        }

        for (std::size_t t = 0; t < a; ++t)
            beta[static_cast<std::size_t>(active[t])] += gamma * anorm * w[t];
        for (int i = 0; i < n; ++i) resid[static_cast<std::size_t>(i)] -= gamma * u[static_cast<std::size_t>(i)];

        if (drop_pos >= 0) {
            const int j = active[static_cast<std::size_t>(drop_pos)];
            beta[static_cast<std::size_t>(j)] = 0.0;
            in_active[static_cast<std::size_t>(j)] = 0;
            active.erase(active.begin() + drop_pos);
            gram_drop(static_cast<std::size_t>(drop_pos));
            just_dropped = true;
            continue;
        }
        just_dropped = false;
        if (stop_at_activation) break;  // the next knot would exceed max_nonzero
        if (gamma >= cmax / anorm - 1e-15) break;  // reached the LS fit
    }

    for (int j = 0; j < p; ++j)
        if (beta[static_cast<std::size_t>(j)] != 0.0)
            result.coef[static_cast<std::size_t>(j)] = beta[static_cast<std::size_t>(j)] / col_scale[static_cast<std::size_t>(j)];
    // final knot snapshot
    double cfin = 0.0;
    for (int j = 0; j < p; ++j) {
        if (!eligible[static_cast<std::size_t>(j)]) continue;
        double c = 0.0;
        for (int i = 0; i < n; ++i) c += xs(i, j) * resid[static_cast<std::size_t>(i)];
        cfin = std::max(cfin, std::abs(c));
    }
    result.knot_lambdas.push_back(cfin);
    result.knot_coefs.push_back(beta);
    return result;
}

}  // namespace icdsel::spectral
