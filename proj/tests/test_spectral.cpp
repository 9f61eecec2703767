#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "icdsel/errors.hpp"
#include "icdsel/rng.hpp"
#include "icdsel/spectral.hpp"
#include "icdsel/sym_eig.hpp"
#include "oracles.hpp"

using namespace icdsel;
using namespace icdsel::spectral;

namespace {

BinaryMatrix from_rows(const std::vector<std::vector<int>>& dense) {
    BinaryMatrix m;
    m.n_rows = static_cast<int>(dense.size());
    m.n_cols = dense.empty() ? 0 : static_cast<int>(dense[0].size());
    for (const auto& row : dense) {
        std::vector<std::uint32_t> sparse;
        for (int c = 0; c < m.n_cols; ++c)
            if (row[static_cast<std::size_t>(c)]) sparse.push_back(static_cast<std::uint32_t>(c));
        m.rows.push_back(std::move(sparse));
    }
    for (int c = 0; c < m.n_cols; ++c) m.feature_index.push_back("F" + std::to_string(c));
    return m;
}

BinaryMatrix random_binary(int rows, int cols, double density, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<int>> dense(static_cast<std::size_t>(rows),
                                        std::vector<int>(static_cast<std::size_t>(cols), 0));
    for (auto& r : dense)
        for (auto& v : r) v = rng.uniform() < density ? 1 : 0;
    return from_rows(dense);
}

// two groups of rows, one marker feature per group plus noise columns
BinaryMatrix two_cluster_matrix(int per_cluster, int noise_cols, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<int>> dense;
    for (int i = 0; i < 2 * per_cluster; ++i) {
        std::vector<int> row(static_cast<std::size_t>(2 + noise_cols), 0);
        row[static_cast<std::size_t>(i < per_cluster ? 0 : 1)] = 1;
        for (int c = 0; c < noise_cols; ++c) row[static_cast<std::size_t>(2 + c)] = rng.uniform() < 0.5;
        dense.push_back(std::move(row));
    }
    return from_rows(dense);
}

KnnGraph path_graph(int n) {
    KnnGraph g;
    g.n = n;
    g.k = 1;
    g.axis = GraphAxis::Samples;
    g.adj.resize(static_cast<std::size_t>(n));
    for (int i = 0; i + 1 < n; ++i) {
        g.adj[static_cast<std::size_t>(i)].push_back(i + 1);
        g.adj[static_cast<std::size_t>(i + 1)].push_back(i);
    }
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    g.degree.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g.degree[static_cast<std::size_t>(i)] = static_cast<double>(g.adj[static_cast<std::size_t>(i)].size());
    return g;
}

}  // namespace

TEST_CASE("knn_graph: three collinear points with k=1") {
    // rows 0 and 2 are distance 2 apart, row 1 sits between them
    const BinaryMatrix m = from_rows({{1, 0, 0}, {1, 1, 0}, {1, 1, 1}});
    const KnnGraph g = knn_graph(m, 1);
    CHECK(g.adj[1] == std::vector<int>{0, 2});  // both ends connect to the middle
    CHECK(g.degree[1] == 2.0);
}

TEST_CASE("knn_graph: duplicate rows are always mutual neighbors") {
    const BinaryMatrix m = from_rows({{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}});
    const KnnGraph g = knn_graph(m, 1);
    CHECK(std::binary_search(g.adj[0].begin(), g.adj[0].end(), 1));
    CHECK(std::binary_search(g.adj[1].begin(), g.adj[1].end(), 0));
}

TEST_CASE("knn_graph: too few nodes is an error") {
    const BinaryMatrix m = from_rows({{1, 0}, {0, 1}});
    CHECK_THROWS_AS(knn_graph(m, 5), TooFewNodes);
}

TEST_CASE("knn_graph equals the brute-force oracle on random instances") {
    for (const std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const BinaryMatrix m = random_binary(50, 10, 0.4, seed);
        const KnnGraph g = knn_graph(m, 5);
        const auto oracle = oracles::brute_knn(m, 5);
        REQUIRE(static_cast<std::size_t>(g.n) == oracle.size());
        for (int i = 0; i < g.n; ++i) {
            CHECK(g.adj[static_cast<std::size_t>(i)] == oracle[static_cast<std::size_t>(i)]);
            CHECK(static_cast<int>(g.adj[static_cast<std::size_t>(i)].size()) >= g.k);
        }
    }
}

TEST_CASE("laplacian score: constant feature ranks last") {
    auto m = two_cluster_matrix(10, 3, 7);
    // append an all-ones column
    for (auto& row : m.rows) row.push_back(static_cast<std::uint32_t>(m.n_cols));
    m.feature_index.push_back("CONST");
    ++m.n_cols;
    const KnnGraph g = knn_graph(m, 3);
    const SelectionResult r = laplacian_score(m, g);
    CHECK(r.selected.back() == m.n_cols - 1);
    CHECK(!std::isfinite(r.scores.back()));
}

TEST_CASE("laplacian score: cluster marker beats uniform noise on a fixed 20-sample instance") {
    const BinaryMatrix m = two_cluster_matrix(10, 1, 3);
    const KnnGraph g = knn_graph(m, 3);
    const SelectionResult r = laplacian_score(m, g);
    // columns 0/1 are the cluster markers, column 2 is noise
    CHECK(r.scores[0] > r.scores[2]);
    CHECK(r.scores[1] > r.scores[2]);
}

TEST_CASE("laplacian score matches the dense oracle to 1e-12 (hand instance + random)") {
    SUBCASE("4-sample hand instance") {
        const BinaryMatrix m = from_rows({{1, 0, 1}, {1, 1, 0}, {0, 1, 1}, {0, 0, 1}});
        const KnnGraph g = knn_graph(m, 2);
        for (int j = 0; j < m.n_cols; ++j) {
            std::vector<double> f(static_cast<std::size_t>(m.n_rows), 0.0);
            for (int i = 0; i < m.n_rows; ++i) f[static_cast<std::size_t>(i)] = m.get(i, j);
            const double got = laplacian_score_feature(g, f);
            const double want = oracles::laplacian_score_dense(g.adj, f);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
    }
    SUBCASE("random instances, scores within [0,2]") {
        for (const std::uint64_t seed : {11u, 12u, 13u}) {
            const BinaryMatrix m = random_binary(30, 8, 0.5, seed);
            const KnnGraph g = knn_graph(m, 4);
            for (int j = 0; j < m.n_cols; ++j) {
                std::vector<double> f(static_cast<std::size_t>(m.n_rows), 0.0);
                for (int i = 0; i < m.n_rows; ++i) f[static_cast<std::size_t>(i)] = m.get(i, j);
                const double got = laplacian_score_feature(g, f);
                if (std::isnan(got)) continue;
                CHECK(got == doctest::Approx(oracles::laplacian_score_dense(g.adj, f)).epsilon(1e-12));
                CHECK(got >= -1e-12);
                CHECK(got <= 2.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("laplacian score is invariant to positive rescaling of the feature") {
    const BinaryMatrix m = random_binary(25, 6, 0.5, 21);
    const KnnGraph g = knn_graph(m, 3);
    std::vector<double> f(static_cast<std::size_t>(m.n_rows));
    for (int i = 0; i < m.n_rows; ++i) f[static_cast<std::size_t>(i)] = m.get(i, 0);
    const double base = laplacian_score_feature(g, f);
    for (auto& v : f) v *= 37.5;
    CHECK(laplacian_score_feature(g, f) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("spectral embedding: disconnected cliques give a per-clique-constant vector") {
    // two 4-cliques: rows 0-3 identical, rows 4-7 identical
    const BinaryMatrix m = from_rows({{1, 0}, {1, 0}, {1, 0}, {1, 0},
                                      {0, 1}, {0, 1}, {0, 1}, {0, 1}});
    const KnnGraph g = knn_graph(m, 3);
    std::vector<double> evals;
    const Matrix y = spectral_embedding(g, 1, &evals);
    REQUIRE(y.cols == 1);
    for (int i = 1; i < 4; ++i) CHECK(y(i, 0) == doctest::Approx(y(0, 0)).epsilon(1e-9));
    for (int i = 5; i < 8; ++i) CHECK(y(i, 0) == doctest::Approx(y(4, 0)).epsilon(1e-9));
    CHECK(y(0, 0) != doctest::Approx(y(4, 0)).epsilon(1e-6));
}

TEST_CASE("spectral embedding: generalized eigen-residual below 1e-8, D-orthonormal") {
    const BinaryMatrix m = random_binary(40, 12, 0.4, 31);
    const KnnGraph g = knn_graph(m, 5);
    std::vector<double> evals;
    const Matrix y = spectral_embedding(g, 4, &evals);
    for (int k = 0; k < y.cols; ++k) {
        for (int i = 0; i < g.n; ++i) {
            // (L y)_i = d_i y_i - sum_adj y_j ; residual vs lambda D y
            double ly = g.degree[static_cast<std::size_t>(i)] * y(i, k);
            for (const int j : g.adj[static_cast<std::size_t>(i)]) ly -= y(j, k);
            const double rhs = evals[static_cast<std::size_t>(k)] * g.degree[static_cast<std::size_t>(i)] * y(i, k);
            CHECK(std::abs(ly - rhs) < 1e-8);
        }
        for (int k2 = 0; k2 <= k; ++k2) {
            double dot = 0.0;
            for (int i = 0; i < g.n; ++i)
                dot += y(i, k) * g.degree[static_cast<std::size_t>(i)] * y(i, k2);
            CHECK(dot == doctest::Approx(k == k2 ? 1.0 : 0.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("spectral embedding eigenvalues of a 5-node path match the dense oracle to 1e-10") {
    const KnnGraph g = path_graph(5);
    std::vector<double> evals;
    spectral_embedding(g, 3, &evals);

    // oracle: eigenvalues of D^-1/2 L D^-1/2 via Eigen, ascending
    const int n = g.n;
    Matrix nmat(n, n);
    for (int i = 0; i < n; ++i) {
        nmat(i, i) = 1.0;
        for (const int j : g.adj[static_cast<std::size_t>(i)])
            nmat(i, j) = -1.0 / std::sqrt(g.degree[static_cast<std::size_t>(i)] * g.degree[static_cast<std::size_t>(j)]);
    }
    std::vector<double> oracle_vals;
    Matrix oracle_vecs;
    oracles::eigen_sym(nmat, oracle_vals, oracle_vecs);
    for (int k = 0; k < 3; ++k)
        CHECK(evals[static_cast<std::size_t>(k)] ==
              doctest::Approx(oracle_vals[static_cast<std::size_t>(k) + 1]).epsilon(1e-10));
}

TEST_CASE("sym_eigen agrees with the Eigen oracle on random symmetric matrices") {
    Rng rng(55);
    for (const int n : {3, 8, 20}) {
        Matrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.uniform(-1.0, 1.0);
        const SymEig mine = sym_eigen(a);
        std::vector<double> vals;
        Matrix vecs;
        oracles::eigen_sym(a, vals, vecs);
        for (int k = 0; k < n; ++k)
            CHECK(mine.values[static_cast<std::size_t>(k)] ==
                  doctest::Approx(vals[static_cast<std::size_t>(k)]).epsilon(1e-10));
        // residual check ||A v - lambda v||
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                double av = 0.0;
                for (int j = 0; j < n; ++j) av += a(i, j) * mine.vectors(j, k);
                CHECK(std::abs(av - mine.values[static_cast<std::size_t>(k)] * mine.vectors(i, k)) < 1e-9);
            }
        }
    }
}

TEST_CASE("lars: exact single-column recovery") {
    Rng rng(61);
    const int n = 25, p = 6;
    Matrix x(n, p);
    for (auto& v : x.data) v = rng.uniform(-1.0, 1.0);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = 3.0 * x(i, 2);
    const LarsResult r = lars_lasso(x, y, 3);
    int nonzero = 0;
    for (int j = 0; j < p; ++j)
        if (r.coef[static_cast<std::size_t>(j)] != 0.0) ++nonzero;
    CHECK(nonzero == 1);
    CHECK(r.coef[2] == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("lars: target orthogonal to all columns gives all-zero coefficients") {
    // columns constant within pairs; y alternates so every centered column is
    // orthogonal to it
    const int n = 8, p = 3;
    Matrix x(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) x(i, j) = (i / 2 + j) % 2;
    std::vector<double> y{1, -1, 1, -1, 1, -1, 1, -1};
    const LarsResult r = lars_lasso(x, y, p);
    for (const double c : r.coef) CHECK(c == 0.0);
}

TEST_CASE("lars: zero-variance column is skipped and recorded") {
    Rng rng(67);
    const int n = 20, p = 4;
    Matrix x(n, p);
    for (auto& v : x.data) v = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < n; ++i) x(i, 1) = 0.25;  // constant column
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = x(i, 0) - 2.0 * x(i, 3);
    const LarsResult r = lars_lasso(x, y, p);
    CHECK(std::find(r.skipped_columns.begin(), r.skipped_columns.end(), 1) != r.skipped_columns.end());
    CHECK(r.coef[1] == 0.0);
}

TEST_CASE("lars knots match coordinate-descent lasso at the same penalty (30x8 random)") {
    for (const std::uint64_t seed : {71u, 72u, 73u}) {
        Rng rng(seed);
        const int n = 30, p = 8;
        Matrix x(n, p);
        for (auto& v : x.data) v = rng.normal();
        std::vector<double> y(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            y[static_cast<std::size_t>(i)] = x(i, 0) - 2.0 * x(i, 3) + 0.5 * x(i, 5) + 0.1 * rng.normal();
        const LarsResult r = lars_lasso(x, y, p);
        REQUIRE(r.knot_lambdas.size() >= 3);

        // standardize exactly as the library (centered unit-norm columns,
        // centered target) but with independent code
        Matrix xs(n, p);
        for (int j = 0; j < p; ++j) {
            double mean = 0.0;
            for (int i = 0; i < n; ++i) mean += x(i, j);
            mean /= n;
            double norm = 0.0;
            for (int i = 0; i < n; ++i) norm += (x(i, j) - mean) * (x(i, j) - mean);
            norm = std::sqrt(norm);
            for (int i = 0; i < n; ++i) xs(i, j) = (x(i, j) - mean) / norm;
        }
        double ymean = 0.0;
        for (const double v : y) ymean += v;
        ymean /= n;
        std::vector<double> yc(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) yc[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] - ymean;

        // compare at a few interior knots
        for (std::size_t k = 1; k + 1 < r.knot_lambdas.size(); k += 2) {
            const double lambda = r.knot_lambdas[k];
            if (lambda < 1e-8) continue;
            const auto cd = oracles::coordinate_descent_lasso(xs, yc, lambda);
            for (int j = 0; j < p; ++j)
                CHECK(r.knot_coefs[k][static_cast<std::size_t>(j)] ==
                      doctest::Approx(cd[static_cast<std::size_t>(j)]).epsilon(1e-6));
        }
    }
}

TEST_CASE("lars path property: active |correlations| tie at every knot") {
    Rng rng(81);
    const int n = 40, p = 10;
    Matrix x(n, p);
    for (auto& v : x.data) v = rng.normal();
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = x(i, 1) + x(i, 4) - x(i, 7) + 0.05 * rng.normal();
    const LarsResult r = lars_lasso(x, y, p);

    Matrix xs(n, p);
    for (int j = 0; j < p; ++j) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += x(i, j);
        mean /= n;
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += (x(i, j) - mean) * (x(i, j) - mean);
        norm = std::sqrt(norm);
        for (int i = 0; i < n; ++i) xs(i, j) = (x(i, j) - mean) / norm;
    }
    double ymean = 0.0;
    for (const double v : y) ymean += v;
    ymean /= n;

    for (std::size_t k = 0; k < r.knot_lambdas.size(); ++k) {
        const auto& beta = r.knot_coefs[k];
        std::vector<double> resid(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double fit = 0.0;
            for (int j = 0; j < p; ++j) fit += xs(i, j) * beta[static_cast<std::size_t>(j)];
            resid[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] - ymean - fit;
        }
        for (int j = 0; j < p; ++j) {
            if (beta[static_cast<std::size_t>(j)] == 0.0) continue;
            double corr = 0.0;
            for (int i = 0; i < n; ++i) corr += xs(i, j) * resid[static_cast<std::size_t>(i)];
            CHECK(std::abs(corr) == doctest::Approx(r.knot_lambdas[k]).epsilon(1e-6));
        }
    }
}

TEST_CASE("incremental pca: data in an exact 2-D subspace explains everything") {
    std::vector<std::vector<int>> dense;
    for (int i = 0; i < 40; ++i) {
        if (i % 4 == 0) dense.push_back({1, 1, 0, 0, 0, 0});
        if (i % 4 == 1) dense.push_back({0, 0, 1, 1, 0, 0});
        if (i % 4 == 2) dense.push_back({1, 1, 1, 1, 0, 0});
        if (i % 4 == 3) dense.push_back({0, 0, 0, 0, 0, 0});
    }
    const BinaryMatrix m = from_rows(dense);
    const IncrementalPca pca = incremental_pca(m, 2, 40);
    const double evr = pca.explained_variance_ratio[0] + pca.explained_variance_ratio[1];
    CHECK(evr == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("incremental pca: a single batch equals exact PCA (sign-aligned) to 1e-8") {
    const BinaryMatrix m = random_binary(60, 10, 0.4, 91);
    const IncrementalPca pca = incremental_pca(m, 4, 60);
    const Matrix dense = m.dense_block([&] {
        std::vector<int> all(static_cast<std::size_t>(m.n_rows));
        std::iota(all.begin(), all.end(), 0);
        return all;
    }(), {});
    const Matrix oracle = oracles::exact_pca_components(dense, 4);
    for (int c = 0; c < 4; ++c) {
        // align signs through the dot product
        double dot = 0.0;
        for (int j = 0; j < m.n_cols; ++j) dot += pca.components(c, j) * oracle(c, j);
        const double sign = dot >= 0.0 ? 1.0 : -1.0;
        for (int j = 0; j < m.n_cols; ++j)
            CHECK(pca.components(c, j) == doctest::Approx(sign * oracle(c, j)).epsilon(1e-8));
    }
}

TEST_CASE("incremental pca: two batches stay close to exact PCA (principal angles)") {
    const BinaryMatrix m = random_binary(200, 20, 0.35, 93);
    const IncrementalPca pca = incremental_pca(m, 5, 100);  // two batches
    const Matrix dense = m.dense_block([&] {
        std::vector<int> all(static_cast<std::size_t>(m.n_rows));
        std::iota(all.begin(), all.end(), 0);
        return all;
    }(), {});
    const Matrix oracle = oracles::exact_pca_components(dense, 5);
    CHECK(oracles::max_principal_angle(pca.components, oracle) < 0.05);
}

TEST_CASE("incremental pca: batch size below component count is rejected") {
    const BinaryMatrix m = random_binary(50, 10, 0.4, 95);
    CHECK_THROWS_AS(incremental_pca(m, 8, 4), BatchTooSmall);
}

TEST_CASE("pfa: n_best = n_features selects everything") {
    const BinaryMatrix m = random_binary(40, 6, 0.5, 101);
    PfaParams params;
    params.n_best = 6;
    params.seed = 1;
    const SelectionResult r = pfa(m, params);
    std::set<int> sel(r.selected.begin(), r.selected.end());
    CHECK(sel.size() == 6);
}

TEST_CASE("pfa: duplicate feature columns land in the same cluster") {
    std::vector<std::vector<int>> dense;
    Rng rng(103);
    for (int i = 0; i < 30; ++i) {
        const int a = rng.uniform() < 0.5, b = rng.uniform() < 0.5, c = rng.uniform() < 0.5;
        dense.push_back({a, b, c, a, b, c});  // columns 3..5 duplicate 0..2
    }
    const BinaryMatrix m = from_rows(dense);
    PfaParams params;
    params.n_best = 3;
    params.seed = 5;
    const SelectionResult r = pfa(m, params);
    std::set<int> groups;
    for (const int j : r.selected) groups.insert(j % 3);
    CHECK(groups.size() == 3);  // one representative per duplicate pair
}

TEST_CASE("pfa: three correlated feature groups yield one representative each in >= 9/10 seeds") {
    Rng rng(107);
    std::vector<std::vector<int>> dense;
    for (int i = 0; i < 120; ++i) {
        std::vector<int> row(9, 0);
        for (int gidx = 0; gidx < 3; ++gidx) {
            const int base = rng.uniform() < 0.5;
            for (int c = 0; c < 3; ++c) {
                // within-group agreement ~0.95
                const int v = rng.uniform() < 0.95 ? base : 1 - base;
                row[static_cast<std::size_t>(3 * gidx + c)] = v;
            }
        }
        dense.push_back(std::move(row));
    }
    const BinaryMatrix m = from_rows(dense);
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        PfaParams params;
        params.n_best = 3;
        params.seed = seed;
        const SelectionResult r = pfa(m, params);
        std::set<int> groups;
        for (const int j : r.selected) groups.insert(j / 3);
        if (groups.size() == 3) ++hits;
    }
    CHECK(hits >= 9);
}

TEST_CASE("kmeans handles k equal to point count with duplicates (repair path)") {
    Matrix points(4, 2);
    points(0, 0) = 0.0;
    points(1, 0) = 0.0;  // duplicate of point 0
    points(2, 0) = 5.0;
    points(3, 0) = 9.0;
    const KmeansResult km = kmeans(points, 4, 10, 3);
    std::set<int> clusters(km.assignment.begin(), km.assignment.end());
    CHECK(clusters.size() == 4);
}

TEST_CASE("mcfs: the cluster-aligned feature attains the maximal score (fixed 40-sample instance)") {
    const BinaryMatrix m = two_cluster_matrix(20, 2, 113);
    McfsParams params;
    params.k = 5;
    params.n_eigenvectors = 2;
    params.n_best = 2;
    const SelectionResult r = mcfs(m, params);
    // columns 0 and 1 are complementary cluster indicators; one of them must
    // top the ranking
    CHECK((r.selected[0] == 0 || r.selected[0] == 1));
    const double best_marker = std::max(r.scores[0], r.scores[1]);
    for (int j = 2; j < m.n_cols; ++j) CHECK(best_marker >= r.scores[static_cast<std::size_t>(j)]);
}

TEST_CASE("mcfs: n_best = n_features selects all features") {
    const BinaryMatrix m = random_binary(30, 5, 0.5, 117);
    McfsParams params;
    params.n_eigenvectors = 2;
    params.n_best = 5;
    const SelectionResult r = mcfs(m, params);
    std::set<int> sel(r.selected.begin(), r.selected.end());
    CHECK(sel.size() == 5);
}

TEST_CASE("mcfs: duplicated columns activate at most once per pair, ties recorded") {
    std::vector<std::vector<int>> dense;
    Rng rng(119);
    for (int i = 0; i < 40; ++i) {
        const int a = i < 20, b = rng.uniform() < 0.5;
        dense.push_back({a, b, a, b});  // exact duplicates
    }
    const BinaryMatrix m = from_rows(dense);
    McfsParams params;
    params.k = 5;
    params.n_eigenvectors = 2;
    params.n_best = 4;
    const SelectionResult r = mcfs(m, params);
    // one of each duplicate pair carries zero weight everywhere
    CHECK((r.scores[0] == 0.0 || r.scores[2] == 0.0));
    CHECK(r.diagnostics.at("lars_skipped_columns").get<int>() +
              r.diagnostics.at("lars_ties").get<int>() >
          0);
}

TEST_CASE("selectors are deterministic given data and seed") {
    const BinaryMatrix m = random_binary(60, 12, 0.4, 131);
    McfsParams mp;
    mp.n_best = 5;
    mp.seed = 9;
    const auto m1 = mcfs(m, mp), m2 = mcfs(m, mp);
    CHECK(m1.selected == m2.selected);
    CHECK(m1.scores == m2.scores);
    PfaParams pp;
    pp.n_best = 5;
    pp.seed = 9;
    const auto p1 = pfa(m, pp), p2 = pfa(m, pp);
    CHECK(p1.selected == p2.selected);
    LsParams lp;
    lp.k = 4;
    lp.n_best = 5;
    const auto l1 = laplacian_score_select(m, lp), l2 = laplacian_score_select(m, lp);
    CHECK(l1.selected == l2.selected);
}

TEST_CASE("subsample_rows is seed-deterministic and sorted") {
    const auto a = subsample_rows(100, 30, 5);
    const auto b = subsample_rows(100, 30, 5);
    CHECK(a == b);
    CHECK(a.size() == 30);
    CHECK(std::is_sorted(a.begin(), a.end()));
    const auto c = subsample_rows(100, 30, 6);
    CHECK(a != c);
    CHECK(subsample_rows(10, 30, 1).size() == 10);
}
