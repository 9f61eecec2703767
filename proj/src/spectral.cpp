#include "icdsel/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "icdsel/errors.hpp"
#include "icdsel/kernels.hpp"
#include "icdsel/rng.hpp"
#include "icdsel/sym_eig.hpp"

namespace icdsel::spectral {

std::size_t KnnGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& a : adj) twice += a.size();
    return twice / 2;
}

KnnGraph knn_graph(const BinaryMatrix& x, int k, GraphAxis axis) {
    const kernels::SparseRows sets = (axis == GraphAxis::Samples) ? x.rows : x.columns();
    const int n = static_cast<int>(sets.size());
    if (k < 1) throw TooFewNodes("k must be at least 1");
    if (n < k + 1)
        throw TooFewNodes("need at least k+1 = " + std::to_string(k + 1) + " nodes, have " +
                          std::to_string(n));

    const int dim = (axis == GraphAxis::Samples) ? x.n_cols : x.n_rows;
    const kernels::BitRows bits = kernels::pack_bits(sets, dim);

    // k nearest per node, ties broken by lower index; then mutual-or
    // symmetrization
    std::vector<std::vector<int>> nearest(static_cast<std::size_t>(n));
#pragma omp parallel
    {
        std::vector<double> dist(static_cast<std::size_t>(n));
        std::vector<int> idx(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 32)
        for (int i = 0; i < n; ++i) {
            kernels::sqdist_row_bits(bits, i, dist.data());
            int m = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) idx[static_cast<std::size_t>(m++)] = j;
            const auto closer = [&](int a, int b) {
                if (dist[static_cast<std::size_t>(a)] != dist[static_cast<std::size_t>(b)])
                    return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
                return a < b;
            };
            std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.begin() + m, closer);
            nearest[static_cast<std::size_t>(i)].assign(idx.begin(), idx.begin() + k);
        }
    }

    KnnGraph g;
    g.n = n;
    g.k = k;
    g.axis = axis;
    g.adj.assign(static_cast<std::size_t>(n), {});
    for (int i = 0; i < n; ++i)
        for (const int j : nearest[static_cast<std::size_t>(i)]) {
            g.adj[static_cast<std::size_t>(i)].push_back(j);
            g.adj[static_cast<std::size_t>(j)].push_back(i);
        }
    g.degree.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        auto& a = g.adj[static_cast<std::size_t>(i)];
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        g.degree[static_cast<std::size_t>(i)] = static_cast<double>(a.size());
    }
    return g;
}

double laplacian_score_feature(const KnnGraph& g, std::span<const double> f) {
    const int n = g.n;
    if (static_cast<int>(f.size()) != n) throw DimensionMismatch("feature length vs graph size");
    double sum_d = 0.0, sum_df = 0.0, sum_dff = 0.0;
    for (int i = 0; i < n; ++i) {
        sum_d += g.degree[static_cast<std::size_t>(i)];
        sum_df += g.degree[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
        sum_dff += g.degree[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
    }
    if (sum_d == 0.0) throw EmptyGraph("graph has no edges");
    const double mu = sum_df / sum_d;
    double den = 0.0;   // f~' D f~
    double fsf = 0.0;   // f~' S f~
    for (int i = 0; i < n; ++i) {
        const double fi = f[static_cast<std::size_t>(i)] - mu;
        den += g.degree[static_cast<std::size_t>(i)] * fi * fi;
        double row = 0.0;
        for (const int j : g.adj[static_cast<std::size_t>(i)]) row += f[static_cast<std::size_t>(j)] - mu;
        fsf += fi * row;
    }
    // constant feature: weighted variance is zero up to roundoff
    if (den <= 1e-12 * std::max(sum_dff, 1e-300))
        return std::numeric_limits<double>::quiet_NaN();
    return (den - fsf) / den;
}

SelectionResult laplacian_score(const BinaryMatrix& x, const KnnGraph& g, int n_best) {
    if (g.axis != GraphAxis::Samples)
        throw DimensionMismatch("laplacian_score expects a graph over samples");
    if (x.n_rows != g.n) throw DimensionMismatch("matrix rows vs graph nodes");
    const auto cols = x.columns();
    std::vector<double> importance(static_cast<std::size_t>(x.n_cols));
    int constant_features = 0;
#pragma omp parallel
    {
        std::vector<double> f(static_cast<std::size_t>(x.n_rows));
#pragma omp for schedule(dynamic, 16) reduction(+ : constant_features)
        for (int j = 0; j < x.n_cols; ++j) {
            std::fill(f.begin(), f.end(), 0.0);
            for (const std::uint32_t r : cols[static_cast<std::size_t>(j)]) f[r] = 1.0;
            const double score = laplacian_score_feature(g, f);
            if (std::isnan(score)) {
                importance[static_cast<std::size_t>(j)] = -std::numeric_limits<double>::infinity();
                ++constant_features;
            } else {
                importance[static_cast<std::size_t>(j)] = 1.0 - score;
            }
        }
    }
    SelectionResult r;
    r.method = "ls";
    r.scores = importance;
    r.selected = rank_descending(importance);
    if (n_best >= 0 && static_cast<int>(r.selected.size()) > n_best)
        r.selected.resize(static_cast<std::size_t>(n_best));
    r.diagnostics["constant_features"] = constant_features;
    r.diagnostics["graph_edges"] = g.edge_count();
    return r;
}

Matrix spectral_embedding(const KnnGraph& g, int n_vectors, std::vector<double>* eigenvalues) {
    const int n = g.n;
    if (n == 0) throw EmptyGraph("empty graph");
    if (n_vectors < 1 || n_vectors >= n)
        throw DimensionMismatch("need 1 <= n_vectors < n, got " + std::to_string(n_vectors));
    std::vector<double> inv_sqrt_d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (g.degree[static_cast<std::size_t>(i)] <= 0.0) throw EmptyGraph("isolated node " + std::to_string(i));
        inv_sqrt_d[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(g.degree[static_cast<std::size_t>(i)]);
    }
    // normalized Laplacian N = I - D^-1/2 S D^-1/2; solving N z = lambda z
    // and mapping y = D^-1/2 z solves L y = lambda D y
    Matrix nmat(n, n);
    for (int i = 0; i < n; ++i) {
        nmat(i, i) = 1.0;
        for (const int j : g.adj[static_cast<std::size_t>(i)])
            nmat(i, j) = -inv_sqrt_d[static_cast<std::size_t>(i)] * inv_sqrt_d[static_cast<std::size_t>(j)];
    }
    SymEig eig = sym_eigen(std::move(nmat));

    // index 0 is the trivial constant direction (eigenvalue 0); the next
    // n_vectors carry the cluster structure
    Matrix y(n, n_vectors);
    if (eigenvalues) eigenvalues->assign(static_cast<std::size_t>(n_vectors), 0.0);
    for (int k = 0; k < n_vectors; ++k) {
        const int src = k + 1;
        if (eigenvalues) (*eigenvalues)[static_cast<std::size_t>(k)] = eig.values[static_cast<std::size_t>(src)];
        for (int i = 0; i < n; ++i)
            y(i, k) = eig.vectors(i, src) * inv_sqrt_d[static_cast<std::size_t>(i)];
    }
    return y;
}

SelectionResult laplacian_score_select(const BinaryMatrix& x, const LsParams& params) {
    BinaryMatrix sub;
    const BinaryMatrix* data = &x;
    nlohmann::json sub_diag;
    if (params.subsample && *params.subsample < x.n_rows) {
        const auto rows = subsample_rows(x.n_rows, *params.subsample, params.seed);
        sub = x.take_rows(rows);
        data = &sub;
        sub_diag = static_cast<int>(rows.size());
    }
    const KnnGraph g = knn_graph(*data, params.k, GraphAxis::Samples);
    SelectionResult r = laplacian_score(*data, g, params.n_best);
    r.seed = params.seed;
    r.parameters["k"] = params.k;
    r.parameters["n_best"] = params.n_best;
    r.parameters["graph_axis"] = "samples";
    if (!sub_diag.is_null()) r.diagnostics["subsample_rows"] = sub_diag;
    return r;
}

SelectionResult mcfs(const BinaryMatrix& x, const McfsParams& params) {
    BinaryMatrix sub;
    const BinaryMatrix* data = &x;
    nlohmann::json sub_diag;
    if (params.subsample && *params.subsample < x.n_rows) {
        const auto rows = subsample_rows(x.n_rows, *params.subsample, params.seed);
        sub = x.take_rows(rows);
        data = &sub;
        sub_diag = static_cast<int>(rows.size());
    }
    const KnnGraph g = knn_graph(*data, params.k, GraphAxis::Samples);
    std::vector<double> eigenvalues;
    const Matrix embedding = spectral_embedding(g, params.n_eigenvectors, &eigenvalues);

    const Matrix xd = data->dense_block([&] {
        std::vector<int> all(static_cast<std::size_t>(data->n_rows));
        std::iota(all.begin(), all.end(), 0);
        return all;
    }(), {});

    std::vector<double> score(static_cast<std::size_t>(x.n_cols), 0.0);
    int ties = 0;
    std::size_t skipped = 0;
    for (int k = 0; k < embedding.cols; ++k) {
        std::vector<double> y(static_cast<std::size_t>(embedding.rows));
        for (int i = 0; i < embedding.rows; ++i) y[static_cast<std::size_t>(i)] = embedding(i, k);
        const LarsResult lr = lars_lasso(xd, y, params.n_best);
        for (int j = 0; j < x.n_cols; ++j)
            score[static_cast<std::size_t>(j)] =
                std::max(score[static_cast<std::size_t>(j)], std::abs(lr.coef[static_cast<std::size_t>(j)]));
        ties += lr.ties;
        skipped = std::max(skipped, lr.skipped_columns.size());
    }

    SelectionResult r;
    r.method = "mcfs";
    r.seed = params.seed;
    r.scores = score;
    r.selected = rank_descending(score);
    if (static_cast<int>(r.selected.size()) > params.n_best)
        r.selected.resize(static_cast<std::size_t>(params.n_best));
    r.parameters["k"] = params.k;
    r.parameters["n_eigenvectors"] = params.n_eigenvectors;
    r.parameters["n_best"] = params.n_best;
    r.parameters["graph_axis"] = "samples";
    r.diagnostics["eigenvalues"] = eigenvalues;
    r.diagnostics["lars_ties"] = ties;
    r.diagnostics["lars_skipped_columns"] = skipped;
    if (!sub_diag.is_null()) r.diagnostics["subsample_rows"] = sub_diag;
    return r;
}

IncrementalPca incremental_pca(const BinaryMatrix& x, int n_components, int batch_rows) {
    if (n_components < 1 || n_components > std::min(x.n_rows, x.n_cols))
        throw DimensionMismatch("n_components must lie in [1, min(rows, cols)]");
    if (batch_rows < n_components)
        throw BatchTooSmall("batch_rows " + std::to_string(batch_rows) + " < n_components " +
                            std::to_string(n_components));
    const int d = x.n_cols;
    IncrementalPca st;
    st.mean.assign(static_cast<std::size_t>(d), 0.0);
    double total_ss = 0.0;  // total squared deviation from the running mean

    for (int start = 0; start < x.n_rows; start += batch_rows) {
        const int b = std::min(batch_rows, x.n_rows - start);
        std::vector<int> rows(static_cast<std::size_t>(b));
        std::iota(rows.begin(), rows.end(), start);
        Matrix batch = x.dense_block(rows, {});

        std::vector<double> bmean(static_cast<std::size_t>(d), 0.0);
        for (int i = 0; i < b; ++i) {
            const double* r = batch.row_ptr(i);
            for (int j = 0; j < d; ++j) bmean[static_cast<std::size_t>(j)] += r[j];
        }
        for (auto& v : bmean) v /= b;
        for (int i = 0; i < b; ++i) {
            double* r = batch.row_ptr(i);
            for (int j = 0; j < d; ++j) r[j] -= bmean[static_cast<std::size_t>(j)];
        }

        const long n_old = st.n_seen;
        const long n_new = n_old + b;
        double batch_ss = 0.0;
        for (const double v : batch.data) batch_ss += v * v;
        double mean_shift_ss = 0.0;
        for (int j = 0; j < d; ++j) {
            const double diff = st.mean[static_cast<std::size_t>(j)] - bmean[static_cast<std::size_t>(j)];
            mean_shift_ss += diff * diff;
        }
        total_ss += batch_ss;
        if (n_old > 0)
            total_ss += (static_cast<double>(n_old) * b / n_new) * mean_shift_ss;

        // stack = [diag(s) * components ; centered batch ; mean correction]
        const int prior = (n_old > 0) ? static_cast<int>(st.singular_values.size()) : 0;
        const int stack_rows = prior + b + (n_old > 0 ? 1 : 0);
        Matrix stack(stack_rows, d);
        for (int i = 0; i < prior; ++i) {
            const double s = st.singular_values[static_cast<std::size_t>(i)];
            const double* c = st.components.row_ptr(i);
            double* dst = stack.row_ptr(i);
            for (int j = 0; j < d; ++j) dst[j] = s * c[j];
        }
        for (int i = 0; i < b; ++i)
            std::copy(batch.row_ptr(i), batch.row_ptr(i) + d, stack.row_ptr(prior + i));
        if (n_old > 0) {
            const double f = std::sqrt(static_cast<double>(n_old) * b / n_new);
            double* dst = stack.row_ptr(stack_rows - 1);
            for (int j = 0; j < d; ++j)
                dst[j] = f * (st.mean[static_cast<std::size_t>(j)] - bmean[static_cast<std::size_t>(j)]);
        }

        // right singular vectors via the Gram matrix eigendecomposition
        Matrix gram(d, d);
        kernels::gemm_tn(stack.data.data(), stack.data.data(), gram.data.data(), d, stack_rows, d);
        SymEig eig = sym_eigen(std::move(gram));

        st.components = Matrix(n_components, d);
        st.singular_values.assign(static_cast<std::size_t>(n_components), 0.0);
        for (int i = 0; i < n_components; ++i) {
            const int src = d - 1 - i;  // eigenvalues ascend; take the top
            st.singular_values[static_cast<std::size_t>(i)] =
                std::sqrt(std::max(0.0, eig.values[static_cast<std::size_t>(src)]));
            for (int j = 0; j < d; ++j) st.components(i, j) = eig.vectors(j, src);
        }
        for (int j = 0; j < d; ++j)
            st.mean[static_cast<std::size_t>(j)] =
                (st.mean[static_cast<std::size_t>(j)] * n_old + bmean[static_cast<std::size_t>(j)] * b) / n_new;
        st.n_seen = n_new;
    }

    st.explained_variance_ratio.assign(st.singular_values.size(), 0.0);
    if (st.n_seen > 1 && total_ss > 0.0) {
        for (std::size_t i = 0; i < st.singular_values.size(); ++i)
            st.explained_variance_ratio[i] =
                st.singular_values[i] * st.singular_values[i] / total_ss;
    }
    return st;
}

namespace {

double sqdist(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

struct LloydOutcome {
    std::vector<int> assignment;
    Matrix centroids;
    double inertia = 0.0;
    bool empty_cluster = false;
};

LloydOutcome lloyd(const Matrix& points, Matrix centroids, int max_iter) {
    const int n = points.rows, d = points.cols, k = centroids.rows;
    LloydOutcome out;
    out.assignment.assign(static_cast<std::size_t>(n), -1);
    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
#pragma omp parallel for schedule(static) reduction(| : changed)
        for (int i = 0; i < n; ++i) {
            const double* p = points.row_ptr(i);
            int best = 0;
            double best_d = sqdist(p, centroids.row_ptr(0), d);
            for (int c = 1; c < k; ++c) {
                const double dist = sqdist(p, centroids.row_ptr(c), d);
                if (dist < best_d) {
                    best_d = dist;
                    best = c;
                }
            }
            if (out.assignment[static_cast<std::size_t>(i)] != best) {
                out.assignment[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        if (!changed) break;
        Matrix sums(k, d);
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < n; ++i) {
            const int c = out.assignment[static_cast<std::size_t>(i)];
            ++counts[static_cast<std::size_t>(c)];
            const double* p = points.row_ptr(i);
            double* s = sums.row_ptr(c);
            for (int j = 0; j < d; ++j) s[j] += p[j];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] == 0) {
                out.empty_cluster = true;
            } else {
                double* s = sums.row_ptr(c);
                for (int j = 0; j < d; ++j) s[j] /= counts[static_cast<std::size_t>(c)];
            }
        }
        if (out.empty_cluster) {
            out.centroids = std::move(centroids);
            return out;
        }
        centroids = std::move(sums);
    }
    out.centroids = std::move(centroids);
    out.inertia = 0.0;
    for (int i = 0; i < n; ++i)
        out.inertia += sqdist(points.row_ptr(i), out.centroids.row_ptr(out.assignment[static_cast<std::size_t>(i)]), d);
    return out;
}

Matrix seed_kmeanspp(const Matrix& points, int k, Rng& rng) {
    const int n = points.rows, d = points.cols;
    Matrix centroids(k, d);
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);
    int first = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    chosen[static_cast<std::size_t>(first)] = 1;
    std::copy(points.row_ptr(first), points.row_ptr(first) + d, centroids.row_ptr(0));
    std::vector<double> d2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = sqdist(points.row_ptr(i), centroids.row_ptr(0), d);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (const double v : d2) total += v;
        int pick = -1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += d2[static_cast<std::size_t>(i)];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) pick = n - 1;
        } else {
            // all remaining points coincide with chosen centroids
            for (int i = 0; i < n; ++i)
                if (!chosen[static_cast<std::size_t>(i)]) {
                    pick = i;
                    break;
                }
            if (pick < 0) pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        }
        chosen[static_cast<std::size_t>(pick)] = 1;
        std::copy(points.row_ptr(pick), points.row_ptr(pick) + d, centroids.row_ptr(c));
        for (int i = 0; i < n; ++i)
            d2[static_cast<std::size_t>(i)] =
                std::min(d2[static_cast<std::size_t>(i)], sqdist(points.row_ptr(i), centroids.row_ptr(c), d));
    }
    return centroids;
}

// Move the point farthest from its centroid in the largest cluster into each
// empty cluster, then let Lloyd settle again.
LloydOutcome repair_empty(const Matrix& points, LloydOutcome out, int max_rounds) {
    const int k = out.centroids.rows, d = points.cols, n = points.rows;
    for (int round = 0; round < max_rounds && out.empty_cluster; ++round) {
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (const int a : out.assignment) ++counts[static_cast<std::size_t>(a)];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            int largest = 0;
            for (int c2 = 1; c2 < k; ++c2)
                if (counts[static_cast<std::size_t>(c2)] > counts[static_cast<std::size_t>(largest)]) largest = c2;
            int far_point = -1;
            double far_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (out.assignment[static_cast<std::size_t>(i)] != largest) continue;
                const double dist = sqdist(points.row_ptr(i), out.centroids.row_ptr(largest), d);
                if (dist > far_d) {
                    far_d = dist;
                    far_point = i;
                }
            }
            out.assignment[static_cast<std::size_t>(far_point)] = c;
            --counts[static_cast<std::size_t>(largest)];
            counts[static_cast<std::size_t>(c)] = 1;
            std::copy(points.row_ptr(far_point), points.row_ptr(far_point) + d, out.centroids.row_ptr(c));
        }
        Matrix cent = out.centroids;
        out = lloyd(points, std::move(cent), 300);
    }
    return out;
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed) {
    if (k < 1 || k > points.rows)
        throw DimensionMismatch("k must lie in [1, n_points]");
    KmeansResult best;
    bool have = false;
    int attempts = 0;
    LloydOutcome last_failed;
    for (int r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(seed, "kmeans", static_cast<std::uint64_t>(r)));
        Matrix init = seed_kmeanspp(points, k, rng);
        LloydOutcome out = lloyd(points, std::move(init), 300);
        ++attempts;
        if (out.empty_cluster) {
            last_failed = std::move(out);
            continue;
        }
        if (!have || out.inertia < best.inertia) {
            best.assignment = std::move(out.assignment);
            best.centroids = std::move(out.centroids);
            best.inertia = out.inertia;
            best.restarts_used = attempts;
            have = true;
        }
    }
    if (!have) {
        LloydOutcome repaired = repair_empty(points, std::move(last_failed), 2 * k);
        if (repaired.empty_cluster) throw EmptyCluster("could not populate all clusters");
        best.assignment = std::move(repaired.assignment);
        best.centroids = std::move(repaired.centroids);
        best.inertia = repaired.inertia;
        best.restarts_used = attempts;
    }
    return best;
}

SelectionResult pfa(const BinaryMatrix& x, const PfaParams& params) {
    const int d = x.n_cols;
    const int n_components = params.n_components > 0 ? params.n_components : std::max(1, d / 2);
    const int batch_rows = params.batch_rows > 0 ? params.batch_rows : 2 * d;
    if (params.n_best < 1 || params.n_best > d)
        throw DimensionMismatch("n_best must lie in [1, n_features]");
    const IncrementalPca pca = incremental_pca(x, std::min(n_components, std::min(x.n_rows, d)), batch_rows);

    // feature representations: one row per feature in component space
    Matrix points(d, pca.components.rows);
    for (int j = 0; j < d; ++j)
        for (int c = 0; c < pca.components.rows; ++c) points(j, c) = pca.components(c, j);

    const KmeansResult km = kmeans(points, params.n_best, 10, params.seed);

    // the feature dominating each cluster: nearest to its centroid
    std::vector<int> rep(static_cast<std::size_t>(params.n_best), -1);
    std::vector<double> rep_d(static_cast<std::size_t>(params.n_best),
                              std::numeric_limits<double>::infinity());
    std::vector<int> cluster_size(static_cast<std::size_t>(params.n_best), 0);
    for (int j = 0; j < d; ++j) {
        const int c = km.assignment[static_cast<std::size_t>(j)];
        ++cluster_size[static_cast<std::size_t>(c)];
        const double dist = sqdist(points.row_ptr(j), km.centroids.row_ptr(c), points.cols);
        if (dist < rep_d[static_cast<std::size_t>(c)]) {
            rep_d[static_cast<std::size_t>(c)] = dist;
            rep[static_cast<std::size_t>(c)] = j;
        }
    }

    std::vector<double> scores(static_cast<std::size_t>(d), 0.0);
    for (int c = 0; c < params.n_best; ++c)
        if (rep[static_cast<std::size_t>(c)] >= 0)
            scores[static_cast<std::size_t>(rep[static_cast<std::size_t>(c)])] =
                static_cast<double>(cluster_size[static_cast<std::size_t>(c)]);

    SelectionResult r;
    r.method = "pfa";
    r.seed = params.seed;
    r.scores = scores;
    std::vector<int> order = rank_descending(scores);
    for (const int j : order) {
        if (scores[static_cast<std::size_t>(j)] <= 0.0) break;  // non-representatives
        r.selected.push_back(j);
        if (static_cast<int>(r.selected.size()) == params.n_best) break;
    }
    r.parameters["n_components"] = pca.components.rows;
    r.parameters["n_best"] = params.n_best;
    r.parameters["batch_rows"] = batch_rows;
    r.diagnostics["kmeans_inertia"] = km.inertia;
    r.diagnostics["kmeans_restarts"] = km.restarts_used;
    r.diagnostics["explained_variance_ratio_sum"] =
        std::accumulate(pca.explained_variance_ratio.begin(), pca.explained_variance_ratio.end(), 0.0);
    return r;
}

std::vector<int> subsample_rows(int n_rows, int target, std::uint64_t seed) {
    std::vector<int> all(static_cast<std::size_t>(n_rows));
    std::iota(all.begin(), all.end(), 0);
    if (target >= n_rows) return all;
    Rng rng(derive_seed(seed, "subsample"));
    rng.shuffle(all);
    all.resize(static_cast<std::size_t>(target));
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace icdsel::spectral
