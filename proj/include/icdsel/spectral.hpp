#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "icdsel/binary_matrix.hpp"
#include "icdsel/dense.hpp"
#include "icdsel/selection.hpp"

namespace icdsel::spectral {

enum class GraphAxis { Samples, Features };

// Symmetric binary k-NN adjacency (mutual-or symmetrization, no self loops).
struct KnnGraph {
    int n = 0;
    int k = 0;
    GraphAxis axis = GraphAxis::Samples;
    std::vector<std::vector<int>> adj;  // sorted neighbor lists
    std::vector<double> degree;

    std::size_t edge_count() const;  // undirected edges
};

KnnGraph knn_graph(const BinaryMatrix& x, int k = 5, GraphAxis axis = GraphAxis::Samples);

// Laplacian Score of one feature column over the sample graph. Returns the
// raw score L_r in [0,2] for binary-weight graphs; smaller is better.
// Constant features (zero weighted variance) return NaN.
double laplacian_score_feature(const KnnGraph& g, std::span<const double> f);

// Scores every column; importance = 1 - L_r, constants get -inf so they rank
// after every varying feature. n_best < 0 keeps the full ranking.
SelectionResult laplacian_score(const BinaryMatrix& x, const KnnGraph& g, int n_best = -1);

// Generalized eigenproblem L y = lambda D y over the graph. Drops the trivial
// constant eigenvector and returns the next K (columns), D-orthonormal, with
// eigenvalues ascending in *eigenvalues if given.
Matrix spectral_embedding(const KnnGraph& g, int n_vectors,
                          std::vector<double>* eigenvalues = nullptr);

struct LarsResult {
    std::vector<double> coef;          // original column scale
    std::vector<int> skipped_columns;  // zero variance or collinear with active set
    int ties = 0;                      // activation-time index tie-breaks
    std::vector<double> knot_lambdas;  // max |correlation| at each path knot
    std::vector<std::vector<double>> knot_coefs;  // standardized-scale coefs per knot
};

// Least-angle regression with the lasso modification, stopped once
// max_nonzero coefficients are active. Columns are standardized internally.
LarsResult lars_lasso(const Matrix& x, std::span<const double> y, int max_nonzero);

struct McfsParams {
    int k = 5;           // graph neighbors
    int n_eigenvectors = 5;
    int n_best = 100;
    std::optional<int> subsample;  // seed-deterministic row subsample for the graph
    std::uint64_t seed = 0;
};

SelectionResult mcfs(const BinaryMatrix& x, const McfsParams& params);

struct LsParams {
    int k = 5;
    int n_best = 100;
    std::optional<int> subsample;
    std::uint64_t seed = 0;
};

SelectionResult laplacian_score_select(const BinaryMatrix& x, const LsParams& params);

// Streaming PCA over row batches (mean + top components maintained via an
// SVD of the stacked [scaled components; centered batch; mean correction]).
struct IncrementalPca {
    Matrix components;                  // (n_components x n_features), rows orthonormal
    std::vector<double> singular_values;
    std::vector<double> mean;
    long n_seen = 0;
    std::vector<double> explained_variance_ratio;
};

IncrementalPca incremental_pca(const BinaryMatrix& x, int n_components, int batch_rows);

struct KmeansResult {
    std::vector<int> assignment;
    Matrix centroids;
    double inertia = 0.0;
    int restarts_used = 0;
};

// Lloyd iterations with k-means++ seeding; best of `restarts` by inertia,
// deterministic given seed. Empty clusters trigger a reseeded restart; after
// the restart budget the largest cluster is split instead.
KmeansResult kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed);

struct PfaParams {
    int n_components = 0;  // 0 = n_features / 2
    int n_best = 100;
    int batch_rows = 0;    // 0 = 2 * n_features
    std::uint64_t seed = 0;
};

SelectionResult pfa(const BinaryMatrix& x, const PfaParams& params);

// Seed-deterministic row subsample (ascending indices).
std::vector<int> subsample_rows(int n_rows, int target, std::uint64_t seed);

}  // namespace icdsel::spectral
