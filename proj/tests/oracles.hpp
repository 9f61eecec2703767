#pragma once

// Independent reference implementations used only by tests. These take the
// dense brute-force route (Eigen / Boost / O(n^2) scans) so they share no
// code with the library paths they verify.

#include <string>
#include <vector>

#include "icdsel/binary_matrix.hpp"
#include "icdsel/dense.hpp"
#include "icdsel/spectral.hpp"

namespace oracles {

// Laplacian score by explicit dense-matrix arithmetic.
double laplacian_score_dense(const std::vector<std::vector<int>>& adjacency,
                             const std::vector<double>& feature);

// Dense symmetric eigendecomposition via Eigen, ascending eigenvalues.
void eigen_sym(const icdsel::Matrix& a, std::vector<double>& values, icdsel::Matrix& vectors);

// All-pairs k-NN with (distance, index) ordering and mutual-or
// symmetrization, from a full sorted distance matrix.
std::vector<std::vector<int>> brute_knn(const icdsel::BinaryMatrix& x, int k);

// Cyclic coordinate descent for min 0.5*||y - X b||^2 + lambda*||b||_1 on an
// already-standardized system.
std::vector<double> coordinate_descent_lasso(const icdsel::Matrix& x,
                                             const std::vector<double>& y, double lambda,
                                             int max_iter = 100000, double tol = 1e-13);

// Exact PCA: eigendecomposition of the covariance matrix (Eigen); components
// as rows, descending variance.
icdsel::Matrix exact_pca_components(const icdsel::Matrix& data, int n_components);

// Boost.Math references.
double students_t_two_sided_p(double t, double df);
double chi_squared_quantile(double p, double df);

// Largest principal angle (radians) between the row spaces of two component
// matrices of equal shape.
double max_principal_angle(const icdsel::Matrix& a, const icdsel::Matrix& b);

}  // namespace oracles
