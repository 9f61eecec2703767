#pragma once

#include <cstdint>
#include <vector>

#include "icdsel/dense.hpp"

// Data-parallel inner loops. Every kernel comes in two variants: a plain
// serial reference (`*_serial`) and an OpenMP version (default name) that
// parallelizes over output elements only. Each output element is written by
// exactly one thread with a fixed-order inner reduction, so the OpenMP
// variants are bitwise identical to the serial ones for any thread count.
// tests/test_kernels.cpp asserts that equality; tools/bench_kernels.cpp
// compares their throughput.
namespace icdsel::kernels {

// C(m x n) = A(m x k) * B(k x n)
void gemm_nn_serial(const double* a, const double* b, double* c, int m, int k, int n);
void gemm_nn(const double* a, const double* b, double* c, int m, int k, int n);

// C(m x n) = A(m x k) * B(n x k)^T
void gemm_nt_serial(const double* a, const double* b, double* c, int m, int k, int n);
void gemm_nt(const double* a, const double* b, double* c, int m, int k, int n);

// C(m x n) = A(k x m)^T * B(k x n)
void gemm_tn_serial(const double* a, const double* b, double* c, int m, int k, int n);
void gemm_tn(const double* a, const double* b, double* c, int m, int k, int n);

// Squared Euclidean distances between sparse binary rows given as sorted
// column-index sets: d2[i*n+j] = |r_i| + |r_j| - 2|r_i & r_j|.
using SparseRows = std::vector<std::vector<std::uint32_t>>;
int intersection_size(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);
void pairwise_sqdist_binary_serial(const SparseRows& rows, double* d2);
void pairwise_sqdist_binary(const SparseRows& rows, double* d2);

// One row of the same distance matrix (building block for k-NN search).
void sqdist_row_binary(const SparseRows& rows, int i, double* out);

// Bit-packed rows: popcount intersections beat sorted-list merges by a wide
// margin once rows carry more than a handful of set bits.
struct BitRows {
    int n = 0;
    int words = 0;                    // 64-bit words per row
    std::vector<std::uint64_t> bits;  // n * words
    std::vector<int> nnz;

    const std::uint64_t* row(int i) const { return bits.data() + static_cast<std::size_t>(i) * words; }
};

BitRows pack_bits(const SparseRows& rows, int dim);
void sqdist_row_bits(const BitRows& rows, int i, double* out);

// Convenience wrappers on Matrix.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows, b.cols);
    gemm_nn(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols, b.cols);
    return c;
}

}  // namespace icdsel::kernels
