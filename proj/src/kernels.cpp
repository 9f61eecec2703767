#include "icdsel/kernels.hpp"

#include <cstring>

namespace icdsel::kernels {

namespace {

// Shared element loops. The OMP variants parallelize the outer index and call
// these, so both variants run the same arithmetic in the same order.
inline void nn_row(const double* a, const double* b, double* c, int i, int k, int n) {
    double* ci = c + static_cast<std::size_t>(i) * n;
    std::memset(ci, 0, sizeof(double) * static_cast<std::size_t>(n));
    const double* ai = a + static_cast<std::size_t>(i) * k;
    for (int l = 0; l < k; ++l) {
        const double av = ai[l];
        if (av == 0.0) continue;
        const double* bl = b + static_cast<std::size_t>(l) * n;
        for (int j = 0; j < n; ++j) ci[j] += av * bl[j];
    }
}

inline void nt_row(const double* a, const double* b, double* c, int i, int k, int n) {
    const double* ai = a + static_cast<std::size_t>(i) * k;
    double* ci = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
        const double* bj = b + static_cast<std::size_t>(j) * k;
        // four fixed accumulators: vectorizes without reassociating the sum
        // differently between the serial and OMP variants
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        int l = 0;
        for (; l + 4 <= k; l += 4) {
            s0 += ai[l] * bj[l];
            s1 += ai[l + 1] * bj[l + 1];
            s2 += ai[l + 2] * bj[l + 2];
            s3 += ai[l + 3] * bj[l + 3];
        }
        double s = (s0 + s1) + (s2 + s3);
        for (; l < k; ++l) s += ai[l] * bj[l];
        ci[j] = s;
    }
}

// One output row i of C = A^T B, i.e. column i of A against all of B.
inline void tn_row(const double* a, const double* b, double* c, int i, int m, int k, int n) {
    double* ci = c + static_cast<std::size_t>(i) * n;
    std::memset(ci, 0, sizeof(double) * static_cast<std::size_t>(n));
    for (int l = 0; l < k; ++l) {
        const double av = a[static_cast<std::size_t>(l) * m + i];
        if (av == 0.0) continue;
        const double* bl = b + static_cast<std::size_t>(l) * n;
        for (int j = 0; j < n; ++j) ci[j] += av * bl[j];
    }
}

}  // namespace

void gemm_nn_serial(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) nn_row(a, b, c, i, k, n);
}

void gemm_nn(const double* a, const double* b, double* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) nn_row(a, b, c, i, k, n);
}

void gemm_nt_serial(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) nt_row(a, b, c, i, k, n);
}

void gemm_nt(const double* a, const double* b, double* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) nt_row(a, b, c, i, k, n);
}

void gemm_tn_serial(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) tn_row(a, b, c, i, m, k, n);
}

void gemm_tn(const double* a, const double* b, double* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) tn_row(a, b, c, i, m, k, n);
}

int intersection_size(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    int count = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

void sqdist_row_binary(const SparseRows& rows, int i, double* out) {
    const auto& ri = rows[static_cast<std::size_t>(i)];
    const int ni = static_cast<int>(ri.size());
    const int n = static_cast<int>(rows.size());
    for (int j = 0; j < n; ++j) {
        const auto& rj = rows[static_cast<std::size_t>(j)];
        const int common = intersection_size(ri, rj);
        out[j] = static_cast<double>(ni + static_cast<int>(rj.size()) - 2 * common);
    }
}

void pairwise_sqdist_binary_serial(const SparseRows& rows, double* d2) {
    const int n = static_cast<int>(rows.size());
    for (int i = 0; i < n; ++i) sqdist_row_binary(rows, i, d2 + static_cast<std::size_t>(i) * n);
}

void pairwise_sqdist_binary(const SparseRows& rows, double* d2) {
    const int n = static_cast<int>(rows.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < n; ++i) sqdist_row_binary(rows, i, d2 + static_cast<std::size_t>(i) * n);
}

BitRows pack_bits(const SparseRows& rows, int dim) {
    BitRows out;
    out.n = static_cast<int>(rows.size());
    out.words = (dim + 63) / 64;
    out.bits.assign(static_cast<std::size_t>(out.n) * out.words, 0);
    out.nnz.resize(static_cast<std::size_t>(out.n));
    for (int i = 0; i < out.n; ++i) {
        std::uint64_t* w = out.bits.data() + static_cast<std::size_t>(i) * out.words;
        for (const std::uint32_t c : rows[static_cast<std::size_t>(i)])
            w[c >> 6] |= std::uint64_t{1} << (c & 63);
        out.nnz[static_cast<std::size_t>(i)] = static_cast<int>(rows[static_cast<std::size_t>(i)].size());
    }
    return out;
}

void sqdist_row_bits(const BitRows& rows, int i, double* out) {
    const std::uint64_t* wi = rows.row(i);
    const int ni = rows.nnz[static_cast<std::size_t>(i)];
    for (int j = 0; j < rows.n; ++j) {
        const std::uint64_t* wj = rows.row(j);
        int common = 0;
        for (int w = 0; w < rows.words; ++w) common += __builtin_popcountll(wi[w] & wj[w]);
        out[j] = static_cast<double>(ni + rows.nnz[static_cast<std::size_t>(j)] - 2 * common);
    }
}

}  // namespace icdsel::kernels
