#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <tuple>

#include "icdsel/kernels.hpp"
#include "icdsel/rng.hpp"

using namespace icdsel;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-2.0, 2.0);
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("gemm variants: OMP output is bitwise identical to the serial reference") {
    Rng rng(11);
    for (const auto [m, k, n] :
         {std::tuple{3, 5, 4}, std::tuple{17, 31, 9}, std::tuple{64, 200, 50}, std::tuple{1, 7, 1}}) {
        const auto a = random_vec(static_cast<std::size_t>(m) * k, rng);
        const auto bt = random_vec(static_cast<std::size_t>(n) * k, rng);
        const auto b = random_vec(static_cast<std::size_t>(k) * n, rng);
        const auto at = random_vec(static_cast<std::size_t>(k) * m, rng);
        std::vector<double> c1(static_cast<std::size_t>(m) * n), c2(c1.size());

        kernels::gemm_nn_serial(a.data(), b.data(), c1.data(), m, k, n);
        kernels::gemm_nn(a.data(), b.data(), c2.data(), m, k, n);
        CHECK(bitwise_equal(c1, c2));

        kernels::gemm_nt_serial(a.data(), bt.data(), c1.data(), m, k, n);
        kernels::gemm_nt(a.data(), bt.data(), c2.data(), m, k, n);
        CHECK(bitwise_equal(c1, c2));

        kernels::gemm_tn_serial(at.data(), b.data(), c1.data(), m, k, n);
        kernels::gemm_tn(at.data(), b.data(), c2.data(), m, k, n);
        CHECK(bitwise_equal(c1, c2));
    }
}

TEST_CASE("gemm_nn against a naive triple loop") {
    Rng rng(5);
    const int m = 13, k = 21, n = 8;
    const auto a = random_vec(static_cast<std::size_t>(m) * k, rng);
    const auto b = random_vec(static_cast<std::size_t>(k) * n, rng);
    std::vector<double> c(static_cast<std::size_t>(m) * n);
    kernels::gemm_nn(a.data(), b.data(), c.data(), m, k, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int l = 0; l < k; ++l)
                s += a[static_cast<std::size_t>(i) * k + l] * b[static_cast<std::size_t>(l) * n + j];
            CHECK(c[static_cast<std::size_t>(i) * n + j] == doctest::Approx(s).epsilon(1e-12));
        }
}

TEST_CASE("transpose forms agree with gemm_nn on materialized transposes") {
    Rng rng(9);
    const int m = 10, k = 15, n = 12;
    const auto a = random_vec(static_cast<std::size_t>(m) * k, rng);
    const auto b = random_vec(static_cast<std::size_t>(k) * n, rng);
    std::vector<double> bt(static_cast<std::size_t>(n) * k), at(static_cast<std::size_t>(k) * m);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) bt[static_cast<std::size_t>(j) * k + i] = b[static_cast<std::size_t>(i) * n + j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < k; ++j) at[static_cast<std::size_t>(j) * m + i] = a[static_cast<std::size_t>(i) * k + j];

    std::vector<double> ref(static_cast<std::size_t>(m) * n), got(ref.size());
    kernels::gemm_nn(a.data(), b.data(), ref.data(), m, k, n);
    kernels::gemm_nt(a.data(), bt.data(), got.data(), m, k, n);
    for (std::size_t i = 0; i < ref.size(); ++i)
        CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    kernels::gemm_tn(at.data(), b.data(), got.data(), m, k, n);
    for (std::size_t i = 0; i < ref.size(); ++i)
        CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-12));
}

TEST_CASE("sparse and bit-packed distances agree and match set arithmetic") {
    Rng rng(23);
    const int n = 60, dim = 90;
    kernels::SparseRows rows(static_cast<std::size_t>(n));
    for (auto& r : rows) {
        const int nnz = static_cast<int>(rng.below(20));
        for (int i = 0; i < nnz; ++i) r.push_back(static_cast<std::uint32_t>(rng.below(dim)));
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
    }
    std::vector<double> d_sparse(static_cast<std::size_t>(n) * n), d_sparse_omp(d_sparse.size());
    kernels::pairwise_sqdist_binary_serial(rows, d_sparse.data());
    kernels::pairwise_sqdist_binary(rows, d_sparse_omp.data());
    CHECK(bitwise_equal(d_sparse, d_sparse_omp));

    const kernels::BitRows bits = kernels::pack_bits(rows, dim);
    std::vector<double> row(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        kernels::sqdist_row_bits(bits, i, row.data());
        for (int j = 0; j < n; ++j) {
            CHECK(row[static_cast<std::size_t>(j)] == d_sparse[static_cast<std::size_t>(i) * n + j]);
            const int common = kernels::intersection_size(rows[static_cast<std::size_t>(i)],
                                                          rows[static_cast<std::size_t>(j)]);
            const double expect = static_cast<double>(rows[static_cast<std::size_t>(i)].size() +
                                                      rows[static_cast<std::size_t>(j)].size() - 2 * common);
            CHECK(row[static_cast<std::size_t>(j)] == expect);
        }
    }
}
