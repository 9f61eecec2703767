// Times the serial reference kernels against their OpenMP variants on the
// shapes the training and graph code actually runs, and checks that both
// produce identical bits.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

#include <omp.h>

#include "icdsel/kernels.hpp"
#include "icdsel/rng.hpp"

using namespace icdsel;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void fill(std::vector<double>& v, Rng& rng) {
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
}

void report(const char* name, double serial_s, double omp_s, bool identical) {
    std::printf("%-28s serial %9.4f ms   omp %9.4f ms   speedup %5.2fx   %s\n", name,
                serial_s * 1e3, omp_s * 1e3, serial_s / omp_s,
                identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    Rng rng(7);

    {
        const int m = 64, k = 1000, n = 100;  // selector-layer shape
        std::vector<double> a(static_cast<std::size_t>(m) * k), b(static_cast<std::size_t>(k) * n);
        std::vector<double> c1(static_cast<std::size_t>(m) * n), c2(c1.size());
        fill(a, rng);
        fill(b, rng);
        const double ts = time_of([&] { kernels::gemm_nn_serial(a.data(), b.data(), c1.data(), m, k, n); }, 20);
        const double tp = time_of([&] { kernels::gemm_nn(a.data(), b.data(), c2.data(), m, k, n); }, 20);
        report("gemm_nn 64x1000x100", ts, tp, std::memcmp(c1.data(), c2.data(), c1.size() * 8) == 0);
    }
    {
        const int m = 256, k = 1000, n = 256;
        std::vector<double> a(static_cast<std::size_t>(m) * k), b(static_cast<std::size_t>(n) * k);
        std::vector<double> c1(static_cast<std::size_t>(m) * n), c2(c1.size());
        fill(a, rng);
        fill(b, rng);
        const double ts = time_of([&] { kernels::gemm_nt_serial(a.data(), b.data(), c1.data(), m, k, n); }, 10);
        const double tp = time_of([&] { kernels::gemm_nt(a.data(), b.data(), c2.data(), m, k, n); }, 10);
        report("gemm_nt 256x1000x256", ts, tp, std::memcmp(c1.data(), c2.data(), c1.size() * 8) == 0);
    }
    {
        const int m = 1000, k = 64, n = 1000;
        std::vector<double> a(static_cast<std::size_t>(k) * m), b(static_cast<std::size_t>(k) * n);
        std::vector<double> c1(static_cast<std::size_t>(m) * n), c2(c1.size());
        fill(a, rng);
        fill(b, rng);
        const double ts = time_of([&] { kernels::gemm_tn_serial(a.data(), b.data(), c1.data(), m, k, n); }, 10);
        const double tp = time_of([&] { kernels::gemm_tn(a.data(), b.data(), c2.data(), m, k, n); }, 10);
        report("gemm_tn 1000x64x1000", ts, tp, std::memcmp(c1.data(), c2.data(), c1.size() * 8) == 0);
    }
    {
        const int n = 1500;
        kernels::SparseRows rows(static_cast<std::size_t>(n));
        for (auto& r : rows) {
            const int nnz = 40 + static_cast<int>(rng.below(80));
            for (int i = 0; i < nnz; ++i) r.push_back(static_cast<std::uint32_t>(rng.below(1000)));
            std::sort(r.begin(), r.end());
            r.erase(std::unique(r.begin(), r.end()), r.end());
        }
        std::vector<double> d1(static_cast<std::size_t>(n) * n), d2(d1.size());
        const double ts = time_of([&] { kernels::pairwise_sqdist_binary_serial(rows, d1.data()); }, 3);
        const double tp = time_of([&] { kernels::pairwise_sqdist_binary(rows, d2.data()); }, 3);
        report("pairwise_sqdist 1500 rows", ts, tp, std::memcmp(d1.data(), d2.data(), d1.size() * 8) == 0);

        const kernels::BitRows bits = kernels::pack_bits(rows, 1000);
        std::vector<double> d3(d1.size());
        const double tb = time_of(
            [&] {
#pragma omp parallel for schedule(dynamic, 16)
                for (int i = 0; i < n; ++i) kernels::sqdist_row_bits(bits, i, d3.data() + static_cast<std::size_t>(i) * n);
            },
            3);
        report("pairwise_bits 1500 rows", ts, tb, std::memcmp(d1.data(), d3.data(), d1.size() * 8) == 0);
    }
    return 0;
}
