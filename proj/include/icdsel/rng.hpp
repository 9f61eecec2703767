#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace icdsel {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Seed for a named substream. All randomness in the pipeline flows from one
// top-level seed through these derivations, so stages are independently
// reproducible.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream,
                                 std::uint64_t index = 0) {
    std::uint64_t h = fnv1a64(stream.data(), stream.size());
    return splitmix64(splitmix64(seed ^ h) ^ splitmix64(index + 0x5851f42d4c957f2dULL));
}

// mt19937_64 with hand-rolled transforms. std::*_distribution output is
// implementation-defined; these are not, which keeps generated files and
// training runs byte-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    std::uint64_t u64() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v = u64();
        while (v >= limit) v = u64();
        return v % n;
    }

    // Box-Muller, one value per pair (second discarded for a stateless stream)
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    double gumbel() {
        double u = uniform();
        if (u < 1e-300) u = 1e-300;
        return -std::log(-std::log(u) + 1e-300);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct values from [0, n), in draw order
    std::vector<int> sample_without_replacement(int n, int k) {
        std::vector<int> pool(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
        shuffle(pool);
        pool.resize(static_cast<std::size_t>(k < n ? k : n));
        return pool;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace icdsel
