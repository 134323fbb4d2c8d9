#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace clubrank {

// SplitMix64; used to lift a single 64-bit seed into well-mixed streams.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// Derives a child seed for stream `stream` of a master seed. Used so Monte
// Carlo runs are independent and reproducible regardless of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 mix(master ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    mix.next();
    return mix.next();
}

// Deterministic RNG wrapper. Bounded draws use rejection sampling rather than
// std::uniform_int_distribution, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(SplitMix64(seed).next()) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    int uniform_int(int lo, int hi) {  // inclusive range
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    // Samples an index from a discrete distribution given cumulative weights.
    std::size_t pick_outcome(const double* cumulative, std::size_t k) {
        const double u = uniform01();
        for (std::size_t i = 0; i + 1 < k; ++i) {
            if (u < cumulative[i]) return i;
        }
        return k - 1;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace clubrank
