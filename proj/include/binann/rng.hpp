#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace binann {

/// splitmix64 finalizer; used to derive independent seed streams
/// (per tree, per table, per run, per label) from one base seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return mix_seed(base ^ mix_seed(stream));
}

/// mt19937_64 plus hand-rolled sampling. The standard distributions are not
/// bit-reproducible across library implementations, so everything that feeds
/// index construction or benchmarks goes through these helpers instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound). Lemire multiply-shift; bias is
    /// negligible for bounds far below 2^64.
    std::uint64_t uniform(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::uniform: bound must be > 0");
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * bound) >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform_double() < p; }

    /// k distinct values from [0, n), uniform, in sampling order.
    std::vector<std::uint32_t> sample_distinct(std::uint32_t n, std::uint32_t k) {
        if (k > n) throw std::invalid_argument("Rng::sample_distinct: k > n");
        std::vector<std::uint32_t> pool(n);
        for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
        for (std::uint32_t i = 0; i < k; ++i) {
            const auto j = i + static_cast<std::uint32_t>(uniform(n - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

    /// k distinct values from [0, n), drawn sequentially without replacement
    /// with probability proportional to weights[i].
    std::vector<std::uint32_t> sample_distinct_weighted(const std::vector<double>& weights,
                                                        std::uint32_t k) {
        const auto n = static_cast<std::uint32_t>(weights.size());
        if (k > n) throw std::invalid_argument("Rng::sample_distinct_weighted: k > n");
        std::vector<double> w = weights;
        for (double v : w) {
            if (v < 0.0) throw std::invalid_argument("Rng::sample_distinct_weighted: negative weight");
        }
        std::vector<std::uint32_t> out;
        out.reserve(k);
        for (std::uint32_t round = 0; round < k; ++round) {
            double total = 0.0;
            for (double v : w) total += v;
            if (total <= 0.0) {
                throw std::invalid_argument("Rng::sample_distinct_weighted: fewer than k positive weights");
            }
            const double r = uniform_double() * total;
            std::uint32_t chosen = n;  // last positive index is the fallback
            double acc = 0.0;
            for (std::uint32_t i = 0; i < n; ++i) {
                if (w[i] <= 0.0) continue;
                acc += w[i];
                chosen = i;
                if (r < acc) break;
            }
            out.push_back(chosen);
            w[chosen] = 0.0;
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace binann
