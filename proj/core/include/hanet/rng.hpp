#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hanet {

/// Derive an independent stream seed from a base seed. Used to give each
/// epoch (and each consumer) its own reproducible RNG without correlating
/// the streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Deterministic random source. std::mt19937_64 output is fully specified
/// by the standard; the derived draws below avoid std::*_distribution,
/// whose algorithms are implementation-defined, so sequences are identical
/// across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 bits of randomness.
    double uniform();

    /// Unbiased uniform integer in [0, bound). bound must be positive.
    std::uint64_t uniform_int(std::uint64_t bound);

    /// Standard normal via Box-Muller (pair-cached).
    double normal();

    /// Fisher-Yates shuffle with uniform_int; portable, unlike std::shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace hanet
