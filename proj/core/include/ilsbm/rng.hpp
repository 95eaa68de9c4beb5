#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ilsbm {

// SplitMix64 finalizer. Used to derive well-separated substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for substream `stream` of a run seeded with `seed`. Every sampled
// object (pair timeline, parameter draw, replicate, ...) gets its own
// substream so parallel generation is reproducible regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// mt19937_64 wrapped with hand-rolled inverse-cdf / rejection samplers. The
// standard library leaves distribution algorithms implementation-defined;
// rolling them here keeps draws identical across toolchains for a fixed
// seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform();

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

    // Inverse-cdf exponential draw.
    double exponential(double rate);

    // Standard normal via Box-Muller (no state between calls).
    double normal();

    // Marsaglia-Tsang gamma draw with the given shape and rate.
    double gamma(double shape, double rate);

    // Symmetric Dirichlet via normalized gamma draws.
    std::vector<double> dirichlet_symmetric(int k, double alpha);

    // Index draw from a probability vector (entries >= 0 summing to ~1).
    int categorical(const std::vector<double>& probs);

private:
    std::mt19937_64 engine_;
};

} // namespace ilsbm
