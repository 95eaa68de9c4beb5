#include "ilsbm/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ilsbm {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x9E3779B97F4A7C15ull));
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    // Rejection keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::exponential(double rate) {
    if (!(rate > 0.0)) throw std::domain_error("exponential: rate must be positive");
    // -log(1 - U) with U in [0, 1); log1p keeps small draws accurate.
    return -std::log1p(-uniform()) / rate;
}

double Rng::normal() {
    // Box-Muller; u1 bounded away from 0 so the log is finite.
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw std::domain_error("gamma: shape and rate must be positive");
    if (shape < 1.0) {
        // Boost to shape + 1, then scale back (Marsaglia-Tsang section 6).
        const double g = gamma(shape + 1.0, 1.0);
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return g * std::pow(u, 1.0 / shape) / rate;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

std::vector<double> Rng::dirichlet_symmetric(int k, double alpha) {
    if (k < 1) throw std::invalid_argument("dirichlet_symmetric: k must be >= 1");
    if (!(alpha > 0.0)) throw std::domain_error("dirichlet_symmetric: alpha must be positive");
    std::vector<double> out(static_cast<std::size_t>(k));
    double total = 0.0;
    for (double& v : out) {
        v = gamma(alpha, 1.0);
        total += v;
    }
    if (total <= 0.0) {
        // All draws underflowed; fall back to uniform weights.
        for (double& v : out) v = 1.0 / k;
        return out;
    }
    for (double& v : out) v /= total;
    return out;
}

int Rng::categorical(const std::vector<double>& probs) {
    if (probs.empty()) throw std::invalid_argument("categorical: empty probability vector");
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(probs.size() - 1);
}

} // namespace ilsbm
