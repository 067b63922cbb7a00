#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace avgdyn {

/// Derive an independent stream seed from (seed, stream index).
/// splitmix64 finalizer; used to give sweeps, walks and per-step draws
/// their own deterministic streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// mt19937_64 with hand-rolled distributions. The engine output is fully
/// specified by the standard, the std:: distributions are not; sampling
/// here keeps runs byte-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    int uniform_int(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Index sampled proportionally to the (nonnegative) weights.
    /// Weights need not be normalized; all-zero weights fall back to uniform.
    int pick_weighted(std::span<const double> weights);

    /// Random subset of {0..n-1} of the given size, in sorted order.
    std::vector<int> sample_without_replacement(int n, int k);

private:
    std::mt19937_64 engine_;
};

}  // namespace avgdyn
