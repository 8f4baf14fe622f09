#pragma once

#include "sglab/types.hpp"

#include <cstdint>
#include <random>

namespace sglab {

// Deterministic random source.  All randomness in the library flows through
// this class so that a (seed, substream) pair pins every sampled number
// bit-for-bit across platforms.  Gaussians are produced by Box-Muller on
// 53-bit uniforms instead of std::normal_distribution, whose output is
// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Derives an independent substream, e.g. one per path or per worker.
    static Rng substream(std::uint64_t seed, std::uint64_t index);

    // Uniform on (0,1), strictly inside the open interval.
    double uniform();

    // Standard normal deviate.
    double normal();

    Vec normal_vec(int dim);

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// SplitMix64 step; used to decorrelate seed/substream combinations.
std::uint64_t splitmix64(std::uint64_t& state);

} // namespace sglab
