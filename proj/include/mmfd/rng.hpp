#pragma once

#include <cstdint>
#include <stdexcept>

namespace mmfd {

/// Deterministic per-stream random number generator (xoshiro256** seeded
/// through splitmix64). The (seed, stream_id) pair fully determines the draw
/// sequence on every platform; distinct stream ids give independent streams,
/// so adding a node never perturbs another node's draws.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    /// Uniform integer in [lo, hi], unbiased. Throws on lo > hi.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform01();

    /// Exponentially distributed value with the given mean (> 0).
    double exponential(double mean);

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::uint64_t state_[4] = {};
};

/// splitmix64 step, exposed for seed derivation (replication seeds etc.).
std::uint64_t splitmix64(std::uint64_t& state);

/// One-shot mix of two 64-bit values into a derived seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

} // namespace mmfd
