#pragma once

#include <array>
#include <cstdint>

namespace glmpss {

// Counter-based stream derivation on top of xoshiro256++.
//
// A stream is fully determined by (seed, stream_id): the four state words are
// produced by a splitmix64-style mix of seed and stream_id, so any work item
// can be handed its own statistically independent stream without coordination.
// Results are therefore byte-identical across hosts, runs, and thread counts.
// std::mt19937 and the std:: distributions are deliberately avoided: the
// standard does not pin down distribution algorithms, so their output is not
// portable across library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t next_u64();

    // Uniform on the open interval (0, 1): (x >> 11 + 0.5) * 2^-53.
    // Never returns 0 or 1, so quantile transforms are always finite.
    double next_uniform();

    // Standard normal via the quantile transform of next_uniform().
    double next_normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::array<std::uint64_t, 4> state_;
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

// splitmix64 finalizer; also used to hash parameter tuples into stream ids.
std::uint64_t mix64(std::uint64_t x);

}  // namespace glmpss
