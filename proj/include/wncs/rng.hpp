#pragma once

#include <cstdint>
#include <random>

namespace wncs {

/// Independent random streams of one simulation. Each stream is seeded from
/// (master seed, stream kind, index) so that, under a fixed master seed, the
/// noise and channel realizations do not depend on the scheduling policy.
enum class StreamKind : std::uint32_t {
    Noise = 1,
    Channel = 2,
    Policy = 3,
};

using Engine = std::mt19937_64;

inline Engine make_stream(std::uint64_t master_seed, StreamKind kind, std::uint32_t index = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(kind), index};
    return Engine(seq);
}

}  // namespace wncs
