#pragma once

#include <cstdint>
#include <vector>

#include "wncs/rng.hpp"

namespace wncs {

/**
 * Memoryless Bernoulli erasure channel shared by all loops.
 *
 * Every slot draws one outcome per loop, whether or not the loop is
 * scheduled; a loop receives only when it is both scheduled and its draw
 * succeeds. Each outcome is u < p for a uniform u, so for a fixed stream
 * the success sets are nested in p.
 */
class ErasureChannel {
public:
    ErasureChannel(double p, Engine engine);

    std::vector<bool> draw_all(std::int64_t k, std::size_t n);

    double success_probability() const { return p_; }

private:
    double p_;
    Engine engine_;
    std::int64_t last_slot_;
};

}  // namespace wncs
