#pragma once

#include <cstdint>
#include <vector>

namespace wncs {

/**
 * Age of information per loop: delta[i] = k - gen_time[i], where gen_time is
 * the slot of the freshest received state. Slot 0 counts as a reception
 * because the initial state is known at the controller.
 */
class AoiTracker {
public:
    explicit AoiTracker(std::size_t n);

    /// Must be called exactly once per subsystem per slot, after the channel
    /// draw. A second call for the same (i, k) throws std::logic_error.
    void update(std::size_t i, bool success, std::int64_t k);

    std::int64_t delta(std::size_t i) const { return delta_.at(i); }
    std::int64_t gen_time(std::size_t i) const { return gen_time_.at(i); }
    const std::vector<std::int64_t>& deltas() const { return delta_; }
    std::size_t size() const { return delta_.size(); }

private:
    std::vector<std::int64_t> delta_;
    std::vector<std::int64_t> gen_time_;
    std::vector<std::int64_t> last_slot_;
};

}  // namespace wncs
