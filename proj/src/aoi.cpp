#include "wncs/aoi.hpp"

#include <stdexcept>
#include <string>

namespace wncs {

AoiTracker::AoiTracker(std::size_t n) : delta_(n, 0), gen_time_(n, 0), last_slot_(n, 0) {}

void AoiTracker::update(std::size_t i, bool success, std::int64_t k) {
    if (i >= delta_.size()) {
        throw std::out_of_range("AoiTracker::update: subsystem index " + std::to_string(i));
    }
    if (k <= last_slot_[i]) {
        throw std::logic_error("AoiTracker::update: subsystem " + std::to_string(i) +
                               " already updated at slot " + std::to_string(last_slot_[i]));
    }
    if (k != last_slot_[i] + 1) {
        throw std::logic_error("AoiTracker::update: subsystem " + std::to_string(i) +
                               " skipped from slot " + std::to_string(last_slot_[i]) + " to " +
                               std::to_string(k));
    }
    last_slot_[i] = k;
    if (success) {
        gen_time_[i] = k;
        delta_[i] = 0;
    } else {
        ++delta_[i];
    }
}

}  // namespace wncs
