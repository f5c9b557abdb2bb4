#include "wncs/channel.hpp"

#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace wncs {

ErasureChannel::ErasureChannel(double p, Engine engine)
    : p_(p), engine_(std::move(engine)), last_slot_(std::numeric_limits<std::int64_t>::min()) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("channel success probability must lie in [0,1], got " +
                                    std::to_string(p));
    }
}

std::vector<bool> ErasureChannel::draw_all(std::int64_t k, std::size_t n) {
    if (n == 0) throw std::invalid_argument("draw_all: need at least one subsystem");
    if (k <= last_slot_) {
        throw std::logic_error("draw_all: slot " + std::to_string(k) + " already drawn");
    }
    last_slot_ = k;
    std::vector<bool> beta(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = std::generate_canonical<double, 53>(engine_);
        beta[i] = p_ >= 1.0 || u < p_;
    }
    return beta;
}

}  // namespace wncs
