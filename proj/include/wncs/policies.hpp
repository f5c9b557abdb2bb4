#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wncs/offset.hpp"
#include "wncs/rng.hpp"

namespace wncs {

enum class PolicyId {
    OffsetGreedy,
    AoiMax,
    EstErrorMax,
    RoundRobin,
    Random,
};

inline constexpr PolicyId kAllPolicies[] = {PolicyId::OffsetGreedy, PolicyId::AoiMax,
                                            PolicyId::EstErrorMax, PolicyId::RoundRobin,
                                            PolicyId::Random};

/// offset-greedy | aoi-max | est-error-max | round-robin | random
std::string_view to_string(PolicyId id);
PolicyId parse_policy(std::string_view name);

/// What the scheduler may observe at slot k: the loop constants (through
/// the weight table) and the current ages.
struct SchedulerInput {
    OffsetWeightTable& table;
    std::span<const std::int64_t> aoi;
    std::int64_t k = 0;
    std::size_t budget = 1;
};

struct Allocation {
    std::vector<bool> alpha;

    std::size_t granted() const;
};

/// Per-instance policy memory.
struct PolicyState {
    std::size_t cursor = 0;
    Engine rng;
};

/// The min(M, N) indices with the largest scores, ties to the lowest index.
Allocation select_top(std::span<const double> scores, std::size_t budget);

Allocation schedule_offset_greedy(const SchedulerInput& in);
Allocation schedule_aoi_max(const SchedulerInput& in);
Allocation schedule_est_error_max(const SchedulerInput& in);
Allocation schedule_round_robin(const SchedulerInput& in, PolicyState& state);
Allocation schedule_random(const SchedulerInput& in, PolicyState& state);

class Scheduler {
public:
    Scheduler(PolicyId id, Engine rng);

    Allocation decide(const SchedulerInput& in);
    PolicyId id() const { return id_; }

private:
    PolicyId id_;
    PolicyState state_;
};

}  // namespace wncs
