#include "wncs/policies.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace wncs {

namespace {

void check_input(const SchedulerInput& in) {
    if (in.aoi.size() != in.table.size()) {
        throw std::invalid_argument("scheduler input: " + std::to_string(in.aoi.size()) +
                                    " ages for " + std::to_string(in.table.size()) + " subsystems");
    }
    if (in.budget < 1) throw std::invalid_argument("scheduler input: budget must be at least 1");
}

}  // namespace

std::string_view to_string(PolicyId id) {
    switch (id) {
        case PolicyId::OffsetGreedy: return "offset-greedy";
        case PolicyId::AoiMax: return "aoi-max";
        case PolicyId::EstErrorMax: return "est-error-max";
        case PolicyId::RoundRobin: return "round-robin";
        case PolicyId::Random: return "random";
    }
    return "unknown";
}

PolicyId parse_policy(std::string_view name) {
    for (PolicyId id : kAllPolicies) {
        if (to_string(id) == name) return id;
    }
    throw std::invalid_argument("unknown policy '" + std::string(name) +
                                "' (expected offset-greedy, aoi-max, est-error-max, round-robin or random)");
}

std::size_t Allocation::granted() const {
    return static_cast<std::size_t>(std::count(alpha.begin(), alpha.end(), true));
}

Allocation select_top(std::span<const double> scores, std::size_t budget) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    Allocation out{std::vector<bool>(scores.size(), false)};
    const std::size_t take = std::min(budget, scores.size());
    for (std::size_t r = 0; r < take; ++r) out.alpha[order[r]] = true;
    return out;
}

Allocation schedule_offset_greedy(const SchedulerInput& in) {
    check_input(in);
    std::vector<double> scores(in.aoi.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        scores[i] = in.table.predicted_offset(i, in.aoi[i]);
    }
    return select_top(scores, in.budget);
}

Allocation schedule_aoi_max(const SchedulerInput& in) {
    check_input(in);
    std::vector<double> scores(in.aoi.begin(), in.aoi.end());
    return select_top(scores, in.budget);
}

Allocation schedule_est_error_max(const SchedulerInput& in) {
    check_input(in);
    std::vector<double> scores(in.aoi.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        scores[i] = in.table.estimation_error(i, in.aoi[i]);
    }
    return select_top(scores, in.budget);
}

Allocation schedule_round_robin(const SchedulerInput& in, PolicyState& state) {
    check_input(in);
    const std::size_t n = in.aoi.size();
    Allocation out{std::vector<bool>(n, false)};
    const std::size_t take = std::min(in.budget, n);
    for (std::size_t r = 0; r < take; ++r) out.alpha[(state.cursor + r) % n] = true;
    state.cursor = (state.cursor + take) % n;
    return out;
}

Allocation schedule_random(const SchedulerInput& in, PolicyState& state) {
    check_input(in);
    const std::size_t n = in.aoi.size();
    // A full permutation is drawn every slot so the stream consumption does
    // not depend on the budget; grants for budget M are a prefix of those
    // for budget M+1.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(perm[i], perm[pick(state.rng)]);
    }
    Allocation out{std::vector<bool>(n, false)};
    const std::size_t take = std::min(in.budget, n);
    for (std::size_t r = 0; r < take; ++r) out.alpha[perm[r]] = true;
    return out;
}

Scheduler::Scheduler(PolicyId id, Engine rng) : id_(id), state_{0, std::move(rng)} {}

Allocation Scheduler::decide(const SchedulerInput& in) {
    switch (id_) {
        case PolicyId::OffsetGreedy: return schedule_offset_greedy(in);
        case PolicyId::AoiMax: return schedule_aoi_max(in);
        case PolicyId::EstErrorMax: return schedule_est_error_max(in);
        case PolicyId::RoundRobin: return schedule_round_robin(in, state_);
        case PolicyId::Random: return schedule_random(in, state_);
    }
    throw std::logic_error("unhandled policy");
}

}  // namespace wncs
