#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "wncs/aoi.hpp"
#include "wncs/channel.hpp"
#include "wncs/model.hpp"
#include "wncs/offset.hpp"
#include "wncs/policies.hpp"

namespace wncs {

struct ExperimentConfig {
    std::vector<SubsystemSpec> subsystems;
    std::size_t M = 3;
    double p = 0.7;
    std::int64_t T = 5000;
    PolicyId policy = PolicyId::OffsetGreedy;
    std::uint64_t master_seed = 1;
    std::size_t replications = 10;
    /// A run is flagged as diverged once any state component exceeds this.
    double divergence_limit = 1e12;

    std::size_t N() const { return subsystems.size(); }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    /// master_seed, master_seed + 1, ..., one per replication.
    std::vector<std::uint64_t> seeds() const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// One slot of a run. Per-loop vectors are indexed by subsystem.
struct StepRecord {
    std::int64_t k = 0;
    std::vector<std::int64_t> delta;
    std::vector<bool> alpha;
    std::vector<bool> beta;
    std::vector<double> offset_term;    // cumulative offset weight at the current age
    std::vector<double> lq_term;        // x^T Q x + u^T P u
    std::vector<double> realized_offset;  // xbar^T (Q + K^T P K) xbar, xbar = x - xopt
};

struct ExperimentResult {
    PolicyId policy = PolicyId::OffsetGreedy;
    double p = 0.0;
    std::size_t M = 0;
    std::uint64_t seed = 0;
    std::int64_t T = 0;

    double empiric_offset = 0.0;
    double empiric_lq = 0.0;
    /// Time average of the realized quadratic state offset; a Monte-Carlo
    /// estimate of the same quantity as empiric_offset.
    double realized_offset = 0.0;
    std::vector<double> per_subsystem_lq;
    std::vector<double> per_subsystem_offset;

    /// When set, the plant of some loop left the divergence limit at this
    /// slot; state-based outputs (LQ, realized offset) are +inf while the
    /// age-driven offset is still computed over the full horizon.
    std::optional<std::int64_t> diverged_at;
    std::optional<std::size_t> diverged_subsystem;

    std::vector<StepRecord> trace;
};

/**
 * Single simulation instance, advanced one slot at a time.
 *
 * Slot k: the plant moves to x[k] using u[k-1] and fresh noise, the
 * scheduler allocates on the ages of slot k-1, the channel is drawn for all
 * loops, estimators and ages update, the ideal reference either re-anchors
 * or evolves with the same noise, and the new control u[k] is computed.
 */
class Simulation {
public:
    Simulation(const ExperimentConfig& config, std::uint64_t seed, bool keep_trace = false);

    void step();
    void run();
    ExperimentResult finish();

    std::int64_t slot() const { return k_; }
    bool done() const { return k_ >= config_.T; }
    bool diverged() const { return result_.diverged_at.has_value(); }
    const SubsystemRuntime& runtime(std::size_t i) const { return runtimes_.at(i); }
    /// Noise e[k-1] used to reach the current slot.
    const Vec& last_noise(std::size_t i) const { return last_noise_.at(i); }
    const AoiTracker& aoi() const { return aoi_; }
    const Allocation& last_allocation() const { return last_alloc_; }
    const std::vector<bool>& last_channel() const { return last_beta_; }
    OffsetWeightTable& weights() { return table_; }

private:
    ExperimentConfig config_;
    OffsetWeightTable table_;
    std::vector<SubsystemRuntime> runtimes_;
    std::vector<NoiseSource> noise_;
    std::vector<Mat> closed_loop_;
    std::vector<Mat> offset_weight_;
    ErasureChannel channel_;
    Scheduler scheduler_;
    AoiTracker aoi_;
    std::int64_t k_ = 0;
    bool keep_trace_;

    std::vector<Vec> last_noise_;
    Allocation last_alloc_;
    std::vector<bool> last_beta_;

    double offset_sum_ = 0.0;
    double lq_sum_ = 0.0;
    double realized_sum_ = 0.0;
    ExperimentResult result_;
};

/// Validates the config, runs T slots with the given seed.
ExperimentResult run_simulation(const ExperimentConfig& config, std::uint64_t seed,
                                bool keep_trace = false);
/// Same, seeded with config.master_seed.
ExperimentResult run_simulation(const ExperimentConfig& config);

/// (1/T) sum_k sum_i of the per-slot offset terms. The trace must hold slots
/// 1..T in order.
double empiric_offset_cost(std::span<const StepRecord> trace, std::int64_t T);
double empiric_lq_cost(std::span<const StepRecord> trace, std::int64_t T);

/// S = [[1, 0.2], [-0.2, 1]]
Mat rotation_scaling_base();

/// Eight unstable-plant loops with heterogeneous state weights. The eighth
/// loop's gain is configurable; -1.2 by default.
std::vector<SubsystemSpec> preset_table1(double row8_gain = -1.2);
/// Eight stable, slow closed loops with identical weights.
std::vector<SubsystemSpec> preset_table2();

struct SweepKey {
    PolicyId policy;
    double p;
    std::size_t M;
    std::uint64_t seed;

    auto operator<=>(const SweepKey&) const = default;
};

using SweepResults = std::map<SweepKey, ExperimentResult>;

/**
 * Runs the cross product of the axes on `threads` workers (0 = hardware
 * concurrency). Under one seed, every grid point sees the same noise and
 * channel realizations regardless of policy.
 */
SweepResults sweep(const ExperimentConfig& base, std::span<const double> p_values,
                   std::span<const std::size_t> M_values, std::span<const PolicyId> policies,
                   std::span<const std::uint64_t> seeds, unsigned threads = 0);

struct Summary {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

/// Mean and standard error of empiric_offset over seeds at one grid point.
Summary offset_summary(const SweepResults& results, PolicyId policy, double p, std::size_t M);
Summary lq_summary(const SweepResults& results, PolicyId policy, double p, std::size_t M);

}  // namespace wncs
