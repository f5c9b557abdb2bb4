#include "wncs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace wncs {

void ExperimentConfig::validate() const {
    if (subsystems.empty()) throw std::invalid_argument("subsystems: at least one subsystem required");
    for (const auto& s : subsystems) s.validate();
    if (M < 1) throw std::invalid_argument("M: must be at least 1");
    if (M > N()) {
        throw std::invalid_argument("M: budget " + std::to_string(M) + " exceeds N=" +
                                    std::to_string(N()));
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("p: must lie in [0,1], got " + std::to_string(p));
    }
    if (T < 1) throw std::invalid_argument("T: must be at least 1");
    if (replications < 1) throw std::invalid_argument("replications: must be at least 1");
    if (!(divergence_limit > 0.0)) throw std::invalid_argument("divergence_limit: must be positive");
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
    std::vector<std::uint64_t> out(replications);
    for (std::size_t r = 0; r < replications; ++r) out[r] = master_seed + r;
    return out;
}

Simulation::Simulation(const ExperimentConfig& config, std::uint64_t seed, bool keep_trace)
    : config_((config.validate(), config)),
      table_(config.subsystems),
      channel_(config.p, make_stream(seed, StreamKind::Channel)),
      scheduler_(config.policy, make_stream(seed, StreamKind::Policy)),
      aoi_(config.N()),
      keep_trace_(keep_trace) {
    const std::size_t n = config_.N();
    runtimes_.reserve(n);
    noise_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& spec = config_.subsystems[i];
        runtimes_.push_back(SubsystemRuntime::initial(spec));
        noise_.emplace_back(spec.R, make_stream(seed, StreamKind::Noise, static_cast<std::uint32_t>(i)));
        closed_loop_.push_back(closed_loop_matrix(spec));
        offset_weight_.push_back(offset_quadratic_weight(spec));
        last_noise_.emplace_back(spec.dim(), 0.0);
    }
    result_.policy = config_.policy;
    result_.p = config_.p;
    result_.M = config_.M;
    result_.seed = seed;
    result_.T = config_.T;
    result_.per_subsystem_lq.assign(n, 0.0);
    result_.per_subsystem_offset.assign(n, 0.0);
    if (keep_trace_) result_.trace.reserve(static_cast<std::size_t>(config_.T));
}

void Simulation::step() {
    if (done()) throw std::logic_error("Simulation::step: horizon already reached");
    const std::int64_t k = ++k_;
    const std::size_t n = config_.N();
    const bool state_live = !diverged();

    // Noise is drawn every slot, even after divergence, to keep the
    // per-loop streams aligned with the slot index.
    for (std::size_t i = 0; i < n; ++i) {
        last_noise_[i] = noise_[i].draw();
        if (!state_live) continue;
        auto& rt = runtimes_[i];
        rt.x = step_plant(config_.subsystems[i], rt.x, rt.u, last_noise_[i]);
        for (double v : rt.x) {
            if (!(std::fabs(v) <= config_.divergence_limit) && !diverged()) {
                result_.diverged_at = k;
                result_.diverged_subsystem = i;
            }
        }
    }

    last_alloc_ = scheduler_.decide(SchedulerInput{table_, aoi_.deltas(), k, config_.M});
    last_beta_ = channel_.draw_all(k, n);

    StepRecord rec;
    if (keep_trace_) {
        rec.k = k;
        rec.alpha = last_alloc_.alpha;
        rec.beta = last_beta_;
        rec.delta.resize(n);
        rec.offset_term.resize(n);
        rec.lq_term.resize(n);
        rec.realized_offset.resize(n);
    }

    const bool live_after = !diverged();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& spec = config_.subsystems[i];
        const bool success = last_alloc_.alpha[i] && last_beta_[i];
        aoi_.update(i, success, k);
        const double offset_term = table_.cumulative_offset(i, aoi_.delta(i));
        offset_sum_ += offset_term;
        result_.per_subsystem_offset[i] += offset_term;

        double lq = std::numeric_limits<double>::infinity();
        double realized = std::numeric_limits<double>::infinity();
        if (live_after) {
            auto& rt = runtimes_[i];
            if (success) {
                rt.xhat = rt.x;
                rt.xopt = rt.x;
            } else {
                rt.xhat = mat_vec(closed_loop_[i], rt.xhat);
                rt.xopt = vec_add(mat_vec(closed_loop_[i], rt.xopt), last_noise_[i]);
            }
            rt.u = control(spec, rt.xhat);
            lq = quad_form(spec.Q, rt.x) + quad_form(spec.P, rt.u);
            realized = quad_form(offset_weight_[i], vec_sub(rt.x, rt.xopt));
            lq_sum_ += lq;
            realized_sum_ += realized;
            result_.per_subsystem_lq[i] += lq;
        }

        if (keep_trace_) {
            rec.delta[i] = aoi_.delta(i);
            rec.offset_term[i] = offset_term;
            rec.lq_term[i] = lq;
            rec.realized_offset[i] = realized;
        }
    }
    if (keep_trace_) result_.trace.push_back(std::move(rec));
}

void Simulation::run() {
    while (!done()) step();
}

ExperimentResult Simulation::finish() {
    if (!done()) throw std::logic_error("Simulation::finish: horizon not reached");
    const double t = static_cast<double>(config_.T);
    ExperimentResult out = std::move(result_);
    out.empiric_offset = offset_sum_ / t;
    for (double& v : out.per_subsystem_offset) v /= t;
    if (out.diverged_at) {
        const double inf = std::numeric_limits<double>::infinity();
        out.empiric_lq = inf;
        out.realized_offset = inf;
        std::fill(out.per_subsystem_lq.begin(), out.per_subsystem_lq.end(), inf);
    } else {
        out.empiric_lq = lq_sum_ / t;
        out.realized_offset = realized_sum_ / t;
        for (double& v : out.per_subsystem_lq) v /= t;
    }
    return out;
}

ExperimentResult run_simulation(const ExperimentConfig& config, std::uint64_t seed, bool keep_trace) {
    Simulation sim(config, seed, keep_trace);
    sim.run();
    return sim.finish();
}

ExperimentResult run_simulation(const ExperimentConfig& config) {
    return run_simulation(config, config.master_seed, false);
}

namespace {

template <typename Term>
double empiric_cost(std::span<const StepRecord> trace, std::int64_t T, Term term) {
    if (T < 1) throw std::invalid_argument("empiric cost: T must be at least 1");
    if (trace.size() != static_cast<std::size_t>(T)) {
        throw std::invalid_argument("empiric cost: trace has " + std::to_string(trace.size()) +
                                    " slots, expected " + std::to_string(T));
    }
    double sum = 0.0;
    for (std::size_t s = 0; s < trace.size(); ++s) {
        if (trace[s].k != static_cast<std::int64_t>(s) + 1) {
            throw std::invalid_argument("empiric cost: slot " + std::to_string(s + 1) + " missing");
        }
        for (double v : term(trace[s])) sum += v;
    }
    return sum / static_cast<double>(T);
}

}  // namespace

double empiric_offset_cost(std::span<const StepRecord> trace, std::int64_t T) {
    return empiric_cost(trace, T, [](const StepRecord& r) -> const std::vector<double>& { return r.offset_term; });
}

double empiric_lq_cost(std::span<const StepRecord> trace, std::int64_t T) {
    return empiric_cost(trace, T, [](const StepRecord& r) -> const std::vector<double>& { return r.lq_term; });
}

Mat rotation_scaling_base() { return Mat{{1.0, 0.2}, {-0.2, 1.0}}; }

namespace {

std::vector<SubsystemSpec> build_preset(std::span<const double> a_scale, std::span<const double> q_scale,
                                        std::span<const double> k_scale) {
    const Mat s = rotation_scaling_base();
    const Mat eye = Mat::identity(2);
    std::vector<SubsystemSpec> out;
    for (std::size_t i = 0; i < a_scale.size(); ++i) {
        SubsystemSpec spec;
        spec.index = static_cast<int>(i);
        spec.A = scalar_mul(a_scale[i], s);
        spec.B = eye;
        spec.K = scalar_mul(k_scale[i], eye);
        spec.Q = scalar_mul(q_scale[i], eye);
        spec.P = eye;
        spec.R = scalar_mul(0.25, eye);
        spec.x0 = {1.0, 1.0};
        out.push_back(std::move(spec));
    }
    return out;
}

}  // namespace

std::vector<SubsystemSpec> preset_table1(double row8_gain) {
    const double a[] = {1.1, 1.1, 1.2, 1.2, 1.3, 1.3, 1.4, 1.4};
    const double q[] = {100, 100, 10, 8, 6, 4, 2, 1};
    const double k[] = {-0.2, -0.3, -0.4, -0.6, -0.8, -1.0, -1.2, row8_gain};
    return build_preset(a, q, k);
}

std::vector<SubsystemSpec> preset_table2() {
    const double a[] = {0.1, 0.1, 0.2, 0.2, 0.3, 0.3, 0.4, 0.4};
    const double q[] = {1, 1, 1, 1, 1, 1, 1, 1};
    const double k[] = {0.8, 0.75, 0.5, 0.455, -0.05, -0.1, -0.35, -0.38};
    return build_preset(a, q, k);
}

SweepResults sweep(const ExperimentConfig& base, std::span<const double> p_values,
                   std::span<const std::size_t> M_values, std::span<const PolicyId> policies,
                   std::span<const std::uint64_t> seeds, unsigned threads) {
    if (p_values.empty() || M_values.empty() || policies.empty() || seeds.empty()) {
        throw std::invalid_argument("sweep: every axis needs at least one value");
    }
    std::vector<std::pair<SweepKey, ExperimentConfig>> jobs;
    for (PolicyId policy : policies) {
        for (double p : p_values) {
            for (std::size_t m : M_values) {
                ExperimentConfig cfg = base;
                cfg.policy = policy;
                cfg.p = p;
                cfg.M = m;
                cfg.validate();
                for (std::uint64_t seed : seeds) jobs.emplace_back(SweepKey{policy, p, m, seed}, cfg);
            }
        }
    }

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));

    std::vector<std::optional<ExperimentResult>> slots(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            try {
                slots[j] = run_simulation(jobs[j].second, jobs[j].first.seed);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);

    SweepResults out;
    for (std::size_t j = 0; j < jobs.size(); ++j) out.emplace(jobs[j].first, std::move(*slots[j]));
    return out;
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (!std::isfinite(s.mean)) {
        s.std_error = std::numeric_limits<double>::infinity();
    } else if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        const double var = ss / static_cast<double>(values.size() - 1);
        s.std_error = std::sqrt(var / static_cast<double>(values.size()));
    }
    return s;
}

namespace {

template <typename Field>
Summary grid_summary(const SweepResults& results, PolicyId policy, double p, std::size_t M, Field field) {
    std::vector<double> values;
    for (const auto& [key, res] : results) {
        if (key.policy == policy && key.p == p && key.M == M) values.push_back(field(res));
    }
    if (values.empty()) throw std::out_of_range("no sweep results at the requested grid point");
    return summarize(values);
}

}  // namespace

Summary offset_summary(const SweepResults& results, PolicyId policy, double p, std::size_t M) {
    return grid_summary(results, policy, p, M, [](const ExperimentResult& r) { return r.empiric_offset; });
}

Summary lq_summary(const SweepResults& results, PolicyId policy, double p, std::size_t M) {
    return grid_summary(results, policy, p, M, [](const ExperimentResult& r) { return r.empiric_lq; });
}

}  // namespace wncs
