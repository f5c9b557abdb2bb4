// Command-line front end: single runs, p/M sweeps, weight-table dumps and
// preset listings. Exit codes: 0 success, 1 invalid input or I/O failure,
// 3 at least one run diverged (results are still written).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wncs/config.hpp"
#include "wncs/experiment.hpp"

namespace {

constexpr int kExitDiverged = 3;

struct Options {
    std::string config_path;
    std::string preset;
    std::vector<std::string> policies;
    std::vector<double> p_values;
    std::vector<std::size_t> m_values;
    std::optional<std::int64_t> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::string out_dir = ".";
    bool trace = false;
    unsigned threads = 0;
    std::int64_t max_age = 30;
};

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Builds the base config from --config (or defaults) plus inline overrides.
// Overrides are spliced into the JSON so they pass through the same checks.
wncs::ExperimentConfig base_config(const Options& o) {
    nlohmann::json root = nlohmann::json::object();
    if (!o.config_path.empty()) {
        try {
            root = nlohmann::json::parse(read_text(o.config_path), nullptr, true, /*ignore_comments=*/true);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument("config '" + o.config_path + "' is not valid JSON: " + e.what());
        }
    }
    if (!o.preset.empty()) {
        root.erase("subsystems");
        root["preset"] = o.preset;
    }
    if (o.policies.size() == 1) root["policy"] = o.policies.front();
    if (o.p_values.size() == 1) root["p"] = o.p_values.front();
    if (o.m_values.size() == 1) root["M"] = o.m_values.front();
    if (o.horizon) root["T"] = *o.horizon;
    if (o.seed) root["seed"] = *o.seed;
    if (o.reps) root["replications"] = *o.reps;
    return wncs::parse_config(root.dump());
}

int report(const wncs::SweepResults& results, const std::filesystem::path& csv) {
    wncs::emit_csv(results, csv);
    int diverged = 0;
    for (const auto& [key, r] : results) {
        if (r.diverged_at) {
            ++diverged;
            std::cerr << "diverged: policy=" << wncs::to_string(key.policy) << " p=" << key.p
                      << " M=" << key.M << " seed=" << key.seed << " subsystem=" << (*r.diverged_subsystem + 1)
                      << " slot=" << *r.diverged_at << "\n";
        }
    }
    std::cout << "wrote " << results.size() << " rows to " << csv.string() << "\n";
    return diverged ? kExitDiverged : 0;
}

void print_summary(const wncs::SweepResults& results) {
    std::optional<wncs::SweepKey> last;
    for (const auto& [key, r] : results) {
        if (last && last->policy == key.policy && last->p == key.p && last->M == key.M) continue;
        last = key;
        const auto off = wncs::offset_summary(results, key.policy, key.p, key.M);
        const auto lq = wncs::lq_summary(results, key.policy, key.p, key.M);
        std::cout << wncs::to_string(key.policy) << " p=" << key.p << " M=" << key.M
                  << "  offset=" << off.mean << " (se " << off.std_error << ")"
                  << "  lq=" << lq.mean << " (se " << lq.std_error << ")\n";
    }
}

std::vector<wncs::PolicyId> policy_axis(const Options& o, const wncs::ExperimentConfig& base) {
    std::vector<wncs::PolicyId> out;
    for (const auto& name : o.policies) out.push_back(wncs::parse_policy(name));
    if (out.empty()) out.push_back(base.policy);
    return out;
}

int cmd_run(const Options& o) {
    const auto base = base_config(o);
    const std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    const auto seeds = base.seeds();
    const double p[] = {base.p};
    const std::size_t m[] = {base.M};
    const wncs::PolicyId pol[] = {base.policy};
    const auto results = wncs::sweep(base, p, m, pol, seeds, o.threads);
    if (o.trace) {
        const auto traced = wncs::run_simulation(base, base.master_seed, true);
        wncs::write_file(dir / "trace.csv", wncs::trace_csv(traced));
    }
    print_summary(results);
    return report(results, dir / "run.csv");
}

int cmd_sweep(const Options& o) {
    const auto base = base_config(o);
    const std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    std::vector<double> p = o.p_values.empty() ? std::vector<double>{base.p} : o.p_values;
    std::vector<std::size_t> m = o.m_values.empty() ? std::vector<std::size_t>{base.M} : o.m_values;
    std::vector<wncs::PolicyId> policies;
    if (o.policies.empty()) {
        policies.assign(std::begin(wncs::kAllPolicies), std::end(wncs::kAllPolicies));
    } else {
        policies = policy_axis(o, base);
    }
    const auto results = wncs::sweep(base, p, m, policies, base.seeds(), o.threads);
    print_summary(results);
    return report(results, dir / "sweep.csv");
}

int cmd_dump_weights(const Options& o) {
    const auto base = base_config(o);
    const auto text = wncs::weights_csv(base.subsystems, o.max_age);
    if (o.out_dir == "-") {
        std::cout << text;
        return 0;
    }
    const std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    wncs::write_file(dir / "weights.csv", text);
    std::cout << "wrote " << (dir / "weights.csv").string() << "\n";
    return 0;
}

int cmd_presets(const Options& o) {
    std::vector<std::string> names;
    if (o.preset.empty()) {
        names = {"table1", "table2"};
    } else {
        names = {o.preset};
    }
    for (const auto& name : names) {
        wncs::ExperimentConfig cfg;
        cfg.subsystems = wncs::preset_by_name(name);
        std::cout << "// preset " << name << "\n" << wncs::emit_config(cfg);
    }
    return 0;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--preset", o.preset, "Subsystem preset")->check(CLI::IsMember({"table1", "table2"}));
    sub->add_option("--t", o.horizon, "Horizon in slots");
    sub->add_option("--out", o.out_dir, "Output directory");
}

void add_experiment(CLI::App* sub, Options& o) {
    sub->add_option("--policy", o.policies, "offset-greedy | aoi-max | est-error-max | round-robin | random");
    sub->add_option("--p", o.p_values, "Channel success probability (repeatable)");
    sub->add_option("--m", o.m_values, "Resources per slot (repeatable)");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--reps", o.reps, "Replications (seeds master, master+1, ...)");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scheduling simulator for multi-loop wireless networked control"};
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "Simulate one configuration over its replications");
    add_common(run, o);
    add_experiment(run, o);
    run->add_flag("--trace", o.trace, "Also write the per-slot trace of the first replication");

    auto* sweep = app.add_subcommand("sweep", "Run the policy x p x M grid");
    add_common(sweep, o);
    add_experiment(sweep, o);

    auto* dump = app.add_subcommand("dump-weights", "Write offset weight tables as CSV ('--out -' for stdout)");
    add_common(dump, o);
    dump->add_option("--jmax", o.max_age, "Largest age to tabulate");

    auto* presets = app.add_subcommand("presets", "Print the built-in presets as config text");
    presets->add_option("--preset", o.preset, "Only this preset")->check(CLI::IsMember({"table1", "table2"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            if (o.policies.size() > 1 || o.p_values.size() > 1 || o.m_values.size() > 1) {
                throw std::invalid_argument("run takes a single --policy/--p/--m; use sweep for grids");
            }
            return cmd_run(o);
        }
        if (*sweep) return cmd_sweep(o);
        if (*dump) return cmd_dump_weights(o);
        if (*presets) return cmd_presets(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
