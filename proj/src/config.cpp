#include "wncs/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wncs {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config key '" + key + "': " + what);
}

double get_number(const json& j, const std::string& key) {
    if (!j.is_number()) bad(key, "expected a number");
    return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& key) {
    if (!j.is_number_integer()) bad(key, "expected an integer");
    return j.get<std::int64_t>();
}

Mat get_matrix(const json& j, const std::string& key) {
    if (!j.is_array() || j.empty()) bad(key, "expected a nonempty array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    std::vector<double> entries;
    for (std::size_t r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array() || row.empty()) bad(key, "row " + std::to_string(r) + " is not a nonempty array");
        if (r == 0) cols = row.size();
        if (row.size() != cols) bad(key, "ragged rows");
        for (const json& v : row) entries.push_back(get_number(v, key));
    }
    try {
        return Mat(rows, cols, std::move(entries));
    } catch (const std::exception& e) {
        bad(key, e.what());
    }
}

Vec get_vector(const json& j, const std::string& key) {
    if (!j.is_array() || j.empty()) bad(key, "expected a nonempty array");
    Vec out;
    for (const json& v : j) out.push_back(get_number(v, key));
    return out;
}

SubsystemSpec get_subsystem(const json& j, std::size_t index) {
    const std::string prefix = "subsystems[" + std::to_string(index) + "]";
    if (!j.is_object()) bad(prefix, "expected an object");
    static const std::set<std::string> known{"A", "B", "K", "Q", "P", "R", "x0"};
    for (const auto& [k, v] : j.items()) {
        if (!known.contains(k)) bad(prefix + "." + k, "unknown key");
    }
    for (const auto& k : known) {
        if (!j.contains(k)) bad(prefix + "." + k, "missing");
    }
    SubsystemSpec s;
    s.index = static_cast<int>(index);
    s.A = get_matrix(j["A"], prefix + ".A");
    s.B = get_matrix(j["B"], prefix + ".B");
    s.K = get_matrix(j["K"], prefix + ".K");
    s.Q = get_matrix(j["Q"], prefix + ".Q");
    s.P = get_matrix(j["P"], prefix + ".P");
    s.R = get_matrix(j["R"], prefix + ".R");
    s.x0 = get_vector(j["x0"], prefix + ".x0");
    try {
        s.validate();
    } catch (const std::exception& e) {
        bad(prefix, e.what());
    }
    return s;
}

json matrix_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::vector<SubsystemSpec> preset_by_name(std::string_view name, double table1_row8_gain) {
    if (name == "table1") return preset_table1(table1_row8_gain);
    if (name == "table2") return preset_table2();
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected table1 or table2)");
}

ExperimentConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config must be a JSON object");

    static const std::set<std::string> known{"preset", "table1_row8_gain", "subsystems", "M",
                                             "p", "T", "policy", "seed", "replications",
                                             "divergence_limit"};
    for (const auto& [k, v] : root.items()) {
        if (!known.contains(k)) bad(k, "unknown key");
    }

    ExperimentConfig cfg;
    if (root.contains("subsystems")) {
        if (root.contains("preset")) bad("preset", "cannot be combined with 'subsystems'");
        const json& list = root["subsystems"];
        if (!list.is_array() || list.empty()) bad("subsystems", "expected a nonempty array");
        for (std::size_t i = 0; i < list.size(); ++i) cfg.subsystems.push_back(get_subsystem(list[i], i));
    } else {
        std::string preset = "table1";
        if (root.contains("preset")) {
            if (!root["preset"].is_string()) bad("preset", "expected a string");
            preset = root["preset"].get<std::string>();
        }
        double gain = -1.2;
        if (root.contains("table1_row8_gain")) gain = get_number(root["table1_row8_gain"], "table1_row8_gain");
        try {
            cfg.subsystems = preset_by_name(preset, gain);
        } catch (const std::exception& e) {
            bad("preset", e.what());
        }
    }

    if (root.contains("M")) {
        const auto m = get_integer(root["M"], "M");
        if (m < 1) bad("M", "must be at least 1");
        cfg.M = static_cast<std::size_t>(m);
    }
    if (root.contains("p")) cfg.p = get_number(root["p"], "p");
    if (root.contains("T")) cfg.T = get_integer(root["T"], "T");
    if (root.contains("policy")) {
        if (!root["policy"].is_string()) bad("policy", "expected a string");
        try {
            cfg.policy = parse_policy(root["policy"].get<std::string>());
        } catch (const std::exception& e) {
            bad("policy", e.what());
        }
    }
    if (root.contains("seed")) {
        const auto s = get_integer(root["seed"], "seed");
        if (s < 0) bad("seed", "must be nonnegative");
        cfg.master_seed = static_cast<std::uint64_t>(s);
    }
    if (root.contains("replications")) {
        const auto r = get_integer(root["replications"], "replications");
        if (r < 1) bad("replications", "must be at least 1");
        cfg.replications = static_cast<std::size_t>(r);
    }
    if (root.contains("divergence_limit")) cfg.divergence_limit = get_number(root["divergence_limit"], "divergence_limit");

    if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) bad("p", "must lie in [0,1], got " + format_double(cfg.p));
    if (cfg.T < 1) bad("T", "must be at least 1");
    if (cfg.M > cfg.N()) {
        bad("M", "budget " + std::to_string(cfg.M) + " exceeds the number of subsystems N=" +
                     std::to_string(cfg.N()));
    }
    if (!(cfg.divergence_limit > 0.0)) bad("divergence_limit", "must be positive");
    cfg.validate();
    return cfg;
}

std::string emit_config(const ExperimentConfig& config) {
    json root;
    json list = json::array();
    for (const auto& s : config.subsystems) {
        json j;
        j["A"] = matrix_json(s.A);
        j["B"] = matrix_json(s.B);
        j["K"] = matrix_json(s.K);
        j["Q"] = matrix_json(s.Q);
        j["P"] = matrix_json(s.P);
        j["R"] = matrix_json(s.R);
        j["x0"] = s.x0;
        list.push_back(std::move(j));
    }
    root["subsystems"] = std::move(list);
    root["M"] = config.M;
    root["p"] = config.p;
    root["T"] = config.T;
    root["policy"] = std::string(to_string(config.policy));
    root["seed"] = config.master_seed;
    root["replications"] = config.replications;
    root["divergence_limit"] = config.divergence_limit;
    return root.dump(2) + "\n";
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string sweep_csv(const SweepResults& results) {
    if (results.empty()) throw std::invalid_argument("sweep_csv: no results");
    std::size_t n = results.begin()->second.per_subsystem_lq.size();
    std::ostringstream out;
    out << "policy,p,M,seed,empiric_offset,empiric_lq";
    for (std::size_t i = 0; i < n; ++i) out << ",J_" << (i + 1);
    out << '\n';
    for (const auto& [key, r] : results) {
        out << to_string(key.policy) << ',' << format_double(key.p) << ',' << key.M << ',' << key.seed << ','
            << format_double(r.empiric_offset) << ',' << format_double(r.empiric_lq);
        for (double j : r.per_subsystem_lq) out << ',' << format_double(j);
        out << '\n';
    }
    return out.str();
}

std::string trace_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "k,i,delta,alpha,beta,offset_term,lq_term\n";
    for (const auto& rec : result.trace) {
        for (std::size_t i = 0; i < rec.delta.size(); ++i) {
            out << rec.k << ',' << (i + 1) << ',' << rec.delta[i] << ',' << int(rec.alpha[i]) << ','
                << int(rec.beta[i]) << ',' << format_double(rec.offset_term[i]) << ','
                << format_double(rec.lq_term[i]) << '\n';
        }
    }
    return out.str();
}

std::string weights_csv(const std::vector<SubsystemSpec>& specs, std::int64_t max_age) {
    if (max_age < 0) throw std::invalid_argument("weights_csv: max age must be nonnegative");
    OffsetWeightTable table(specs);
    std::ostringstream out;
    out << "i,j,weight,cumulative_offset\n";
    for (std::size_t i = 0; i < specs.size(); ++i) {
        for (std::int64_t j = 0; j <= max_age; ++j) {
            out << (i + 1) << ',' << j << ',' << format_double(table.weight(i, j)) << ','
                << format_double(table.cumulative_offset(i, j)) << '\n';
        }
    }
    return out.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void emit_csv(const SweepResults& results, const std::filesystem::path& path) {
    if (results.empty()) throw std::invalid_argument("emit_csv: no results to write to '" + path.string() + "'");
    write_file(path, sweep_csv(results));
}

}  // namespace wncs
