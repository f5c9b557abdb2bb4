#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wncs/experiment.hpp"

namespace wncs {

/**
 * Parses a JSON experiment description:
 *
 *   {
 *     "preset": "table1",          // or "table2"; used when "subsystems" is absent
 *     "table1_row8_gain": -1.2,    // optional override of the last table1 gain
 *     "subsystems": [ { "A": [[..],[..]], "B": .., "K": .., "Q": .., "P": ..,
 *                       "R": .., "x0": [..] }, ... ],
 *     "M": 3, "p": 0.7, "T": 5000, "policy": "offset-greedy",
 *     "seed": 1, "replications": 10, "divergence_limit": 1e12
 *   }
 *
 * Every key is optional; unknown keys are rejected. Errors are
 * std::invalid_argument with the offending key in the message.
 */
ExperimentConfig parse_config(std::string_view text);

/// Explicit JSON text for a config (subsystems written out, no preset).
std::string emit_config(const ExperimentConfig& config);

std::vector<SubsystemSpec> preset_by_name(std::string_view name, double table1_row8_gain = -1.2);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Header: policy,p,M,seed,empiric_offset,empiric_lq,J_1,...,J_N
std::string sweep_csv(const SweepResults& results);
/// Header: k,i,delta,alpha,beta,offset_term,lq_term
std::string trace_csv(const ExperimentResult& result);
/// Header: i,j,weight,cumulative_offset  for j = 0..max_age
std::string weights_csv(const std::vector<SubsystemSpec>& specs, std::int64_t max_age);

/// Writes text to path; throws std::runtime_error naming the path on failure.
void write_file(const std::filesystem::path& path, std::string_view text);

/// Writes sweep_csv(results); empty results are an error.
void emit_csv(const SweepResults& results, const std::filesystem::path& path);

}  // namespace wncs
