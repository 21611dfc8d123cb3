#pragma once

#include "mmfd/scenario.hpp"
#include "mmfd/stats.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mmfd {

/// One replication's identity plus its metrics.
struct ReplicationResult {
    Variant variant;
    int node_count = 0;
    int replication = 0;
    std::uint64_t run_seed = 0;
    RunResult result;
};

struct ExperimentResult {
    std::vector<ReplicationResult> rows;
    std::int64_t total_violations = 0;
};

/// Builds the concrete scenario for one cell of the sweep: topology is a
/// function of (seed, node count, replication) only, so all variants see
/// identical node placements.
ScenarioConfig make_scenario(const ExperimentConfig& exp, Variant v, int node_count,
                             int replication);

/// Per-replication engine seed, independent of the variant.
std::uint64_t replication_seed(const ExperimentConfig& exp, int node_count, int replication);

/// Runs variants x node counts x replications sequentially and
/// deterministically. `trace` (optional) receives the event trace of every
/// run, separated by run-begin marker lines.
ExperimentResult run_experiment(const ExperimentConfig& exp, std::ostream* trace = nullptr);

/// results.csv: one row per replication per variant. Deterministic bytes for
/// a given (config, seed).
void write_results_csv(const ExperimentResult& res, std::ostream& os);

/// summary.json: per (variant, node count) aggregates over replications.
void write_summary_json(const ExperimentResult& res, std::ostream& os);

} // namespace mmfd
