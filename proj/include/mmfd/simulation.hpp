#pragma once

#include "mmfd/mac.hpp"
#include "mmfd/medium.hpp"
#include "mmfd/stats.hpp"

#include <iosfwd>
#include <memory>

namespace mmfd {

/// One scenario replication: engine, medium and per-node MACs wired
/// together. Single-threaded; parallelism only across independent
/// Simulation instances.
class Simulation : public EventSink {
public:
    /// cfg.nodes must be populated (generate_topology or explicit).
    Simulation(const ScenarioConfig& cfg, std::uint64_t run_seed);
    ~Simulation();

    /// Runs the scenario for its configured duration plus the drain window
    /// and returns the replication metrics.
    RunResult run();

    /// Event-trace output (one line per dispatched event).
    void set_trace(std::ostream* os);

    // EventSink
    void handle(const Event& ev) override;

    // services used by the MACs
    Engine& engine() { return engine_; }
    Medium& medium() { return *medium_; }
    const ScenarioConfig& cfg() const { return cfg_; }
    StatsRecorder& stats() { return *stats_; }
    std::uint64_t run_seed() const { return run_seed_; }
    TxnId next_txn() { return ++txn_counter_; }
    std::int64_t cutoff_ns() const { return cfg_.duration_ns; }
    Mac& mac(NodeId id) { return *macs_[id]; }

    /// Omniscient check: is the node committed to another transaction or on
    /// the air strictly before t (for deafness attribution).
    bool node_busy_before(NodeId id, SimTime t) const;

private:
    ScenarioConfig cfg_;
    std::uint64_t run_seed_;
    Engine engine_;
    std::unique_ptr<StatsRecorder> stats_;
    std::unique_ptr<Medium> medium_;
    std::vector<std::unique_ptr<Mac>> macs_;
    TxnId txn_counter_ = 0;
    std::ostream* trace_ = nullptr;
};

} // namespace mmfd
