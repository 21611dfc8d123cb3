#pragma once

#include "mmfd/channel.hpp"
#include "mmfd/frames.hpp"
#include "mmfd/mcs.hpp"
#include "mmfd/sim_time.hpp"
#include "mmfd/sinr.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mmfd {

enum class Variant { Dfdmac, AyWithBt, AyWithoutBt };

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);

/// Static description of one simulated radio.
struct NodeSpec {
    NodeId id = 0;
    Position pos;
    AntennaConfig antenna{12};
    bool fd_capable = true;
    bool is_ap = false;
    double tx_power_w = 0.01;
    double si_beta = 0;
    bool has_traffic = true;
};

struct MacTiming {
    std::int64_t sifs_ns = microseconds(3);
    std::int64_t difs_ns = microseconds(13);
    std::int64_t slot_ns = microseconds(5);
    int cw_min = 16;
    int cw_max = 1024;
    int retry_limit = 7;
};

enum class ApDstPolicy { UniformRandom, Fixed };

struct TrafficConfig {
    bool saturated = true;
    double arrival_rate_pps = 0; ///< per-user Poisson arrival rate when not saturated
    std::int64_t payload_bits = 64'000;
    int fixed_mcs = 2; ///< 0 selects the rate from the precomputed link state
    ApDstPolicy ap_dst = ApDstPolicy::UniformRandom;
    NodeId ap_fixed_dst = kNoNode;
};

/// Topology generator input: AP at the disc center, users uniform in the
/// disc. Explicit node lists bypass the generator.
struct TopologyConfig {
    bool explicit_nodes = false;
    double radius_m = 10.0;
    int node_count = 10; ///< AP plus node_count - 1 user devices
    int ap_beams = 12;
    int user_beams = 12;
};

/// One complete simulation scenario (a single protocol variant and node
/// count; experiments sweep over these).
struct ScenarioConfig {
    std::string name = "scenario";
    Variant variant = Variant::Dfdmac;
    bool busy_tones = true;    ///< derived from the variant unless overridden
    bool power_control = false;
    bool ibi_enabled = true;

    TopologyConfig topology;
    std::vector<NodeSpec> nodes; ///< filled by generate_topology when not explicit

    ChannelParams channel;
    FrameFormat frame_format;
    McsTable mcs = McsTable::default_table();
    MacTiming timing;
    TrafficConfig traffic;

    double cca_threshold_w = 1.58489319246111348e-10; ///< -68 dBm
    double control_sinr_min = 3.98107170553497248;    ///< 6 dB, control frame decode threshold
    double pc_grid_min_w = 1e-3;                      ///< power negotiation grid floor
    double pc_grid_step_w = 1e-3;                     ///< power negotiation grid step
    double default_tx_power_w = 0.01;                 ///< applied to generated nodes
    double default_si_beta = 3.16227766016837933e-9;  ///< -85 dB

    std::int64_t duration_ns = seconds_ns(1.0);
    std::int64_t drain_ns = milliseconds(2);
    std::uint64_t seed = 1;

    /// Test support: forces the first backoff draw per node.
    std::map<NodeId, int> forced_first_backoff;
};

/// Experiment-level sweep: variants x node counts x replications.
struct ExperimentConfig {
    ScenarioConfig base;
    std::vector<Variant> variants{Variant::Dfdmac};
    std::vector<int> node_counts{10};
    int replications = 10;
};

/// Draws node positions for the configured topology: AP at the origin,
/// users uniform over the disc, deterministic for a given seed. Rejects
/// coincident positions (bounded retries).
std::vector<NodeSpec> generate_topology(const ScenarioConfig& cfg, std::uint64_t topo_seed);

/// Applies the variant's default feature flags (busy tones off only for the
/// plain 802.11ay baseline).
void apply_variant_defaults(ScenarioConfig& cfg);

/// Parses the key = value scenario file format. Throws std::runtime_error
/// with a line reference on malformed input.
ExperimentConfig load_experiment_file(const std::string& path);

/// Validates cross-field invariants; throws std::runtime_error on violation.
void validate(const ExperimentConfig& cfg);

} // namespace mmfd
