#include "mmfd/scenario.hpp"

#include "mmfd/config_file.hpp"
#include "mmfd/rng.hpp"
#include "mmfd/units.hpp"

#include <sstream>
#include <stdexcept>

namespace mmfd {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Dfdmac: return "dfdmac";
        case Variant::AyWithBt: return "ay_with_bt";
        case Variant::AyWithoutBt: return "ay_without_bt";
    }
    return "?";
}

std::optional<Variant> variant_from_name(const std::string& name) {
    if (name == "dfdmac") return Variant::Dfdmac;
    if (name == "ay_with_bt") return Variant::AyWithBt;
    if (name == "ay_without_bt") return Variant::AyWithoutBt;
    return std::nullopt;
}

void apply_variant_defaults(ScenarioConfig& cfg) {
    cfg.busy_tones = cfg.variant != Variant::AyWithoutBt;
}

std::vector<NodeSpec> generate_topology(const ScenarioConfig& cfg, std::uint64_t topo_seed) {
    const auto& topo = cfg.topology;
    if (topo.node_count < 2) throw std::runtime_error("topology: need at least two nodes");
    std::vector<NodeSpec> nodes;
    nodes.reserve(topo.node_count);

    NodeSpec ap;
    ap.id = 0;
    ap.pos = {0, 0};
    ap.antenna = AntennaConfig{topo.ap_beams};
    ap.is_ap = true;
    ap.tx_power_w = cfg.default_tx_power_w;
    ap.si_beta = cfg.default_si_beta;
    nodes.push_back(ap);

    RngStream rng(topo_seed, 0x70706f6c6f6779ULL); // topology stream, independent of node streams
    for (int i = 1; i < topo.node_count; ++i) {
        NodeSpec user;
        user.id = i;
        user.antenna = AntennaConfig{topo.user_beams};
        user.tx_power_w = cfg.default_tx_power_w;
        user.si_beta = cfg.default_si_beta;
        bool placed = false;
        for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
            const double r = topo.radius_m * std::sqrt(rng.uniform01());
            const double phi = kTwoPi * rng.uniform01();
            user.pos = {r * std::cos(phi), r * std::sin(phi)};
            placed = true;
            for (const auto& other : nodes) {
                if (other.pos == user.pos) placed = false;
            }
        }
        if (!placed) throw std::runtime_error("topology: could not place node apart from others");
        nodes.push_back(user);
    }
    return nodes;
}

namespace {

McsTable parse_mcs_table(const ConfigFile& f) {
    const auto rows = f.get_all("mcs", "entry");
    if (rows.empty()) return McsTable::default_table();
    std::vector<McsEntry> entries;
    for (const auto& row : rows) {
        std::istringstream in(row);
        std::string idx, mod, coding, rate, thr;
        if (!std::getline(in, idx, ',') || !std::getline(in, mod, ',') ||
            !std::getline(in, coding, ',') || !std::getline(in, rate, ',') ||
            !std::getline(in, thr)) {
            throw std::runtime_error("mcs entry needs: index, modulation, coding, rate_mbps, threshold_db");
        }
        McsEntry e;
        e.index = std::stoi(trim(idx));
        e.modulation = trim(mod);
        const std::string c = trim(coding);
        const auto slash = c.find('/');
        e.coding_num = std::stoi(c.substr(0, slash));
        e.coding_den = slash == std::string::npos ? 1 : std::stoi(c.substr(slash + 1));
        e.data_rate_bps = static_cast<std::int64_t>(std::stod(trim(rate)) * 1e6);
        e.sinr_threshold = db_to_linear(std::stod(trim(thr)));
        entries.push_back(e);
    }
    return McsTable(std::move(entries));
}

} // namespace

ExperimentConfig load_experiment_file(const std::string& path) {
    const ConfigFile f = ConfigFile::parse_file(path);
    ExperimentConfig exp;
    ScenarioConfig& cfg = exp.base;

    cfg.name = f.get_string("experiment", "name", "experiment");
    cfg.seed = static_cast<std::uint64_t>(f.get_int("experiment", "seed", 1));
    cfg.duration_ns = seconds_ns(f.get_double("experiment", "duration_s", 1.0));
    exp.replications = static_cast<int>(f.get_int("experiment", "replications", 10));

    exp.variants.clear();
    auto vnames = f.get_list("experiment", "variants");
    if (vnames.empty()) vnames = {"dfdmac"};
    for (const auto& name : vnames) {
        const auto v = variant_from_name(name);
        if (!v) throw std::runtime_error("unknown protocol variant: " + name);
        exp.variants.push_back(*v);
    }

    exp.node_counts.clear();
    for (const auto& s : f.get_list("experiment", "node_counts")) {
        exp.node_counts.push_back(std::stoi(s));
    }
    if (exp.node_counts.empty()) {
        exp.node_counts.push_back(static_cast<int>(f.get_int("topology", "node_count", 10)));
    }

    cfg.topology.radius_m = f.get_double("topology", "radius_m", 10.0);
    cfg.topology.ap_beams = static_cast<int>(f.get_int("topology", "ap_beams", 12));
    cfg.topology.user_beams = static_cast<int>(f.get_int("topology", "user_beams", 12));

    cfg.channel.ref_gain = db_to_linear(f.get_double("radio", "ref_gain_db", -68.0));
    cfg.channel.pathloss_exp = f.get_double("radio", "pathloss_exp", 2.0);
    cfg.channel.oxygen_per_m = f.get_double("radio", "oxygen_per_m", 0.0037);
    cfg.channel.noise_w = dbm_to_watts(f.get_double("radio", "noise_dbm", -90.0));
    cfg.cca_threshold_w = dbm_to_watts(f.get_double("radio", "cca_dbm", -68.0));
    cfg.control_sinr_min = db_to_linear(f.get_double("radio", "control_sinr_db", 6.0));
    const double tx_dbm = f.get_double("radio", "tx_power_dbm", 10.0);
    const double beta = db_to_linear(f.get_double("radio", "si_cancellation_db", -85.0));

    cfg.timing.sifs_ns = microseconds(f.get_int("mac", "sifs_us", 3));
    cfg.timing.difs_ns = microseconds(f.get_int("mac", "difs_us", 13));
    cfg.timing.slot_ns = microseconds(f.get_int("mac", "slot_us", 5));
    cfg.timing.cw_min = static_cast<int>(f.get_int("mac", "cw_min", 16));
    cfg.timing.cw_max = static_cast<int>(f.get_int("mac", "cw_max", 1024));
    cfg.timing.retry_limit = static_cast<int>(f.get_int("mac", "retry_limit", 7));
    cfg.power_control = f.get_bool("mac", "power_control", false);
    cfg.ibi_enabled = f.get_bool("mac", "ibi", true);
    cfg.pc_grid_min_w = f.get_double("mac", "pc_grid_min_mw", 1.0) * 1e-3;
    cfg.pc_grid_step_w = f.get_double("mac", "pc_grid_step_mw", 1.0) * 1e-3;

    const std::string model = f.get_string("traffic", "model", "saturated");
    if (model == "saturated") {
        cfg.traffic.saturated = true;
    } else if (model == "rate_limited") {
        cfg.traffic.saturated = false;
        cfg.traffic.arrival_rate_pps = f.get_double("traffic", "arrival_rate_pps", 1000.0);
        if (cfg.traffic.arrival_rate_pps <= 0) {
            throw std::runtime_error("traffic: arrival_rate_pps must be > 0");
        }
    } else {
        throw std::runtime_error("traffic: model must be saturated or rate_limited");
    }
    cfg.traffic.payload_bits = f.get_int("traffic", "payload_bytes", 8000) * 8;
    cfg.traffic.fixed_mcs = static_cast<int>(f.get_int("traffic", "mcs", 2));

    cfg.mcs = parse_mcs_table(f);

    // Node specs are generated per node count during the experiment run.
    cfg.topology.node_count = exp.node_counts.front();
    cfg.default_tx_power_w = dbm_to_watts(tx_dbm);
    cfg.default_si_beta = beta;
    return exp;
}

void validate(const ExperimentConfig& exp) {
    const auto& cfg = exp.base;
    if (exp.replications < 1) throw std::runtime_error("replications must be >= 1");
    if (cfg.duration_ns < 0) throw std::runtime_error("duration must be >= 0");
    for (int n : exp.node_counts) {
        if (n < 2) throw std::runtime_error("node counts must be >= 2");
    }
    if (cfg.topology.radius_m <= 0) throw std::runtime_error("topology radius must be > 0");
    if (cfg.topology.ap_beams < 1 || cfg.topology.user_beams < 1) {
        throw std::runtime_error("beam counts must be >= 1");
    }
    if (cfg.timing.cw_min < 1 || cfg.timing.cw_max < cfg.timing.cw_min) {
        throw std::runtime_error("contention window bounds are inconsistent");
    }
    if (cfg.traffic.payload_bits <= 0) throw std::runtime_error("payload must be positive");
    if (cfg.traffic.fixed_mcs > 0 && !cfg.mcs.has_index(cfg.traffic.fixed_mcs)) {
        throw std::runtime_error("traffic: fixed MCS index is not in the table");
    }
    if (cfg.channel.noise_w <= 0) throw std::runtime_error("noise power must be > 0");
    if (cfg.channel.ref_gain <= 0) throw std::runtime_error("reference path gain must be > 0");
}

} // namespace mmfd
