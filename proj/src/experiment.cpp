#include "mmfd/experiment.hpp"

#include "mmfd/rng.hpp"
#include "mmfd/simulation.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace mmfd {

std::uint64_t replication_seed(const ExperimentConfig& exp, int node_count, int replication) {
    std::uint64_t s = mix_seed(exp.base.seed, static_cast<std::uint64_t>(node_count) * 0x100000001B3ULL);
    return mix_seed(s, static_cast<std::uint64_t>(replication) + 1);
}

ScenarioConfig make_scenario(const ExperimentConfig& exp, Variant v, int node_count,
                             int replication) {
    ScenarioConfig cfg = exp.base;
    cfg.variant = v;
    apply_variant_defaults(cfg);
    cfg.topology.node_count = node_count;
    const std::uint64_t topo_seed = replication_seed(exp, node_count, replication);
    cfg.nodes = generate_topology(cfg, topo_seed);
    return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& exp, std::ostream* trace) {
    ExperimentResult out;
    for (Variant v : exp.variants) {
        for (int n : exp.node_counts) {
            for (int rep = 0; rep < exp.replications; ++rep) {
                ScenarioConfig cfg = make_scenario(exp, v, n, rep);
                const std::uint64_t run_seed = replication_seed(exp, n, rep);
                Simulation sim(cfg, run_seed);
                if (trace) {
                    (*trace) << "0\t-1\trun-begin\tvariant=" << variant_name(v) << " n=" << n
                             << " rep=" << rep << " seed=" << run_seed << "\n";
                    sim.set_trace(trace);
                }
                ReplicationResult row;
                row.variant = v;
                row.node_count = n;
                row.replication = rep;
                row.run_seed = run_seed;
                row.result = sim.run();
                out.total_violations += static_cast<std::int64_t>(row.result.violations.size());
                out.rows.push_back(std::move(row));
            }
        }
    }
    return out;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

} // namespace

void write_results_csv(const ExperimentResult& res, std::ostream& os) {
    os << "variant,node_count,replication,seed,duration_s,network_throughput_bps,"
          "jain_user_uplink,txn_hd,txn_two_node_fd,txn_three_node_fd,cw_doublings,retries,"
          "drops,deaf_holdoffs,acked_payload_bits,violations\n";
    for (const auto& row : res.rows) {
        const auto& r = row.result;
        os << variant_name(row.variant) << ',' << row.node_count << ',' << row.replication << ','
           << row.run_seed << ',' << fmt_double(r.duration_s) << ','
           << fmt_double(r.network_throughput_bps) << ','
           << (r.jain_user_uplink ? fmt_double(*r.jain_user_uplink) : "nan") << ',' << r.txn_hd
           << ',' << r.txn_two_node_fd << ',' << r.txn_three_node_fd << ',' << r.cw_doublings
           << ',' << r.retries << ',' << r.drops << ',' << r.deaf_holdoffs << ','
           << r.total_acked_payload_bits << ',' << r.violations.size() << '\n';
    }
}

void write_summary_json(const ExperimentResult& res, std::ostream& os) {
    using nlohmann::ordered_json;

    struct Agg {
        std::vector<double> throughput;
        std::vector<double> jain;
        std::int64_t violations = 0;
    };
    std::map<std::pair<std::string, int>, Agg> cells;
    for (const auto& row : res.rows) {
        auto& c = cells[{variant_name(row.variant), row.node_count}];
        c.throughput.push_back(row.result.network_throughput_bps);
        if (row.result.jain_user_uplink) c.jain.push_back(*row.result.jain_user_uplink);
        c.violations += static_cast<std::int64_t>(row.result.violations.size());
    }

    auto mean = [](const std::vector<double>& xs) {
        if (xs.empty()) return 0.0;
        double s = 0;
        for (double x : xs) s += x;
        return s / xs.size();
    };
    auto stddev = [&](const std::vector<double>& xs) {
        if (xs.size() < 2) return 0.0;
        const double m = mean(xs);
        double s = 0;
        for (double x : xs) s += (x - m) * (x - m);
        return std::sqrt(s / (xs.size() - 1));
    };

    ordered_json root;
    root["cells"] = ordered_json::array();
    for (const auto& [key, agg] : cells) {
        ordered_json cell;
        cell["variant"] = key.first;
        cell["node_count"] = key.second;
        cell["replications"] = agg.throughput.size();
        cell["network_throughput_bps_mean"] = mean(agg.throughput);
        cell["network_throughput_bps_stddev"] = stddev(agg.throughput);
        cell["jain_user_uplink_mean"] = mean(agg.jain);
        cell["jain_user_uplink_stddev"] = stddev(agg.jain);
        cell["invariant_violations"] = agg.violations;
        root["cells"].push_back(cell);
    }
    os << root.dump(2) << '\n';
}

} // namespace mmfd
