#pragma once

#include "mmfd/mcs.hpp"
#include "mmfd/sinr.hpp"

#include <optional>

namespace mmfd {

enum class FdLinkMode { TwoNode, ThreeNode };

/// Inclusive discrete transmit-power grid {min_w, min_w + step_w, ...} up to
/// max_w.
struct PowerGrid {
    double min_w = 1e-3;
    double max_w = 1e-3;
    double step_w = 1e-3;

    int point_count() const;
    double at(int k) const { return min_w + k * step_w; }
};

/// A full-duplex link to optimize. The primary transmitter sends to the
/// primary receiver; the secondary transmitter is the primary receiver
/// itself (two-node mode: it answers back to the primary transmitter;
/// three-node mode: it relays to the secondary receiver).
struct FdLinkSpec {
    FdLinkMode mode = FdLinkMode::TwoNode;

    RadioNode primary_tx;
    RadioNode primary_rx;
    RadioNode secondary_rx; ///< only used in three-node mode

    std::int64_t payload_bits_primary = 64'000;
    std::int64_t payload_bits_secondary = 64'000;

    PowerGrid primary_grid;
    PowerGrid secondary_grid;

    double si_beta_primary = 0;   ///< SI cancellation at the primary transmitter
    double si_beta_secondary = 0; ///< SI cancellation at the primary receiver
    bool ibi_enabled = true;

    double t_overhead_s = 0;
    ChannelParams channel;
    McsTable mcs = McsTable::default_table();
};

/// Channel occupation time of an FD link: the longer of the two DATA
/// transmission times. A zero secondary payload degenerates to a one-way
/// link. Rates must be positive for nonzero payloads.
double occupation_time(std::int64_t l_primary_bits, std::int64_t rate_primary_bps,
                       std::int64_t l_secondary_bits, std::int64_t rate_secondary_bps);

/// Achievable FD link throughput (L_p + L_s) / (T_overhead + D).
double link_throughput(std::int64_t l_primary_bits, std::int64_t l_secondary_bits,
                       double t_overhead_s, double occupation_s);

/// Selected power pair and the rates, occupation time and throughput it
/// achieves.
struct PowerSolution {
    double p_primary_w = 0;
    double p_secondary_w = 0;
    std::int64_t rate_primary_bps = 0;
    std::int64_t rate_secondary_bps = 0;
    int mcs_primary = 0;
    int mcs_secondary = 0;
    double sinr_primary_rx = 0;   ///< linear, at the primary receiver
    double sinr_secondary_rx = 0; ///< linear, at the secondary receiver
    double occupation_s = 0;
    double throughput_bps = 0;
};

struct PowerOutcome {
    std::optional<PowerSolution> solution; ///< empty when no grid pair closes the link
    bool feasible() const { return solution.has_value(); }
};

/// Evaluates one power pair through the radio-model SINR path and rate
/// matching. Used by both the optimizer and the exhaustive oracle so that
/// their tie-breaking compares identical numbers.
std::optional<PowerSolution> evaluate_power_pair(const FdLinkSpec& spec, double p_primary_w,
                                                 double p_secondary_w);

/// Raw SINRs of the two directions at a power pair, rate matching aside.
struct LinkSinrs {
    double primary_rx = 0;   ///< linear, at the primary receiver
    double secondary_rx = 0; ///< linear, at the secondary receiver
};
LinkSinrs link_sinrs(const FdLinkSpec& spec, double p_primary_w, double p_secondary_w);

/// Grid search structured as the power-control algorithm: outer loop over the
/// primary power descending from its maximum, inner derivation of the
/// feasible primary-rate interval and of the secondary power per rate.
/// Ties: smaller D, larger S, smaller total power, smaller primary power.
PowerOutcome optimize_powers(const FdLinkSpec& spec);

/// Exhaustive evaluation of every grid pair under the same tie-break rule.
/// Independent check of optimize_powers; grids above 10^6 pairs are refused.
PowerOutcome brute_force_oracle(const FdLinkSpec& spec);

/// Strict-weak ordering used to pick the winning solution.
bool solution_preferred(const PowerSolution& a, const PowerSolution& b);

} // namespace mmfd
