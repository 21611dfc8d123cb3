#pragma once

#include "mmfd/power_control.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mmfd {

/// Sweep definition: a base FD link plus the range of secondary-transmitter
/// power caps to evaluate (the x axis of the sweep).
struct SweepSpec {
    FdLinkSpec link;
    std::vector<double> p_secondary_max_w;
};

/// One evaluated sweep point: the no-power-control operating point (both
/// transmitters at their maximum power) and the optimizer's solution.
struct SweepPoint {
    double p_secondary_max_w = 0;
    bool ibi = true;

    double nopc_sinr_primary_rx = 0; ///< linear
    double nopc_sinr_secondary_rx = 0;
    int nopc_mcs_primary = 0; ///< 0 when below the lowest tier
    int nopc_mcs_secondary = 0;

    bool pc_feasible = false;
    PowerSolution pc;
};

/// Parses a link spec file ([link], [radio], [sweep] sections).
SweepSpec load_linkspec_file(const std::string& path);

/// Evaluates every cap in the sweep, with and without the inter-beam
/// interference term.
std::vector<SweepPoint> powerctl_sweep(const SweepSpec& spec);

void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& os);

} // namespace mmfd
