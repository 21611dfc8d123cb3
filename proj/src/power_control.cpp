#include "mmfd/power_control.hpp"

#include <cmath>
#include <limits>

namespace mmfd {

int PowerGrid::point_count() const {
    if (step_w <= 0) throw std::invalid_argument("PowerGrid: step must be > 0");
    if (min_w > max_w) throw std::invalid_argument("PowerGrid: min above max");
    return static_cast<int>(std::floor((max_w - min_w) / step_w + 1e-9)) + 1;
}

double occupation_time(std::int64_t l_primary_bits, std::int64_t rate_primary_bps,
                       std::int64_t l_secondary_bits, std::int64_t rate_secondary_bps) {
    double d = 0;
    if (l_primary_bits > 0) {
        if (rate_primary_bps <= 0) throw std::invalid_argument("occupation_time: zero primary rate");
        d = static_cast<double>(l_primary_bits) / static_cast<double>(rate_primary_bps);
    }
    if (l_secondary_bits > 0) {
        if (rate_secondary_bps <= 0) throw std::invalid_argument("occupation_time: zero secondary rate");
        d = std::max(d, static_cast<double>(l_secondary_bits) / static_cast<double>(rate_secondary_bps));
    }
    return d;
}

double link_throughput(std::int64_t l_primary_bits, std::int64_t l_secondary_bits,
                       double t_overhead_s, double occupation_s) {
    return static_cast<double>(l_primary_bits + l_secondary_bits) / (t_overhead_s + occupation_s);
}

namespace {

/// Receiver/transmission views for the two directions of the link.
struct LinkGeometry {
    ActiveTransmission primary;     // primary_tx -> primary_rx
    ActiveTransmission secondary;   // primary_rx -> (primary_tx | secondary_rx)
    ReceiverState primary_rx_state; // receives the primary transmission
    ReceiverState secondary_rx_state;
};

LinkGeometry make_geometry(const FdLinkSpec& spec, double p_primary_w, double p_secondary_w) {
    LinkGeometry g;
    const Position secondary_dst =
        spec.mode == FdLinkMode::TwoNode ? spec.primary_tx.pos : spec.secondary_rx.pos;

    g.primary = ActiveTransmission{spec.primary_tx, spec.primary_rx.pos, p_primary_w, 1};
    g.secondary = ActiveTransmission{spec.primary_rx, secondary_dst, p_secondary_w, 1};

    // The primary receiver listens toward the primary transmitter while
    // transmitting its own DATA (residual SI applies).
    g.primary_rx_state = ReceiverState{spec.primary_rx, Listening::at(spec.primary_tx.pos),
                                       p_secondary_w > 0, p_secondary_w, spec.si_beta_secondary};

    if (spec.mode == FdLinkMode::TwoNode) {
        // Secondary receiver is the primary transmitter itself.
        g.secondary_rx_state = ReceiverState{spec.primary_tx, Listening::at(spec.primary_rx.pos),
                                             true, p_primary_w, spec.si_beta_primary};
    } else {
        g.secondary_rx_state = ReceiverState{spec.secondary_rx, Listening::at(spec.primary_rx.pos),
                                             false, 0, 0};
    }
    return g;
}

} // namespace

LinkSinrs link_sinrs(const FdLinkSpec& spec, double p_primary_w, double p_secondary_w) {
    const LinkGeometry g = make_geometry(spec, p_primary_w, p_secondary_w);
    const SinrOptions opts{spec.ibi_enabled};
    LinkSinrs out;
    out.primary_rx = sinr(g.primary_rx_state, g.primary, {g.secondary}, spec.channel, opts).sinr;
    out.secondary_rx =
        sinr(g.secondary_rx_state, g.secondary, {g.primary}, spec.channel, opts).sinr;
    return out;
}

std::optional<PowerSolution> evaluate_power_pair(const FdLinkSpec& spec, double p_primary_w,
                                                 double p_secondary_w) {
    const LinkGeometry g = make_geometry(spec, p_primary_w, p_secondary_w);
    const SinrOptions opts{spec.ibi_enabled};

    const SinrBreakdown at_primary_rx =
        sinr(g.primary_rx_state, g.primary, {g.secondary}, spec.channel, opts);
    const SinrBreakdown at_secondary_rx =
        sinr(g.secondary_rx_state, g.secondary, {g.primary}, spec.channel, opts);

    const auto mcs_primary = spec.mcs.match(at_primary_rx.sinr);
    const auto mcs_secondary = spec.mcs.match(at_secondary_rx.sinr);

    if (spec.payload_bits_primary > 0 && !mcs_primary) return std::nullopt;
    if (spec.payload_bits_secondary > 0 && !mcs_secondary) return std::nullopt;

    PowerSolution sol;
    sol.p_primary_w = p_primary_w;
    sol.p_secondary_w = p_secondary_w;
    sol.rate_primary_bps = mcs_primary ? mcs_primary->data_rate_bps : 0;
    sol.rate_secondary_bps = mcs_secondary ? mcs_secondary->data_rate_bps : 0;
    sol.mcs_primary = mcs_primary ? mcs_primary->index : 0;
    sol.mcs_secondary = mcs_secondary ? mcs_secondary->index : 0;
    sol.sinr_primary_rx = at_primary_rx.sinr;
    sol.sinr_secondary_rx = at_secondary_rx.sinr;
    sol.occupation_s = occupation_time(spec.payload_bits_primary, sol.rate_primary_bps,
                                       spec.payload_bits_secondary, sol.rate_secondary_bps);
    sol.throughput_bps = link_throughput(spec.payload_bits_primary, spec.payload_bits_secondary,
                                         spec.t_overhead_s, sol.occupation_s);
    return sol;
}

bool solution_preferred(const PowerSolution& a, const PowerSolution& b) {
    if (a.occupation_s != b.occupation_s) return a.occupation_s < b.occupation_s;
    if (a.throughput_bps != b.throughput_bps) return a.throughput_bps > b.throughput_bps;
    const double ta = a.p_primary_w + a.p_secondary_w;
    const double tb = b.p_primary_w + b.p_secondary_w;
    if (ta != tb) return ta < tb;
    return a.p_primary_w < b.p_primary_w;
}

namespace {

void consider(std::optional<PowerSolution>& best, const std::optional<PowerSolution>& cand) {
    if (!cand) return;
    if (!best || solution_preferred(*cand, *best)) best = *cand;
}

/// SINR at the primary receiver as a closed form in the two powers; used only
/// to seed grid-index guesses that are then validated with evaluate_power_pair.
struct PrimaryRxModel {
    double a1 = 0; // received signal per watt of primary power
    double b1 = 0; // interference per watt of secondary power
    double c1 = 0; // constant interference plus noise
};

PrimaryRxModel primary_rx_model(const FdLinkSpec& spec) {
    PrimaryRxModel m;
    const LinkGeometry g = make_geometry(spec, 1.0, 1.0);
    m.a1 = transmission_power_at(g.primary, g.primary_rx_state.node,
                                 g.primary_rx_state.listening, spec.channel);
    m.b1 = spec.si_beta_secondary;
    m.c1 = spec.channel.noise_w;
    return m;
}

} // namespace

PowerOutcome optimize_powers(const FdLinkSpec& spec) {
    const int np = spec.primary_grid.point_count();
    const int ns = spec.secondary_grid.point_count();
    const PrimaryRxModel m = primary_rx_model(spec);
    const bool one_way = spec.payload_bits_secondary <= 0;

    std::optional<PowerSolution> best;

    for (int kp = np - 1; kp >= 0; --kp) {
        const double p_primary = spec.primary_grid.at(kp);

        if (one_way) {
            // No secondary DATA: the secondary transmitter stays silent.
            consider(best, evaluate_power_pair(spec, p_primary, 0.0));
            continue;
        }

        // MCS tier supported at the primary receiver for a given secondary
        // power, through the exact radio-model SINR path (0 when below the
        // first tier). Monotone non-increasing in k.
        auto primary_tier_at = [&](int k) {
            const LinkGeometry g = make_geometry(spec, p_primary, spec.secondary_grid.at(k));
            const SinrBreakdown s = sinr(g.primary_rx_state, g.primary, {g.secondary},
                                         spec.channel, SinrOptions{spec.ibi_enabled});
            const auto e = spec.mcs.match(s.sinr);
            return e ? e->index : 0;
        };

        // Feasible primary-rate interval: lowest tier with the secondary at
        // max power, highest tier with the secondary at min power.
        const int tier_max = primary_tier_at(0);
        if (tier_max == 0) continue; // primary link cannot close at this power
        const int tier_min = std::max(1, primary_tier_at(ns - 1));

        for (const auto& entry : spec.mcs.entries()) {
            const int idx = entry.index;
            if (idx < tier_min || idx > tier_max) continue;

            // Largest grid secondary power that still supports this primary
            // tier. The closed form sinr1 = a1 p / (b1 q + c1) >= gamma only
            // seeds the index; the exact predicate settles it.
            int kq = ns - 1;
            if (m.b1 > 0) {
                const double bound = (m.a1 * p_primary / entry.sinr_threshold - m.c1) / m.b1;
                const double guess =
                    std::floor((bound - spec.secondary_grid.min_w) / spec.secondary_grid.step_w);
                kq = static_cast<int>(std::max(0.0, std::min<double>(guess, ns - 1)));
            }
            while (kq >= 0 && primary_tier_at(kq) < idx) --kq;
            while (kq + 1 < ns && primary_tier_at(kq + 1) >= idx) ++kq;
            if (kq < 0) continue;

            const auto at_ub = evaluate_power_pair(spec, p_primary, spec.secondary_grid.at(kq));
            if (!at_ub) continue; // secondary link cannot close even at its largest power

            // Cheapest secondary power that keeps the same occupation time:
            // walk down while the candidate's D does not degrade.
            std::optional<PowerSolution> cand = at_ub;
            for (int k = kq - 1; k >= 0; --k) {
                const auto s = evaluate_power_pair(spec, p_primary, spec.secondary_grid.at(k));
                if (s && s->occupation_s <= at_ub->occupation_s) {
                    cand = s;
                } else {
                    break;
                }
            }
            consider(best, cand);
        }
    }
    return PowerOutcome{best};
}

PowerOutcome brute_force_oracle(const FdLinkSpec& spec) {
    const long long np = spec.primary_grid.point_count();
    const long long ns = spec.secondary_grid.point_count();
    if (np * ns > 1'000'000) {
        throw std::invalid_argument("brute_force_oracle: grid above 10^6 pairs");
    }
    const bool one_way = spec.payload_bits_secondary <= 0;

    std::optional<PowerSolution> best;
    for (int kp = 0; kp < np; ++kp) {
        if (one_way) {
            consider(best, evaluate_power_pair(spec, spec.primary_grid.at(kp), 0.0));
            continue;
        }
        for (int kq = 0; kq < ns; ++kq) {
            consider(best,
                     evaluate_power_pair(spec, spec.primary_grid.at(kp), spec.secondary_grid.at(kq)));
        }
    }
    return PowerOutcome{best};
}

} // namespace mmfd
