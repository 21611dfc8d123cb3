#include "mmfd/mac.hpp"

#include "mmfd/power_control.hpp"
#include "mmfd/simulation.hpp"

#include <algorithm>

namespace mmfd {

namespace {
constexpr std::int64_t kTimeoutMargin = microseconds(1);
constexpr std::int64_t kCloseDelay = 1; // 1 ns past the ACK phase end
} // namespace

Mac::Mac(NodeId self, Simulation& sim)
    : self_(self),
      sim_(&sim),
      rng_(mix_seed(sim.cfg().seed, sim.run_seed()), static_cast<std::uint64_t>(self)) {
    const auto& c = cfg();
    cw_ = c.timing.cw_min;
    Frame probe;
    probe.kind = FrameKind::Rts;
    rts_air_ = encode_frame(probe, c.frame_format, c.mcs).airtime_ns;
    probe.kind = FrameKind::Cts;
    cts_air_ = encode_frame(probe, c.frame_format, c.mcs).airtime_ns;
    probe.kind = FrameKind::Ack;
    ack_air_ = encode_frame(probe, c.frame_format, c.mcs).airtime_ns;
}

Engine& Mac::eng() { return sim_->engine(); }
Medium& Mac::med() { return sim_->medium(); }
const ScenarioConfig& Mac::cfg() const { return sim_->cfg(); }
StatsRecorder& Mac::stats() { return sim_->stats(); }

std::int64_t Mac::data_air(int mcs_index, std::int64_t payload_bits) const {
    Frame f;
    f.kind = FrameKind::Data;
    f.mcs_index = mcs_index;
    f.payload_bits = payload_bits;
    return encode_frame(f, cfg().frame_format, cfg().mcs).airtime_ns;
}

std::int64_t Mac::nav_us(std::int64_t ns) const { return (ns + 999) / 1000; }

int Mac::select_mcs(NodeId dst, bool fd) const {
    if (cfg().traffic.fixed_mcs > 0) return cfg().traffic.fixed_mcs;
    const double s = med().genie_link_sinr(self_, dst, fd);
    const auto entry = cfg().mcs.match(s);
    return entry ? entry->index : cfg().mcs.entries().front().index;
}

void Mac::start() {
    const auto& spec = med().node(self_);
    if (!spec.has_traffic) return;
    if (cfg().traffic.saturated || spec.is_ap) {
        next_packet();
        resume_contention();
    } else {
        const double mean_s = 1.0 / cfg().traffic.arrival_rate_pps;
        eng().schedule(eng().now() + seconds_ns(rng_.exponential(mean_s)), EventKind::TimerExpiry,
                       self_, {static_cast<std::int64_t>(TimerKind::Arrival), 0});
    }
}

void Mac::next_packet() {
    const auto& spec = med().node(self_);
    retry_ = 0;
    pkt_bits_ = cfg().traffic.payload_bits;
    if (spec.is_ap) {
        // The AP keeps one pending downlink packet; a fresh destination is
        // drawn after each delivery or drop.
        if (cfg().traffic.ap_dst == ApDstPolicy::Fixed && cfg().traffic.ap_fixed_dst != kNoNode) {
            pkt_dst_ = cfg().traffic.ap_fixed_dst;
            has_packet_ = true;
        } else {
            std::vector<NodeId> users;
            for (int i = 0; i < med().node_count(); ++i) {
                if (!med().node(i).is_ap) users.push_back(i);
            }
            has_packet_ = !users.empty();
            pkt_dst_ = users.empty()
                           ? kNoNode
                           : users[rng_.uniform_int(0, static_cast<std::int64_t>(users.size()) - 1)];
        }
        return;
    }
    NodeId ap = kNoNode;
    for (int i = 0; i < med().node_count(); ++i) {
        if (med().node(i).is_ap) ap = i;
    }
    pkt_dst_ = ap;
    if (cfg().traffic.saturated) {
        has_packet_ = ap != kNoNode;
    } else {
        has_packet_ = ap != kNoNode && queued_arrivals_ > 0;
        if (has_packet_) --queued_arrivals_;
    }
}

int Mac::draw_backoff() {
    if (!first_draw_done_) {
        first_draw_done_ = true;
        auto it = cfg().forced_first_backoff.find(self_);
        if (it != cfg().forced_first_backoff.end()) return it->second;
    }
    return static_cast<int>(rng_.uniform_int(0, cw_ - 1));
}

void Mac::invalidate_tick() {
    ++tick_gen_;
    tick_pending_ = false;
}

void Mac::schedule_tick(SimTime t) {
    ++tick_gen_;
    tick_pending_ = true;
    tick_time_ = t;
    eng().schedule(t, EventKind::BackoffSlot, self_, {static_cast<std::int64_t>(tick_gen_), 0});
}

void Mac::resume_contention() {
    if (engaged() || !has_packet_) return;
    const SimTime now = eng().now();
    if (now.ns > sim_->cutoff_ns()) return;
    if (backoff_ < 0) backoff_ = draw_backoff();
    if (cfg().busy_tones && med().tone_active(pkt_dst_)) {
        frozen_ = true;
        frozen_on_ = pkt_dst_;
        invalidate_tick();
        return;
    }
    frozen_ = false;
    if (med().energy_busy(self_)) {
        invalidate_tick();
        return; // rescheduled on the idle transition
    }
    const SimTime idle0 =
        std::max({med().idle_start(self_), med().nav_until(self_), contention_floor_});
    schedule_tick(std::max(now, idle0 + cfg().timing.difs_ns));
}

void Mac::on_tick(const Event& ev) {
    if (static_cast<std::uint64_t>(ev.payload.a) != tick_gen_) return;
    tick_pending_ = false;
    if (engaged() || !has_packet_ || frozen_) return;
    const SimTime now = ev.time;
    if (now.ns > sim_->cutoff_ns()) return;
    if (med().energy_busy_strictly_before(self_, now)) return; // idle callback resumes
    const SimTime idle0 =
        std::max({med().idle_start(self_), med().nav_until(self_), contention_floor_});
    if (idle0 + cfg().timing.difs_ns > now) {
        schedule_tick(idle0 + cfg().timing.difs_ns);
        return;
    }
    if (cfg().busy_tones && med().tone_active_strictly_before(pkt_dst_, now)) {
        frozen_ = true;
        frozen_on_ = pkt_dst_;
        return;
    }
    if (backoff_ == 0) {
        begin_attempt(idle0);
    } else {
        --backoff_;
        schedule_tick(now + cfg().timing.slot_ns);
    }
}

void Mac::begin_attempt(SimTime idle_start) {
    const SimTime now = eng().now();
    backoff_ = -1;
    ++eng_gen_;
    eng_ = {};
    eng_.role = Role::Initiator;
    eng_.txn = sim_->next_txn();
    eng_.since = now;
    eng_.peer = pkt_dst_;
    eng_.rts_start = now;
    eng_.contention_gap = now - idle_start;
    eng_.receiver_tone_busy = cfg().busy_tones && med().tone_active_strictly_before(pkt_dst_, now);
    eng_.receiver_engaged = sim_->node_busy_before(pkt_dst_, now);
    eng_.own_payload_bits = pkt_bits_;
    const bool fd_variant = cfg().variant == Variant::Dfdmac;
    eng_.own_data_mcs = select_mcs(pkt_dst_, fd_variant);
    eng_.own_data_air = data_air(eng_.own_data_mcs, pkt_bits_);
    tone_committed_ = false;

    Frame rts;
    rts.kind = FrameKind::Rts;
    rts.src = self_;
    rts.dst = pkt_dst_;
    rts.duplex_fd = fd_variant && med().node(self_).fd_capable;
    rts.work_mode = static_cast<std::uint8_t>(RtsWorkMode::Primary);
    rts.mcs_index = eng_.own_data_mcs;
    rts.payload_bits = pkt_bits_;
    rts.meta_data_air_ns = eng_.own_data_air;
    rts.duration_us = nav_us(3 * cfg().timing.sifs_ns + cts_air_ + eng_.own_data_air + ack_air_);
    med().queue_frame(rts, now, eng_.txn);
    med().set_listening(self_, ListenMode::Off);
}

void Mac::on_tx_started(const Transmission& t) {
    if (!cfg().busy_tones) return;
    if (t.frame.kind != FrameKind::Rts) return;
    // An RTS goes on air together with the start tones of its transmitter
    // and of its receiver.
    med().emit_tone(self_, self_, true);
    med().emit_tone(t.dst, self_, true);
}

void Mac::on_tx_done(const Transmission& t) {
    if (!engaged() || t.txn != eng_.txn) return;
    const SimTime now = eng().now();
    const std::int64_t sifs = cfg().timing.sifs_ns;
    switch (t.frame.kind) {
        case FrameKind::Rts:
            if (eng_.role == Role::Initiator) {
                med().set_listening(self_, ListenMode::Toward, eng_.peer);
                const std::int64_t extra =
                    cfg().variant == Variant::Dfdmac ? rts_air_ + sifs : 0;
                schedule_txn_timer(TimerKind::CtsTimeout,
                                   now + sifs + extra + cts_air_ + kTimeoutMargin);
            } else {
                // Secondary RTS done: the CTS to the initiator goes out SIFS
                // later, simultaneously with the secondary receiver's CTS,
                // which is received in full duplex.
                Frame cts;
                cts.kind = FrameKind::Cts;
                cts.src = self_;
                cts.dst = eng_.peer;
                cts.duplex_fd = true;
                cts.work_mode = static_cast<std::uint8_t>(CtsWorkMode::ThreeNodeFd);
                cts.mcs_index = eng_.peer_data_mcs;
                cts.meta_data_start_ns = eng_.data_start.ns;
                cts.meta_max_data_air_ns = eng_.max_data_air;
                cts.meta_power_w = eng_.peer_data_power;
                cts.duration_us = nav_us((eng_.ack_end - now) - sifs - cts_air_);
                med().queue_frame(cts, now + sifs, eng_.txn);
                med().set_listening(self_, ListenMode::Toward, eng_.third);
            }
            break;
        case FrameKind::Cts:
            if (eng_.role == Role::Responder || eng_.role == Role::Secondary) {
                // Turn to the DATA source; a CTS reception ending at this
                // same instant (three-node mode) survives the beam switch.
                med().set_listening(self_, ListenMode::Toward, eng_.peer);
            }
            break;
        case FrameKind::Data:
            if (eng_.role == Role::Initiator && eng_.mode != CtsWorkMode::TwoNodeFd) {
                med().set_listening(self_, ListenMode::Toward, eng_.peer);
            }
            break;
        case FrameKind::Ack:
            break;
    }
}

void Mac::on_rx_started(const Transmission& t) {
    if (engaged() && t.txn == eng_.txn && t.frame.kind == FrameKind::Data && t.dst == self_) {
        eng_.data_rx_started = true;
    }
}

void Mac::on_rx_complete(const Transmission& t, bool decoded, double min_sinr) {
    (void)min_sinr;
    if (!engaged()) {
        if (!decoded || t.frame.kind != FrameKind::Rts) return;
        if (eng().now().ns > sim_->cutoff_ns() + cfg().drain_ns / 2) return;
        if (t.frame.work_mode == static_cast<std::uint8_t>(RtsWorkMode::Primary)) {
            start_responder(t);
        } else {
            start_secondary(t);
        }
        return;
    }
    if (t.txn != eng_.txn) return;

    switch (t.frame.kind) {
        case FrameKind::Cts:
            if (eng_.role == Role::Initiator && t.src == eng_.peer) {
                if (!decoded) return; // timeout path handles the failure
                eng_.cts_received = true;
                eng_.mode = static_cast<CtsWorkMode>(t.frame.work_mode);
                eng_.type = eng_.mode == CtsWorkMode::HdReceive
                                ? TxnType::Hd
                                : (eng_.mode == CtsWorkMode::TwoNodeFd ? TxnType::TwoNodeFd
                                                                       : TxnType::ThreeNodeFd);
                eng_.own_data_mcs = t.frame.mcs_index;
                if (t.frame.meta_power_w > 0) eng_.own_data_power = t.frame.meta_power_w;
                eng_.own_data_air = data_air(eng_.own_data_mcs, eng_.own_payload_bits);
                eng_.data_start = SimTime{t.frame.meta_data_start_ns};
                eng_.max_data_air = t.frame.meta_max_data_air_ns;
                eng_.ack_start = eng_.data_start + eng_.max_data_air + cfg().timing.sifs_ns;
                eng_.ack_end = eng_.ack_start + ack_air_;
                eng_.expects_data = eng_.mode == CtsWorkMode::TwoNodeFd;
                schedule_txn_timer(TimerKind::DataLaunch, eng_.data_start);
                schedule_txn_timer(TimerKind::AckPhase, eng_.ack_start);
                schedule_txn_timer(TimerKind::AckPhaseEnd, eng_.ack_end + kCloseDelay);
            } else if (eng_.role == Role::Responder && t.src == eng_.third) {
                eng_.secondary_leg_ok = decoded;
            }
            break;
        case FrameKind::Data:
            if (t.dst == self_) eng_.peer_data_ok = decoded;
            break;
        case FrameKind::Ack:
            if (t.dst == self_) eng_.own_acked = decoded;
            break;
        case FrameKind::Rts:
            break; // engaged nodes ignore further requests
    }
}

void Mac::start_responder(const Transmission& rts) {
    const SimTime now = eng().now();
    ++eng_gen_;
    eng_ = {};
    eng_.role = Role::Responder;
    eng_.txn = rts.txn;
    eng_.since = now;
    eng_.peer = rts.src;
    eng_.rts_start = rts.start;
    invalidate_tick();
    frozen_ = false;
    tone_committed_ = false;

    const auto& me = med().node(self_);
    const bool dfdmac = cfg().variant == Variant::Dfdmac;
    const bool both_fd = rts.frame.duplex_fd && me.fd_capable;

    eng_.peer_data_air = rts.frame.meta_data_air_ns;
    eng_.peer_data_mcs = rts.frame.mcs_index;
    eng_.peer_payload_bits = rts.frame.payload_bits;

    // Mode decision: answer back in two-node FD when the queued packet is
    // for the initiator, relay in three-node FD when it is for a third node
    // and the initiator's beam does not break that relay link, otherwise
    // plain half-duplex reception.
    eng_.mode = CtsWorkMode::HdReceive;
    if (dfdmac && both_fd && has_packet_) {
        if (pkt_dst_ == eng_.peer) {
            eng_.mode = CtsWorkMode::TwoNodeFd;
        } else if (pkt_dst_ != kNoNode) {
            const double s = med().genie_secondary_sinr(self_, pkt_dst_, eng_.peer, self_,
                                                        me.tx_power_w,
                                                        med().node(eng_.peer).tx_power_w);
            if (cfg().mcs.match(s)) eng_.mode = CtsWorkMode::ThreeNodeFd;
        }
    }

    if (eng_.mode != CtsWorkMode::HdReceive) {
        eng_.own_data_mcs = select_mcs(pkt_dst_, true);
        eng_.own_payload_bits = pkt_bits_;
        if (cfg().power_control) negotiate_powers();
        eng_.own_data_air = data_air(eng_.own_data_mcs, eng_.own_payload_bits);
        eng_.peer_data_air = data_air(eng_.peer_data_mcs, eng_.peer_payload_bits);
    }

    const std::int64_t sifs = cfg().timing.sifs_ns;
    switch (eng_.mode) {
        case CtsWorkMode::HdReceive: {
            eng_.type = TxnType::Hd;
            eng_.data_start = now + sifs + cts_air_ + sifs;
            eng_.max_data_air = eng_.peer_data_air;
            eng_.expects_data = true;
            break;
        }
        case CtsWorkMode::TwoNodeFd: {
            eng_.type = TxnType::TwoNodeFd;
            eng_.data_start = now + sifs + cts_air_ + sifs;
            eng_.max_data_air = std::max(eng_.peer_data_air, eng_.own_data_air);
            eng_.expects_data = true;
            break;
        }
        case CtsWorkMode::ThreeNodeFd: {
            eng_.type = TxnType::ThreeNodeFd;
            eng_.third = pkt_dst_;
            eng_.data_start = now + sifs + rts_air_ + sifs + cts_air_ + sifs;
            eng_.max_data_air = std::max(eng_.peer_data_air, eng_.own_data_air);
            eng_.expects_data = true;
            break;
        }
    }
    eng_.ack_start = eng_.data_start + eng_.max_data_air + sifs;
    eng_.ack_end = eng_.ack_start + ack_air_;

    if (eng_.mode == CtsWorkMode::ThreeNodeFd) {
        Frame rts2;
        rts2.kind = FrameKind::Rts;
        rts2.src = self_;
        rts2.dst = eng_.third;
        rts2.duplex_fd = true;
        rts2.work_mode = static_cast<std::uint8_t>(RtsWorkMode::Secondary);
        rts2.mcs_index = eng_.own_data_mcs;
        rts2.payload_bits = eng_.own_payload_bits;
        rts2.meta_data_air_ns = eng_.own_data_air;
        rts2.meta_data_start_ns = eng_.data_start.ns;
        rts2.meta_max_data_air_ns = eng_.max_data_air;
        rts2.duration_us = nav_us((eng_.ack_end - now) - sifs - rts_air_);
        med().queue_frame(rts2, now + sifs, eng_.txn, eng_.own_data_power);
        med().set_listening(self_, ListenMode::Off);
        schedule_txn_timer(TimerKind::DataLaunch, eng_.data_start);
    } else {
        Frame cts;
        cts.kind = FrameKind::Cts;
        cts.src = self_;
        cts.dst = eng_.peer;
        cts.duplex_fd = me.fd_capable;
        cts.work_mode = static_cast<std::uint8_t>(eng_.mode);
        cts.mcs_index = eng_.peer_data_mcs;
        cts.meta_data_start_ns = eng_.data_start.ns;
        cts.meta_max_data_air_ns = eng_.max_data_air;
        cts.meta_power_w = eng_.peer_data_power;
        cts.duration_us = nav_us((eng_.ack_end - now) - sifs - cts_air_);
        med().queue_frame(cts, now + sifs, eng_.txn);
        med().set_listening(self_, ListenMode::Off);
        if (eng_.mode == CtsWorkMode::TwoNodeFd) {
            schedule_txn_timer(TimerKind::DataLaunch, eng_.data_start);
        } else {
            schedule_txn_timer(TimerKind::DataAbort, eng_.data_start + kTimeoutMargin);
        }
    }
    schedule_txn_timer(TimerKind::AckPhase, eng_.ack_start);
    schedule_txn_timer(TimerKind::AckPhaseEnd, eng_.ack_end + kCloseDelay);
}

void Mac::negotiate_powers() {
    FdLinkSpec spec;
    spec.mode =
        eng_.mode == CtsWorkMode::TwoNodeFd ? FdLinkMode::TwoNode : FdLinkMode::ThreeNode;
    const auto& peer = med().node(eng_.peer);
    const auto& me = med().node(self_);
    spec.primary_tx = RadioNode{peer.pos, peer.antenna};
    spec.primary_rx = RadioNode{me.pos, me.antenna};
    if (spec.mode == FdLinkMode::ThreeNode) {
        const auto& third = med().node(pkt_dst_);
        spec.secondary_rx = RadioNode{third.pos, third.antenna};
    }
    spec.payload_bits_primary = eng_.peer_payload_bits;
    spec.payload_bits_secondary = eng_.own_payload_bits;
    spec.primary_grid = PowerGrid{cfg().pc_grid_min_w, peer.tx_power_w, cfg().pc_grid_step_w};
    spec.secondary_grid = PowerGrid{cfg().pc_grid_min_w, me.tx_power_w, cfg().pc_grid_step_w};
    spec.si_beta_primary = peer.si_beta;
    spec.si_beta_secondary = me.si_beta;
    spec.ibi_enabled = cfg().ibi_enabled;
    spec.channel = cfg().channel;
    spec.mcs = cfg().mcs;
    const auto out = optimize_powers(spec);
    if (!out.feasible()) return;
    eng_.peer_data_power = out.solution->p_primary_w;
    eng_.own_data_power = out.solution->p_secondary_w;
    eng_.peer_data_mcs = out.solution->mcs_primary;
    eng_.own_data_mcs = out.solution->mcs_secondary;
}

void Mac::start_secondary(const Transmission& rts2) {
    const SimTime now = eng().now();
    ++eng_gen_;
    eng_ = {};
    eng_.role = Role::Secondary;
    eng_.txn = rts2.txn;
    eng_.since = now;
    eng_.peer = rts2.src;
    invalidate_tick();
    frozen_ = false;
    tone_committed_ = false;

    eng_.peer_data_air = rts2.frame.meta_data_air_ns;
    eng_.data_start = SimTime{rts2.frame.meta_data_start_ns};
    eng_.max_data_air = rts2.frame.meta_max_data_air_ns;
    eng_.ack_start = eng_.data_start + eng_.max_data_air + cfg().timing.sifs_ns;
    eng_.ack_end = eng_.ack_start + ack_air_;
    eng_.expects_data = true;

    Frame cts;
    cts.kind = FrameKind::Cts;
    cts.src = self_;
    cts.dst = eng_.peer;
    cts.duplex_fd = med().node(self_).fd_capable;
    cts.work_mode = static_cast<std::uint8_t>(CtsWorkMode::HdReceive);
    cts.mcs_index = rts2.frame.mcs_index;
    cts.meta_data_start_ns = eng_.data_start.ns;
    cts.meta_max_data_air_ns = eng_.max_data_air;
    cts.duration_us = nav_us((eng_.ack_end - now) - cfg().timing.sifs_ns - cts_air_);
    med().queue_frame(cts, now + cfg().timing.sifs_ns, eng_.txn);
    med().set_listening(self_, ListenMode::Off);

    schedule_txn_timer(TimerKind::DataAbort, eng_.data_start + kTimeoutMargin);
    schedule_txn_timer(TimerKind::AckPhase, eng_.ack_start);
    schedule_txn_timer(TimerKind::AckPhaseEnd, eng_.ack_end + kCloseDelay);
}

void Mac::schedule_txn_timer(TimerKind k, SimTime t) {
    eng().schedule(t, EventKind::TimerExpiry, self_,
                   {static_cast<std::int64_t>(k), static_cast<std::int64_t>(eng_gen_)});
}

void Mac::on_timer(const Event& ev) {
    const auto kind = static_cast<TimerKind>(ev.payload.a);
    if (kind == TimerKind::Arrival) {
        ++queued_arrivals_;
        if (!has_packet_) {
            next_packet();
            resume_contention();
        }
        if (eng().now().ns <= sim_->cutoff_ns()) {
            const double mean_s = 1.0 / cfg().traffic.arrival_rate_pps;
            eng().schedule(eng().now() + seconds_ns(rng_.exponential(mean_s)),
                           EventKind::TimerExpiry, self_,
                           {static_cast<std::int64_t>(TimerKind::Arrival), 0});
        }
        return;
    }
    if (kind == TimerKind::ToneExpect) {
        // No transaction materialized out of the RTS that carried our tone.
        if (tone_committed_ && !engaged()) {
            tone_committed_ = false;
            med().emit_tone(self_, self_, false);
        }
        return;
    }
    if (static_cast<std::uint64_t>(ev.payload.b) != eng_gen_ || !engaged()) return;

    switch (kind) {
        case TimerKind::CtsTimeout:
            if (!eng_.cts_received) abort_attempt();
            break;
        case TimerKind::DataLaunch: {
            if (eng_.role == Role::Responder && eng_.mode == CtsWorkMode::ThreeNodeFd &&
                !eng_.secondary_leg_ok) {
                break; // relay leg never established; keep receiving only
            }
            Frame data;
            data.kind = FrameKind::Data;
            data.src = self_;
            data.dst = eng_.role == Role::Responder && eng_.mode == CtsWorkMode::ThreeNodeFd
                           ? eng_.third
                           : eng_.peer;
            data.duplex_fd = cfg().variant == Variant::Dfdmac;
            data.mcs_index = eng_.own_data_mcs;
            data.payload_bits = eng_.own_payload_bits;
            data.duration_us = nav_us(cfg().timing.sifs_ns + ack_air_);
            med().queue_frame(data, eng().now(), eng_.txn, eng_.own_data_power);
            eng_.sent_data = true;
            if (eng_.role == Role::Initiator && eng_.mode != CtsWorkMode::TwoNodeFd) {
                med().set_listening(self_, ListenMode::Off); // half-duplex transmit phase
            }
            break;
        }
        case TimerKind::AckPhase:
            if (eng_.role == Role::Responder && eng_.mode == CtsWorkMode::ThreeNodeFd) {
                med().set_listening(self_, ListenMode::Toward, eng_.third);
            }
            if (eng_.expects_data && eng_.peer_data_ok) {
                Frame ack;
                ack.kind = FrameKind::Ack;
                ack.src = self_;
                ack.dst = eng_.peer;
                ack.duplex_fd = cfg().variant == Variant::Dfdmac;
                med().queue_frame(ack, eng().now(), eng_.txn);
            }
            break;
        case TimerKind::AckPhaseEnd:
            close_transaction();
            break;
        case TimerKind::DataAbort:
            if (!eng_.data_rx_started && !eng_.sent_data) abort_passive();
            break;
        case TimerKind::ToneExpect:
        case TimerKind::Arrival:
            break;
    }
}

void Mac::emit_end_tone() {
    if (cfg().busy_tones) med().emit_tone(self_, self_, false);
}

void Mac::abort_attempt() {
    // Initiator gave up waiting for the CTS.
    emit_end_tone();
    stats().txn_close(TxnRecord{eng_.txn, eng_.type, self_, eng_.rts_start, eng().now(),
                                eng_.contention_gap, false});
    if (eng_.receiver_tone_busy) {
        // The receiver was committed elsewhere; retrying without touching
        // the contention window avoids the deafness penalty.
        stats().deaf_holdoff(self_);
        backoff_ = -1;
    } else {
        attempt_failed();
    }
    release_engagement();
}

void Mac::abort_passive() {
    // Expected DATA never started; the transaction died upstream.
    emit_end_tone();
    release_engagement();
}

void Mac::attempt_failed() {
    ++retry_;
    stats().retry(self_);
    const int old_cw = cw_;
    if (retry_ > cfg().timing.retry_limit) {
        stats().drop(self_);
        cw_ = cfg().timing.cw_min;
        stats().cw_change(CwChangeRecord{self_, old_cw, cw_, CwChangeReason::Drop,
                                         eng_.receiver_engaged, eng().now()});
        next_packet();
    } else {
        cw_ = std::min(cw_ * 2, cfg().timing.cw_max);
        stats().cw_change(CwChangeRecord{self_, old_cw, cw_, CwChangeReason::Failure,
                                         eng_.receiver_engaged, eng().now()});
    }
    backoff_ = -1;
}

void Mac::attempt_succeeded() {
    const int old_cw = cw_;
    cw_ = cfg().timing.cw_min;
    stats().cw_change(
        CwChangeRecord{self_, old_cw, cw_, CwChangeReason::Success, false, eng().now()});
    stats().delivery(self_, eng_.own_payload_bits);
    backoff_ = -1;
    next_packet();
}

void Mac::close_transaction() {
    emit_end_tone();
    const bool had_own_leg =
        eng_.role == Role::Initiator ||
        (eng_.role == Role::Responder && eng_.mode != CtsWorkMode::HdReceive && eng_.sent_data);

    if (eng_.role == Role::Initiator) {
        stats().txn_close(TxnRecord{eng_.txn, eng_.type, self_, eng_.rts_start, eng_.ack_end,
                                    eng_.contention_gap, true});
    }
    if (had_own_leg) {
        if (eng_.own_acked) {
            attempt_succeeded();
        } else {
            attempt_failed();
        }
    }
    release_engagement();
}

void Mac::release_engagement() {
    ++eng_gen_;
    const SimTime floor = eng_.ack_end.ns > 0 ? eng_.ack_end : eng().now();
    contention_floor_ = std::max(contention_floor_, std::min(floor, eng().now()));
    eng_ = {};
    med().set_listening(self_, ListenMode::QuasiOmni);
    resume_contention();
}

void Mac::on_tone(NodeId identity, bool start, NodeId emitter, bool state_changed) {
    if (!cfg().busy_tones) return;
    const SimTime now = eng().now();
    if (start) {
        if (identity == self_ && emitter != self_ && !engaged() && state_changed) {
            // Echo the own start tone, and end it later if no transaction
            // materializes out of the in-flight RTS.
            tone_committed_ = true;
            med().emit_tone(self_, self_, true);
            eng().schedule(now + rts_air_ + kTimeoutMargin, EventKind::TimerExpiry, self_,
                           {static_cast<std::int64_t>(TimerKind::ToneExpect), 0});
        }
        if (!engaged() && has_packet_ && pkt_dst_ == identity && !frozen_) {
            frozen_ = true;
            frozen_on_ = identity;
            invalidate_tick();
        }
    } else {
        if (frozen_ && frozen_on_ == identity) {
            frozen_ = false;
            contention_floor_ = std::max(contention_floor_, now);
            resume_contention();
        }
        if (identity == self_) tone_committed_ = false;
    }
}

void Mac::on_medium_busy() {
    if (tick_pending_ && tick_time_ > eng().now()) invalidate_tick();
}

void Mac::on_medium_idle() {
    if (!engaged() && has_packet_ && !frozen_) resume_contention();
}

void Mac::on_nav_update() {
    if (engaged()) return;
    if (tick_pending_ && tick_time_ < med().nav_until(self_) + cfg().timing.difs_ns) {
        invalidate_tick();
        resume_contention();
    }
}

} // namespace mmfd
