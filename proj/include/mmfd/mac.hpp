#pragma once

#include "mmfd/medium.hpp"
#include "mmfd/rng.hpp"
#include "mmfd/scenario.hpp"

#include <cstdint>

namespace mmfd {

class Simulation;

enum class TimerKind : std::int64_t {
    CtsTimeout = 1,
    DataLaunch,
    AckPhase,
    AckPhaseEnd,
    DataAbort,
    ToneExpect,
    Arrival,
};

/// Per-node MAC state machine: contention (backoff, NAV, busy-tone freeze),
/// transaction roles for the directional FD handshakes and the two
/// half-duplex baselines, and the retry/contention-window bookkeeping.
class Mac : public MacHooks {
public:
    Mac(NodeId self, Simulation& sim);

    void start();

    void on_tick(const Event& ev);
    void on_timer(const Event& ev);

    // MacHooks
    void on_tx_started(const Transmission& t) override;
    void on_tx_done(const Transmission& t) override;
    void on_rx_started(const Transmission& t) override;
    void on_rx_complete(const Transmission& t, bool decoded, double min_sinr) override;
    void on_tone(NodeId identity, bool start, NodeId emitter, bool state_changed) override;
    void on_medium_busy() override;
    void on_medium_idle() override;
    void on_nav_update() override;

    bool engaged() const { return eng_.role != Role::None; }
    /// Engaged in a transaction strictly before t (omniscient attribution).
    bool engaged_before(SimTime t) const { return engaged() && eng_.since < t; }
    int current_cw() const { return cw_; }
    int current_backoff() const { return backoff_; }
    bool frozen() const { return frozen_; }

private:
    enum class Role { None, Initiator, Responder, Secondary };

    struct Engagement {
        Role role = Role::None;
        TxnId txn = -1;
        SimTime since;
        NodeId peer = kNoNode;
        NodeId third = kNoNode;
        CtsWorkMode mode = CtsWorkMode::HdReceive;
        TxnType type = TxnType::Hd;
        bool receiver_tone_busy = false; ///< protocol-visible snapshot at RTS start
        bool receiver_engaged = false;   ///< omniscient snapshot at RTS start
        SimTime rts_start;
        std::int64_t contention_gap = 0;
        SimTime data_start;
        std::int64_t own_data_air = 0;
        std::int64_t peer_data_air = 0;
        std::int64_t max_data_air = 0;
        SimTime ack_start;
        SimTime ack_end;
        bool cts_received = false;
        bool secondary_leg_ok = false;
        bool peer_data_ok = false;
        bool own_acked = false;
        bool sent_data = false;
        bool data_rx_started = false;
        bool expects_data = false;
        double own_data_power = 0; ///< 0 keeps the node's configured power
        double peer_data_power = 0;
        int own_data_mcs = 0;
        int peer_data_mcs = 0;
        std::int64_t own_payload_bits = 0;
        std::int64_t peer_payload_bits = 0;
    };

    // services
    Engine& eng();
    Medium& med();
    const ScenarioConfig& cfg() const;
    StatsRecorder& stats();

    // contention
    void next_packet();
    int draw_backoff();
    void resume_contention();
    void invalidate_tick();
    void schedule_tick(SimTime t);
    void begin_attempt(SimTime idle_start);
    void attempt_failed();
    void attempt_succeeded();

    // transactions
    void start_responder(const Transmission& rts);
    void start_secondary(const Transmission& rts2);
    void negotiate_powers();
    void close_transaction();
    void abort_attempt();
    void abort_passive();
    void release_engagement();
    void schedule_txn_timer(TimerKind k, SimTime t);
    int select_mcs(NodeId dst, bool fd) const;
    std::int64_t data_air(int mcs_index, std::int64_t payload_bits) const;
    std::int64_t nav_us(std::int64_t ns) const;
    void emit_end_tone();

    NodeId self_;
    Simulation* sim_;
    RngStream rng_;

    // cached control-frame airtimes
    std::int64_t rts_air_ = 0;
    std::int64_t cts_air_ = 0;
    std::int64_t ack_air_ = 0;

    // traffic / contention state
    bool has_packet_ = false;
    NodeId pkt_dst_ = kNoNode;
    std::int64_t pkt_bits_ = 0;
    std::int64_t queued_arrivals_ = 0;
    int retry_ = 0;
    int cw_ = 16;
    int backoff_ = -1;
    bool first_draw_done_ = false;
    bool frozen_ = false;
    NodeId frozen_on_ = kNoNode;
    std::uint64_t tick_gen_ = 0;
    bool tick_pending_ = false;
    SimTime tick_time_;
    SimTime contention_floor_;
    bool tone_committed_ = false;

    std::uint64_t eng_gen_ = 0;
    Engagement eng_;
};

} // namespace mmfd
