#pragma once

#include "mmfd/event_queue.hpp"
#include "mmfd/scenario.hpp"
#include "mmfd/stats.hpp"

#include <deque>
#include <limits>
#include <string>
#include <vector>

namespace mmfd {

class Medium;

/// Listening state of a node's radio front end.
enum class ListenMode : std::uint8_t {
    QuasiOmni, ///< unit gain from all directions (idle, backoff, RTS reception)
    Toward,    ///< receive beam pointed at a peer node
    Off,       ///< not receiving (half-duplex transmit phases)
};

/// One in-flight frame on the mmWave channel.
struct Transmission {
    int id = -1;
    Frame frame;
    FrameTiming timing;
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    double power_w = 0;
    SimTime start;
    SimTime end;
    TxnId txn = -1;

    struct ListenerTrack {
        bool tracked = false;
        bool mode_ok = true;
        ListenMode required = ListenMode::QuasiOmni;
        NodeId required_toward = kNoNode;
        double min_sinr = std::numeric_limits<double>::infinity();
    };
    std::vector<ListenerTrack> listeners;
};

/// MAC-side interface the medium raises events into.
struct MacHooks {
    virtual ~MacHooks() = default;
    virtual void on_tx_started(const Transmission& t) = 0;  ///< own frame went on air
    virtual void on_tx_done(const Transmission& t) = 0;     ///< own frame finished
    virtual void on_rx_started(const Transmission& t) = 0;  ///< frame addressed to us started
    virtual void on_rx_complete(const Transmission& t, bool decoded, double min_sinr) = 0;
    virtual void on_tone(NodeId identity, bool start, NodeId emitter, bool activation) = 0;
    virtual void on_medium_busy() = 0;
    virtual void on_medium_idle() = 0;
    virtual void on_nav_update() = 0;
};

/// Shared radio medium: active transmissions, per-node carrier sensing,
/// busy-tone state and reception SINR tracking. Zero propagation delay;
/// interference is re-evaluated at every transmission boundary and a frame
/// is lost if its receiver's SINR dipped below the decode threshold at any
/// point of its airtime.
class Medium {
public:
    Medium(Engine& engine, const ScenarioConfig& cfg, const std::vector<NodeSpec>& nodes,
           StatsRecorder& stats);

    void register_mac(NodeId id, MacHooks* mac);

    // --- radio state driven by the MACs ---
    void set_listening(NodeId node, ListenMode mode, NodeId toward = kNoNode);

    /// Queues a frame for transmission starting at `when`; airtime follows
    /// from the frame codec. Returns the transmission id.
    int queue_frame(const Frame& frame, SimTime when, TxnId txn,
                    double power_override_w = 0);

    /// Broadcasts a busy tone event (delivered to every node at this instant).
    void emit_tone(NodeId identity, NodeId emitter, bool start);

    // --- queries ---
    bool tone_active(NodeId identity) const;
    bool tone_active_strictly_before(NodeId identity, SimTime t) const;

    /// Energy carrier sense against the CCA threshold, or a busy-tone freeze
    /// on the given intended receiver (busy-tone variants only).
    bool carrier_sense_busy(NodeId node, NodeId intended_receiver) const;

    bool energy_busy(NodeId node) const { return phy_[node].energy_busy; }
    bool energy_busy_strictly_before(NodeId node, SimTime t) const;
    /// Start of the idle period as seen strictly before now (valid whenever
    /// the node is not busy strictly before now).
    SimTime idle_start(NodeId node) const { return phy_[node].last_busy_end; }
    SimTime nav_until(NodeId node) const { return phy_[node].nav_until; }

    bool node_transmitting(NodeId node) const { return phy_[node].current_tx >= 0; }
    /// Node had a frame on air that started strictly before t.
    bool transmitting_since_before(NodeId node, SimTime t) const {
        return phy_[node].current_tx >= 0 && phy_[node].tx_since < t;
    }
    const NodeSpec& node(NodeId id) const { return nodes_[id]; }
    int node_count() const { return static_cast<int>(nodes_.size()); }

    /// Clean-link SINR estimate for i -> j DATA, both ends beamformed: with
    /// `fd` the receiver also transmits at its configured power.
    double genie_link_sinr(NodeId i, NodeId j, bool fd) const;

    /// Secondary-link SINR of a relay i -> j under inter-beam interference
    /// from `interferer` transmitting toward `interferer_dst`.
    double genie_secondary_sinr(NodeId i, NodeId j, NodeId interferer,
                                NodeId interferer_dst, double p_i_w,
                                double p_interferer_w) const;

    // --- engine event handlers ---
    void handle_tx_start(const Event& ev);
    void handle_tx_end(const Event& ev);
    void handle_bt(const Event& ev);

    std::string describe_tx(int tx_id) const;
    const Transmission* find_tx(int tx_id) const;

    struct FinishedTx {
        Transmission tx;
        bool delivered = false;
        double dst_sinr = 0;
    };
    /// Recently finished addressed transmissions, kept until their
    /// rx-complete events have been consumed.
    const FinishedTx* finished(int tx_id) const;

private:
    struct NodePhy {
        ListenMode listen = ListenMode::QuasiOmni;
        NodeId toward = kNoNode;
        int current_tx = -1;
        double tx_power_w = 0;
        SimTime tx_since{0};
        bool energy_busy = false;
        SimTime busy_since{0};
        SimTime last_busy_end{0};
        SimTime nav_until{0};
    };

    struct ToneState {
        bool active = false;
        SimTime since{0};
        SimTime last_end{0};
    };

    double pair_path(NodeId a, NodeId b) const { return path_[a * n_ + b]; }
    bool covers(NodeId src, NodeId aimed, NodeId target) const {
        return cover_[(src * n_ + aimed) * n_ + target];
    }

    /// Received power of transmission t at listener u under the given mode.
    double rx_power(const Transmission& t, NodeId u, ListenMode mode, NodeId toward) const;
    double omni_power(const Transmission& t, NodeId u) const;

    double current_sinr(const Transmission& t, NodeId u, const Transmission::ListenerTrack& lt) const;
    void sample_all();
    void invalidate_listener(NodeId node);
    void update_sensing();
    double decode_threshold(const Frame& frame) const;

    Engine& engine_;
    const ScenarioConfig& cfg_;
    std::vector<NodeSpec> nodes_;
    StatsRecorder& stats_;
    std::vector<MacHooks*> macs_;
    std::vector<NodePhy> phy_;
    std::vector<ToneState> tones_;
    std::vector<Transmission> pending_; ///< queued, keyed by id
    std::vector<Transmission> active_;
    std::deque<FinishedTx> finished_;
    std::vector<double> path_;  ///< n x n pairwise path gain
    std::vector<char> cover_;   ///< n x n x n beam coverage
    int n_ = 0;
    int next_tx_id_ = 0;
};

} // namespace mmfd
