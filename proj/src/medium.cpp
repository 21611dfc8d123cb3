#include "mmfd/medium.hpp"

#include "mmfd/units.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mmfd {

Medium::Medium(Engine& engine, const ScenarioConfig& cfg, const std::vector<NodeSpec>& nodes,
               StatsRecorder& stats)
    : engine_(engine), cfg_(cfg), nodes_(nodes), stats_(stats) {
    n_ = static_cast<int>(nodes_.size());
    macs_.assign(n_, nullptr);
    phy_.assign(n_, {});
    tones_.assign(n_, {});
    path_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    cover_.assign(static_cast<std::size_t>(n_) * n_ * n_, 0);

    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (i == j) continue;
            path_[i * n_ + j] = path_gain(cfg_.channel, nodes_[i].pos, nodes_[j].pos);
        }
    }
    // cover[i][j][k]: does node i's beam pointed at node j cover node k
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (i == j) continue;
            const BeamPointing beam =
                beam_toward(nodes_[i].antenna, nodes_[i].pos, nodes_[j].pos, BeamRole::Transmit);
            for (int k = 0; k < n_; ++k) {
                if (k == i) continue;
                const double g = beam_gain(nodes_[i].antenna, beam, nodes_[k].pos, nodes_[i].pos);
                cover_[(i * n_ + j) * n_ + k] = g > 0 ? 1 : 0;
            }
        }
    }
}

void Medium::register_mac(NodeId id, MacHooks* mac) { macs_[id] = mac; }

double Medium::rx_power(const Transmission& t, NodeId u, ListenMode mode, NodeId toward) const {
    if (t.src == u) return 0.0;
    if (!covers(t.src, t.dst, u)) return 0.0;
    const double g_tx = nodes_[t.src].antenna.peak_gain();
    double g_rx = 0.0;
    switch (mode) {
        case ListenMode::QuasiOmni: g_rx = quasi_omni_gain(); break;
        case ListenMode::Toward:
            g_rx = covers(u, toward, t.src) ? nodes_[u].antenna.peak_gain() : 0.0;
            break;
        case ListenMode::Off: return 0.0;
    }
    if (g_rx == 0.0) return 0.0;
    return received_power(t.power_w, g_tx, g_rx, pair_path(t.src, u));
}

double Medium::omni_power(const Transmission& t, NodeId u) const {
    return rx_power(t, u, ListenMode::QuasiOmni, kNoNode);
}

double Medium::decode_threshold(const Frame& frame) const {
    if (frame.kind == FrameKind::Data) {
        return cfg_.mcs.by_index(frame.mcs_index).sinr_threshold;
    }
    return cfg_.control_sinr_min;
}

double Medium::current_sinr(const Transmission& t, NodeId u,
                            const Transmission::ListenerTrack& lt) const {
    const double signal = rx_power(t, u, lt.required, lt.required_toward);
    if (signal <= 0) return 0.0;
    double interference = cfg_.channel.noise_w;
    for (const auto& other : active_) {
        if (other.id == t.id) continue;
        interference += rx_power(other, u, lt.required, lt.required_toward);
    }
    if (phy_[u].current_tx >= 0) {
        interference += residual_si(phy_[u].tx_power_w, nodes_[u].si_beta);
    }
    return signal / interference;
}

void Medium::sample_all() {
    for (auto& t : active_) {
        for (int u = 0; u < n_; ++u) {
            auto& lt = t.listeners[u];
            if (!lt.tracked || !lt.mode_ok) continue;
            lt.min_sinr = std::min(lt.min_sinr, current_sinr(t, u, lt));
        }
    }
}

void Medium::invalidate_listener(NodeId node) {
    // A listener state change kills receptions that required the old state.
    // A reception ending exactly now survives: its airtime is already over
    // and its verdict event is about to dispatch.
    for (auto& t : active_) {
        if (t.end == engine_.now()) continue;
        auto& lt = t.listeners[node];
        if (!lt.tracked || !lt.mode_ok) continue;
        const auto& p = phy_[node];
        const bool still_ok =
            (lt.required == p.listen) &&
            (lt.required != ListenMode::Toward || lt.required_toward == p.toward);
        if (!still_ok) lt.mode_ok = false;
    }
}

void Medium::set_listening(NodeId node, ListenMode mode, NodeId toward) {
    phy_[node].listen = mode;
    phy_[node].toward = toward;
    invalidate_listener(node);
    sample_all();
}

int Medium::queue_frame(const Frame& frame, SimTime when, TxnId txn, double power_override_w) {
    Transmission t;
    t.id = next_tx_id_++;
    t.frame = frame;
    t.timing = encode_frame(frame, cfg_.frame_format, cfg_.mcs);
    t.src = frame.src;
    t.dst = frame.dst;
    t.power_w = power_override_w > 0 ? power_override_w : nodes_[frame.src].tx_power_w;
    t.start = when;
    t.end = when + t.timing.airtime_ns;
    t.txn = txn;
    pending_.push_back(t);
    engine_.schedule(when, EventKind::FrameTxStart, frame.src, {t.id, 0});
    return t.id;
}

void Medium::handle_tx_start(const Event& ev) {
    const int id = static_cast<int>(ev.payload.a);
    auto it = std::find_if(pending_.begin(), pending_.end(),
                           [&](const Transmission& t) { return t.id == id; });
    if (it == pending_.end()) throw SimError("tx-start for unknown transmission");
    Transmission t = *it;
    pending_.erase(it);

    auto& src_phy = phy_[t.src];
    if (src_phy.current_tx >= 0) throw SimError("node already transmitting");
    src_phy.current_tx = t.id;
    src_phy.tx_power_w = t.power_w;
    src_phy.tx_since = t.start;

    // The transmitter cannot keep quasi-omni receptions alive.
    invalidate_listener(t.src);
    for (auto& a : active_) {
        if (a.end == engine_.now()) continue;
        auto& lt = a.listeners[t.src];
        if (lt.tracked && lt.required == ListenMode::QuasiOmni) lt.mode_ok = false;
    }

    // Track the destination plus, for control frames, every quasi-omni
    // listener (virtual carrier sense and protocol overhearing).
    t.listeners.assign(n_, {});
    for (int u = 0; u < n_; ++u) {
        if (u == t.src) continue;
        auto& lt = t.listeners[u];
        const auto& p = phy_[u];
        if (u == t.dst) {
            lt.tracked = true;
            lt.required = p.listen;
            lt.required_toward = p.toward;
            lt.mode_ok = p.listen != ListenMode::Off && !(p.listen == ListenMode::QuasiOmni && p.current_tx >= 0);
            if (t.frame.kind == FrameKind::Rts) {
                // An RTS is only decodable by an idle quasi-omni listener.
                lt.mode_ok = lt.mode_ok && p.listen == ListenMode::QuasiOmni;
            }
        } else if (t.frame.kind != FrameKind::Data && p.listen == ListenMode::QuasiOmni &&
                   p.current_tx < 0) {
            lt.tracked = true;
            lt.required = ListenMode::QuasiOmni;
        }
    }

    active_.push_back(std::move(t));
    engine_.schedule(active_.back().end, EventKind::FrameTxEnd, active_.back().src,
                     {active_.back().id, 0});

    sample_all();
    update_sensing();

    const Transmission& placed = *find_tx(id);
    if (macs_[placed.src]) macs_[placed.src]->on_tx_started(placed);
    if (placed.dst != kNoNode && macs_[placed.dst]) macs_[placed.dst]->on_rx_started(placed);
}

void Medium::handle_tx_end(const Event& ev) {
    const int id = static_cast<int>(ev.payload.a);
    auto it = std::find_if(active_.begin(), active_.end(),
                           [&](const Transmission& t) { return t.id == id; });
    if (it == active_.end()) throw SimError("tx-end for unknown transmission");
    Transmission t = std::move(*it);
    active_.erase(it);

    auto& src_phy = phy_[t.src];
    src_phy.current_tx = -1;
    src_phy.tx_power_w = 0;

    sample_all();
    update_sensing();

    // Destination verdict.
    bool delivered = false;
    double dst_sinr = 0;
    if (t.dst != kNoNode) {
        const auto& lt = t.listeners[t.dst];
        dst_sinr = lt.min_sinr;
        delivered = lt.tracked && lt.mode_ok && lt.min_sinr >= decode_threshold(t.frame);
    }

    // Virtual carrier sense: any other quasi-omni listener that decoded this
    // control frame defers for its duration.
    if (t.frame.kind != FrameKind::Data && t.frame.duration_us > 0) {
        for (int u = 0; u < n_; ++u) {
            if (u == t.dst || u == t.src) continue;
            const auto& lt = t.listeners[u];
            if (lt.tracked && lt.mode_ok && lt.min_sinr >= cfg_.control_sinr_min) {
                const SimTime nav_end = t.end + t.frame.duration_us * 1000;
                if (nav_end > phy_[u].nav_until) {
                    phy_[u].nav_until = nav_end;
                    if (macs_[u]) macs_[u]->on_nav_update();
                }
            }
        }
    }

    if (t.frame.kind == FrameKind::Data && t.dst != kNoNode) {
        stats_.frame(FrameRecord{t.txn, t.frame.kind, t.src, t.dst, t.start, t.end, delivered,
                                 t.frame.payload_bits});
        // Link SINR sample at the receiver, whether or not the frame decoded.
        if (t.listeners[t.dst].tracked && t.listeners[t.dst].mode_ok) {
            stats_.link_sinr_sample(t.src, t.dst, dst_sinr);
        }
    } else {
        stats_.frame(
            FrameRecord{t.txn, t.frame.kind, t.src, t.dst, t.start, t.end, delivered, 0});
    }

    if (macs_[t.src]) macs_[t.src]->on_tx_done(t);
    if (t.dst != kNoNode) {
        engine_.schedule(t.end, EventKind::FrameRxComplete, t.dst,
                         {t.id, delivered ? 1 : 0});
        finished_.push_back(FinishedTx{t, delivered, dst_sinr});
        if (finished_.size() > 64) finished_.pop_front();
    }
}

void Medium::handle_bt(const Event& ev) {
    const NodeId identity = static_cast<NodeId>(ev.payload.a);
    const bool start = ev.payload.b == 0;
    const NodeId emitter = ev.subject;
    auto& tone = tones_[identity];
    bool activation = false;
    if (start) {
        if (!tone.active) {
            tone.active = true;
            tone.since = engine_.now();
            activation = true;
        }
    } else {
        if (tone.active) {
            tone.active = false;
            tone.last_end = engine_.now();
            activation = true; // deactivation transition
        }
    }
    stats_.tone(ToneRecord{identity, emitter, start, engine_.now()});
    for (int u = 0; u < n_; ++u) {
        if (macs_[u]) macs_[u]->on_tone(identity, start, emitter, activation);
    }
}

void Medium::emit_tone(NodeId identity, NodeId emitter, bool start) {
    engine_.schedule(engine_.now(), EventKind::BtDetected, emitter, {identity, start ? 0 : 1});
}

bool Medium::tone_active(NodeId identity) const { return tones_[identity].active; }

bool Medium::tone_active_strictly_before(NodeId identity, SimTime t) const {
    const auto& tone = tones_[identity];
    if (tone.active) return tone.since < t;
    return tone.last_end == t && tone.since < t;
}

bool Medium::energy_busy_strictly_before(NodeId node, SimTime t) const {
    const auto& p = phy_[node];
    if (p.energy_busy) return p.busy_since < t;
    return p.last_busy_end == t && p.busy_since < t;
}

bool Medium::carrier_sense_busy(NodeId node, NodeId intended_receiver) const {
    if (phy_[node].energy_busy) return true;
    if (cfg_.busy_tones && intended_receiver != kNoNode && tone_active(intended_receiver)) {
        return true;
    }
    return false;
}

void Medium::update_sensing() {
    for (int u = 0; u < n_; ++u) {
        double sum = 0;
        for (const auto& t : active_) sum += omni_power(t, u);
        auto& p = phy_[u];
        const bool busy = sum >= cfg_.cca_threshold_w;
        if (busy && !p.energy_busy) {
            p.energy_busy = true;
            p.busy_since = engine_.now();
            if (macs_[u]) macs_[u]->on_medium_busy();
        } else if (!busy && p.energy_busy) {
            p.energy_busy = false;
            p.last_busy_end = engine_.now();
            if (macs_[u]) macs_[u]->on_medium_idle();
        }
    }
}

double Medium::genie_link_sinr(NodeId i, NodeId j, bool fd) const {
    const double signal = nodes_[i].tx_power_w * nodes_[i].antenna.peak_gain() *
                          nodes_[j].antenna.peak_gain() * pair_path(i, j);
    double interference = cfg_.channel.noise_w;
    if (fd) interference += residual_si(nodes_[j].tx_power_w, nodes_[j].si_beta);
    return signal / interference;
}

double Medium::genie_secondary_sinr(NodeId i, NodeId j, NodeId interferer, NodeId interferer_dst,
                                    double p_i_w, double p_interferer_w) const {
    const double signal =
        p_i_w * nodes_[i].antenna.peak_gain() * nodes_[j].antenna.peak_gain() * pair_path(i, j);
    double interference = cfg_.channel.noise_w;
    if (cfg_.ibi_enabled && covers(interferer, interferer_dst, j) && covers(j, i, interferer)) {
        interference += p_interferer_w * nodes_[interferer].antenna.peak_gain() *
                        nodes_[j].antenna.peak_gain() * pair_path(interferer, j);
    }
    return signal / interference;
}

const Transmission* Medium::find_tx(int tx_id) const {
    for (const auto& t : active_) {
        if (t.id == tx_id) return &t;
    }
    for (const auto& f : finished_) {
        if (f.tx.id == tx_id) return &f.tx;
    }
    for (const auto& t : pending_) {
        if (t.id == tx_id) return &t;
    }
    return nullptr;
}

const Medium::FinishedTx* Medium::finished(int tx_id) const {
    for (const auto& f : finished_) {
        if (f.tx.id == tx_id) return &f;
    }
    return nullptr;
}

std::string Medium::describe_tx(int tx_id) const {
    const Transmission* t = find_tx(tx_id);
    if (!t) return "tx?";
    std::ostringstream os;
    os << frame_kind_name(t->frame.kind) << " src=" << t->src << " dst=" << t->dst
       << " txn=" << t->txn;
    return os.str();
}

} // namespace mmfd
