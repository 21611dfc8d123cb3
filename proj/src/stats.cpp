#include "mmfd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mmfd {

void SinrStats::add(double v) {
    if (count == 0) {
        min = max = v;
    } else {
        min = std::min(min, v);
        max = std::max(max, v);
    }
    sum += v;
    ++count;
}

double jain_index(const std::vector<double>& throughputs) {
    if (throughputs.empty()) throw std::invalid_argument("jain_index: empty input");
    double sum = 0, sum_sq = 0;
    for (double x : throughputs) {
        if (x < 0) throw std::invalid_argument("jain_index: negative throughput");
        sum += x;
        sum_sq += x * x;
    }
    if (sum_sq == 0) throw std::invalid_argument("jain_index: all-zero input");
    return (sum * sum) / (static_cast<double>(throughputs.size()) * sum_sq);
}

InvariantChecker::InvariantChecker(const ScenarioConfig& cfg) : cfg_(&cfg) {}

void InvariantChecker::violation(std::string msg) {
    if (violations_.size() < 64) violations_.push_back(std::move(msg));
    else if (violations_.size() == 64) violations_.push_back("... further violations suppressed");
}

void InvariantChecker::on_tone(const ToneRecord& r) {
    auto& book = tones_[r.identity];
    if (r.start) {
        if (!book.active) {
            book.active = true;
            ++book.activations;
        }
        // repeated start tones (the echo) do not nest
    } else {
        if (!book.active) {
            std::ostringstream os;
            os << "end tone for node " << r.identity << " at " << r.time.ns
               << " ns without an active start tone";
            violation(os.str());
        } else {
            book.active = false;
            ++book.deactivations;
        }
    }
}

void InvariantChecker::on_frame(const FrameRecord& r) {
    open_txns_[r.txn].push_back(r);
    check_duplex(r);
}

void InvariantChecker::check_duplex(const FrameRecord& r) {
    // Transmit interval for src, receive interval for dst when decoded.
    // Records arrive ordered by end time; pruning keeps windows small.
    auto overlap_against = [&](std::map<NodeId, std::deque<Interval>>& table, NodeId node,
                               const Interval& iv, const char* what) {
        auto& dq = table[node];
        while (!dq.empty() && dq.front().end <= iv.start) dq.pop_front();
        for (const auto& other : dq) {
            const bool overlaps = other.start < iv.end && iv.start < other.end;
            if (!overlaps) continue;
            const bool same_txn = other.txn == iv.txn;
            const bool fd_ok = cfg_->variant == Variant::Dfdmac && same_txn;
            if (!fd_ok) {
                std::ostringstream os;
                os << "node " << node << " " << what << " overlap at " << iv.start.ns
                   << " ns (txn " << iv.txn << " vs " << other.txn << ")";
                violation(os.str());
            }
        }
    };

    const Interval tx_iv{r.start, r.end, r.txn};
    overlap_against(recent_rx_, r.src, tx_iv, "tx-during-rx");
    auto& txq = recent_tx_[r.src];
    while (!txq.empty() && txq.front().end <= r.start) txq.pop_front();
    txq.push_back(tx_iv);

    if (r.delivered && r.dst != kNoNode) {
        const Interval rx_iv{r.start, r.end, r.txn};
        overlap_against(recent_tx_, r.dst, rx_iv, "rx-during-tx");
        auto& rxq = recent_rx_[r.dst];
        while (!rxq.empty() && rxq.front().end <= r.start) rxq.pop_front();
        rxq.push_back(rx_iv);
    }
}

void InvariantChecker::on_cw_change(const CwChangeRecord& r) {
    const int expected_reset = cfg_->timing.cw_min;
    switch (r.reason) {
        case CwChangeReason::Success:
        case CwChangeReason::Drop:
            if (r.new_cw != expected_reset) {
                std::ostringstream os;
                os << "node " << r.node << " cw reset to " << r.new_cw << " instead of "
                   << expected_reset;
                violation(os.str());
            }
            break;
        case CwChangeReason::Failure: {
            const int expected = std::min(r.old_cw * 2, cfg_->timing.cw_max);
            if (r.new_cw != expected) {
                std::ostringstream os;
                os << "node " << r.node << " cw " << r.old_cw << " -> " << r.new_cw
                   << " violates doubling law";
                violation(os.str());
            }
            if (cfg_->busy_tones && r.receiver_was_busy) {
                std::ostringstream os;
                os << "node " << r.node << " doubled cw at " << r.time.ns
                   << " ns although its receiver was busy (deafness)";
                violation(os.str());
            }
            break;
        }
    }
    last_cw_[r.node] = r.new_cw;
}

void InvariantChecker::on_txn_close(const TxnRecord& r) {
    if (r.contention_gap_ns < cfg_->timing.difs_ns) {
        std::ostringstream os;
        os << "txn " << r.txn << " started after only " << r.contention_gap_ns
           << " ns of idle time (DIFS is " << cfg_->timing.difs_ns << ")";
        violation(os.str());
    }
    auto it = open_txns_.find(r.txn);
    if (it == open_txns_.end()) return;
    check_txn_frames(r, it->second);
    open_txns_.erase(it);
}

void InvariantChecker::check_txn_frames(const TxnRecord& txn, std::vector<FrameRecord>& frames) {
    std::stable_sort(frames.begin(), frames.end(),
                     [](const FrameRecord& a, const FrameRecord& b) { return a.start < b.start; });

    const std::int64_t sifs = cfg_->timing.sifs_ns;
    std::vector<const FrameRecord*> rts, cts, data, ack;
    for (const auto& f : frames) {
        switch (f.kind) {
            case FrameKind::Rts: rts.push_back(&f); break;
            case FrameKind::Cts: cts.push_back(&f); break;
            case FrameKind::Data: data.push_back(&f); break;
            case FrameKind::Ack: ack.push_back(&f); break;
        }
    }

    auto complain = [&](const std::string& what) {
        std::ostringstream os;
        os << "txn " << txn.txn << ": " << what;
        violation(os.str());
    };

    // Secondary RTS exactly SIFS after the primary one.
    if (rts.size() == 2 && rts[1]->start - rts[0]->end != sifs) {
        complain("secondary RTS not SIFS after primary RTS");
    }
    // All CTS frames start together, exactly SIFS after the last RTS.
    if (!cts.empty() && !rts.empty()) {
        for (const auto* c : cts) {
            if (c->start != cts[0]->start) complain("CTS frames not simultaneous");
        }
        if (cts[0]->start - rts.back()->end != sifs) complain("CTS not SIFS after RTS");
    }
    // All DATA frames start together, exactly SIFS after the CTS phase.
    if (!data.empty() && !cts.empty()) {
        for (const auto* d : data) {
            if (d->start != data[0]->start) complain("DATA frames not simultaneous");
        }
        SimTime cts_end = cts[0]->end;
        for (const auto* c : cts) cts_end = std::max(cts_end, c->end);
        if (data[0]->start - cts_end != sifs) complain("DATA not SIFS after CTS");
    }
    // All ACK frames start together, exactly SIFS after the DATA phase end.
    if (!ack.empty() && !data.empty()) {
        for (const auto* a : ack) {
            if (a->start != ack[0]->start) complain("ACK frames not simultaneous");
        }
        SimTime data_end = data[0]->end;
        for (const auto* d : data) data_end = std::max(data_end, d->end);
        if (ack[0]->start - data_end != sifs) complain("ACK not SIFS after DATA");
    }

    // Conservation bookkeeping: DATA payload counts as ACKed when a decoded
    // ACK flows back from the DATA's receiver to its sender.
    for (const auto* d : data) {
        if (!d->delivered) continue;
        for (const auto* a : ack) {
            if (a->src == d->dst && a->dst == d->src && a->delivered) {
                acked_payload_bits_ += d->payload_bits;
                break;
            }
        }
    }
}

void InvariantChecker::finalize() {
    for (const auto& [node, book] : tones_) {
        if (book.active) {
            std::ostringstream os;
            os << "tone for node " << node << " still active at run end";
            violation(os.str());
        }
        if (book.activations != book.deactivations) {
            std::ostringstream os;
            os << "tone activations (" << book.activations << ") != deactivations ("
               << book.deactivations << ") for node " << node;
            violation(os.str());
        }
    }
}

StatsRecorder::StatsRecorder(const ScenarioConfig& cfg) : checker_(cfg) {}

void StatsRecorder::frame(const FrameRecord& r) { checker_.on_frame(r); }

void StatsRecorder::tone(const ToneRecord& r) { checker_.on_tone(r); }

void StatsRecorder::cw_change(const CwChangeRecord& r) {
    checker_.on_cw_change(r);
    if (r.reason == CwChangeReason::Failure) ++result_.cw_doublings;
}

void StatsRecorder::txn_close(const TxnRecord& r) {
    checker_.on_txn_close(r);
    if (!r.completed) return;
    switch (r.type) {
        case TxnType::Hd: ++result_.txn_hd; break;
        case TxnType::TwoNodeFd: ++result_.txn_two_node_fd; break;
        case TxnType::ThreeNodeFd: ++result_.txn_three_node_fd; break;
    }
}

void StatsRecorder::delivery(NodeId transmitter, std::int64_t payload_bits) {
    result_.delivered_bits[transmitter] += payload_bits;
}

void StatsRecorder::drop(NodeId node) {
    (void)node;
    ++result_.drops;
}

void StatsRecorder::retry(NodeId node) {
    (void)node;
    ++result_.retries;
}

void StatsRecorder::deaf_holdoff(NodeId node) {
    (void)node;
    ++result_.deaf_holdoffs;
}

void StatsRecorder::link_sinr_sample(NodeId src, NodeId dst, double sinr_linear) {
    result_.link_sinr[{src, dst}].add(sinr_linear);
}

RunResult StatsRecorder::finish(const std::vector<NodeSpec>& nodes, double duration_s) {
    checker_.finalize();
    result_.duration_s = duration_s;
    result_.violations = checker_.violations();
    result_.total_acked_payload_bits = checker_.acked_payload_bits();

    std::int64_t total = 0;
    for (const auto& n : nodes) {
        total += result_.delivered_bits[n.id]; // materializes zero entries too
    }
    result_.network_throughput_bps = duration_s > 0 ? total / duration_s : 0;

    if (total != result_.total_acked_payload_bits) {
        std::ostringstream os;
        os << "delivered bits (" << total << ") != acked DATA payload in trace ("
           << result_.total_acked_payload_bits << ")";
        result_.violations.push_back(os.str());
    }

    std::vector<double> user_uplink;
    for (const auto& n : nodes) {
        if (!n.is_ap) user_uplink.push_back(result_.delivered_bits[n.id] / std::max(duration_s, 1e-12));
    }
    bool any = false;
    for (double x : user_uplink) any = any || x > 0;
    if (!user_uplink.empty() && any) {
        result_.jain_user_uplink = jain_index(user_uplink);
    }
    return result_;
}

} // namespace mmfd
