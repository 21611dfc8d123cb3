#pragma once

#include "mmfd/frames.hpp"
#include "mmfd/scenario.hpp"
#include "mmfd/sim_time.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mmfd {

using TxnId = std::int64_t;

enum class TxnType { Hd, TwoNodeFd, ThreeNodeFd };

enum class CwChangeReason { Success, Failure, Drop };

/// One on-air frame as seen by the bookkeeping layer.
struct FrameRecord {
    TxnId txn = -1;
    FrameKind kind = FrameKind::Rts;
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    SimTime start;
    SimTime end;
    bool delivered = false;
    std::int64_t payload_bits = 0;
};

struct ToneRecord {
    NodeId identity = kNoNode;
    NodeId emitter = kNoNode;
    bool start = true;
    SimTime time;
};

struct CwChangeRecord {
    NodeId node = kNoNode;
    int old_cw = 0;
    int new_cw = 0;
    CwChangeReason reason = CwChangeReason::Success;
    /// True when the intended receiver was engaged in another transaction at
    /// the instant the attempt's RTS started (omniscient attribution).
    bool receiver_was_busy = false;
    SimTime time;
};

struct TxnRecord {
    TxnId txn = -1;
    TxnType type = TxnType::Hd;
    NodeId initiator = kNoNode;
    SimTime rts_start;
    SimTime end;
    std::int64_t contention_gap_ns = 0; ///< idle time the initiator saw before its RTS
    bool completed = true;              ///< false when the attempt was aborted
};

struct SinrStats {
    std::int64_t count = 0;
    double sum = 0;
    double min = 0;
    double max = 0;

    void add(double v);
    double mean() const { return count ? sum / count : 0; }
};

/// Aggregated outcome of one replication.
struct RunResult {
    double duration_s = 0;
    std::map<NodeId, std::int64_t> delivered_bits; ///< payload bits ACKed, by transmitter
    double network_throughput_bps = 0;
    std::optional<double> jain_user_uplink; ///< over user devices' uplink throughputs
    std::int64_t txn_hd = 0;
    std::int64_t txn_two_node_fd = 0;
    std::int64_t txn_three_node_fd = 0;
    std::int64_t cw_doublings = 0;
    std::int64_t retries = 0;
    std::int64_t drops = 0;
    std::int64_t deaf_holdoffs = 0; ///< attempts exonerated by a busy receiver tone
    std::map<std::pair<NodeId, NodeId>, SinrStats> link_sinr;
    std::int64_t total_acked_payload_bits = 0;
    std::vector<std::string> violations;
};

/// Jain's fairness index (sum x)^2 / (n * sum x^2). Throws on empty or
/// all-zero input.
double jain_index(const std::vector<double>& throughputs);

/// Online protocol invariant checker: tone pairing, inter-frame spacing,
/// contention-window law, duplex exclusivity, control frame simultaneity and
/// deafness-free contention. Bounded memory; violations collected as text.
class InvariantChecker {
public:
    explicit InvariantChecker(const ScenarioConfig& cfg);

    void on_frame(const FrameRecord& r);
    void on_tone(const ToneRecord& r);
    void on_cw_change(const CwChangeRecord& r);
    void on_txn_close(const TxnRecord& r);
    void finalize();

    std::int64_t acked_payload_bits() const { return acked_payload_bits_; }
    const std::vector<std::string>& violations() const { return violations_; }

private:
    struct Interval {
        SimTime start;
        SimTime end;
        TxnId txn;
    };
    struct ToneBook {
        bool active = false;
        std::int64_t activations = 0;
        std::int64_t deactivations = 0;
    };

    void check_txn_frames(const TxnRecord& txn, std::vector<FrameRecord>& frames);
    void check_duplex(const FrameRecord& r);
    void violation(std::string msg);

    const ScenarioConfig* cfg_;
    std::map<NodeId, ToneBook> tones_;
    std::map<TxnId, std::vector<FrameRecord>> open_txns_;
    std::map<NodeId, std::deque<Interval>> recent_tx_;
    std::map<NodeId, std::deque<Interval>> recent_rx_;
    std::map<NodeId, int> last_cw_;
    std::int64_t acked_payload_bits_ = 0;
    std::vector<std::string> violations_;
};

/// Collects protocol records, feeds the invariant checker and accumulates
/// RunResult metrics.
class StatsRecorder {
public:
    explicit StatsRecorder(const ScenarioConfig& cfg);

    void frame(const FrameRecord& r);
    void tone(const ToneRecord& r);
    void cw_change(const CwChangeRecord& r);
    void txn_close(const TxnRecord& r);
    void delivery(NodeId transmitter, std::int64_t payload_bits);
    void drop(NodeId node);
    void retry(NodeId node);
    void deaf_holdoff(NodeId node);
    void link_sinr_sample(NodeId src, NodeId dst, double sinr_linear);

    /// Finishes checks and computes aggregate metrics.
    RunResult finish(const std::vector<NodeSpec>& nodes, double duration_s);

private:
    InvariantChecker checker_;
    RunResult result_;
};

} // namespace mmfd
