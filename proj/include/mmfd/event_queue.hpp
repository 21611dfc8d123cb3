#pragma once

#include "mmfd/sim_time.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace mmfd {

using NodeId = int;
constexpr NodeId kNoNode = -1;

enum class EventKind : std::uint8_t {
    FrameTxStart,
    FrameTxEnd,
    FrameRxComplete,
    BtDetected,
    BackoffSlot,
    TimerExpiry,
};

const char* event_kind_name(EventKind k);

/// Kind-specific event payload. Meaning of a/b is fixed per kind:
///   FrameTxStart/End:  a = transmission id
///   FrameRxComplete:   a = transmission id, b = decode verdict (0/1)
///   BtDetected:        a = tone identity node, b = phase (0 start, 1 end)
///   BackoffSlot:       a = tick generation
///   TimerExpiry:       a = timer kind, b = engagement generation
struct EventPayload {
    std::int64_t a = 0;
    std::int64_t b = 0;
};

struct Event {
    SimTime time;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::TimerExpiry;
    NodeId subject = kNoNode;
    EventPayload payload;
};

struct SimError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Consumer of dispatched events. The simulation implements this and fans
/// events out to the medium and per-node MACs.
struct EventSink {
    virtual ~EventSink() = default;
    virtual void handle(const Event& ev) = 0;
    /// Free-form detail string for trace output; only called when tracing.
    virtual std::string trace_detail(const Event& ev) { (void)ev; return {}; }
};

using EventHandle = std::uint64_t;
constexpr EventHandle kInvalidHandle = 0;

/// Deterministic event engine: a virtual clock plus a (time, sequence)
/// ordered queue. Events with equal time dispatch in insertion order.
/// Handlers may only schedule at or after the current clock.
class Engine {
public:
    explicit Engine(EventSink& sink) : sink_(&sink) {}

    SimTime now() const { return clock_; }

    /// Enqueue an event; returns a handle usable with cancel().
    EventHandle schedule(SimTime time, EventKind kind, NodeId subject, EventPayload payload = {});

    /// Cancel a pending event. Cancelling an already dispatched or already
    /// cancelled handle is a no-op.
    void cancel(EventHandle handle);

    /// Dispatch all events with time <= limit. Returns the number of events
    /// dispatched by this call. The clock ends at the last dispatched event
    /// time, or at limit when nothing was pending.
    std::uint64_t run_until(SimTime limit);

    std::uint64_t scheduled_count() const { return scheduled_; }
    std::uint64_t cancelled_count() const { return cancelled_; }
    std::uint64_t dispatched_count() const { return dispatched_; }
    bool empty() const { return pending_ == 0; }

    /// Optional trace callback invoked for every dispatched event.
    void set_trace(std::function<void(const Event&, EventSink&)> fn) { trace_ = std::move(fn); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return b.time < a.time;
            return b.sequence < a.sequence;
        }
    };

    EventSink* sink_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::unordered_set<EventHandle> tombstones_;
    SimTime clock_{0};
    std::uint64_t next_seq_ = 1;
    std::uint64_t scheduled_ = 0;
    std::uint64_t cancelled_ = 0;
    std::uint64_t dispatched_ = 0;
    std::uint64_t pending_ = 0;
    std::function<void(const Event&, EventSink&)> trace_;
};

} // namespace mmfd
