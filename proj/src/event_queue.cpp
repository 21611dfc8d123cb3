#include "mmfd/event_queue.hpp"

namespace mmfd {

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::FrameTxStart: return "frame-tx-start";
        case EventKind::FrameTxEnd: return "frame-tx-end";
        case EventKind::FrameRxComplete: return "frame-rx-complete";
        case EventKind::BtDetected: return "bt-detected";
        case EventKind::BackoffSlot: return "backoff-slot";
        case EventKind::TimerExpiry: return "timer-expiry";
    }
    return "unknown";
}

EventHandle Engine::schedule(SimTime time, EventKind kind, NodeId subject, EventPayload payload) {
    if (time < clock_) {
        throw SimError("schedule: event time is in the past (protocol logic bug)");
    }
    Event ev;
    ev.time = time;
    ev.sequence = next_seq_++;
    ev.kind = kind;
    ev.subject = subject;
    ev.payload = payload;
    queue_.push(ev);
    ++scheduled_;
    ++pending_;
    return ev.sequence;
}

void Engine::cancel(EventHandle handle) {
    if (handle == kInvalidHandle) return;
    tombstones_.insert(handle);
}

std::uint64_t Engine::run_until(SimTime limit) {
    std::uint64_t count = 0;
    while (!queue_.empty() && queue_.top().time <= limit) {
        Event ev = queue_.top();
        queue_.pop();
        --pending_;
        if (auto it = tombstones_.find(ev.sequence); it != tombstones_.end()) {
            tombstones_.erase(it);
            ++cancelled_;
            continue;
        }
        if (ev.time < clock_) throw SimError("run_until: clock would move backwards");
        clock_ = ev.time;
        ++dispatched_;
        ++count;
        if (trace_) trace_(ev, *sink_);
        sink_->handle(ev);
    }
    // An idle engine advances its clock to the limit; otherwise the clock
    // stays at the last dispatched event time.
    if (count == 0 && queue_.empty() && limit > clock_) clock_ = limit;
    return count;
}

} // namespace mmfd
