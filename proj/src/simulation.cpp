#include "mmfd/simulation.hpp"

#include <ostream>
#include <sstream>

namespace mmfd {

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t run_seed)
    : cfg_(cfg), run_seed_(run_seed), engine_(*this) {
    if (cfg_.nodes.empty()) {
        throw std::invalid_argument("Simulation: scenario has no nodes");
    }
    stats_ = std::make_unique<StatsRecorder>(cfg_);
    medium_ = std::make_unique<Medium>(engine_, cfg_, cfg_.nodes, *stats_);
    macs_.reserve(cfg_.nodes.size());
    for (const auto& n : cfg_.nodes) {
        macs_.push_back(std::make_unique<Mac>(n.id, *this));
        medium_->register_mac(n.id, macs_.back().get());
    }
}

Simulation::~Simulation() = default;

void Simulation::set_trace(std::ostream* os) {
    trace_ = os;
    if (os) {
        engine_.set_trace([this](const Event& ev, EventSink& sink) {
            (*trace_) << ev.time.ns << '\t' << ev.subject << '\t' << event_kind_name(ev.kind)
                      << '\t' << sink.trace_detail(ev) << '\n';
        });
    } else {
        engine_.set_trace(nullptr);
    }
}

RunResult Simulation::run() {
    for (auto& m : macs_) m->start();
    engine_.run_until(SimTime{cfg_.duration_ns + cfg_.drain_ns});
    return stats_->finish(cfg_.nodes, ns_to_seconds(cfg_.duration_ns));
}

void Simulation::handle(const Event& ev) {
    switch (ev.kind) {
        case EventKind::BackoffSlot:
            macs_[ev.subject]->on_tick(ev);
            break;
        case EventKind::TimerExpiry:
            macs_[ev.subject]->on_timer(ev);
            break;
        case EventKind::FrameTxStart:
            medium_->handle_tx_start(ev);
            break;
        case EventKind::FrameTxEnd:
            medium_->handle_tx_end(ev);
            break;
        case EventKind::FrameRxComplete: {
            const auto* fin = medium_->finished(static_cast<int>(ev.payload.a));
            if (!fin) throw SimError("rx-complete for unknown transmission");
            macs_[ev.subject]->on_rx_complete(fin->tx, fin->delivered, fin->dst_sinr);
            break;
        }
        case EventKind::BtDetected:
            medium_->handle_bt(ev);
            break;
    }
}

std::string Simulation::trace_detail(const Event& ev) {
    std::ostringstream os;
    switch (ev.kind) {
        case EventKind::FrameTxStart:
        case EventKind::FrameTxEnd:
            os << medium_->describe_tx(static_cast<int>(ev.payload.a));
            break;
        case EventKind::FrameRxComplete:
            os << medium_->describe_tx(static_cast<int>(ev.payload.a))
               << (ev.payload.b ? " decoded" : " lost");
            break;
        case EventKind::BtDetected:
            os << "tone=" << ev.payload.a << " phase=" << (ev.payload.b == 0 ? "start" : "end")
               << " duration_ns=1000";
            break;
        case EventKind::BackoffSlot:
            os << "cw=" << macs_[ev.subject]->current_cw()
               << " counter=" << macs_[ev.subject]->current_backoff();
            break;
        case EventKind::TimerExpiry:
            os << "timer=" << ev.payload.a;
            break;
    }
    return os.str();
}

bool Simulation::node_busy_before(NodeId id, SimTime t) const {
    if (macs_[id]->engaged_before(t)) return true;
    return medium_->transmitting_since_before(id, t);
}

} // namespace mmfd
