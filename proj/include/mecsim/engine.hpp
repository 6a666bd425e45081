#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "event.hpp"

namespace mecsim {

// One processed event, as it appears in the serialized trace. The payload
// holds the values known at scheduling time plus any annotations the action
// added while it ran (e.g. a poll outcome).
struct TraceRecord {
    SimTime fire_at;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::ScenarioEnd;
    EventPayload payload;
};

// Deterministic discrete-event loop: a single queue, a virtual clock, and
// FIFO ordering among events with equal fire time. Single-threaded by
// construction; modules interact only through scheduled events.
class Engine {
public:
    SimTime now() const { return clock_; }

    // Scheduling into the past is a logic bug in the caller, not a runtime
    // condition to recover from.
    std::uint64_t schedule(SimTime fire_at, EventKind kind, EventPayload payload,
                           std::function<void(Engine&)> action) {
        if (fire_at < clock_) {
            throw std::logic_error("Engine::schedule: event scheduled in the past (fire_at " +
                                   format_fixed(fire_at.secs, 6) + " < clock " +
                                   format_fixed(clock_.secs, 6) + ")");
        }
        SimEvent ev;
        ev.fire_at = fire_at;
        ev.sequence = next_sequence_++;
        ev.kind = kind;
        ev.payload = std::move(payload);
        ev.action = std::move(action);
        std::uint64_t seq = ev.sequence;
        queue_.push(std::move(ev));
        return seq;
    }

    // Processes every queued event with fire_at <= end, unless stop() is
    // called first. The clock never decreases and finishes at `end` when the
    // run was not stopped early. Returns the cumulative trace.
    const std::vector<TraceRecord>& run_until(SimTime end) {
        while (!stopped_ && !queue_.empty() && queue_.top().fire_at <= end) {
            SimEvent ev = std::move(const_cast<SimEvent&>(queue_.top()));
            queue_.pop();
            clock_ = ev.fire_at;
            current_payload_ = &ev.payload;
            if (ev.action) ev.action(*this);
            current_payload_ = nullptr;
            trace_.push_back(TraceRecord{ev.fire_at, ev.sequence, ev.kind, std::move(ev.payload)});
        }
        if (!stopped_ && clock_ < end) clock_ = end;
        return trace_;
    }

    // Adds a key to the payload of the event currently being processed, so
    // outcomes decided at processing time still land in the trace.
    void annotate(const std::string& key, std::string value) {
        if (current_payload_) (*current_payload_)[key] = std::move(value);
    }

    // Halts run_until before the next event; events already queued stay
    // unprocessed and never enter the trace.
    void stop() { stopped_ = true; }
    bool stopped() const { return stopped_; }

    std::size_t pending() const { return queue_.size(); }
    const std::vector<TraceRecord>& trace() const { return trace_; }

private:
    struct FireOrder {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.fire_at != b.fire_at) return b.fire_at < a.fire_at;
            return b.sequence < a.sequence;
        }
    };

    SimTime clock_{};
    std::uint64_t next_sequence_ = 0;
    std::priority_queue<SimEvent, std::vector<SimEvent>, FireOrder> queue_;
    std::vector<TraceRecord> trace_;
    EventPayload* current_payload_ = nullptr;
    bool stopped_ = false;
};

}  // namespace mecsim
