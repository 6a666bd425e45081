#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "sim_time.hpp"

namespace mecsim {

class Engine;

enum class EventKind {
    MeasurementTick,
    HandoverSignal,
    EpcLogEmitted,
    PodKilled,
    PodStarted,
    DnsUpdated,
    ClientPoll,
    FrameRoundTrip,
    ScenarioEnd,
};

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::MeasurementTick: return "MeasurementTick";
        case EventKind::HandoverSignal: return "HandoverSignal";
        case EventKind::EpcLogEmitted: return "EpcLogEmitted";
        case EventKind::PodKilled: return "PodKilled";
        case EventKind::PodStarted: return "PodStarted";
        case EventKind::DnsUpdated: return "DnsUpdated";
        case EventKind::ClientPoll: return "ClientPoll";
        case EventKind::FrameRoundTrip: return "FrameRoundTrip";
        case EventKind::ScenarioEnd: return "ScenarioEnd";
    }
    return "?";
}

inline std::optional<EventKind> event_kind_from(std::string_view name) {
    using K = EventKind;
    for (K k : {K::MeasurementTick, K::HandoverSignal, K::EpcLogEmitted, K::PodKilled,
                K::PodStarted, K::DnsUpdated, K::ClientPoll, K::FrameRoundTrip, K::ScenarioEnd}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

// Canonical payload: key=value pairs, serialized sorted by key. Keys and
// values must not contain whitespace, '=' or tabs.
using EventPayload = std::map<std::string, std::string>;

struct SimEvent {
    SimTime fire_at;
    std::uint64_t sequence = 0;  // assigned by the engine; FIFO among equal fire_at
    EventKind kind = EventKind::ScenarioEnd;
    EventPayload payload;
    std::function<void(Engine&)> action;
};

}  // namespace mecsim
