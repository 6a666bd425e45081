#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "radio.hpp"

namespace mecsim {

enum class LogLevel { Info, Warn };

inline const char* to_string(LogLevel l) { return l == LogLevel::Info ? "INFO" : "WARN"; }

// Tokens emitted on the EPC standard output. The migration controller
// pattern-matches these lines, so the format is bit-exact:
//   <t with 3 decimals> <LEVEL> <TOKEN> ue=<id> src=<cell> dst=<cell>
inline constexpr const char* kTokenHandoverRequest = "S1-HANDOVER-REQUEST";
inline constexpr const char* kTokenHandoverCommand = "S1-HANDOVER-COMMAND";
inline constexpr const char* kTokenPathSwitch = "S1-PATH-SWITCH";
inline constexpr const char* kTokenEndMarker = "END-MARKER";
inline constexpr const char* kTokenComplete = "S1-COMPLETE";
inline constexpr const char* kTokenDropped = "S1-HANDOVER-DROPPED";

struct EpcLogEntry {
    SimTime t;
    LogLevel level = LogLevel::Info;
    std::string text;  // "<TOKEN> ue=<id> src=<cell> dst=<cell>"

    std::string line() const {
        return format_fixed(t.secs, 3) + " " + to_string(level) + " " + text;
    }
};

struct S1Procedure {
    enum class State { Requested, CommandSent, PathSwitched, EndMarkerSent, Complete };

    int ue_id = 0;
    CellId source_cell = 0;
    CellId target_cell = 0;
    State state = State::Requested;
    SimTime t_requested;
    SimTime t_end_marker;  // valid once state >= EndMarkerSent
};

// Per-stage signalling delays; the stages advance at cumulative offsets from
// the request. Negligible against seconds-scale migrations, but configurable.
struct S1Delays {
    double request_to_command_s = 0.020;
    double command_to_path_switch_s = 0.030;
    double path_switch_to_end_marker_s = 0.050;

    friend bool operator==(const S1Delays&, const S1Delays&) = default;
};

// EPC/MME model: the S1 handover state machine plus the textual log stream
// it writes. Log entries materialize as EpcLogEmitted events, so the stream
// is append-only and time-ordered by construction.
class Epc {
public:
    Epc(Engine& engine, S1Delays delays) : engine_(engine), delays_(delays) {}

    // Observer called for every emitted entry, while the matching
    // EpcLogEmitted event is being processed (the sim-time analogue of a
    // script scanning stdout).
    void subscribe_log(std::function<void(const EpcLogEntry&)> fn) {
        log_subscribers_.push_back(std::move(fn));
    }

    // Observer called when a procedure reaches EndMarkerSent. The End Marker
    // timestamp is the canonical handover time in exported datasets.
    void on_end_marker(std::function<void(const S1Procedure&)> fn) {
        end_marker_subscribers_.push_back(std::move(fn));
    }

    // Starts the S1 state machine for a decision. A UE can have only one
    // procedure in flight; a second request is dropped with a WARN line.
    void initiate_s1(const HandoverDecision& decision) {
        SimTime t0 = engine_.now();
        auto fields = describe(decision.ue_id, decision.source_cell, decision.target_cell);
        auto in_flight = in_flight_.find(decision.ue_id);
        if (in_flight != in_flight_.end()) {
            emit(t0, LogLevel::Warn, kTokenDropped, fields, nullptr);
            return;
        }

        procedures_.push_back(S1Procedure{decision.ue_id, decision.source_cell,
                                          decision.target_cell, S1Procedure::State::Requested, t0,
                                          SimTime{}});
        std::size_t idx = procedures_.size() - 1;
        in_flight_[decision.ue_id] = idx;

        SimTime t_cmd = t0 + delays_.request_to_command_s;
        SimTime t_path = t_cmd + delays_.command_to_path_switch_s;
        SimTime t_end = t_path + delays_.path_switch_to_end_marker_s;

        emit(t0, LogLevel::Info, kTokenHandoverRequest, fields, nullptr);
        emit(t_cmd, LogLevel::Info, kTokenHandoverCommand, fields, [this, idx](Engine&) {
            procedures_[idx].state = S1Procedure::State::CommandSent;
        });
        emit(t_path, LogLevel::Info, kTokenPathSwitch, fields, [this, idx](Engine&) {
            procedures_[idx].state = S1Procedure::State::PathSwitched;
        });
        emit(t_end, LogLevel::Info, kTokenEndMarker, fields, [this, idx](Engine& eng) {
            procedures_[idx].state = S1Procedure::State::EndMarkerSent;
            procedures_[idx].t_end_marker = eng.now();
            for (const auto& fn : end_marker_subscribers_) fn(procedures_[idx]);
        });
        emit(t_end, LogLevel::Info, kTokenComplete, fields, [this, idx](Engine&) {
            procedures_[idx].state = S1Procedure::State::Complete;
            in_flight_.erase(procedures_[idx].ue_id);
        });
    }

    // All entries with t > since, in emission order. Entries sharing a
    // timestamp are emitted within one event turn, so a cursor advanced to
    // the last returned t never skips or duplicates.
    std::vector<EpcLogEntry> tail_log(SimTime since) const {
        std::vector<EpcLogEntry> out;
        for (const auto& e : log_)
            if (since < e.t) out.push_back(e);
        return out;
    }

    const std::vector<EpcLogEntry>& log() const { return log_; }
    const std::vector<S1Procedure>& procedures() const { return procedures_; }

    bool procedure_in_flight(int ue_id) const { return in_flight_.count(ue_id) > 0; }

private:
    struct Fields {
        int ue;
        CellId src;
        CellId dst;
    };

    static Fields describe(int ue, CellId src, CellId dst) { return Fields{ue, src, dst}; }

    void emit(SimTime at, LogLevel level, const char* token, Fields f,
              std::function<void(Engine&)> advance) {
        std::string text = std::string(token) + " ue=" + std::to_string(f.ue) +
                           " src=" + std::to_string(f.src) + " dst=" + std::to_string(f.dst);
        EventPayload payload{{"dst", std::to_string(f.dst)},
                             {"level", to_string(level)},
                             {"src", std::to_string(f.src)},
                             {"token", token},
                             {"ue", std::to_string(f.ue)}};
        engine_.schedule(at, EventKind::EpcLogEmitted, std::move(payload),
                         [this, level, text = std::move(text), advance = std::move(advance)](
                             Engine& eng) {
                             if (advance) advance(eng);
                             EpcLogEntry entry{eng.now(), level, text};
                             log_.push_back(entry);
                             for (const auto& fn : log_subscribers_) fn(entry);
                         });
    }

    Engine& engine_;
    S1Delays delays_;
    std::vector<EpcLogEntry> log_;
    std::vector<S1Procedure> procedures_;
    std::map<int, std::size_t> in_flight_;  // ue_id -> index into procedures_
    std::vector<std::function<void(const EpcLogEntry&)>> log_subscribers_;
    std::vector<std::function<void(const S1Procedure&)>> end_marker_subscribers_;
};

}  // namespace mecsim
