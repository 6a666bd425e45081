#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "orchestrator.hpp"
#include "random.hpp"

namespace mecsim {

struct EnergyProfile {
    double idle_w = 2.1;
    double encode_w = 6.5;   // on-device video encoding
    double offload_w = 2.1;  // UE draw while processing is offloaded

    friend bool operator==(const EnergyProfile&, const EnergyProfile&) = default;
};

enum class PowerMode { LocalProcessing, Offloaded, Idle };

inline double power_w(PowerMode mode, const EnergyProfile& p) {
    switch (mode) {
        case PowerMode::LocalProcessing: return p.encode_w;
        case PowerMode::Offloaded: return p.offload_w;
        case PowerMode::Idle: return p.idle_w;
    }
    return p.idle_w;
}

inline double energy_joules(double duration_s, PowerMode mode, const EnergyProfile& profile) {
    if (duration_s < 0.0) throw std::invalid_argument("energy: duration must be >= 0");
    return duration_s * power_w(mode, profile);
}

// Per-frame end-to-end latency: uplink + processing + downlink, each an
// independent draw, with the total clipped to the configured window.
struct LatencyModel {
    DistSpec uplink_delay;
    DistSpec processing_delay;
    DistSpec downlink_delay;
    double clip_min_s = 0.09;
    double clip_max_s = 1.52;

    void validate() const {
        uplink_delay.validate("uplink_delay");
        processing_delay.validate("processing_delay");
        downlink_delay.validate("downlink_delay");
        if (clip_min_s < 0.0 || clip_max_s < clip_min_s)
            throw std::invalid_argument("latency clip window must satisfy 0 <= min <= max");
    }

    friend bool operator==(const LatencyModel&, const LatencyModel&) = default;
};

// Calibrated default: component means (0.2, 0.15, 0.2) s with a shared
// log-sigma of 0.74, giving a clipped total with mean ~0.55 s and p95 ~1.06 s.
inline LatencyModel default_latency_model() {
    constexpr double sigma = 0.74;
    return LatencyModel{lognormal_dist(0.2, sigma), lognormal_dist(0.15, sigma),
                        lognormal_dist(0.2, sigma), 0.09, 1.52};
}

enum class SessionState { Connected, Disrupted, Polling };

inline const char* to_string(SessionState s) {
    switch (s) {
        case SessionState::Connected: return "Connected";
        case SessionState::Disrupted: return "Disrupted";
        case SessionState::Polling: return "Polling";
    }
    return "?";
}

struct LatencySample {
    SimTime t;
    double e2e_s = 0.0;
};

// Client side of the stream: emits frame round-trips while connected, polls
// for the service endpoint after a disruption, and accounts connected vs
// disrupted time plus UE energy. Disruption starts the moment the serving
// pod is killed (the stream stops); frames merely stop flowing after that.
class StreamSession {
public:
    StreamSession(Engine& engine, Orchestrator& orchestrator, int ue_id, std::string service,
                  LatencyModel latency, EnergyProfile energy, RandomStream rng,
                  double frame_interval_s = 1.0, double poll_interval_s = 1.0)
        : engine_(engine),
          orchestrator_(orchestrator),
          ue_id_(ue_id),
          service_(std::move(service)),
          latency_(latency),
          energy_(energy),
          rng_(std::move(rng)),
          frame_interval_s_(frame_interval_s),
          poll_interval_s_(poll_interval_s) {
        orchestrator_.on_pod_killed([this](const Pod& pod) {
            if (pod.service_name == service_) on_service_disrupted();
        });
    }

    // Call once before the scenario runs; assumes the service is deployed.
    void start(SimTime t) {
        started_ = true;
        session_start_ = t;
        last_transition_ = t;
        state_ = SessionState::Connected;
        schedule_frame(t + frame_interval_s_);
    }

    // Closes the accounting at scenario end.
    void finalize(SimTime end) {
        accumulate(end);
        finalized_at_ = end;
    }

    SessionState state() const { return state_; }
    int ue_id() const { return ue_id_; }
    const std::string& service() const { return service_; }
    const std::vector<LatencySample>& latency_samples() const { return latency_samples_; }
    const std::vector<SimTime>& disrupted_at() const { return disrupted_at_; }
    const std::vector<SimTime>& reconnected_at() const { return reconnected_at_; }
    const std::vector<double>& downtimes() const { return downtimes_; }
    double connected_time_s() const { return connected_time_s_; }
    double disrupted_time_s() const { return disrupted_time_s_; }

    // UE energy over the session: offload draw while the stream runs, idle
    // draw while disrupted.
    double energy_offloaded_j() const {
        return energy_joules(connected_time_s_, PowerMode::Offloaded, energy_) +
               energy_joules(disrupted_time_s_, PowerMode::Idle, energy_);
    }

    // What the same span would cost with on-device processing.
    double energy_local_equivalent_j() const {
        return energy_joules(connected_time_s_ + disrupted_time_s_, PowerMode::LocalProcessing,
                             energy_);
    }

private:
    void schedule_frame(SimTime at) {
        engine_.schedule(at, EventKind::FrameRoundTrip,
                         {{"service", service_}, {"ue", std::to_string(ue_id_)}},
                         [this](Engine& eng) { frame(eng); });
    }

    void schedule_poll(SimTime at) {
        engine_.schedule(at, EventKind::ClientPoll,
                         {{"service", service_}, {"ue", std::to_string(ue_id_)}},
                         [this](Engine& eng) { poll(eng); });
    }

    bool endpoint_running() const {
        auto ep = orchestrator_.resolve(service_, engine_.now());
        if (!ep) return false;
        const Pod* pod = orchestrator_.find_pod(ep->pod_id);
        return pod && pod->state == PodState::Running;
    }

    void frame(Engine& eng) {
        if (state_ != SessionState::Connected) {
            eng.annotate("outcome", "skipped");
            return;  // polls own the recovery; frames resume on reconnect
        }
        if (!endpoint_running()) {
            eng.annotate("outcome", "disrupted");
            on_service_disrupted();
            return;
        }
        double e2e = latency_.uplink_delay.draw(rng_) + latency_.processing_delay.draw(rng_) +
                     latency_.downlink_delay.draw(rng_);
        e2e = quantize_sample(std::clamp(e2e, latency_.clip_min_s, latency_.clip_max_s));
        latency_samples_.push_back(LatencySample{eng.now(), e2e});
        eng.annotate("e2e_s", format_fixed(e2e, 9));
        eng.annotate("outcome", "ok");
        schedule_frame(eng.now() + frame_interval_s_);
    }

    void poll(Engine& eng) {
        if (state_ == SessionState::Disrupted) transition(SessionState::Polling, eng.now());
        if (state_ != SessionState::Polling) {
            eng.annotate("outcome", "stale");
            return;
        }
        if (!endpoint_running()) {
            eng.annotate("outcome", "retry");
            schedule_poll(eng.now() + poll_interval_s_);
            return;
        }
        transition(SessionState::Connected, eng.now());
        reconnected_at_.push_back(eng.now());
        double downtime = quantize_sample(eng.now() - disrupted_at_.back());
        downtimes_.push_back(downtime);
        eng.annotate("downtime_s", format_fixed(downtime, 9));
        eng.annotate("outcome", "reconnected");
        schedule_frame(eng.now() + frame_interval_s_);
    }

    void on_service_disrupted() {
        if (!started_ || state_ != SessionState::Connected) return;
        SimTime t = engine_.now();
        transition(SessionState::Disrupted, t);
        disrupted_at_.push_back(t);
        schedule_poll(t + poll_interval_s_);
    }

    void accumulate(SimTime until) {
        double span = until - last_transition_;
        if (state_ == SessionState::Connected)
            connected_time_s_ += span;
        else
            disrupted_time_s_ += span;
        last_transition_ = until;
    }

    void transition(SessionState next, SimTime t) {
        accumulate(t);
        state_ = next;
    }

    Engine& engine_;
    Orchestrator& orchestrator_;
    int ue_id_;
    std::string service_;
    LatencyModel latency_;
    EnergyProfile energy_;
    RandomStream rng_;
    double frame_interval_s_;
    double poll_interval_s_;

    bool started_ = false;
    SessionState state_ = SessionState::Connected;
    SimTime session_start_;
    SimTime last_transition_;
    std::optional<SimTime> finalized_at_;
    double connected_time_s_ = 0.0;
    double disrupted_time_s_ = 0.0;
    std::vector<LatencySample> latency_samples_;
    std::vector<SimTime> disrupted_at_;
    std::vector<SimTime> reconnected_at_;
    std::vector<double> downtimes_;
};

}  // namespace mecsim
