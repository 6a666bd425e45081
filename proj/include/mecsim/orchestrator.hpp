#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "radio.hpp"
#include "random.hpp"

namespace mecsim {

using HostId = int;

struct MecHost {
    HostId host_id = 0;
    bool cordoned = false;
    CellId colocated_cell = 0;  // which cell this edge host serves

    friend bool operator==(const MecHost&, const MecHost&) = default;
};

enum class PodState { Pending, Starting, Running, Terminating, Terminated };

inline const char* to_string(PodState s) {
    switch (s) {
        case PodState::Pending: return "Pending";
        case PodState::Starting: return "Starting";
        case PodState::Running: return "Running";
        case PodState::Terminating: return "Terminating";
        case PodState::Terminated: return "Terminated";
    }
    return "?";
}

struct Pod {
    std::string pod_id;
    std::string service_name;
    HostId host_id = 0;
    PodState state = PodState::Pending;
    SimTime t_killed;   // valid once Terminating
    SimTime t_started;  // valid once Running
    // Start-latency components drawn at scheduling time (zero for the
    // bootstrap deployment).
    double scheduler_delay_s = 0.0;
    double fabric_delay_s = 0.0;
    double container_start_delay_s = 0.0;
    double app_init_delay_s = 0.0;
    double start_latency_s = 0.0;  // sum of the four components
};

// The four delay components that add up to pod start latency: scheduler
// reaction, network fabric, container runtime start, application init.
struct StartLatencyModel {
    DistSpec scheduler_delay;
    DistSpec fabric_delay;
    DistSpec container_start_delay;
    DistSpec app_init_delay;

    void validate() const {
        scheduler_delay.validate("scheduler_delay");
        fabric_delay.validate("fabric_delay");
        container_start_delay.validate("container_start_delay");
        app_init_delay.validate("app_init_delay");
    }

    friend bool operator==(const StartLatencyModel&, const StartLatencyModel&) = default;
};

// Calibrated default: component means (0.5, 0.5, 1.0, 2.45) s with a shared
// log-sigma of 0.36, giving a total with mean ~4.45 s and p95 ~6.4 s while
// keeping well over 99% of totals inside [2.0, 8.5] s. Pushing p95 all the
// way to 6.8 needs sigma ~0.45 and drops that coverage below 99%, so the
// dispersion deliberately sits on the safe side. App init dominates.
inline StartLatencyModel default_start_latency_model() {
    constexpr double sigma = 0.36;
    return StartLatencyModel{lognormal_dist(0.5, sigma), lognormal_dist(0.5, sigma),
                             lognormal_dist(1.0, sigma), lognormal_dist(2.45, sigma)};
}

struct Endpoint {
    HostId host_id = 0;
    std::string pod_id;

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct ServiceRecord {
    std::string service_name;
    Endpoint endpoint;
    SimTime t_last_update;  // when the binding was applied
    SimTime issued_at;      // when the update was issued (last-writer-wins key)
};

// Minimal container-orchestrator model: schedulable hosts with cordons, pods
// with staged start latency, and a DNS registry binding service names to pod
// endpoints. All state mutations happen on the event loop.
class Orchestrator {
public:
    Orchestrator(Engine& engine, std::vector<MecHost> hosts, StartLatencyModel model,
                 RandomStream rng, double termination_grace_s = 0.0)
        : engine_(engine),
          hosts_(std::move(hosts)),
          model_(model),
          rng_(std::move(rng)),
          termination_grace_s_(termination_grace_s) {}

    const std::vector<MecHost>& hosts() const { return hosts_; }

    void cordon(HostId host_id) { host(host_id).cordoned = true; }
    void uncordon(HostId host_id) { host(host_id).cordoned = false; }
    bool cordoned(HostId host_id) const {
        for (const auto& h : hosts_)
            if (h.host_id == host_id) return h.cordoned;
        throw std::invalid_argument("unknown host " + std::to_string(host_id));
    }

    // Bootstraps a service before the scenario starts: pod immediately
    // Running on the given host, DNS registered. Not an event.
    const Pod& deploy_initial(const std::string& service, HostId host_id) {
        host(host_id);  // existence check
        Pod pod;
        pod.pod_id = next_pod_id(service);
        pod.service_name = service;
        pod.host_id = host_id;
        pod.state = PodState::Running;
        pod.t_started = engine_.now();
        pods_.push_back(std::move(pod));
        registry_[service] =
            ServiceRecord{service, Endpoint{host_id, pods_.back().pod_id}, engine_.now(),
                          engine_.now()};
        return pods_.back();
    }

    // Running -> Terminating now; Terminated once the grace delay elapses.
    // The DNS record keeps pointing at the dead pod until update_dns runs;
    // that staleness window is what clients observe as disruption.
    void kill_pod(const std::string& pod_id) {
        Pod* pod = mutable_pod(pod_id);
        if (!pod || pod->state != PodState::Running) {
            warnings_.push_back("kill_pod: " + pod_id + " is not Running; ignored");
            return;
        }
        pod->state = PodState::Terminating;
        pod->t_killed = engine_.now();
        EventPayload payload{{"host", std::to_string(pod->host_id)},
                             {"pod", pod_id},
                             {"service", pod->service_name},
                             {"t_killed", format_fixed(pod->t_killed.secs, 6)}};
        engine_.schedule(engine_.now() + termination_grace_s_, EventKind::PodKilled,
                         std::move(payload), [this, pod_id](Engine&) {
                             Pod* p = mutable_pod(pod_id);
                             p->state = PodState::Terminated;
                             for (const auto& fn : killed_subscribers_) fn(*p);
                         });
    }

    // Places a new pod on the lowest-id schedulable host. The pod turns
    // Running after four independent component draws; each component and the
    // total are quantized once so every export sees identical values.
    // Returns nullopt when every host is cordoned.
    std::optional<std::string> schedule_pod(const std::string& service) {
        const MecHost* target = nullptr;
        for (const auto& h : hosts_)
            if (!h.cordoned && (!target || h.host_id < target->host_id)) target = &h;
        if (!target) return std::nullopt;

        Pod pod;
        pod.pod_id = next_pod_id(service);
        pod.service_name = service;
        pod.host_id = target->host_id;
        pod.state = PodState::Starting;  // accepted by the scheduler
        pod.scheduler_delay_s = quantize_sample(model_.scheduler_delay.draw(rng_));
        pod.fabric_delay_s = quantize_sample(model_.fabric_delay.draw(rng_));
        pod.container_start_delay_s = quantize_sample(model_.container_start_delay.draw(rng_));
        pod.app_init_delay_s = quantize_sample(model_.app_init_delay.draw(rng_));
        pod.start_latency_s =
            quantize_sample(pod.scheduler_delay_s + pod.fabric_delay_s +
                            pod.container_start_delay_s + pod.app_init_delay_s);
        pods_.push_back(pod);

        EventPayload payload{{"appinit_d", format_fixed(pod.app_init_delay_s, 9)},
                             {"container_d", format_fixed(pod.container_start_delay_s, 9)},
                             {"fabric_d", format_fixed(pod.fabric_delay_s, 9)},
                             {"host", std::to_string(pod.host_id)},
                             {"pod", pod.pod_id},
                             {"scheduler_d", format_fixed(pod.scheduler_delay_s, 9)},
                             {"service", service},
                             {"start_latency_s", format_fixed(pod.start_latency_s, 9)}};
        std::string pod_id = pod.pod_id;
        engine_.schedule(engine_.now() + pod.start_latency_s, EventKind::PodStarted,
                         std::move(payload), [this, pod_id](Engine& eng) {
                             Pod* p = mutable_pod(pod_id);
                             p->state = PodState::Running;
                             p->t_started = eng.now();
                             for (const auto& fn : started_subscribers_) fn(*p);
                         });
        return pod_id;
    }

    // Replaces the service record once the propagation delay elapses; until
    // then resolve keeps returning the old binding. When two updates are in
    // flight, the later-issued one wins after both propagate.
    void update_dns(const std::string& service, Endpoint endpoint, double propagation_delay_s) {
        const Pod* pod = find_pod(endpoint.pod_id);
        if (!pod || (pod->state != PodState::Running && pod->state != PodState::Starting))
            throw std::logic_error("update_dns: endpoint pod must be Running or Starting");
        SimTime issued = engine_.now();
        EventPayload payload{{"host", std::to_string(endpoint.host_id)},
                             {"pod", endpoint.pod_id},
                             {"service", service}};
        engine_.schedule(issued + propagation_delay_s, EventKind::DnsUpdated, std::move(payload),
                         [this, service, endpoint, issued](Engine& eng) {
                             auto it = registry_.find(service);
                             if (it != registry_.end() && issued < it->second.issued_at) return;
                             registry_[service] =
                                 ServiceRecord{service, endpoint, eng.now(), issued};
                             for (const auto& fn : dns_subscribers_) fn(registry_[service]);
                         });
    }

    // Pure with respect to (registry state, t).
    std::optional<Endpoint> resolve(const std::string& service, SimTime) const {
        auto it = registry_.find(service);
        if (it == registry_.end()) return std::nullopt;
        return it->second.endpoint;
    }

    const Pod* find_pod(const std::string& pod_id) const {
        for (const auto& p : pods_)
            if (p.pod_id == pod_id) return &p;
        return nullptr;
    }

    // Running pods on a host, in creation order.
    std::vector<const Pod*> running_pods_on(HostId host_id) const {
        std::vector<const Pod*> out;
        for (const auto& p : pods_)
            if (p.host_id == host_id && p.state == PodState::Running) out.push_back(&p);
        return out;
    }

    const Pod* running_pod(const std::string& service) const {
        for (const auto& p : pods_)
            if (p.service_name == service && p.state == PodState::Running) return &p;
        return nullptr;
    }

    const std::vector<Pod>& pods() const { return pods_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    void on_pod_killed(std::function<void(const Pod&)> fn) {
        killed_subscribers_.push_back(std::move(fn));
    }
    void on_pod_started(std::function<void(const Pod&)> fn) {
        started_subscribers_.push_back(std::move(fn));
    }
    void on_dns_updated(std::function<void(const ServiceRecord&)> fn) {
        dns_subscribers_.push_back(std::move(fn));
    }

private:
    MecHost& host(HostId id) {
        for (auto& h : hosts_)
            if (h.host_id == id) return h;
        throw std::invalid_argument("unknown host " + std::to_string(id));
    }

    Pod* mutable_pod(const std::string& pod_id) {
        for (auto& p : pods_)
            if (p.pod_id == pod_id) return &p;
        return nullptr;
    }

    std::string next_pod_id(const std::string& service) {
        return service + "-" + std::to_string(++pod_counter_[service]);
    }

    Engine& engine_;
    std::vector<MecHost> hosts_;
    StartLatencyModel model_;
    RandomStream rng_;
    double termination_grace_s_;
    std::vector<Pod> pods_;
    std::map<std::string, ServiceRecord> registry_;
    std::map<std::string, int> pod_counter_;
    std::vector<std::string> warnings_;
    std::vector<std::function<void(const Pod&)>> killed_subscribers_;
    std::vector<std::function<void(const Pod&)>> started_subscribers_;
    std::vector<std::function<void(const ServiceRecord&)>> dns_subscribers_;
};

}  // namespace mecsim
