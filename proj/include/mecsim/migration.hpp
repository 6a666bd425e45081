#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epc.hpp"
#include "orchestrator.hpp"

namespace mecsim {

struct MigrationRecord {
    enum class Outcome { InFlight, Completed, Failed };

    std::string service_name;
    SimTime trigger_log_t;  // timestamp of the triggering log entry
    SimTime t_killed;
    SimTime t_started;      // valid when has_started
    SimTime t_dns_updated;  // valid when outcome == Completed
    bool has_started = false;
    HostId src_host = 0;
    HostId dst_host = 0;  // valid when has_started
    std::string pod_id;   // replacement pod
    double migration_latency_s = 0.0;  // t_started - t_killed, quantized
    double scheduler_d = 0.0, fabric_d = 0.0, container_d = 0.0, appinit_d = 0.0;
    Outcome outcome = Outcome::InFlight;
};

inline const char* to_string(MigrationRecord::Outcome o) {
    switch (o) {
        case MigrationRecord::Outcome::InFlight: return "InFlight";
        case MigrationRecord::Outcome::Completed: return "Completed";
        case MigrationRecord::Outcome::Failed: return "Failed";
    }
    return "?";
}

// Reactive trigger policy: migrate when the EPC logs a handover request.
// The match predicate is pluggable so a pre-emptive trigger (e.g. one driven
// by signal-strength prediction) can be substituted without touching the
// pipeline.
struct TriggerPolicy {
    enum class Kind { ReactiveOnS1Request };

    Kind kind = Kind::ReactiveOnS1Request;
    double cooldown_s = 5.0;  // suppresses duplicate triggers from margin flapping
    std::function<bool(const EpcLogEntry&)> matches;  // optional override of the token match
};

// Scans the EPC log stream; on each handover request drives
// cordon -> kill -> reschedule -> DNS update for every service whose pod
// runs on the source cell's MEC host. Target selection is left entirely to
// the scheduler.
class MigrationController {
public:
    MigrationController(Engine& engine, Orchestrator& orchestrator, Epc& epc,
                        TriggerPolicy policy, std::map<CellId, std::vector<HostId>> cell_to_hosts,
                        double dns_propagation_s)
        : engine_(engine),
          orchestrator_(orchestrator),
          policy_(std::move(policy)),
          cell_to_hosts_(std::move(cell_to_hosts)),
          dns_propagation_s_(dns_propagation_s) {
        epc.subscribe_log([this](const EpcLogEntry& entry) { on_log_entry(entry); });
        orchestrator_.on_pod_started([this](const Pod& pod) { on_pod_started(pod); });
        orchestrator_.on_dns_updated([this](const ServiceRecord& rec) { on_dns_updated(rec); });
    }

    // Entry point for the log stream. Non-matching lines are skipped; a
    // matching one initiates a migration for each service on the source
    // host, unless that service is mid-migration or within cooldown.
    void on_log_entry(const EpcLogEntry& entry) {
        if (policy_.matches ? !policy_.matches(entry) : !is_handover_request(entry)) return;

        auto parsed = parse_handover_line(entry.text);
        if (!parsed) return;
        auto [src_cell, dst_cell] = *parsed;

        // The handover designates the target cell's host as the next
        // placement candidate, so it must be schedulable again.
        if (auto it = cell_to_hosts_.find(dst_cell); it != cell_to_hosts_.end())
            for (HostId h : it->second) orchestrator_.uncordon(h);

        auto src_it = cell_to_hosts_.find(src_cell);
        if (src_it == cell_to_hosts_.end()) return;
        for (HostId src_host : src_it->second) {
            // Names first: migrating mutates the pod table under us.
            std::vector<std::string> services;
            for (const Pod* pod : orchestrator_.running_pods_on(src_host))
                services.push_back(pod->service_name);
            for (const auto& service : services) {
                if (!eligible(service, entry.t)) continue;
                migrate(service, src_host, entry.t);
            }
        }
    }

    const std::vector<MigrationRecord>& records() const { return records_; }

    std::vector<const MigrationRecord*> completed() const {
        std::vector<const MigrationRecord*> out;
        for (const auto& r : records_)
            if (r.outcome == MigrationRecord::Outcome::Completed) out.push_back(&r);
        return out;
    }

    static bool is_handover_request(const EpcLogEntry& entry) {
        return entry.text.rfind(kTokenHandoverRequest, 0) == 0;
    }

private:
    bool eligible(const std::string& service, SimTime t) const {
        auto st = per_service_.find(service);
        if (st == per_service_.end()) return true;
        if (st->second.in_flight) return false;
        if (!st->second.last_trigger) return true;
        return !(t - *st->second.last_trigger < policy_.cooldown_s);
    }

    // cordon -> kill -> schedule; the DNS update is issued once the new pod
    // reports Running. A scheduling failure leaves the service down and the
    // record Failed.
    void migrate(const std::string& service, HostId src_host, SimTime trigger_t) {
        auto& st = per_service_[service];
        st.last_trigger = trigger_t;

        MigrationRecord rec;
        rec.service_name = service;
        rec.trigger_log_t = trigger_t;
        rec.src_host = src_host;

        orchestrator_.cordon(src_host);
        const Pod* old_pod = orchestrator_.running_pod(service);
        if (!old_pod) return;
        std::string old_pod_id = old_pod->pod_id;
        orchestrator_.kill_pod(old_pod_id);
        rec.t_killed = engine_.now();

        auto new_pod_id = orchestrator_.schedule_pod(service);
        if (!new_pod_id) {
            rec.outcome = MigrationRecord::Outcome::Failed;
            records_.push_back(std::move(rec));
            return;
        }
        rec.pod_id = *new_pod_id;
        records_.push_back(std::move(rec));
        st.in_flight = true;
        by_pod_[*new_pod_id] = records_.size() - 1;
    }

    void on_pod_started(const Pod& pod) {
        auto it = by_pod_.find(pod.pod_id);
        if (it == by_pod_.end()) return;
        MigrationRecord& rec = records_[it->second];
        rec.has_started = true;
        rec.t_started = pod.t_started;
        rec.dst_host = pod.host_id;
        rec.scheduler_d = pod.scheduler_delay_s;
        rec.fabric_d = pod.fabric_delay_s;
        rec.container_d = pod.container_start_delay_s;
        rec.appinit_d = pod.app_init_delay_s;
        rec.migration_latency_s = pod.start_latency_s;
        orchestrator_.update_dns(rec.service_name, Endpoint{pod.host_id, pod.pod_id},
                                 dns_propagation_s_);
    }

    void on_dns_updated(const ServiceRecord& record) {
        auto it = by_pod_.find(record.endpoint.pod_id);
        if (it == by_pod_.end()) return;
        MigrationRecord& rec = records_[it->second];
        if (rec.outcome != MigrationRecord::Outcome::InFlight) return;
        rec.t_dns_updated = engine_.now();
        rec.outcome = MigrationRecord::Outcome::Completed;
        per_service_[rec.service_name].in_flight = false;
        by_pod_.erase(it);
        // Completion lands in the trace on the DnsUpdated event, so a trace
        // alone reproduces the migration-latency sample set.
        engine_.annotate("migration_latency_s", format_fixed(rec.migration_latency_s, 9));
    }

    // "<TOKEN> ue=<id> src=<cell> dst=<cell>" -> (src, dst)
    static std::optional<std::pair<CellId, CellId>> parse_handover_line(const std::string& text) {
        auto field = [&text](const std::string& key) -> std::optional<int> {
            auto pos = text.find(" " + key + "=");
            if (pos == std::string::npos) return std::nullopt;
            pos += key.size() + 2;
            auto end = text.find(' ', pos);
            try {
                return std::stoi(text.substr(pos, end - pos));
            } catch (...) {
                return std::nullopt;
            }
        };
        auto src = field("src");
        auto dst = field("dst");
        if (!src || !dst) return std::nullopt;
        return std::make_pair(*src, *dst);
    }

    struct ServiceState {
        std::optional<SimTime> last_trigger;
        bool in_flight = false;
    };

    Engine& engine_;
    Orchestrator& orchestrator_;
    TriggerPolicy policy_;
    std::map<CellId, std::vector<HostId>> cell_to_hosts_;
    double dns_propagation_s_;
    std::vector<MigrationRecord> records_;
    std::map<std::string, ServiceState> per_service_;
    std::map<std::string, std::size_t> by_pod_;  // replacement pod -> record index
};

}  // namespace mecsim
