#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "app.hpp"
#include "engine.hpp"
#include "epc.hpp"
#include "metrics.hpp"
#include "migration.hpp"
#include "orchestrator.hpp"
#include "radio.hpp"
#include "scenario.hpp"

namespace mecsim {

// Wires one scenario into a running system: measurement ticks feed the
// handover trigger, decisions drive the EPC state machine, the migration
// controller scans the EPC log, and the client session measures what the
// UE would see. Owns the engine and all module state for one run.
class Simulation {
public:
    explicit Simulation(Scenario scenario)
        : scenario_(std::move(scenario)),
          random_(scenario_.seed),
          radio_rng_(random_.stream("radio")),
          epc_(engine_, scenario_.epc),
          orchestrator_(engine_, scenario_.mec_hosts, scenario_.orchestrator.start_latency,
                        random_.stream("orchestrator"), scenario_.orchestrator.termination_grace_s),
          controller_(engine_, orchestrator_, epc_,
                      TriggerPolicy{TriggerPolicy::Kind::ReactiveOnS1Request,
                                    scenario_.migration_cooldown_s, nullptr},
                      cell_to_hosts(scenario_), scenario_.orchestrator.dns_propagation_s),
          session_(engine_, orchestrator_, scenario_.ue.ue_id, scenario_.ue.service,
                   scenario_.app.latency, scenario_.energy, random_.stream("app"),
                   scenario_.app.frame_interval_s, scenario_.app.poll_interval_s),
          trigger_(scenario_.radio.metric, margins(scenario_), scenario_.radio.ttt_s),
          serving_cell_(scenario_.ue.serving_cell) {
        epc_.on_end_marker([this](const S1Procedure& proc) {
            serving_cell_ = proc.target_cell;
            trigger_.reset();
        });
    }

    // Runs the scenario to its configured duration. The ScenarioEnd event is
    // scheduled first so it is processed ahead of anything else that fires at
    // exactly t = duration; it closes session accounting and stops the loop.
    void run() {
        SimTime end{scenario_.duration_s};
        engine_.schedule(end, EventKind::ScenarioEnd,
                         {{"duration_s", format_fixed(scenario_.duration_s, 6)}},
                         [this, end](Engine& eng) {
                             session_.finalize(end);
                             eng.stop();
                         });
        engine_.schedule(SimTime{0.0}, EventKind::MeasurementTick,
                         {{"ue", std::to_string(scenario_.ue.ue_id)}},
                         [this](Engine& eng) { measurement_tick(eng); });

        for (const auto& svc : scenario_.services)
            orchestrator_.deploy_initial(svc.name, svc.initial_host);
        session_.start(SimTime{0.0});

        engine_.run_until(end);
    }

    const Scenario& scenario() const { return scenario_; }
    const Engine& engine() const { return engine_; }
    const Epc& epc() const { return epc_; }
    const Orchestrator& orchestrator() const { return orchestrator_; }
    const MigrationController& controller() const { return controller_; }
    const StreamSession& session() const { return session_; }
    const std::vector<RadioSample>& rss_samples() const { return rss_; }
    CellId serving_cell() const { return serving_cell_; }

    // Sample sets backing summary.csv, the ECDF exports and `summarize`.
    SampleSet migration_latency_set() const {
        SampleSet set{"migration_latency", {}};
        for (const auto* rec : controller_.completed()) set.values.push_back(rec->migration_latency_s);
        return set;
    }

    SampleSet e2e_latency_set() const {
        SampleSet set{"e2e_latency", {}};
        for (const auto& s : session_.latency_samples()) set.values.push_back(s.e2e_s);
        return set;
    }

    SampleSet downtime_set() const { return SampleSet{"downtime", session_.downtimes()}; }

    std::vector<SampleSet> sample_sets() const {
        return {migration_latency_set(), e2e_latency_set(), downtime_set()};
    }

private:
    static std::map<CellId, std::vector<HostId>> cell_to_hosts(const Scenario& s) {
        std::map<CellId, std::vector<HostId>> out;
        for (const auto& h : s.mec_hosts) out[h.colocated_cell].push_back(h.host_id);
        return out;
    }

    static std::map<CellId, double> margins(const Scenario& s) {
        std::map<CellId, double> out;
        for (const auto& bs : s.base_stations) out[bs.cell_id] = bs.ho_margin_db;
        return out;
    }

    void measurement_tick(Engine& eng) {
        SimTime t = eng.now();
        Position pos = position_at(scenario_.ue.mobility, t);
        auto samples = sample_cells(scenario_.base_stations, pos, serving_cell_, t,
                                    scenario_.radio.path_loss, radio_rng_,
                                    scenario_.radio.rsrq_offset_db);
        rss_.insert(rss_.end(), samples.begin(), samples.end());

        if (auto decision = trigger_.observe(scenario_.ue.ue_id, samples, t)) {
            eng.annotate("decision", std::to_string(decision->source_cell) + ">" +
                                         std::to_string(decision->target_cell));
            eng.schedule(t, EventKind::HandoverSignal,
                         {{"dst", std::to_string(decision->target_cell)},
                          {"src", std::to_string(decision->source_cell)},
                          {"ue", std::to_string(decision->ue_id)}},
                         [this, d = *decision](Engine&) { epc_.initiate_s1(d); });
        }
        eng.schedule(t + scenario_.radio.tick_interval_s, EventKind::MeasurementTick,
                     {{"ue", std::to_string(scenario_.ue.ue_id)}},
                     [this](Engine& e) { measurement_tick(e); });
    }

    Scenario scenario_;
    Engine engine_;
    RandomSource random_;
    RandomStream radio_rng_;
    Epc epc_;
    Orchestrator orchestrator_;
    MigrationController controller_;
    StreamSession session_;
    HandoverTrigger trigger_;
    CellId serving_cell_;
    std::vector<RadioSample> rss_;
};

}  // namespace mecsim
