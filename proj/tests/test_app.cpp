#include <catch2/catch_amalgamated.hpp>

#include "mecsim/app.hpp"

using namespace mecsim;

namespace {

LatencyModel fixed_latency(double up, double proc, double down, double clip_min = 0.0,
                           double clip_max = 100.0) {
    return LatencyModel{fixed_dist(up), fixed_dist(proc), fixed_dist(down), clip_min, clip_max};
}

StartLatencyModel instant_start() {
    return StartLatencyModel{fixed_dist(0.0), fixed_dist(0.0), fixed_dist(0.0), fixed_dist(0.0)};
}

struct Fixture {
    Engine engine;
    Orchestrator orch;
    StreamSession session;

    explicit Fixture(LatencyModel latency = fixed_latency(0.2, 0.15, 0.2),
                     double poll_interval = 1.0)
        : orch(engine, {{1, false, 1}, {2, false, 2}}, instant_start(), RandomStream(5)),
          session(engine, orch, 1, "svc", latency, EnergyProfile{}, RandomStream(6), 1.0,
                  poll_interval) {}

    void at(double t, std::function<void(Engine&)> fn) {
        engine.schedule(SimTime{t}, EventKind::MeasurementTick, {{"ue", "1"}}, std::move(fn));
    }

    void finish(double t) {
        engine.run_until(SimTime{t});
        session.finalize(SimTime{t});
    }
};

}  // namespace

TEST_CASE("energy is duration times the mode's power draw") {
    EnergyProfile p;
    REQUIRE(energy_joules(10.0, PowerMode::LocalProcessing, p) == 65.0);
    REQUIRE(energy_joules(10.0, PowerMode::Idle, p) == 21.0);
    REQUIRE(energy_joules(10.0, PowerMode::Offloaded, p) == 21.0);
    REQUIRE(energy_joules(0.0, PowerMode::LocalProcessing, p) == 0.0);
    REQUIRE(energy_joules(0.0, PowerMode::Offloaded, p) == 0.0);
    REQUIRE_THROWS_AS(energy_joules(-1.0, PowerMode::Idle, p), std::invalid_argument);
}

TEST_CASE("offloading cuts UE power to about a third") {
    EnergyProfile p;
    REQUIRE(p.offload_w / p.encode_w <= 1.0 / 3.0 + 0.01);
}

TEST_CASE("offloaded energy beats local processing for any positive duration") {
    EnergyProfile p;
    for (double d : {0.1, 1.0, 17.5, 3600.0})
        REQUIRE(energy_joules(d, PowerMode::Offloaded, p) <
                energy_joules(d, PowerMode::LocalProcessing, p));
}

TEST_CASE("fixed component delays produce the exact frame round-trip") {
    Fixture f;
    f.orch.deploy_initial("svc", 1);
    f.session.start(SimTime{0.0});
    f.finish(3.5);

    REQUIRE(f.session.latency_samples().size() == 3);
    for (const auto& s : f.session.latency_samples())
        REQUIRE_THAT(s.e2e_s, Catch::Matchers::WithinAbs(0.55, 1e-9));
    REQUIRE(f.session.state() == SessionState::Connected);
}

TEST_CASE("zero delays give zero end-to-end latency") {
    Fixture f(fixed_latency(0.0, 0.0, 0.0));
    f.orch.deploy_initial("svc", 1);
    f.session.start(SimTime{0.0});
    f.finish(2.5);
    REQUIRE(f.session.latency_samples().size() == 2);
    REQUIRE(f.session.latency_samples()[0].e2e_s == 0.0);
}

TEST_CASE("the total is clipped to the configured window") {
    Fixture f(fixed_latency(1.0, 1.0, 1.0, 0.09, 1.52));
    f.orch.deploy_initial("svc", 1);
    f.session.start(SimTime{0.0});
    f.finish(1.5);
    REQUIRE(f.session.latency_samples()[0].e2e_s == 1.52);

    Fixture g(fixed_latency(0.01, 0.01, 0.01, 0.09, 1.52));
    g.orch.deploy_initial("svc", 1);
    g.session.start(SimTime{0.0});
    g.finish(1.5);
    REQUIRE(g.session.latency_samples()[0].e2e_s == 0.09);
}

TEST_CASE("a killed pod disrupts the session at the kill instant") {
    Fixture f;
    const Pod& pod = f.orch.deploy_initial("svc", 1);
    std::string pod_id = pod.pod_id;
    f.session.start(SimTime{0.0});
    f.at(5.3, [&](Engine&) { f.orch.kill_pod(pod_id); });
    f.finish(8.0);

    REQUIRE(f.session.disrupted_at() == std::vector<SimTime>{SimTime{5.3}});
    REQUIRE(f.session.reconnected_at().empty());  // nothing came back
    REQUIRE(f.session.state() != SessionState::Connected);
    // Frames stopped at the disruption: samples only at t = 1..5.
    REQUIRE(f.session.latency_samples().size() == 5);
}

TEST_CASE("polling reconnects once DNS points at a Running pod") {
    Fixture f;
    const Pod& pod = f.orch.deploy_initial("svc", 1);
    std::string pod_id = pod.pod_id;
    f.session.start(SimTime{0.0});
    // Kill at 5.0; replacement Running immediately but DNS lands at 7.25.
    f.at(5.0, [&](Engine&) {
        f.orch.kill_pod(pod_id);
        auto new_id = *f.orch.schedule_pod("svc");
        f.orch.update_dns("svc", Endpoint{2, new_id}, 2.25);
    });
    f.finish(12.0);

    REQUIRE(f.session.disrupted_at() == std::vector<SimTime>{SimTime{5.0}});
    // Polls at 6.0, 7.0 fail (stale DNS), 8.0 succeeds.
    REQUIRE(f.session.reconnected_at() == std::vector<SimTime>{SimTime{8.0}});
    REQUIRE(f.session.downtimes().size() == 1);
    REQUIRE_THAT(f.session.downtimes()[0], Catch::Matchers::WithinAbs(3.0, 1e-9));
    REQUIRE(f.session.state() == SessionState::Connected);
    // Frames resumed after the reconnect.
    REQUIRE(f.session.latency_samples().back().t.secs > 8.0);
}

TEST_CASE("downtime stays within the poll-quantized bound") {
    // downtime in [gap, gap + poll_interval] where gap = time until the
    // refreshed endpoint is resolvable.
    for (double poll : {0.25, 0.5, 1.0, 2.0}) {
        for (double gap : {0.4, 1.0, 1.7, 3.01}) {
            Fixture f(fixed_latency(0.2, 0.15, 0.2), poll);
            const Pod& pod = f.orch.deploy_initial("svc", 1);
            std::string pod_id = pod.pod_id;
            f.session.start(SimTime{0.0});
            f.at(5.0, [&f, pod_id, gap](Engine&) {
                f.orch.kill_pod(pod_id);
                auto new_id = *f.orch.schedule_pod("svc");
                f.orch.update_dns("svc", Endpoint{2, new_id}, gap);
            });
            f.finish(40.0);
            REQUIRE(f.session.downtimes().size() == 1);
            double downtime = f.session.downtimes()[0];
            REQUIRE(downtime >= gap - 1e-9);
            REQUIRE(downtime <= gap + poll + 1e-9);
        }
    }
}

TEST_CASE("an unresolvable service disrupts on the first frame") {
    Fixture f;  // never deployed
    f.session.start(SimTime{0.0});
    f.at(2.5, [&](Engine&) {
        const Pod& pod = f.orch.deploy_initial("svc", 1);
        (void)pod;
    });
    f.finish(6.0);

    // Frame at t=1 found nothing; the poll after the deployment reconnected.
    REQUIRE(f.session.disrupted_at() == std::vector<SimTime>{SimTime{1.0}});
    REQUIRE(f.session.reconnected_at() == std::vector<SimTime>{SimTime{3.0}});
}

TEST_CASE("time conservation holds exactly across cycles") {
    Fixture f;
    const Pod& pod = f.orch.deploy_initial("svc", 1);
    std::string first = pod.pod_id;
    f.session.start(SimTime{0.0});
    f.at(3.0, [&](Engine&) {
        f.orch.kill_pod(first);
        auto id = *f.orch.schedule_pod("svc");
        f.orch.update_dns("svc", Endpoint{2, id}, 0.5);
    });
    f.at(9.5, [&](Engine&) {
        auto ep = f.orch.resolve("svc", f.engine.now());
        f.orch.kill_pod(ep->pod_id);
        auto id = *f.orch.schedule_pod("svc");
        f.orch.update_dns("svc", Endpoint{1, id}, 0.5);
    });
    f.finish(15.0);

    REQUIRE(f.session.disrupted_at().size() == 2);
    REQUIRE(f.session.reconnected_at().size() == 2);
    REQUIRE_THAT(f.session.connected_time_s() + f.session.disrupted_time_s(),
                 Catch::Matchers::WithinAbs(15.0, 1e-9));

    // Session energy splits across the two accumulators.
    EnergyProfile p;
    double expect = p.offload_w * f.session.connected_time_s() +
                    p.idle_w * f.session.disrupted_time_s();
    REQUIRE_THAT(f.session.energy_offloaded_j(), Catch::Matchers::WithinAbs(expect, 1e-9));
    REQUIRE(f.session.energy_offloaded_j() < f.session.energy_local_equivalent_j());
}
