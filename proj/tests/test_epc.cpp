#include <catch2/catch_amalgamated.hpp>

#include "mecsim/epc.hpp"

using namespace mecsim;

namespace {

HandoverDecision decision(int ue, CellId src, CellId dst) {
    return HandoverDecision{SimTime{0.0}, ue, src, dst, 3.0, Metric::Rsrp};
}

struct Fixture {
    Engine engine;
    Epc epc{engine, S1Delays{0.020, 0.030, 0.050}};

    void at(double t, std::function<void(Engine&)> fn) {
        engine.schedule(SimTime{t}, EventKind::HandoverSignal, {{"ue", "1"}}, std::move(fn));
    }
};

std::size_t count_token(const std::vector<EpcLogEntry>& log, const char* token) {
    std::size_t n = 0;
    for (const auto& e : log)
        if (e.text.rfind(token, 0) == 0) ++n;
    return n;
}

}  // namespace

TEST_CASE("the End Marker lands at the sum of the stage delays") {
    Fixture f;
    f.at(10.0, [&f](Engine&) { f.epc.initiate_s1(decision(1, 1, 2)); });
    f.engine.run_until(SimTime{20.0});

    REQUIRE(f.epc.procedures().size() == 1);
    const auto& proc = f.epc.procedures()[0];
    REQUIRE(proc.state == S1Procedure::State::Complete);
    REQUIRE(proc.t_requested == SimTime{10.0});
    REQUIRE_THAT(proc.t_end_marker.secs, Catch::Matchers::WithinAbs(10.100, 1e-12));
    // The delta is exactly the configured delays.
    REQUIRE_THAT(proc.t_end_marker - proc.t_requested,
                 Catch::Matchers::WithinAbs(0.020 + 0.030 + 0.050, 1e-12));

    REQUIRE(count_token(f.epc.log(), kTokenHandoverRequest) == 1);
    REQUIRE(count_token(f.epc.log(), kTokenEndMarker) == 1);
}

TEST_CASE("log lines carry the exact pattern the controller matches") {
    Fixture f;
    f.at(10.0, [&f](Engine&) { f.epc.initiate_s1(decision(7, 1, 2)); });
    f.engine.run_until(SimTime{20.0});
    REQUIRE(f.epc.log().front().line() == "10.000 INFO S1-HANDOVER-REQUEST ue=7 src=1 dst=2");
    REQUIRE(f.epc.log()[3].line() == "10.100 INFO END-MARKER ue=7 src=1 dst=2");
}

TEST_CASE("a second decision for the same UE while in flight is dropped with WARN") {
    Fixture f;
    f.at(10.0, [&f](Engine&) { f.epc.initiate_s1(decision(1, 1, 2)); });
    f.at(10.05, [&f](Engine&) { f.epc.initiate_s1(decision(1, 2, 1)); });
    f.engine.run_until(SimTime{20.0});

    REQUIRE(f.epc.procedures().size() == 1);  // second never became a procedure
    REQUIRE(count_token(f.epc.log(), kTokenDropped) == 1);
    bool warn_seen = false;
    for (const auto& e : f.epc.log())
        if (e.level == LogLevel::Warn) warn_seen = true;
    REQUIRE(warn_seen);

    // Once complete, a new procedure for the UE is accepted again.
    Fixture g;
    g.at(10.0, [&g](Engine&) { g.epc.initiate_s1(decision(1, 1, 2)); });
    g.at(11.0, [&g](Engine&) { g.epc.initiate_s1(decision(1, 2, 1)); });
    g.engine.run_until(SimTime{20.0});
    REQUIRE(g.epc.procedures().size() == 2);
    REQUIRE(count_token(g.epc.log(), kTokenHandoverRequest) == 2);
    REQUIRE(count_token(g.epc.log(), kTokenEndMarker) == 2);
}

TEST_CASE("independent UEs may have procedures in flight simultaneously") {
    Fixture f;
    f.at(10.0, [&f](Engine&) { f.epc.initiate_s1(decision(1, 1, 2)); });
    f.at(10.05, [&f](Engine&) { f.epc.initiate_s1(decision(2, 1, 2)); });
    f.engine.run_until(SimTime{20.0});
    REQUIRE(f.epc.procedures().size() == 2);
    REQUIRE(count_token(f.epc.log(), kTokenDropped) == 0);
}

TEST_CASE("zero delays advance every state at the same instant, in order") {
    Engine engine;
    Epc epc(engine, S1Delays{0.0, 0.0, 0.0});
    engine.schedule(SimTime{10.0}, EventKind::HandoverSignal, {{"ue", "1"}},
                    [&epc](Engine&) { epc.initiate_s1(decision(1, 1, 2)); });
    engine.run_until(SimTime{10.0});

    REQUIRE(epc.procedures()[0].state == S1Procedure::State::Complete);
    REQUIRE(epc.procedures()[0].t_end_marker == SimTime{10.0});
    REQUIRE(epc.log().size() == 5);
    for (const auto& e : epc.log()) REQUIRE(e.t == SimTime{10.0});
    // Emission order mirrors the state machine.
    REQUIRE(epc.log()[0].text.rfind(kTokenHandoverRequest, 0) == 0);
    REQUIRE(epc.log()[4].text.rfind(kTokenComplete, 0) == 0);
}

TEST_CASE("tail_log returns entries strictly after the cursor") {
    Fixture f;
    REQUIRE(f.epc.tail_log(SimTime{0.0}).empty());

    f.at(1.0, [&f](Engine&) { f.epc.initiate_s1(decision(1, 1, 2)); });
    f.at(2.0, [&f](Engine&) { f.epc.initiate_s1(decision(2, 1, 2)); });
    f.engine.run_until(SimTime{20.0});

    auto all = f.epc.tail_log(SimTime{0.0});
    REQUIRE(all.size() == f.epc.log().size());

    // Strict cursor: entries at exactly `since` are excluded.
    auto after = f.epc.tail_log(SimTime{1.0});
    for (const auto& e : after) REQUIRE(SimTime{1.0} < e.t);

    // Advancing cursors walk the stream without skips or duplicates.
    SimTime cursor{0.0};
    std::size_t seen = 0;
    while (true) {
        auto chunk = f.epc.tail_log(cursor);
        if (chunk.empty()) break;
        seen += chunk.size();
        cursor = chunk.back().t;
    }
    REQUIRE(seen == f.epc.log().size());
}

TEST_CASE("the log stream is append-only and time-ordered") {
    Fixture f;
    for (int i = 0; i < 5; ++i)
        f.at(1.0 + i, [&f, i](Engine&) { f.epc.initiate_s1(decision(i, 1, 2)); });
    f.engine.run_until(SimTime{20.0});
    const auto& log = f.epc.log();
    for (std::size_t i = 1; i < log.size(); ++i) REQUIRE(log[i - 1].t <= log[i].t);
}
