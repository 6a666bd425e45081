#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "random.hpp"
#include "sim_time.hpp"

namespace mecsim {

using CellId = int;

struct Position {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

inline double distance_m(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct BaseStation {
    CellId cell_id = 0;
    Position position;
    double tx_power_dbm = 20.0;
    double ho_margin_db = 3.0;  // per-cell handover margin (hysteresis)

    friend bool operator==(const BaseStation&, const BaseStation&) = default;
};

// Log-distance path loss with optional lognormal shadowing:
//   PL(d) = pl0 + 10 * exponent * log10(d / d0) + N(0, shadow_sigma)
struct PathLossModel {
    double pl0_db = 30.0;  // reference loss at d0
    double exponent = 3.5;
    double d0_m = 1.0;
    double shadow_sigma_db = 0.0;

    friend bool operator==(const PathLossModel&, const PathLossModel&) = default;
};

// Distances below 10 cm are clamped up; the shadowing draw comes from the
// radio sub-stream, one draw per evaluated cell.
inline double path_loss_db(double distance, const PathLossModel& m, RandomStream& shadow) {
    distance = std::max(distance, 0.1);
    double pl = m.pl0_db + 10.0 * m.exponent * std::log10(distance / m.d0_m);
    if (m.shadow_sigma_db > 0.0) pl += shadow.normal(0.0, m.shadow_sigma_db);
    return pl;
}

// Piecewise-linear waypoint interpolation, clamped outside the span.
struct MobilityTrace {
    struct Waypoint {
        SimTime t;
        Position pos;

        friend bool operator==(const Waypoint&, const Waypoint&) = default;
    };
    std::vector<Waypoint> waypoints;  // times strictly increasing

    friend bool operator==(const MobilityTrace&, const MobilityTrace&) = default;
};

inline Position position_at(const MobilityTrace& trace, SimTime t) {
    const auto& wp = trace.waypoints;
    if (wp.empty()) throw std::invalid_argument("mobility trace has no waypoints");
    if (t <= wp.front().t) return wp.front().pos;
    if (t >= wp.back().t) return wp.back().pos;
    for (std::size_t i = 1; i < wp.size(); ++i) {
        if (t <= wp[i].t) {
            double span = wp[i].t - wp[i - 1].t;
            double f = (t - wp[i - 1].t) / span;
            return Position{wp[i - 1].pos.x + f * (wp[i].pos.x - wp[i - 1].pos.x),
                            wp[i - 1].pos.y + f * (wp[i].pos.y - wp[i - 1].pos.y)};
        }
    }
    return wp.back().pos;
}

constexpr double kRsrpMinDbm = -140.0;
constexpr double kRsrpMaxDbm = -40.0;
constexpr double kRsrqMinDb = -20.0;
constexpr double kRsrqMaxDb = -3.0;

struct RadioSample {
    SimTime t;
    CellId cell_id = 0;
    double rsrp_dbm = kRsrpMinDbm;
    double rsrq_db = kRsrqMinDb;
    bool serving = false;
};

enum class Metric { Rsrp, Rsrq };

enum class SignalClass { Excellent, Good, Fair, Poor, NoSignal };

inline const char* to_string(SignalClass c) {
    switch (c) {
        case SignalClass::Excellent: return "Excellent";
        case SignalClass::Good: return "Good";
        case SignalClass::Fair: return "Fair";
        case SignalClass::Poor: return "Poor";
        case SignalClass::NoSignal: return "NoSignal";
    }
    return "?";
}

// -70 and up is excellent coverage; -110 and below is effectively no signal.
inline SignalClass classify_rsrp(double rsrp_dbm) {
    if (rsrp_dbm >= -70.0) return SignalClass::Excellent;
    if (rsrp_dbm >= -85.0) return SignalClass::Good;
    if (rsrp_dbm >= -100.0) return SignalClass::Fair;
    if (rsrp_dbm > -110.0) return SignalClass::Poor;
    return SignalClass::NoSignal;
}

// -16 and below is unusable.
inline SignalClass classify_rsrq(double rsrq_db) {
    if (rsrq_db >= -6.0) return SignalClass::Excellent;
    if (rsrq_db >= -10.0) return SignalClass::Good;
    if (rsrq_db >= -13.0) return SignalClass::Fair;
    if (rsrq_db > -16.0) return SignalClass::Poor;
    return SignalClass::NoSignal;
}

// Samples every configured cell at the UE position. rsrp is tx power minus
// path loss; rsrq is rsrp relative to the aggregate received power of all
// cells (quality degrades as interference grows), shifted by a configurable
// offset. Shadowing consumes one draw per cell, in list order.
inline std::vector<RadioSample> sample_cells(const std::vector<BaseStation>& all_bs,
                                             Position ue_pos, CellId serving_cell, SimTime t,
                                             const PathLossModel& model, RandomStream& shadow,
                                             double rsrq_offset_db = 0.0) {
    if (all_bs.empty()) throw std::invalid_argument("no base stations configured");
    std::vector<RadioSample> out;
    out.reserve(all_bs.size());
    double total_mw = 0.0;
    for (const auto& bs : all_bs) {
        double pl = path_loss_db(distance_m(ue_pos, bs.position), model, shadow);
        double rsrp = std::clamp(bs.tx_power_dbm - pl, kRsrpMinDbm, kRsrpMaxDbm);
        total_mw += std::pow(10.0, rsrp / 10.0);
        out.push_back(RadioSample{t, bs.cell_id, rsrp, 0.0, bs.cell_id == serving_cell});
    }
    double total_dbm = 10.0 * std::log10(total_mw);
    for (auto& s : out)
        s.rsrq_db = std::clamp(s.rsrp_dbm - total_dbm + rsrq_offset_db, kRsrqMinDb, kRsrqMaxDb);
    return out;
}

// Single-cell convenience over sample_cells; draw consumption is identical
// (one shadowing draw per configured cell).
inline RadioSample sample_cell(const BaseStation& bs, Position ue_pos,
                               const std::vector<BaseStation>& all_bs, SimTime t,
                               const PathLossModel& model, RandomStream& shadow,
                               double rsrq_offset_db = 0.0, CellId serving_cell = -1) {
    auto samples = sample_cells(all_bs, ue_pos, serving_cell, t, model, shadow, rsrq_offset_db);
    for (const auto& s : samples)
        if (s.cell_id == bs.cell_id) return s;
    throw std::invalid_argument("base station not in configured cell list");
}

struct HandoverDecision {
    SimTime t;
    int ue_id = 0;
    CellId source_cell = 0;
    CellId target_cell = 0;
    double margin_used_db = 0.0;
    Metric metric = Metric::Rsrp;
};

inline double metric_value(const RadioSample& s, Metric m) {
    return m == Metric::Rsrp ? s.rsrp_dbm : s.rsrq_db;
}

// Instantaneous margin trigger: neighbour n qualifies iff
//   M_n > M_s + margin(n)   (strictly; equality never triggers).
// Among qualifiers the strongest wins, ties broken by lowest cell id.
inline std::optional<HandoverDecision> evaluate_handover(
    const RadioSample& serving, const std::vector<RadioSample>& neighbours,
    const std::map<CellId, double>& margins_db, Metric metric, int ue_id = 0) {
    double m_s = metric_value(serving, metric);
    bool found = false;
    double best_m = 0.0;
    CellId best_cell = 0;
    double best_margin = 0.0;
    for (const auto& n : neighbours) {
        if (n.cell_id == serving.cell_id) continue;
        auto it = margins_db.find(n.cell_id);
        if (it == margins_db.end())
            throw std::invalid_argument("no handover margin configured for cell " +
                                        std::to_string(n.cell_id));
        double m_n = metric_value(n, metric);
        if (!(m_n > m_s + it->second)) continue;
        if (!found || m_n > best_m || (m_n == best_m && n.cell_id < best_cell)) {
            found = true;
            best_m = m_n;
            best_cell = n.cell_id;
            best_margin = it->second;
        }
    }
    if (!found) return std::nullopt;
    return HandoverDecision{serving.t, ue_id, serving.cell_id, best_cell, best_margin, metric};
}

// Stateful trigger adding time-to-trigger on top of evaluate_handover: the
// margin condition must hold continuously for ttt seconds before a decision
// fires (ttt = 0 means instantaneous).
class HandoverTrigger {
public:
    HandoverTrigger(Metric metric, std::map<CellId, double> margins_db, double ttt_s = 0.0)
        : metric_(metric), margins_(std::move(margins_db)), ttt_s_(ttt_s) {}

    std::optional<HandoverDecision> observe(int ue_id, const std::vector<RadioSample>& samples,
                                            SimTime t) {
        const RadioSample* serving = nullptr;
        for (const auto& s : samples)
            if (s.serving) serving = &s;
        if (!serving) throw std::invalid_argument("no serving-cell sample in measurement set");

        double m_s = metric_value(*serving, metric_);
        std::map<CellId, SimTime> next_since;
        const RadioSample* best = nullptr;
        for (const auto& n : samples) {
            if (n.cell_id == serving->cell_id) continue;
            auto it = margins_.find(n.cell_id);
            if (it == margins_.end())
                throw std::invalid_argument("no handover margin configured for cell " +
                                            std::to_string(n.cell_id));
            if (!(metric_value(n, metric_) > m_s + it->second)) continue;
            auto prev = qualifying_since_.find(n.cell_id);
            SimTime since = prev == qualifying_since_.end() ? t : prev->second;
            next_since[n.cell_id] = since;
            if (t - since < ttt_s_) continue;
            double m_n = metric_value(n, metric_);
            if (!best || m_n > metric_value(*best, metric_) ||
                (m_n == metric_value(*best, metric_) && n.cell_id < best->cell_id))
                best = &n;
        }
        qualifying_since_ = std::move(next_since);
        if (!best) return std::nullopt;
        qualifying_since_.clear();
        return HandoverDecision{t,      ue_id, serving->cell_id, best->cell_id,
                                margins_.at(best->cell_id), metric_};
    }

    // Clears sustain timers; call when the serving cell changes.
    void reset() { qualifying_since_.clear(); }

    Metric metric() const { return metric_; }

private:
    Metric metric_;
    std::map<CellId, double> margins_;
    double ttt_s_;
    std::map<CellId, SimTime> qualifying_since_;
};

}  // namespace mecsim
