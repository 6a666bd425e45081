#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "metrics.hpp"
#include "simulation.hpp"
#include "trace.hpp"

namespace mecsim {

namespace export_detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

}  // namespace export_detail

// rss.csv: the per-tick radio dataset (one row per cell per tick).
inline void write_rss_csv(std::ostream& os, const std::vector<RadioSample>& samples) {
    os << "t,cell_id,rsrp_dbm,rsrq_db,serving\n";
    for (const auto& s : samples)
        os << format_fixed(s.t.secs, 6) << ',' << s.cell_id << ',' << format_fixed(s.rsrp_dbm, 6)
           << ',' << format_fixed(s.rsrq_db, 6) << ',' << (s.serving ? 1 : 0) << '\n';
}

inline void write_epc_log(std::ostream& os, const std::vector<EpcLogEntry>& log) {
    for (const auto& e : log) os << e.line() << '\n';
}

// migrations.csv: one row per migration; Failed rows leave the start-side
// columns empty.
inline void write_migrations_csv(std::ostream& os, const std::vector<MigrationRecord>& records) {
    os << "service,ho_request_t,t_killed,t_started,migration_latency_s,scheduler_d,fabric_d,"
          "container_d,appinit_d,src_host,dst_host\n";
    for (const auto& r : records) {
        os << r.service_name << ',' << format_fixed(r.trigger_log_t.secs, 6) << ','
           << format_fixed(r.t_killed.secs, 6) << ',';
        if (r.has_started)
            os << format_fixed(r.t_started.secs, 6) << ','
               << format_fixed(r.migration_latency_s, 9) << ',' << format_fixed(r.scheduler_d, 9)
               << ',' << format_fixed(r.fabric_d, 9) << ',' << format_fixed(r.container_d, 9)
               << ',' << format_fixed(r.appinit_d, 9) << ',' << r.src_host << ',' << r.dst_host;
        else
            os << ",,,,,," << r.src_host << ',';
        os << '\n';
    }
}

inline void write_latency_csv(std::ostream& os, const std::vector<LatencySample>& samples) {
    os << "t,e2e_s\n";
    for (const auto& s : samples)
        os << format_fixed(s.t.secs, 6) << ',' << format_fixed(s.e2e_s, 9) << '\n';
}

// session.csv: disruption/reconnection instants in time order.
inline void write_session_csv(std::ostream& os, const StreamSession& session) {
    os << "event,t\n";
    const auto& d = session.disrupted_at();
    const auto& r = session.reconnected_at();
    for (std::size_t i = 0; i < d.size(); ++i) {
        os << "disrupted," << format_fixed(d[i].secs, 6) << '\n';
        if (i < r.size()) os << "reconnected," << format_fixed(r[i].secs, 6) << '\n';
    }
}

// summary.csv: label,n,min,max,mean,p95 with dashes for empty sets.
inline void write_summary_csv(std::ostream& os, const std::vector<SampleSet>& sets) {
    os << "label,n,min,max,mean,p95\n";
    for (const auto& set : sets) {
        if (set.values.empty()) {
            os << set.label << ",0,-,-,-,-\n";
            continue;
        }
        Summary s = summarize(set.values);
        os << set.label << ',' << s.n << ',' << format_fixed(s.min, 6) << ','
           << format_fixed(s.max, 6) << ',' << format_fixed(s.mean, 6) << ','
           << format_fixed(s.p95, 6) << '\n';
    }
}

inline void write_ecdf_csv(std::ostream& os, const std::vector<double>& values) {
    os << "value,fraction\n";
    for (const auto& [v, f] : ecdf(values))
        os << format_fixed(v, 9) << ',' << format_fixed(f, 9) << '\n';
}

inline void write_hist_csv(std::ostream& os, const std::vector<double>& values,
                           std::size_t bins = 20) {
    os << "bin_lo,bin_hi,count\n";
    for (const auto& b : histogram(values, bins))
        os << format_fixed(b.lo, 6) << ',' << format_fixed(b.hi, 6) << ',' << b.count << '\n';
}

// Writes every dataset for a finished run into out_dir, creating it first.
inline void write_all_exports(const Simulation& sim, const std::filesystem::path& out_dir) {
    using export_detail::open_out;
    std::filesystem::create_directories(out_dir);

    {
        auto f = open_out(out_dir / "trace.tsv");
        write_trace(f, sim.engine().trace());
    }
    {
        auto f = open_out(out_dir / "epc.log");
        write_epc_log(f, sim.epc().log());
    }
    {
        auto f = open_out(out_dir / "rss.csv");
        write_rss_csv(f, sim.rss_samples());
    }
    {
        auto f = open_out(out_dir / "migrations.csv");
        write_migrations_csv(f, sim.controller().records());
    }
    {
        auto f = open_out(out_dir / "latency.csv");
        write_latency_csv(f, sim.session().latency_samples());
    }
    {
        auto f = open_out(out_dir / "session.csv");
        write_session_csv(f, sim.session());
    }
    auto sets = sim.sample_sets();
    {
        auto f = open_out(out_dir / "summary.csv");
        write_summary_csv(f, sets);
    }
    for (const auto& set : sets) {
        if (set.values.empty()) continue;
        {
            auto f = open_out(out_dir / ("ecdf_" + set.label + ".csv"));
            write_ecdf_csv(f, set.values);
        }
        {
            auto f = open_out(out_dir / ("hist_" + set.label + ".csv"));
            write_hist_csv(f, set.values);
        }
    }
}

// Rebuilds the summary sample sets from a serialized trace. The run
// annotates each measurement into the event that produced it, so this is
// exact, not a re-derivation: e2e samples live on FrameRoundTrip events,
// migration latencies on the completing DnsUpdated, downtimes on the
// reconnecting ClientPoll.
inline std::vector<SampleSet> sample_sets_from_trace(const std::vector<TraceRecord>& trace) {
    SampleSet migration{"migration_latency", {}};
    SampleSet e2e{"e2e_latency", {}};
    SampleSet downtime{"downtime", {}};
    for (const auto& rec : trace) {
        const char* key = nullptr;
        SampleSet* dest = nullptr;
        if (rec.kind == EventKind::DnsUpdated) {
            key = "migration_latency_s";
            dest = &migration;
        } else if (rec.kind == EventKind::FrameRoundTrip) {
            key = "e2e_s";
            dest = &e2e;
        } else if (rec.kind == EventKind::ClientPoll) {
            key = "downtime_s";
            dest = &downtime;
        } else {
            continue;
        }
        auto it = rec.payload.find(key);
        if (it == rec.payload.end()) continue;
        dest->values.push_back(detail::parse_double(it->second, static_cast<int>(rec.sequence + 1),
                                                    key));
    }
    return {std::move(migration), std::move(e2e), std::move(downtime)};
}

// The `summarize` table; values match summary.csv.
inline void print_summary_table(std::ostream& os, const std::vector<SampleSet>& sets) {
    os << std::left << std::setw(20) << "label" << std::right << std::setw(8) << "n"
       << std::setw(14) << "min" << std::setw(14) << "max" << std::setw(14) << "mean"
       << std::setw(14) << "p95" << '\n';
    for (const auto& set : sets) {
        os << std::left << std::setw(20) << set.label << std::right;
        if (set.values.empty()) {
            os << std::setw(8) << 0 << std::setw(14) << "-" << std::setw(14) << "-"
               << std::setw(14) << "-" << std::setw(14) << "-" << '\n';
            continue;
        }
        Summary s = summarize(set.values);
        os << std::setw(8) << s.n << std::setw(14) << format_fixed(s.min, 6) << std::setw(14)
           << format_fixed(s.max, 6) << std::setw(14) << format_fixed(s.mean, 6) << std::setw(14)
           << format_fixed(s.p95, 6) << '\n';
    }
}

// Deterministic per-run report for stdout (no wall clock, no absolute paths).
inline std::string run_report(const Simulation& sim) {
    std::ostringstream o;
    const auto& records = sim.controller().records();
    std::size_t completed = 0, failed = 0;
    for (const auto& r : records) {
        if (r.outcome == MigrationRecord::Outcome::Completed) ++completed;
        if (r.outcome == MigrationRecord::Outcome::Failed) ++failed;
    }
    std::size_t requests = 0;
    for (const auto& e : sim.epc().log())
        if (MigrationController::is_handover_request(e)) ++requests;

    o << "events processed: " << sim.engine().trace().size() << '\n';
    o << "handover requests: " << requests << '\n';
    o << "migrations: " << completed << " completed, " << failed << " failed\n";
    const auto& session = sim.session();
    o << "session cycles: " << session.reconnected_at().size() << " reconnects, "
      << format_fixed(session.connected_time_s(), 3) << " s connected, "
      << format_fixed(session.disrupted_time_s(), 3) << " s disrupted\n";
    o << "ue energy: " << format_fixed(session.energy_offloaded_j(), 3) << " J offloaded vs "
      << format_fixed(session.energy_local_equivalent_j(), 3) << " J local-equivalent\n";
    return o.str();
}

}  // namespace mecsim
