#ifndef CTDSIM_METRICS_HPP
#define CTDSIM_METRICS_HPP

#include <optional>
#include <string>
#include <utility>

#include "ctdsim/engine.hpp"

namespace ctdsim {

/// The four performance metrics of one run, plus raw message counts.
/// Hello traffic is tallied separately and excluded from msgs_total.
struct MetricsReport {
    long msgs_request = 0;
    long msgs_reply = 0;
    long msgs_alert = 0;
    long msgs_total = 0;
    long msgs_hello = 0;
    double delivery_ratio = 0.0;
    std::optional<SimTime> far_edge_delay;  // nullopt = far edge never reached
    std::optional<SimTime> coverage_time;   // nullopt = nothing delivered
    bool disseminated = false;
};

/// A = node nearest the event at t0, B = node nearest the bounding-box
/// corner farthest from the event at t0; A != B. Requires >= 2 nodes.
std::pair<NodeId, NodeId> select_edge_nodes(const MobilityTrace& trace, const Position& event,
                                            SimTime t0);

/// Reduces a run log to its metrics. Senders count as delivered at
/// detection; times are measured from the first detection.
MetricsReport collect(const EventLog& log, NodeId edge_a, NodeId edge_b);

/// Percentage of messages relative to a dissemination-without-assessment
/// run: 100 * run.msgs_total / baseline.msgs_total.
double relative_messages(const MetricsReport& run, const MetricsReport& baseline);

/// One CSV row per run; unreached values are emitted as empty fields.
struct CsvRow {
    std::string protocol;
    std::size_t n_nodes = 0;
    std::size_t n_senders = 0;
    double pa = 1.0;
    std::uint64_t seed = 0;
    MetricsReport metrics;
    std::optional<double> relative_pct;
};

std::string csv_header();
std::string csv_row(const CsvRow& row);

CsvRow make_csv_row(const EventLog& log, const MetricsReport& metrics);

}  // namespace ctdsim

#endif
