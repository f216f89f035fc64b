#include "ctdsim/metrics.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>

namespace ctdsim {

namespace {

std::string fmt_compact(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::pair<NodeId, NodeId> select_edge_nodes(const MobilityTrace& trace, const Position& event,
                                            SimTime t0)
{
    const std::size_t n = trace.node_count();
    if (n < 2)
        throw SimError("select_edge_nodes: need at least 2 nodes");

    std::vector<Position> at_t0(n);
    for (std::size_t i = 0; i < n; ++i)
        at_t0[i] = position_at(trace, static_cast<NodeId>(i), t0);

    const std::array<Position, 4> corners = {Position{0.0, 0.0},
                                             Position{trace.width_m, 0.0},
                                             Position{0.0, trace.height_m},
                                             Position{trace.width_m, trace.height_m}};
    Position far_corner = corners[0];
    for (const Position& c : corners)
        if (distance_sq(event, c) > distance_sq(event, far_corner))
            far_corner = c;

    const auto nearest_to = [&](const Position& target, std::optional<NodeId> excluded) {
        NodeId best = 0;
        double best_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (excluded && *excluded == static_cast<NodeId>(i))
                continue;
            const double d = distance_sq(at_t0[i], target);
            if (best_d < 0.0 || d < best_d) {
                best_d = d;
                best = static_cast<NodeId>(i);
            }
        }
        return best;
    };

    const NodeId a = nearest_to(event, std::nullopt);
    const NodeId b = nearest_to(far_corner, a);
    return {a, b};
}

MetricsReport collect(const EventLog& log, [[maybe_unused]] NodeId edge_a, NodeId edge_b)
{
    MetricsReport report;
    std::set<NodeId> delivered;
    for (const SenderPick& s : log.meta.senders)
        delivered.insert(s.node);

    std::optional<SimTime> first_at_b;
    std::optional<SimTime> last_delivery;
    for (const LogRecord& r : log.records) {
        if (r.kind == RecordKind::Send) {
            switch (r.msg_type) {
            case kMsgTypeRequest:
                ++report.msgs_request;
                break;
            case kMsgTypeReply:
                ++report.msgs_reply;
                break;
            case kMsgTypeAlert:
                ++report.msgs_alert;
                break;
            default:
                ++report.msgs_hello;
                break;
            }
        } else if (r.kind == RecordKind::Deliver) {
            delivered.insert(r.node);
            if (r.node == edge_b && !first_at_b)
                first_at_b = r.t;
            if (!last_delivery || r.t > *last_delivery)
                last_delivery = r.t;
        }
    }
    report.msgs_total = report.msgs_request + report.msgs_reply + report.msgs_alert;
    report.disseminated = report.msgs_alert > 0;
    if (log.meta.n_nodes > 0)
        report.delivery_ratio =
            static_cast<double>(delivered.size()) / static_cast<double>(log.meta.n_nodes);
    if (first_at_b)
        report.far_edge_delay = *first_at_b - log.meta.first_detection;
    if (last_delivery)
        report.coverage_time = *last_delivery - log.meta.first_detection;
    return report;
}

double relative_messages(const MetricsReport& run, const MetricsReport& baseline)
{
    if (baseline.msgs_total <= 0)
        throw SimError("relative_messages: baseline sent no messages");
    return 100.0 * static_cast<double>(run.msgs_total) /
           static_cast<double>(baseline.msgs_total);
}

std::string csv_header()
{
    return "protocol,n_nodes,n_senders,pa,seed,msgs_request,msgs_reply,msgs_alert,"
           "msgs_total,msgs_hello,delivery_ratio,far_edge_delay_ms,coverage_time_ms,"
           "disseminated,relative_pct";
}

std::string csv_row(const CsvRow& row)
{
    const MetricsReport& m = row.metrics;
    std::string out;
    out += row.protocol;
    out += "," + std::to_string(row.n_nodes);
    out += "," + std::to_string(row.n_senders);
    out += "," + fmt_compact(row.pa);
    out += "," + std::to_string(row.seed);
    out += "," + std::to_string(m.msgs_request);
    out += "," + std::to_string(m.msgs_reply);
    out += "," + std::to_string(m.msgs_alert);
    out += "," + std::to_string(m.msgs_total);
    out += "," + std::to_string(m.msgs_hello);
    out += "," + fmt_compact(m.delivery_ratio);
    out += ",";
    if (m.far_edge_delay)
        out += std::to_string(*m.far_edge_delay);
    out += ",";
    if (m.coverage_time)
        out += std::to_string(*m.coverage_time);
    out += std::string(",") + (m.disseminated ? "1" : "0");
    out += ",";
    if (row.relative_pct)
        out += fmt_compact(*row.relative_pct);
    return out;
}

CsvRow make_csv_row(const EventLog& log, const MetricsReport& metrics)
{
    CsvRow row;
    row.protocol = log.meta.protocol;
    row.n_nodes = log.meta.n_nodes;
    row.n_senders = log.meta.n_senders;
    row.pa = log.meta.pa;
    row.seed = log.meta.seed;
    row.metrics = metrics;
    return row;
}

}  // namespace ctdsim
