#include "ctdsim/engine.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <queue>
#include <sstream>
#include <tuple>

namespace ctdsim {

namespace {

// Fixed processing order for simultaneous events; required for
// reproducibility. Deliveries precede timers so replies landing exactly at
// the decision deadline are still counted (closed interval).
enum EventOrder : int { kOrderDelivery = 0, kOrderTimer = 1, kOrderHello = 2, kOrderDetect = 3 };

struct EngineEvent {
    SimTime at = 0;
    int order = kOrderDelivery;
    NodeId node = 0;
    std::uint64_t seq = 0;
    std::variant<std::monostate, Message, AlertKey, Alert> payload;
};

struct EventAfter {
    bool operator()(const EngineEvent& a, const EngineEvent& b) const
    {
        return std::tie(a.at, a.order, a.node, a.seq) > std::tie(b.at, b.order, b.node, b.seq);
    }
};

/// Caches the full position snapshot for the most recent query time; sends
/// within one engine timestamp reuse it.
class PositionCache {
public:
    explicit PositionCache(const MobilityTrace& trace)
        : trace_(&trace), positions_(trace.node_count())
    {
    }

    std::span<const Position> at(SimTime t)
    {
        if (!valid_ || t != cached_t_) {
            for (std::size_t i = 0; i < positions_.size(); ++i)
                positions_[i] = position_at(*trace_, static_cast<NodeId>(i), t);
            cached_t_ = t;
            valid_ = true;
        }
        return positions_;
    }

private:
    const MobilityTrace* trace_;
    std::vector<Position> positions_;
    SimTime cached_t_ = 0;
    bool valid_ = false;
};

std::string send_key_string(const Message& msg, const KeyPolicy& policy)
{
    struct Keyer {
        const KeyPolicy& policy;
        std::string operator()(const Hello&) const { return {}; }
        std::string operator()(const AssessRequest& m) const
        {
            return to_string(alert_key(m.alert, policy));
        }
        std::string operator()(const AssessReply& m) const { return to_string(m.key); }
        std::string operator()(const AlertMsg& m) const
        {
            return to_string(flood_key_of(m, policy));
        }
    };
    return std::visit(Keyer{policy}, msg);
}

const char* record_kind_name(RecordKind kind)
{
    switch (kind) {
    case RecordKind::Send:
        return "send";
    case RecordKind::Deliver:
        return "deliver";
    case RecordKind::Detect:
        return "detect";
    }
    return "?";
}

}  // namespace

void validate(const ScenarioConfig& cfg)
{
    if (cfg.trace_file.empty() && cfg.n_nodes == 0)
        throw SimError("config: n_nodes must be at least 1");
    if (cfg.trace_file.empty() && cfg.n_senders > cfg.n_nodes)
        throw SimError("config: n_senders exceeds n_nodes");
    if (cfg.duration < cfg.t0 + static_cast<SimTime>(cfg.n_senders) * cfg.inter_alert_interval)
        throw SimError("config: duration must be at least t0 + n_senders * T");
    if (cfg.t0 < 0 || cfg.duration < 0)
        throw SimError("config: negative time");
    if (!(cfg.radio.range_m > 0.0))
        throw SimError("config: radio.range_m must be positive");
    if (cfg.radio.hop_latency < 0)
        throw SimError("config: radio.hop_latency_ms must be non-negative");
    if (cfg.protocol.pa < 0.0 || cfg.protocol.pa > 1.0)
        throw SimError("config: ctd.pa must be within [0,1]");
    if (cfg.protocol.assess_window < 0 || cfg.protocol.seen_window < 0)
        throw SimError("config: negative protocol window");
    if (cfg.protocol.hello_interval <= 0 || cfg.protocol.hello_expiry_intervals <= 0)
        throw SimError("config: hello interval and expiry must be positive");
    if (cfg.inter_alert_interval < 0)
        throw SimError("config: ctd.T_ms must be non-negative");
    if (!(cfg.sender_cluster_radius_m > 0.0))
        throw SimError("config: sender_cluster_radius_m must be positive");
    if (cfg.trace_file.empty()) {
        if (!(cfg.gen.width_m > 0.0) || !(cfg.gen.height_m > 0.0))
            throw SimError("config: zero-area bounds");
        if (!(cfg.gen.speed_min > 0.0) || cfg.gen.speed_min > cfg.gen.speed_max)
            throw SimError("config: speed range must satisfy 0 < min <= max");
    }
}

std::vector<SenderPick> select_senders(const MobilityTrace& trace, const ScenarioConfig& cfg,
                                       Rng& rng)
{
    const std::size_t n = trace.node_count();
    const std::size_t k = cfg.n_senders;
    if (k == 0)
        return {};
    if (k > n)
        throw SimError("select_senders: n_senders exceeds node count");

    std::vector<Position> at_t0(n);
    for (std::size_t i = 0; i < n; ++i)
        at_t0[i] = position_at(trace, static_cast<NodeId>(i), cfg.t0);

    const double radius_sq = cfg.sender_cluster_radius_m * cfg.sender_cluster_radius_m;
    std::vector<NodeId> feasible;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t peers = 0;
        for (std::size_t j = 0; j < n && peers + 1 < k; ++j)
            if (j != i && distance_sq(at_t0[i], at_t0[j]) <= radius_sq)
                ++peers;
        if (peers + 1 >= k)
            feasible.push_back(static_cast<NodeId>(i));
    }
    if (feasible.empty())
        throw SimError("select_senders: no node has " + std::to_string(k - 1) +
                       " peers within " + std::to_string(cfg.sender_cluster_radius_m) +
                       " m at t0; lower n_senders or widen sender_cluster_radius_m");

    const NodeId pivot = feasible[rng.uniform_below(feasible.size())];

    std::vector<std::pair<double, NodeId>> peers;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == pivot)
            continue;
        const double d = distance_sq(at_t0[pivot], at_t0[j]);
        if (d <= radius_sq)
            peers.emplace_back(d, static_cast<NodeId>(j));
    }
    std::sort(peers.begin(), peers.end());

    std::vector<SenderPick> senders;
    senders.push_back({pivot, cfg.t0});
    for (std::size_t i = 0; i + 1 < k; ++i)
        senders.push_back({peers[i].second, cfg.t0 + static_cast<SimTime>(i + 1) *
                                                        cfg.inter_alert_interval});
    return senders;
}

EventLog run_with_trace(const ScenarioConfig& cfg, const MobilityTrace& trace)
{
    validate(cfg);
    const std::size_t n = trace.node_count();
    if (n == 0)
        throw SimError("run: empty trace");
    if (cfg.n_senders > n)
        throw SimError("run: n_senders exceeds node count");

    Rng sender_rng(derive_stream(cfg.seed, kSenderStream));
    const auto senders = select_senders(trace, cfg, sender_rng);

    Position event_loc{trace.width_m / 2.0, trace.height_m / 2.0};
    if (cfg.event_location)
        event_loc = *cfg.event_location;
    else if (!senders.empty())
        event_loc = position_at(trace, senders.front().node, cfg.t0);

    EventLog log;
    log.meta.protocol = std::string(protocol_name(cfg.protocol.protocol));
    log.meta.n_nodes = n;
    log.meta.n_senders = senders.size();
    log.meta.pa = cfg.protocol.pa;
    log.meta.seed = cfg.seed;
    log.meta.t0 = cfg.t0;
    log.meta.duration = cfg.duration;
    log.meta.event_category = cfg.event_category;
    log.meta.event_location = event_loc;
    log.meta.senders = senders;
    log.meta.first_detection = senders.empty() ? cfg.t0 : senders.front().detect_at;

    const std::uint64_t assess_base = derive_stream(cfg.seed, kAssessStream);
    std::vector<NodeState> nodes;
    nodes.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        nodes.emplace_back(static_cast<NodeId>(i), cfg.protocol, mix64(assess_base + i));

    std::priority_queue<EngineEvent, std::vector<EngineEvent>, EventAfter> queue;
    std::uint64_t seq = 0;
    const auto push = [&](SimTime at, int order, NodeId node, auto payload) {
        queue.push(EngineEvent{at, order, node, seq++, std::move(payload)});
    };

    const bool hellos = !nodes.empty() && nodes.front().hello_enabled();
    if (hellos)
        for (std::size_t i = 0; i < n; ++i)
            push(0, kOrderHello, static_cast<NodeId>(i), std::monostate{});

    for (const SenderPick& s : senders)
        push(s.detect_at, kOrderDetect, s.node,
             Alert{cfg.event_category, event_loc, s.detect_at});

    PositionCache positions(trace);
    const double range_sq = cfg.radio.range_m * cfg.radio.range_m;

    const auto execute = [&](NodeId node, SimTime now, Commands&& cmds) {
        for (Command& cmd : cmds) {
            if (auto* bc = std::get_if<BroadcastCmd>(&cmd)) {
                log.records.push_back({now, RecordKind::Send, node, msg_type_code(bc->msg),
                                       send_key_string(bc->msg, cfg.protocol.identity)});
                const auto snap = positions.at(now);
                for (NodeId nbr : neighbors_in_range(node, snap, cfg.radio.range_m))
                    push(now + cfg.radio.hop_latency, kOrderDelivery, nbr, bc->msg);
            } else if (auto* uc = std::get_if<UnicastCmd>(&cmd)) {
                log.records.push_back({now, RecordKind::Send, node, msg_type_code(uc->msg),
                                       send_key_string(uc->msg, cfg.protocol.identity)});
                if (uc->dest != node && uc->dest < n) {
                    const auto snap = positions.at(now);
                    if (distance_sq(snap[node], snap[uc->dest]) <= range_sq)
                        push(now + cfg.radio.hop_latency, kOrderDelivery, uc->dest, uc->msg);
                }
            } else if (auto* timer = std::get_if<SetTimerCmd>(&cmd)) {
                push(timer->at, kOrderTimer, node, timer->key);
            } else if (auto* dl = std::get_if<DeliverCmd>(&cmd)) {
                log.records.push_back({now, RecordKind::Deliver, node, kMsgTypeNone,
                                       to_string(alert_key(dl->alert, cfg.protocol.identity))});
            }
        }
    };

    while (!queue.empty()) {
        const EngineEvent ev = queue.top();
        if (ev.at > cfg.duration)
            break;
        queue.pop();
        NodeState& node = nodes[ev.node];
        if (std::holds_alternative<std::monostate>(ev.payload)) {
            execute(ev.node, ev.at, node.emit_hello(ev.at));
            if (ev.at + cfg.protocol.hello_interval <= cfg.duration)
                push(ev.at + cfg.protocol.hello_interval, kOrderHello, ev.node,
                     std::monostate{});
        } else if (const auto* msg = std::get_if<Message>(&ev.payload)) {
            execute(ev.node, ev.at, node.on_message(*msg, ev.at));
        } else if (const auto* key = std::get_if<AlertKey>(&ev.payload)) {
            execute(ev.node, ev.at, node.on_timer(*key, ev.at));
        } else if (const auto* alert = std::get_if<Alert>(&ev.payload)) {
            log.records.push_back({ev.at, RecordKind::Detect, ev.node, kMsgTypeNone,
                                   to_string(alert_key(*alert, cfg.protocol.identity))});
            execute(ev.node, ev.at, node.on_detect(*alert, ev.at));
        }
    }
    return log;
}

EventLog run(const ScenarioConfig& cfg)
{
    validate(cfg);
    MobilityTrace trace;
    if (!cfg.trace_file.empty()) {
        std::ifstream in(cfg.trace_file);
        if (!in)
            throw SimError("cannot open trace file '" + cfg.trace_file + "'");
        trace = load_trace(in);
    } else {
        Rng mobility_rng(derive_stream(cfg.seed, kMobilityStream));
        trace = generate_random_waypoint(cfg.gen.width_m, cfg.gen.height_m, cfg.n_nodes,
                                         cfg.duration, cfg.gen.speed_min, cfg.gen.speed_max,
                                         mobility_rng);
    }
    return run_with_trace(cfg, trace);
}

void EventLog::write(std::ostream& out) const
{
    out << "# ctdsim-log v1\n";
    out << "# protocol " << meta.protocol << "\n";
    out << "# n_nodes " << meta.n_nodes << "\n";
    out << "# n_senders " << meta.n_senders << "\n";
    out << "# pa " << meta.pa << "\n";
    out << "# seed " << meta.seed << "\n";
    out << "# t0_ms " << meta.t0 << "\n";
    out << "# duration_ms " << meta.duration << "\n";
    out << "# event " << category_name(meta.event_category) << " " << meta.event_location.x
        << " " << meta.event_location.y << "\n";
    for (const SenderPick& s : meta.senders)
        out << "# sender " << s.node << " " << s.detect_at << "\n";
    for (const LogRecord& r : records) {
        out << r.t << '\t' << record_kind_name(r.kind) << '\t' << r.node << '\t';
        if (r.msg_type == kMsgTypeNone)
            out << '-';
        else
            out << r.msg_type;
        out << '\t' << (r.key.empty() ? "-" : r.key) << '\n';
    }
}

std::uint64_t EventLog::content_hash() const
{
    std::ostringstream buf;
    write(buf);
    const std::string text = buf.str();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace ctdsim
