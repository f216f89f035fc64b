#include "ctdsim/radio.hpp"

namespace ctdsim {

namespace {

std::vector<Position> snapshot(const MobilityTrace& trace, SimTime t)
{
    std::vector<Position> positions(trace.node_count());
    for (std::size_t i = 0; i < positions.size(); ++i)
        positions[i] = position_at(trace, static_cast<NodeId>(i), t);
    return positions;
}

}  // namespace

std::vector<NodeId> neighbors_in_range(NodeId node, std::span<const Position> positions,
                                       double range_m)
{
    std::vector<NodeId> out;
    const Position& self = positions[node];
    const double range_sq = range_m * range_m;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (i == node)
            continue;
        if (distance_sq(self, positions[i]) <= range_sq)
            out.push_back(static_cast<NodeId>(i));
    }
    return out;
}

std::vector<NodeId> neighbors_of(NodeId node, SimTime t, const MobilityTrace& trace,
                                 const RadioConfig& cfg)
{
    if (node >= trace.node_count())
        throw SimError("neighbors_of: unknown node " + std::to_string(node));
    const auto positions = snapshot(trace, t);
    return neighbors_in_range(node, positions, cfg.range_m);
}

std::vector<Delivery> schedule_broadcast(NodeId sender, const Message& msg, SimTime t,
                                         const MobilityTrace& trace, const RadioConfig& cfg)
{
    std::vector<Delivery> out;
    for (NodeId nbr : neighbors_of(sender, t, trace, cfg))
        out.push_back({nbr, msg, t + cfg.hop_latency});
    return out;
}

std::optional<Delivery> schedule_unicast(NodeId sender, NodeId dest, const Message& msg,
                                         SimTime t, const MobilityTrace& trace,
                                         const RadioConfig& cfg)
{
    if (dest == sender || dest >= trace.node_count())
        return std::nullopt;
    const Position a = position_at(trace, sender, t);
    const Position b = position_at(trace, dest, t);
    if (distance_sq(a, b) > cfg.range_m * cfg.range_m)
        return std::nullopt;
    return Delivery{dest, msg, t + cfg.hop_latency};
}

}  // namespace ctdsim
