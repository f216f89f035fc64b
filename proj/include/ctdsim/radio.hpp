#ifndef CTDSIM_RADIO_HPP
#define CTDSIM_RADIO_HPP

#include <optional>
#include <span>
#include <vector>

#include "ctdsim/message.hpp"
#include "ctdsim/mobility.hpp"
#include "ctdsim/types.hpp"

namespace ctdsim {

/// Unit-disk radio: two nodes hear each other iff their distance is at most
/// `range_m`. Broadcast is reliable; every transmission arrives exactly
/// `hop_latency` later. Connectivity is evaluated at send time.
struct RadioConfig {
    double range_m = 100.0;
    SimTime hop_latency = 2;
};

struct Delivery {
    NodeId receiver = 0;
    Message msg;
    SimTime deliver_at = 0;
};

/// Nodes within range of `node` given a snapshot of all positions; excludes
/// the node itself, ascending id order.
std::vector<NodeId> neighbors_in_range(NodeId node, std::span<const Position> positions,
                                       double range_m);

std::vector<NodeId> neighbors_of(NodeId node, SimTime t, const MobilityTrace& trace,
                                 const RadioConfig& cfg);

/// One Delivery per current neighbor, all at t + hop_latency. The sender
/// never delivers to itself. Counted as one sent message in metrics
/// regardless of fan-out.
std::vector<Delivery> schedule_broadcast(NodeId sender, const Message& msg, SimTime t,
                                         const MobilityTrace& trace, const RadioConfig& cfg);

/// One Delivery if dest is currently within range, none otherwise (the
/// reply is silently lost). Self-unicast is suppressed.
std::optional<Delivery> schedule_unicast(NodeId sender, NodeId dest, const Message& msg,
                                         SimTime t, const MobilityTrace& trace,
                                         const RadioConfig& cfg);

}  // namespace ctdsim

#endif
