#ifndef CTDSIM_MOBILITY_HPP
#define CTDSIM_MOBILITY_HPP

#include <iosfwd>
#include <vector>

#include "ctdsim/rng.hpp"
#include "ctdsim/types.hpp"

namespace ctdsim {

struct Waypoint {
    SimTime t = 0;
    Position pos;
    friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// Per-node piecewise-linear motion inside a rectangular bounding box.
/// Every node has at least one waypoint; waypoint times are strictly
/// increasing per node.
struct MobilityTrace {
    std::vector<std::vector<Waypoint>> nodes;
    double width_m = 0.0;
    double height_m = 0.0;
    SimTime duration = 0;

    std::size_t node_count() const { return nodes.size(); }
};

/// Parses the plain-text trace format:
///   bounds <width_m> <height_m>
///   <t_seconds> <node_id> <x_m> <y_m>     (sorted by (node_id, t))
/// `#`-prefixed lines are comments. Node ids are renumbered densely in
/// first-appearance order. Errors name the offending line.
MobilityTrace load_trace(std::istream& in);

void emit_trace(const MobilityTrace& trace, std::ostream& out);

/// Linear interpolation between bracketing waypoints; clamp-and-hold before
/// the first and after the last waypoint.
Position position_at(const MobilityTrace& trace, NodeId node, SimTime t);

/// Random-waypoint walk: uniform start, then repeatedly pick a uniform
/// destination and a uniform speed in [speed_min, speed_max] and walk
/// straight, no pause, until the duration is covered.
MobilityTrace generate_random_waypoint(double width_m, double height_m, std::size_t n_nodes,
                                       SimTime duration, double speed_min, double speed_max,
                                       Rng& rng);

}  // namespace ctdsim

#endif
