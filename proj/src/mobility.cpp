#include "ctdsim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace ctdsim {

namespace {

std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what)
{
    throw SimError("trace line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

MobilityTrace load_trace(std::istream& in)
{
    MobilityTrace trace;
    std::string line;
    std::size_t line_no = 0;
    bool have_bounds = false;

    std::map<long long, NodeId> dense_id;  // external id -> dense id

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream fields(line);
        if (!have_bounds) {
            std::string tag;
            fields >> tag >> trace.width_m >> trace.height_m;
            if (tag != "bounds" || fields.fail())
                fail_line(line_no, "expected 'bounds <width_m> <height_m>'");
            if (!(trace.width_m > 0.0) || !(trace.height_m > 0.0))
                fail_line(line_no, "bounds must be positive");
            have_bounds = true;
            continue;
        }
        double t_s = 0.0, x = 0.0, y = 0.0;
        long long ext_id = 0;
        fields >> t_s >> ext_id >> x >> y;
        if (fields.fail())
            fail_line(line_no, "expected '<t_seconds> <node_id> <x_m> <y_m>'");
        std::string extra;
        if (fields >> extra)
            fail_line(line_no, "trailing token '" + extra + "'");
        if (t_s < 0.0 || ext_id < 0)
            fail_line(line_no, "negative time or node id");
        if (x < 0.0 || x > trace.width_m || y < 0.0 || y > trace.height_m)
            fail_line(line_no, "position outside declared bounds");

        auto [it, inserted] = dense_id.emplace(ext_id, static_cast<NodeId>(trace.nodes.size()));
        if (inserted)
            trace.nodes.emplace_back();
        auto& wps = trace.nodes[it->second];
        const Waypoint wp{ms_from_seconds(t_s), {x, y}};
        if (!wps.empty() && wp.t <= wps.back().t)
            fail_line(line_no, "non-monotone timestamp for node " + std::to_string(ext_id));
        wps.push_back(wp);
        trace.duration = std::max(trace.duration, wp.t);
    }
    if (!have_bounds)
        throw SimError("trace: missing 'bounds' header");
    if (trace.nodes.empty())
        throw SimError("trace: no nodes");
    return trace;
}

void emit_trace(const MobilityTrace& trace, std::ostream& out)
{
    out << "bounds " << fmt_double(trace.width_m) << " " << fmt_double(trace.height_m) << "\n";
    for (std::size_t node = 0; node < trace.nodes.size(); ++node) {
        for (const Waypoint& wp : trace.nodes[node]) {
            out << fmt_double(static_cast<double>(wp.t) / 1000.0) << " " << node << " "
                << fmt_double(wp.pos.x) << " " << fmt_double(wp.pos.y) << "\n";
        }
    }
}

Position position_at(const MobilityTrace& trace, NodeId node, SimTime t)
{
    if (node >= trace.nodes.size())
        throw SimError("position_at: unknown node " + std::to_string(node));
    const auto& wps = trace.nodes[node];
    if (t <= wps.front().t)
        return wps.front().pos;
    if (t >= wps.back().t)
        return wps.back().pos;
    // first waypoint with wp.t > t; its predecessor brackets t from below
    const auto after = std::upper_bound(wps.begin(), wps.end(), t,
                                        [](SimTime v, const Waypoint& wp) { return v < wp.t; });
    const Waypoint& b = *after;
    const Waypoint& a = *(after - 1);
    const double f = static_cast<double>(t - a.t) / static_cast<double>(b.t - a.t);
    return {a.pos.x + f * (b.pos.x - a.pos.x), a.pos.y + f * (b.pos.y - a.pos.y)};
}

MobilityTrace generate_random_waypoint(double width_m, double height_m, std::size_t n_nodes,
                                       SimTime duration, double speed_min, double speed_max,
                                       Rng& rng)
{
    if (!(width_m > 0.0) || !(height_m > 0.0))
        throw SimError("generate_random_waypoint: zero-area bounds");
    if (n_nodes == 0)
        throw SimError("generate_random_waypoint: need at least one node");
    if (!(speed_min > 0.0) || speed_min > speed_max)
        throw SimError("generate_random_waypoint: speed range must satisfy 0 < min <= max");

    MobilityTrace trace;
    trace.width_m = width_m;
    trace.height_m = height_m;
    trace.duration = duration;
    trace.nodes.resize(n_nodes);

    for (auto& wps : trace.nodes) {
        Position pos{rng.uniform(0.0, width_m), rng.uniform(0.0, height_m)};
        SimTime t = 0;
        wps.push_back({t, pos});
        while (t < duration) {
            const Position dest{rng.uniform(0.0, width_m), rng.uniform(0.0, height_m)};
            const double speed = rng.uniform(speed_min, speed_max);
            const double dist = distance(pos, dest);
            // Floor to whole ms and stop the leg on the drawn-speed line, so
            // the speed re-derived from emitted waypoints is exact and the
            // endpoint stays strictly between pos and dest (inside bounds).
            const auto leg_ms = static_cast<SimTime>(dist / speed * 1000.0);
            if (leg_ms == 0)
                continue;  // destination indistinguishable from current position
            const double f = speed * (static_cast<double>(leg_ms) / 1000.0) / dist;
            pos = {pos.x + f * (dest.x - pos.x), pos.y + f * (dest.y - pos.y)};
            t += leg_ms;
            wps.push_back({t, pos});
        }
    }
    return trace;
}

}  // namespace ctdsim
