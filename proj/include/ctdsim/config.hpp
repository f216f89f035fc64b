#ifndef CTDSIM_CONFIG_HPP
#define CTDSIM_CONFIG_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ctdsim/engine.hpp"

namespace ctdsim {

using ConfigMap = std::map<std::string, std::string>;

/// Parses flat `key = value` text. `#`-prefixed lines are comments.
/// Duplicate keys and malformed lines are errors naming the line number.
ConfigMap parse_flat_config(std::istream& in);

/// Builds a scenario from config keys. Unknown keys are errors (sweep.*
/// axes are tolerated so one file can drive both `run` and `sweep`).
ScenarioConfig scenario_from_config(const ConfigMap& cfg);

/// Axes for a parameter sweep over protocol x n_nodes x n_senders x pa x
/// seeds. Missing axes default to the base scenario's single value.
struct SweepSpec {
    ScenarioConfig base;
    std::vector<ProtocolKind> protocols;
    std::vector<std::size_t> n_nodes;
    std::vector<std::size_t> n_senders;
    std::vector<double> pa;
    std::vector<std::uint64_t> seeds;
};

SweepSpec sweep_from_config(const ConfigMap& cfg);

}  // namespace ctdsim

#endif
