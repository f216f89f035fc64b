#ifndef CTDSIM_ENGINE_HPP
#define CTDSIM_ENGINE_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctdsim/mobility.hpp"
#include "ctdsim/protocol.hpp"
#include "ctdsim/radio.hpp"
#include "ctdsim/rng.hpp"

namespace ctdsim {

struct GeneratorParams {
    double width_m = 500.0;
    double height_m = 500.0;
    double speed_min = 0.1;
    double speed_max = 1.2;
};

struct ScenarioConfig {
    std::string trace_file;  // empty: use the built-in generator
    GeneratorParams gen;
    std::size_t n_nodes = 200;  // ignored when trace_file is set
    RadioConfig radio;
    ProtocolConfig protocol;
    std::size_t n_senders = 1;
    double sender_cluster_radius_m = 100.0;
    SimTime inter_alert_interval = 1 * kSecond;  // T, spacing between sender detections
    AlertCategory event_category = AlertCategory::Traffic;
    std::optional<Position> event_location;  // nullopt: pivot position at t0
    SimTime t0 = 60 * kSecond;
    SimTime duration = 1800 * kSecond;
    std::uint64_t seed = 1;
};

/// Checks the structural invariants (sender count, duration, parameter
/// ranges). Throws SimError with a diagnostic.
void validate(const ScenarioConfig& cfg);

enum class RecordKind { Send, Deliver, Detect };

struct LogRecord {
    SimTime t = 0;
    RecordKind kind = RecordKind::Send;
    NodeId node = 0;
    int msg_type = kMsgTypeNone;  // 0/1/2 for sends of typed messages
    std::string key;              // flood/alert key, empty when none
    friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

struct SenderPick {
    NodeId node = 0;
    SimTime detect_at = 0;
};

struct ScenarioMeta {
    std::string protocol;
    std::size_t n_nodes = 0;
    std::size_t n_senders = 0;
    double pa = 1.0;
    std::uint64_t seed = 0;
    SimTime t0 = 0;
    SimTime duration = 0;
    AlertCategory event_category = AlertCategory::Traffic;
    Position event_location;
    std::vector<SenderPick> senders;
    SimTime first_detection = 0;
};

/// Complete record of one run: every transmission, every app delivery and
/// every detection, in execution order.
struct EventLog {
    ScenarioMeta meta;
    std::vector<LogRecord> records;

    void write(std::ostream& out) const;
    std::uint64_t content_hash() const;  // FNV-1a over the serialized form
};

/// Picks physically-close alert senders: a pivot chosen uniformly among
/// nodes with at least n_senders-1 peers within the cluster radius at t0,
/// plus its nearest peers; detections at t0, t0+T, ...
std::vector<SenderPick> select_senders(const MobilityTrace& trace, const ScenarioConfig& cfg,
                                       Rng& rng);

EventLog run(const ScenarioConfig& cfg);
EventLog run_with_trace(const ScenarioConfig& cfg, const MobilityTrace& trace);

// Salts for the three independent seed streams (mobility, sender selection,
// assessment), so p_a sweeps reuse identical mobility.
inline constexpr std::uint64_t kMobilityStream = 0x6d6f62696cULL;
inline constexpr std::uint64_t kSenderStream = 0x73656e64ULL;
inline constexpr std::uint64_t kAssessStream = 0x61737365ULL;

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t salt)
{
    return mix64(seed ^ mix64(salt));
}

}  // namespace ctdsim

#endif
