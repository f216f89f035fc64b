#ifndef CTDSIM_PROTOCOL_HPP
#define CTDSIM_PROTOCOL_HPP

#include <map>
#include <string_view>
#include <variant>
#include <vector>

#include "ctdsim/message.hpp"
#include "ctdsim/rng.hpp"
#include "ctdsim/types.hpp"

namespace ctdsim {

enum class ProtocolKind {
    Baseline,    // flood on detection, no assessment
    CTDQuery,    // request replies, flood on strict majority after W
    CTDPassive,  // count proposals, flood when count exceeds half the neighbors
};

std::string_view protocol_name(ProtocolKind kind);
ProtocolKind parse_protocol(std::string_view text);

struct ProtocolConfig {
    ProtocolKind protocol = ProtocolKind::Baseline;
    SimTime assess_window = 100;               // W
    SimTime seen_window = 30 * kMinute;        // S
    SimTime hello_interval = 1 * kSecond;
    int hello_expiry_intervals = 3;
    double pa = 1.0;                           // acceptance probability per received proposal
    KeyPolicy identity;
};

// Handlers perform no I/O; they return commands for the engine to execute.
struct BroadcastCmd {
    Message msg;
};
struct UnicastCmd {
    NodeId dest = 0;
    Message msg;
};
struct SetTimerCmd {
    SimTime at = 0;
    AlertKey key;
};
struct DeliverCmd {
    Alert alert;
};
using Command = std::variant<BroadcastCmd, UnicastCmd, SetTimerCmd, DeliverCmd>;
using Commands = std::vector<Command>;

/// One locally-known alert proposal and its corroboration state.
struct ProposalRecord {
    AlertKey key;
    Alert alert;
    SimTime first_seen = 0;
    int supporter_count = 1;
    bool disseminated = false;  // monotone false -> true
};

/// Flood units seen within the window S; receiving or sending one again is
/// suppressed until the entry expires.
class SeenStore {
public:
    SeenStore() = default;
    explicit SeenStore(SimTime window) : window_(window) {}

    bool contains(const FloodKey& fk, SimTime now);
    void record(const FloodKey& fk, SimTime now);

private:
    std::map<FloodKey, SimTime> first_seen_;
    SimTime window_ = 30 * kMinute;
};

/// Last-hello table behind the one-hop neighbor count.
class NeighborTable {
public:
    NeighborTable() = default;
    NeighborTable(SimTime hello_interval, int expiry_intervals)
        : expiry_(hello_interval * expiry_intervals) {}

    void observe(NodeId peer, SimTime now) { last_hello_[peer] = now; }
    int live_count(SimTime now);

private:
    std::map<NodeId, SimTime> last_hello_;
    SimTime expiry_ = 3 * kSecond;
};

/// Reply accumulator for one in-flight assessment request.
struct PendingQuery {
    Alert alert;
    SimTime sent_at = 0;
    int positive = 0;
    int negative = 0;
    SimTime deadline = 0;  // replies count up to and including this instant
};

/// Per-node protocol state machine for one of the three strategies. Pure
/// state transitions: the same event sequence always yields the same
/// commands. Single-owner; the engine serializes calls.
class NodeState {
public:
    NodeState(NodeId id, const ProtocolConfig& cfg, std::uint64_t rng_seed);

    Commands on_detect(const Alert& alert, SimTime now);
    Commands on_message(const Message& msg, SimTime now);
    Commands on_timer(const AlertKey& key, SimTime now);
    Commands emit_hello(SimTime now);

    NodeId id() const { return id_; }
    bool hello_enabled() const { return cfg_.protocol == ProtocolKind::CTDPassive; }
    int live_neighbor_count(SimTime now) { return neighbors_.live_count(now); }

    // Read-only views for tests and invariant checks.
    const ProposalRecord* proposal(const AlertKey& key) const;
    const PendingQuery* pending_query(const AlertKey& key) const;

private:
    Commands on_detect_baseline(const Alert& alert, SimTime now);
    Commands on_detect_query(const Alert& alert, SimTime now);
    Commands on_detect_passive(const Alert& alert, SimTime now);
    Commands on_request_query(const AssessRequest& req, SimTime now);
    Commands on_reply_query(const AssessReply& reply, SimTime now);
    Commands on_proposal_passive(const AssessRequest& req, SimTime now);
    Commands on_alert(const AlertMsg& msg, SimTime now);
    Commands on_hello(const Hello& hello, SimTime now);

    /// Independent acceptance draw, true with probability p_a.
    bool assess();

    ProposalRecord* find_proposal(const AlertKey& key, SimTime now);
    ProposalRecord& create_proposal(const AlertKey& key, const Alert& alert, SimTime now);
    bool passive_threshold_met(const ProposalRecord& rec, SimTime now);

    /// Flood start shared by decide and threshold paths. Marks the proposal
    /// disseminated, delivers locally and broadcasts the senderless alert —
    /// unless this node already forwarded the same flood unit.
    Commands start_dissemination(const AlertKey& key, const Alert& alert, SimTime now);

    NodeId id_;
    ProtocolConfig cfg_;
    std::map<AlertKey, ProposalRecord> proposals_;
    SeenStore seen_;
    NeighborTable neighbors_;
    std::map<AlertKey, PendingQuery> pending_;
    Rng rng_;
};

}  // namespace ctdsim

#endif
