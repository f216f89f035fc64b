#ifndef CTDSIM_MESSAGE_HPP
#define CTDSIM_MESSAGE_HPP

#include <optional>
#include <string>
#include <variant>

#include "ctdsim/types.hpp"

namespace ctdsim {

// Wire type codes, fixed so logs are comparable across implementations.
inline constexpr int kMsgTypeRequest = 0;
inline constexpr int kMsgTypeReply = 1;
inline constexpr int kMsgTypeAlert = 2;
inline constexpr int kMsgTypeNone = -1;  // hello beacons carry no type code

/// One-hop beacon used solely for live neighbor counting.
struct Hello {
    NodeId sender = 0;
    friend bool operator==(const Hello&, const Hello&) = default;
};

/// Type 0: broadcast by a detecting node to ask neighbors for corroboration.
struct AssessRequest {
    NodeId sender = 0;
    Alert alert;
    friend bool operator==(const AssessRequest&, const AssessRequest&) = default;
};

/// Type 1: unicast verdict back to the requesting node. Carries the key of
/// the proposal it answers so the requester can match it to a pending query.
struct AssessReply {
    NodeId destination = 0;
    NodeId sender = 0;
    bool reply = false;
    AlertKey key;
    friend bool operator==(const AssessReply&, const AssessReply&) = default;
};

/// Type 2: the disseminated alert. CTD alerts are senderless so floods of
/// the same incident merge; baseline floods carry their origin, which keeps
/// each sender's flood a distinct dedup unit.
struct AlertMsg {
    Alert alert;
    std::optional<NodeId> origin;
    friend bool operator==(const AlertMsg&, const AlertMsg&) = default;
};

using Message = std::variant<Hello, AssessRequest, AssessReply, AlertMsg>;

int msg_type_code(const Message& msg);

/// Dedup identity of one dissemination: the alert key alone for CTD,
/// extended with (origin, detection time) for baseline floods.
struct FloodKey {
    AlertKey key;
    bool has_origin = false;
    NodeId origin = 0;
    SimTime detected_at = 0;
    friend auto operator<=>(const FloodKey&, const FloodKey&) = default;
};

FloodKey flood_key_of(const AlertMsg& msg, const KeyPolicy& policy);

std::string to_string(const FloodKey& key);

/// Single-line text codec; decode(encode(m)) == m for every variant.
std::string encode_message(const Message& msg);
Message decode_message(const std::string& line);

}  // namespace ctdsim

#endif
