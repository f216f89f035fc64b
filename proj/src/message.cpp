#include "ctdsim/message.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace ctdsim {

namespace {

// %.17g round-trips IEEE doubles exactly through strtod.
std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string tok;
    std::istringstream in(line);
    while (std::getline(in, tok, sep))
        out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok)
{
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw SimError("malformed number '" + tok + "' in message");
    return v;
}

std::uint64_t parse_u64(const std::string& tok)
{
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
        throw SimError("malformed integer '" + tok + "' in message");
    return v;
}

std::string encode_alert(const Alert& a)
{
    return std::string(category_name(a.category)) + " " + fmt_double(a.location.x) + " " +
           fmt_double(a.location.y) + " " + std::to_string(a.created_at);
}

Alert decode_alert(const std::vector<std::string>& tok, std::size_t at)
{
    Alert a;
    a.category = parse_category(tok.at(at));
    a.location.x = parse_double(tok.at(at + 1));
    a.location.y = parse_double(tok.at(at + 2));
    a.created_at = static_cast<SimTime>(parse_u64(tok.at(at + 3)));
    return a;
}

AlertKey decode_key(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.empty())
        throw SimError("empty alert key");
    AlertKey key;
    key.category = parse_category(parts[0]);
    if (parts.size() == 3) {
        key.has_cell = true;
        key.cell_x = std::strtoll(parts[1].c_str(), nullptr, 10);
        key.cell_y = std::strtoll(parts[2].c_str(), nullptr, 10);
    } else if (parts.size() != 1) {
        throw SimError("malformed alert key '" + text + "'");
    }
    return key;
}

}  // namespace

int msg_type_code(const Message& msg)
{
    if (std::holds_alternative<AssessRequest>(msg))
        return kMsgTypeRequest;
    if (std::holds_alternative<AssessReply>(msg))
        return kMsgTypeReply;
    if (std::holds_alternative<AlertMsg>(msg))
        return kMsgTypeAlert;
    return kMsgTypeNone;
}

FloodKey flood_key_of(const AlertMsg& msg, const KeyPolicy& policy)
{
    FloodKey fk;
    fk.key = alert_key(msg.alert, policy);
    if (msg.origin) {
        fk.has_origin = true;
        fk.origin = *msg.origin;
        fk.detected_at = msg.alert.created_at;
    }
    return fk;
}

std::string to_string(const FloodKey& key)
{
    std::string out = to_string(key.key);
    if (key.has_origin)
        out += ":o" + std::to_string(key.origin) + ":t" + std::to_string(key.detected_at);
    return out;
}

std::string encode_message(const Message& msg)
{
    struct Encoder {
        std::string operator()(const Hello& m) const
        {
            return "hello " + std::to_string(m.sender);
        }
        std::string operator()(const AssessRequest& m) const
        {
            return "request " + std::to_string(m.sender) + " " + encode_alert(m.alert);
        }
        std::string operator()(const AssessReply& m) const
        {
            return "reply " + std::to_string(m.destination) + " " + std::to_string(m.sender) +
                   " " + (m.reply ? "1" : "0") + " " + to_string(m.key);
        }
        std::string operator()(const AlertMsg& m) const
        {
            return "alert " + encode_alert(m.alert) + " " +
                   (m.origin ? std::to_string(*m.origin) : std::string("-"));
        }
    };
    return std::visit(Encoder{}, msg);
}

Message decode_message(const std::string& line)
{
    std::vector<std::string> tok;
    {
        std::istringstream in(line);
        std::string t;
        while (in >> t)
            tok.push_back(t);
    }
    if (tok.empty())
        throw SimError("empty message line");
    try {
        const std::string& kind = tok[0];
        if (kind == "hello" && tok.size() == 2)
            return Hello{static_cast<NodeId>(parse_u64(tok[1]))};
        if (kind == "request" && tok.size() == 6)
            return AssessRequest{static_cast<NodeId>(parse_u64(tok[1])), decode_alert(tok, 2)};
        if (kind == "reply" && tok.size() == 5) {
            AssessReply m;
            m.destination = static_cast<NodeId>(parse_u64(tok[1]));
            m.sender = static_cast<NodeId>(parse_u64(tok[2]));
            m.reply = tok[3] == "1";
            m.key = decode_key(tok[4]);
            return m;
        }
        if (kind == "alert" && tok.size() == 6) {
            AlertMsg m;
            m.alert = decode_alert(tok, 1);
            if (tok[5] != "-")
                m.origin = static_cast<NodeId>(parse_u64(tok[5]));
            return m;
        }
    } catch (const SimError&) {
        throw;
    }
    throw SimError("malformed message line '" + line + "'");
}

}  // namespace ctdsim
