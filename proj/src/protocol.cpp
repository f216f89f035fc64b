#include "ctdsim/protocol.hpp"

namespace ctdsim {

std::string_view protocol_name(ProtocolKind kind)
{
    switch (kind) {
    case ProtocolKind::Baseline:
        return "baseline";
    case ProtocolKind::CTDQuery:
        return "ctd_query";
    case ProtocolKind::CTDPassive:
        return "ctd_passive";
    }
    return "?";
}

ProtocolKind parse_protocol(std::string_view text)
{
    if (text == "baseline")
        return ProtocolKind::Baseline;
    if (text == "ctd_query")
        return ProtocolKind::CTDQuery;
    if (text == "ctd_passive")
        return ProtocolKind::CTDPassive;
    throw SimError("unknown protocol '" + std::string(text) +
                   "' (valid: baseline, ctd_query, ctd_passive)");
}

bool SeenStore::contains(const FloodKey& fk, SimTime now)
{
    auto it = first_seen_.find(fk);
    if (it == first_seen_.end())
        return false;
    if (now - it->second > window_) {
        first_seen_.erase(it);
        return false;
    }
    return true;
}

void SeenStore::record(const FloodKey& fk, SimTime now)
{
    auto [it, inserted] = first_seen_.emplace(fk, now);
    if (!inserted && now - it->second > window_)
        it->second = now;  // expired entry, re-arm at the new sighting
}

int NeighborTable::live_count(SimTime now)
{
    int n = 0;
    for (auto it = last_hello_.begin(); it != last_hello_.end();) {
        if (now - it->second > expiry_) {
            it = last_hello_.erase(it);
        } else {
            ++n;
            ++it;
        }
    }
    return n;
}

NodeState::NodeState(NodeId id, const ProtocolConfig& cfg, std::uint64_t rng_seed)
    : id_(id),
      cfg_(cfg),
      seen_(cfg.seen_window),
      neighbors_(cfg.hello_interval, cfg.hello_expiry_intervals),
      rng_(rng_seed)
{
}

Commands NodeState::on_detect(const Alert& alert, SimTime now)
{
    switch (cfg_.protocol) {
    case ProtocolKind::Baseline:
        return on_detect_baseline(alert, now);
    case ProtocolKind::CTDQuery:
        return on_detect_query(alert, now);
    case ProtocolKind::CTDPassive:
        return on_detect_passive(alert, now);
    }
    return {};
}

Commands NodeState::on_message(const Message& msg, SimTime now)
{
    struct Dispatcher {
        NodeState& self;
        SimTime now;
        Commands operator()(const Hello& m) { return self.on_hello(m, now); }
        Commands operator()(const AssessRequest& m)
        {
            switch (self.cfg_.protocol) {
            case ProtocolKind::CTDQuery:
                return self.on_request_query(m, now);
            case ProtocolKind::CTDPassive:
                return self.on_proposal_passive(m, now);
            case ProtocolKind::Baseline:
                return {};  // baseline nodes do not assess
            }
            return {};
        }
        Commands operator()(const AssessReply& m)
        {
            if (self.cfg_.protocol != ProtocolKind::CTDQuery)
                return {};
            return self.on_reply_query(m, now);
        }
        Commands operator()(const AlertMsg& m) { return self.on_alert(m, now); }
    };
    return std::visit(Dispatcher{*this, now}, msg);
}

Commands NodeState::emit_hello(SimTime)
{
    return {BroadcastCmd{Hello{id_}}};
}

ProposalRecord* NodeState::find_proposal(const AlertKey& key, SimTime now)
{
    auto it = proposals_.find(key);
    if (it == proposals_.end())
        return nullptr;
    if (now - it->second.first_seen > cfg_.seen_window) {
        proposals_.erase(it);
        return nullptr;
    }
    return &it->second;
}

ProposalRecord& NodeState::create_proposal(const AlertKey& key, const Alert& alert, SimTime now)
{
    return proposals_.insert_or_assign(key, ProposalRecord{key, alert, now, 1, false})
        .first->second;
}

const ProposalRecord* NodeState::proposal(const AlertKey& key) const
{
    auto it = proposals_.find(key);
    return it == proposals_.end() ? nullptr : &it->second;
}

const PendingQuery* NodeState::pending_query(const AlertKey& key) const
{
    auto it = pending_.find(key);
    return it == pending_.end() ? nullptr : &it->second;
}

bool NodeState::assess()
{
    return rng_.bernoulli(cfg_.pa);
}

Commands NodeState::start_dissemination(const AlertKey& key, const Alert& alert, SimTime now)
{
    if (ProposalRecord* rec = find_proposal(key, now))
        rec->disseminated = true;
    const AlertMsg msg{alert, std::nullopt};
    const FloodKey fk = flood_key_of(msg, cfg_.identity);
    if (seen_.contains(fk, now))
        return {};  // this node already forwarded the flood
    seen_.record(fk, now);
    return {DeliverCmd{alert}, BroadcastCmd{msg}};
}

Commands NodeState::on_detect_baseline(const Alert& alert, SimTime now)
{
    const AlertKey key = alert_key(alert, cfg_.identity);
    if (find_proposal(key, now))
        return {};  // this node already started a flood for the alert
    ProposalRecord& rec = create_proposal(key, alert, now);
    rec.disseminated = true;
    const AlertMsg msg{alert, id_};
    seen_.record(flood_key_of(msg, cfg_.identity), now);
    return {BroadcastCmd{msg}};
}

Commands NodeState::on_detect_query(const Alert& alert, SimTime now)
{
    const AlertKey key = alert_key(alert, cfg_.identity);
    if (find_proposal(key, now))
        return {};  // the same event was already detected or proposed here
    create_proposal(key, alert, now);
    pending_[key] = PendingQuery{alert, now, 0, 0, now + cfg_.assess_window};
    return {BroadcastCmd{AssessRequest{id_, alert}},
            SetTimerCmd{now + cfg_.assess_window, key}};
}

Commands NodeState::on_request_query(const AssessRequest& req, SimTime now)
{
    const AlertKey key = alert_key(req.alert, cfg_.identity);
    if (find_proposal(key, now))
        return {};  // already assessed (or proposed) this alert
    create_proposal(key, req.alert, now);
    const bool verdict = assess();
    return {UnicastCmd{req.sender, AssessReply{req.sender, id_, verdict, key}}};
}

Commands NodeState::on_reply_query(const AssessReply& reply, SimTime now)
{
    if (reply.destination != id_)
        return {};
    auto it = pending_.find(reply.key);
    if (it == pending_.end() || now > it->second.deadline)
        return {};  // no pending query, or past the deadline
    if (reply.reply)
        it->second.positive += 1;
    else
        it->second.negative += 1;
    return {};
}

Commands NodeState::on_timer(const AlertKey& key, SimTime now)
{
    auto it = pending_.find(key);
    if (it == pending_.end())
        return {};
    const PendingQuery decided = it->second;
    pending_.erase(it);
    if (decided.positive <= decided.negative)
        return {};  // strict majority required; ties and zero replies drop the alert
    return start_dissemination(key, decided.alert, now);
}

bool NodeState::passive_threshold_met(const ProposalRecord& rec, SimTime now)
{
    if (rec.disseminated)
        return false;
    return 2 * rec.supporter_count > neighbors_.live_count(now);
}

Commands NodeState::on_detect_passive(const Alert& alert, SimTime now)
{
    const AlertKey key = alert_key(alert, cfg_.identity);
    ProposalRecord* rec = find_proposal(key, now);
    if (rec && rec->disseminated)
        return {};
    Commands out;
    if (!rec)
        rec = &create_proposal(key, alert, now);
    else
        rec->supporter_count += 1;
    out.push_back(BroadcastCmd{AssessRequest{id_, alert}});
    if (passive_threshold_met(*rec, now)) {
        for (auto& cmd : start_dissemination(key, rec->alert, now))
            out.push_back(std::move(cmd));
    }
    return out;
}

Commands NodeState::on_proposal_passive(const AssessRequest& req, SimTime now)
{
    if (!assess())
        return {};  // rejected proposals are ignored entirely
    const AlertKey key = alert_key(req.alert, cfg_.identity);
    ProposalRecord* rec = find_proposal(key, now);
    if (rec && rec->disseminated)
        return {};
    if (!rec)
        rec = &create_proposal(key, req.alert, now);
    else
        rec->supporter_count += 1;
    if (passive_threshold_met(*rec, now))
        return start_dissemination(key, rec->alert, now);
    return {};  // receivers never relay assessment requests
}

Commands NodeState::on_alert(const AlertMsg& msg, SimTime now)
{
    const FloodKey fk = flood_key_of(msg, cfg_.identity);
    if (seen_.contains(fk, now))
        return {};
    seen_.record(fk, now);
    // The alert is out; any local proposal needs no further corroboration.
    if (ProposalRecord* rec = find_proposal(fk.key, now))
        rec->disseminated = true;
    return {DeliverCmd{msg.alert}, BroadcastCmd{msg}};
}

Commands NodeState::on_hello(const Hello& hello, SimTime now)
{
    neighbors_.observe(hello.sender, now);
    return {};
}

}  // namespace ctdsim
