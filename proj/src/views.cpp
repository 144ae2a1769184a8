#include "likestarter/views.hpp"

#include <algorithm>
#include <vector>

#include "likestarter/errors.hpp"

namespace likestarter::views {

namespace {

const char* status_name(CampaignStatus s) { return s == CampaignStatus::Open ? "open" : "closed"; }

const char* state_name(ArtifactState s) {
  switch (s) {
    case ArtifactState::Pricing: return "pricing";
    case ArtifactState::OnSale: return "on_sale";
    case ArtifactState::Removed: return "removed";
  }
  return "unknown";
}

const char* status_name(ProposalStatus s) {
  switch (s) {
    case ProposalStatus::Open: return "open";
    case ProposalStatus::Finalized: return "finalized";
    case ProposalStatus::Cancelled: return "cancelled";
  }
  return "unknown";
}

std::uint64_t likes_of(const LedgerState& state, const Campaign& c) {
  std::uint64_t n = 0;
  for (const auto& id : c.posts) n += state.posts.at(id).like_count;
  return n;
}

Json donation(const DonationRecord& d) {
  Json j{{"seq", d.seq},
         {"timestamp", d.timestamp},
         {"donor", d.donor.str()},
         {"beneficiary", d.beneficiary.str()},
         {"amount", d.amount.to_string()},
         {"likoin_minted", d.likoin_minted.to_string()}};
  j["post_id"] = d.post_id ? Json(*d.post_id) : Json(nullptr);
  return j;
}

Json holding(const TokenDomain& d, const AccountId& account) {
  Json allowances = Json::object();
  for (const auto& [key, amount] : d.allowances()) {
    if (key.first == account) allowances[key.second.str()] = amount.to_string();
  }
  return Json{{"beneficiary", d.beneficiary().str()},
              {"likoin", d.balance_of(account, TokenKind::Likoin).to_string()},
              {"buck", d.balance_of(account, TokenKind::Buck).to_string()},
              {"allowances", std::move(allowances)}};
}

}  // namespace

std::string weight_string(const Weight& w) {
  return Ratio(w.num, w.den).to_string();
}

Json post(const Post& p) {
  return Json{{"post_id", p.post_id},
              {"beneficiary", p.beneficiary.str()},
              {"content_ref", p.content_ref},
              {"created_at", p.created_at},
              {"like_count", p.like_count}};
}

Json campaign(const LedgerState& state, const AccountId& beneficiary) {
  const Campaign& c = state.campaign(beneficiary);
  const TokenDomain& d = state.domain(beneficiary);
  Json artifacts = Json::array();
  for (const Artifact* a : artifacts::list_artifacts(state, beneficiary)) {
    artifacts.push_back(a->artifact_id);
  }
  return Json{{"beneficiary", c.beneficiary.str()},
              {"status", status_name(c.status)},
              {"round", c.round},
              {"created_at", c.created_at},
              {"likoin_rate", c.likoin_rate.to_string()},
              {"like_price", c.like_price.to_string()},
              {"likoins_per_like", crowdsale::likoins_for(c.like_price, c.likoin_rate).to_string()},
              {"buck_rate", d.buck_rate().to_string()},
              {"escrow", c.escrow.to_string()},
              {"total_raised", c.total_raised.to_string()},
              {"likoin_total", d.likoin_total().to_string()},
              {"buck_total", d.buck_total().to_string()},
              {"reserve", d.reserve().to_string()},
              {"holders", d.likoin_balances().size()},
              {"like_count", likes_of(state, c)},
              {"posts", c.posts},
              {"artifacts", std::move(artifacts)}};
}

Json artifact(const LedgerState& state, const std::string& artifact_id) {
  const Artifact& a = state.artifact(artifact_id);
  Json owners = Json::object();
  for (const auto& [who, n] : a.owners) owners[who.str()] = n;
  return Json{{"artifact_id", a.artifact_id},
              {"beneficiary", a.beneficiary.str()},
              {"title", a.title},
              {"description", a.description},
              {"content_ref", a.content_ref},
              {"state", state_name(a.state)},
              {"price", a.price ? Json(a.price->to_string()) : Json(nullptr)},
              {"supply_limit", a.supply_limit ? Json(*a.supply_limit) : Json(nullptr)},
              {"sold", a.sold},
              {"owners", std::move(owners)},
              {"proposal_id", a.proposal_id}};
}

Json proposal(const LedgerState& state, const std::string& proposal_id) {
  const Proposal& p = state.proposal(proposal_id);
  const auto totals = governance::tally(p);
  const Amount snapshot_total = p.snapshot->total;

  Json suggestions = Json::array();
  for (const auto& [sid, s] : p.suggestions) {
    Json voters = Json::array();
    for (const auto& [who, choice] : p.votes) {
      if (choice == sid) voters.push_back(who.str());
    }
    const Amount w = totals.at(sid);
    suggestions.push_back(
        Json{{"suggestion_id", sid},
             {"price", s.price.to_string()},
             {"proposer", s.proposer.str()},
             {"created_at", s.created_at},
             {"tally", w.to_string()},
             {"weight", snapshot_total.is_zero() ? "0"
                                                 : Ratio(w.value(), snapshot_total.value()).to_string()},
             {"voters", std::move(voters)}});
  }

  Json members = Json::object();
  for (const auto& [who, balance] : p.snapshot->balances) {
    members[who.str()] = Json{{"balance", balance.to_string()},
                              {"weight", weight_string(governance::vote_weight(p, who))}};
  }
  Json votes = Json::object();
  for (const auto& [who, sid] : p.votes) votes[who.str()] = sid;

  Json outcome = nullptr;
  if (p.outcome) {
    outcome = Json{{"suggestion_id", p.outcome->suggestion_id},
                   {"price", p.outcome->price.to_string()},
                   {"quorum_met", p.outcome->quorum_met}};
  }
  return Json{{"proposal_id", p.proposal_id},
              {"artifact_id", p.artifact_id},
              {"beneficiary", p.beneficiary.str()},
              {"status", status_name(p.status)},
              {"opened_at", p.opened_at},
              {"min_close_at", p.min_close_at},
              {"quorum_fraction", state.params.quorum_fraction.to_string()},
              {"snapshot",
               Json{{"snapshot_id", p.snapshot->snapshot_id},
                    {"taken_at", p.snapshot->taken_at},
                    {"total", snapshot_total.to_string()},
                    {"members", std::move(members)}}},
              {"suggestions", std::move(suggestions)},
              {"votes", std::move(votes)},
              {"outcome", std::move(outcome)}};
}

Json user(const LedgerState& state, const AccountId& account) {
  const Account& a = state.account(account);
  Json out{{"account_id", a.id.str()}, {"currency", a.currency.to_string()}};

  const auto c = state.campaigns.find(account);
  out["campaign"] = c == state.campaigns.end() ? Json(nullptr) : campaign(state, account);
  Json posts = Json::array();
  if (c != state.campaigns.end()) {
    for (const auto& id : c->second.posts) posts.push_back(post(state.posts.at(id)));
  }
  out["posts"] = std::move(posts);

  // Records are appended in sequence order, which is chronological.
  Json donations = Json::array();
  for (const auto& d : state.donations) {
    if (d.donor == account) donations.push_back(donation(d));
  }
  out["donations"] = std::move(donations);
  out["holdings"] = balances(state, account).at("balances");

  Json owned = Json::array();
  for (const auto& [id, copies] : artifacts::owned_artifacts(state, account)) {
    owned.push_back(Json{{"artifact_id", id}, {"copies", copies}});
  }
  out["owned_artifacts"] = std::move(owned);
  return out;
}

Json balances(const LedgerState& state, const AccountId& account,
              const std::optional<AccountId>& beneficiary) {
  const Account& a = state.account(account);
  Json list = Json::array();
  if (beneficiary) {
    list.push_back(holding(state.domain(*beneficiary), account));
  } else {
    for (const auto& [b, d] : state.domains) {
      const bool involved = !d.balance_of(account, TokenKind::Likoin).is_zero() ||
                            !d.balance_of(account, TokenKind::Buck).is_zero();
      if (involved) list.push_back(holding(d, account));
    }
  }
  return Json{{"account_id", a.id.str()},
              {"currency", a.currency.to_string()},
              {"balances", std::move(list)}};
}

Json feed(const LedgerState& state, std::size_t offset, std::size_t limit) {
  std::vector<const Post*> posts;
  posts.reserve(state.posts.size());
  for (const auto& [id, p] : state.posts) posts.push_back(&p);
  std::sort(posts.begin(), posts.end(), [](const Post* a, const Post* b) {
    if (a->like_count != b->like_count) return a->like_count > b->like_count;
    if (a->created_at != b->created_at) return a->created_at > b->created_at;
    return a->post_id < b->post_id;
  });
  Json out = Json::array();
  for (std::size_t i = offset; i < posts.size() && out.size() < limit; ++i) {
    const Post& p = *posts[i];
    const Campaign& c = state.campaign(p.beneficiary);
    Json entry = post(p);
    entry["beneficiary_summary"] = Json{{"account_id", c.beneficiary.str()},
                                        {"status", status_name(c.status)},
                                        {"total_raised", c.total_raised.to_string()},
                                        {"like_count", likes_of(state, c)}};
    out.push_back(std::move(entry));
  }
  return out;
}

Json artifact_list(const LedgerState& state, const AccountId& beneficiary) {
  Json out = Json::array();
  for (const Artifact* a : artifacts::list_artifacts(state, beneficiary)) {
    out.push_back(artifact(state, a->artifact_id));
  }
  return out;
}

Json submit_result(const SubmitResult& result) {
  Json events = Json::array();
  for (const auto& e : result.events) events.push_back(to_json(e));
  return Json{{"seq", result.seq}, {"events", std::move(events)}, {"state_hash", result.state_hash}};
}

}  // namespace likestarter::views
