#include "likestarter/governance.hpp"

#include "likestarter/errors.hpp"
#include "likestarter/ledger_state.hpp"

namespace likestarter {

bool Proposal::is_member(const AccountId& account) const {
  return !snapshot_balance(account).is_zero();
}

Amount Proposal::snapshot_balance(const AccountId& account) const {
  const auto it = snapshot->balances.find(account);
  return it == snapshot->balances.end() ? Amount{} : it->second;
}

bool operator==(const Proposal& a, const Proposal& b) {
  const bool same_snapshot =
      a.snapshot == b.snapshot || (a.snapshot && b.snapshot && *a.snapshot == *b.snapshot);
  return same_snapshot && a.proposal_id == b.proposal_id && a.artifact_id == b.artifact_id &&
         a.beneficiary == b.beneficiary && a.suggestions == b.suggestions &&
         a.votes == b.votes && a.opened_at == b.opened_at && a.min_close_at == b.min_close_at &&
         a.status == b.status && a.outcome == b.outcome;
}

namespace governance {

namespace {

Proposal& open_proposal_ref(LedgerState& state, const std::string& proposal_id) {
  Proposal& p = state.proposal(proposal_id);
  require(p.status == ProposalStatus::Open, ErrorCode::ProposalClosed,
          "proposal '" + proposal_id + "' is closed");
  return p;
}

}  // namespace

std::map<SuggestionId, Amount> tally(const Proposal& proposal) {
  std::map<SuggestionId, Amount> totals;
  for (const auto& [id, suggestion] : proposal.suggestions) totals.emplace(id, Amount{});
  for (const auto& [voter, choice] : proposal.votes) {
    auto& slot = totals[choice];
    slot = slot.plus(proposal.snapshot_balance(voter));
  }
  return totals;
}

Outcome decide(const Proposal& proposal, const Ratio& quorum_fraction) {
  const auto totals = tally(proposal);
  Amount voted;
  for (const auto& [id, weight] : totals) voted = voted.plus(weight);

  const Amount total = proposal.snapshot->total;
  const bool quorum_met =
      !voted.is_zero() && compare_products(voted.value(), quorum_fraction.den(),
                                           quorum_fraction.num(), total.value()) >= 0;
  if (!quorum_met) {
    const auto& initial = proposal.suggestions.begin();
    return Outcome{initial->first, initial->second.price, false};
  }

  SuggestionId best = 0;
  for (const auto& [id, weight] : totals) {
    if (best == 0) {
      best = id;
      continue;
    }
    const Amount best_weight = totals.at(best);
    const Suggestion& cand = proposal.suggestions.at(id);
    const Suggestion& incumbent = proposal.suggestions.at(best);
    if (weight != best_weight) {
      if (weight > best_weight) best = id;
    } else if (cand.price != incumbent.price) {
      if (cand.price < incumbent.price) best = id;
    } else if (cand.created_at < incumbent.created_at) {
      best = id;
    }
  }
  return Outcome{best, proposal.suggestions.at(best).price, true};
}

Weight vote_weight(const Proposal& proposal, const AccountId& actor) {
  const Amount balance = proposal.snapshot_balance(actor);
  if (balance.is_zero()) return Weight{0, 1};
  const Ratio r(balance.value(), proposal.snapshot->total.value());
  return Weight{r.num(), r.den()};
}

Weight vote_weight(const LedgerState& state, const std::string& proposal_id,
                   const AccountId& actor) {
  return vote_weight(state.proposal(proposal_id), actor);
}

const Proposal& open_proposal(LedgerState& state, const TxContext& tx,
                              const std::string& proposal_id, const std::string& artifact_id,
                              const AccountId& beneficiary, Amount initial_price) {
  require(!initial_price.is_zero(), ErrorCode::ZeroPrice, "suggested price must be positive");
  const TokenDomain& domain = state.domain(beneficiary);
  const Timestamp period = state.params.min_voting_period_ms;
  require(tx.timestamp() <= ~Timestamp{0} - period, ErrorCode::Overflow,
          "voting deadline overflows");

  auto snapshot = std::make_shared<Snapshot>();
  snapshot->snapshot_id = sequence_id("snap", tx.seq());
  snapshot->beneficiary = beneficiary;
  snapshot->taken_at = tx.timestamp();
  snapshot->balances = domain.likoin_balances();
  for (const auto& [holder, balance] : snapshot->balances) {
    snapshot->total = snapshot->total.plus(balance);
  }

  Proposal p;
  p.proposal_id = proposal_id;
  p.artifact_id = artifact_id;
  p.beneficiary = beneficiary;
  p.snapshot = std::move(snapshot);
  p.suggestions.emplace(1, Suggestion{initial_price, beneficiary, tx.timestamp()});
  p.votes.emplace(beneficiary, 1);
  p.opened_at = tx.timestamp();
  p.min_close_at = tx.timestamp() + period;

  const auto [it, inserted] = state.proposals.emplace(proposal_id, std::move(p));
  require(inserted, ErrorCode::ValidationError, "proposal '" + proposal_id + "' already exists");
  const Proposal& stored = it->second;
  tx.emit("ProposalOpened", {{"proposal_id", proposal_id},
                             {"artifact_id", artifact_id},
                             {"snapshot_id", stored.snapshot->snapshot_id},
                             {"snapshot_total", stored.snapshot->total.to_string()},
                             {"members", stored.snapshot->balances.size()},
                             {"min_close_at", stored.min_close_at}});
  tx.emit("Suggested", {{"proposal_id", proposal_id},
                        {"suggestion_id", 1},
                        {"proposer", beneficiary.str()},
                        {"price", initial_price.to_string()}});
  return stored;
}

SuggestionId suggest_price(LedgerState& state, const TxContext& tx, const AccountId& actor,
                           const std::string& proposal_id, Amount price) {
  Proposal& p = open_proposal_ref(state, proposal_id);
  require(p.is_member(actor) || actor == p.beneficiary, ErrorCode::NotMember,
          "'" + actor.str() + "' held no Likoins when the proposal opened");
  require(!price.is_zero(), ErrorCode::ZeroPrice, "price must be positive");
  for (const auto& [id, s] : p.suggestions) {
    require(s.price != price, ErrorCode::DuplicatePrice,
            "price " + price.to_string() + " already suggested");
  }
  const SuggestionId id = p.suggestions.rbegin()->first + 1;
  p.suggestions.emplace(id, Suggestion{price, actor, tx.timestamp()});
  p.votes[actor] = id;
  tx.emit("Suggested", {{"proposal_id", proposal_id},
                        {"suggestion_id", id},
                        {"proposer", actor.str()},
                        {"price", price.to_string()}});
  tx.emit("Voted", {{"proposal_id", proposal_id}, {"voter", actor.str()}, {"suggestion_id", id}});
  return id;
}

const Proposal& vote(LedgerState& state, const TxContext& tx, const AccountId& actor,
                     const std::string& proposal_id, SuggestionId suggestion_id) {
  Proposal& p = open_proposal_ref(state, proposal_id);
  require(p.is_member(actor), ErrorCode::NotMember,
          "'" + actor.str() + "' held no Likoins when the proposal opened");
  require(p.suggestions.contains(suggestion_id), ErrorCode::UnknownSuggestion,
          "unknown suggestion " + std::to_string(suggestion_id));
  p.votes[actor] = suggestion_id;
  tx.emit("Voted", {{"proposal_id", proposal_id},
                    {"voter", actor.str()},
                    {"suggestion_id", suggestion_id}});
  return p;
}

const Proposal& finalize(LedgerState& state, const TxContext& tx, const AccountId& actor,
                         const std::string& proposal_id) {
  Proposal& p = open_proposal_ref(state, proposal_id);
  require(actor == p.beneficiary, ErrorCode::NotAuthorized,
          "only the beneficiary may finalize");
  require(tx.timestamp() >= p.min_close_at, ErrorCode::TooEarly,
          "voting stays open until " + std::to_string(p.min_close_at));
  Artifact& artifact = state.artifact(p.artifact_id);

  const Outcome outcome = decide(p, state.params.quorum_fraction);
  p.outcome = outcome;
  p.status = ProposalStatus::Finalized;
  artifact.state = ArtifactState::OnSale;
  artifact.price = outcome.price;
  tx.emit("Finalized", {{"proposal_id", proposal_id},
                        {"artifact_id", p.artifact_id},
                        {"suggestion_id", outcome.suggestion_id},
                        {"price", outcome.price.to_string()},
                        {"quorum_met", outcome.quorum_met}});
  return p;
}

const Proposal& cancel(LedgerState& state, const TxContext& tx, const std::string& proposal_id) {
  Proposal& p = open_proposal_ref(state, proposal_id);
  p.status = ProposalStatus::Cancelled;
  p.votes.clear();
  tx.emit("ProposalCancelled", {{"proposal_id", proposal_id}, {"artifact_id", p.artifact_id}});
  return p;
}

}  // namespace governance
}  // namespace likestarter
