#include "likestarter/artifacts.hpp"

#include "likestarter/errors.hpp"
#include "likestarter/ledger_state.hpp"

namespace likestarter::artifacts {

std::pair<const Artifact*, const Proposal*> propose_artifact(LedgerState& state,
                                                             const TxContext& tx,
                                                             const AccountId& actor,
                                                             const ArtifactDraft& draft) {
  const auto campaign = state.campaigns.find(actor);
  require(campaign != state.campaigns.end(), ErrorCode::NotBeneficiary,
          "'" + actor.str() + "' has no campaign");
  require(!draft.suggested_price.is_zero(), ErrorCode::ZeroPrice,
          "suggested price must be positive");
  require(!draft.supply_limit || *draft.supply_limit > 0, ErrorCode::ZeroParameter,
          "supply limit must be positive");
  const std::string artifact_id = draft.artifact_id.value_or(sequence_id("art", tx.seq()));
  require(!artifact_id.empty(), ErrorCode::ValidationError, "artifact id is empty");
  require(!state.artifacts.contains(artifact_id), ErrorCode::DuplicateArtifact,
          "artifact '" + artifact_id + "' already exists");
  require(tx.timestamp() <= ~Timestamp{0} - state.params.min_voting_period_ms,
          ErrorCode::Overflow, "voting deadline overflows");
  const std::string proposal_id = sequence_id("prop", tx.seq());
  require(!state.proposals.contains(proposal_id), ErrorCode::ValidationError,
          "proposal '" + proposal_id + "' already exists");

  Artifact a;
  a.artifact_id = artifact_id;
  a.beneficiary = actor;
  a.title = draft.title;
  a.description = draft.description;
  a.content_ref = draft.content_ref;
  a.supply_limit = draft.supply_limit;
  a.proposal_id = proposal_id;

  Json event{{"artifact_id", artifact_id},
             {"beneficiary", actor.str()},
             {"title", draft.title},
             {"proposal_id", proposal_id}};
  if (draft.supply_limit) event["supply_limit"] = *draft.supply_limit;
  tx.emit("ArtifactProposed", std::move(event));

  const Artifact* stored = &state.artifacts.emplace(artifact_id, std::move(a)).first->second;
  const Proposal* proposal = &governance::open_proposal(state, tx, proposal_id, artifact_id, actor,
                                                        draft.suggested_price);
  return {stored, proposal};
}

const Artifact& remove_artifact(LedgerState& state, const TxContext& tx, const AccountId& actor,
                                const std::string& artifact_id) {
  Artifact& a = state.artifact(artifact_id);
  require(a.beneficiary == actor, ErrorCode::NotBeneficiary,
          "only '" + a.beneficiary.str() + "' may remove this artifact");
  require(a.state != ArtifactState::Removed, ErrorCode::AlreadyRemoved,
          "artifact '" + artifact_id + "' is already removed");
  a.state = ArtifactState::Removed;
  tx.emit("ArtifactRemoved", {{"artifact_id", artifact_id}, {"beneficiary", actor.str()}});
  if (const auto p = state.proposals.find(a.proposal_id);
      p != state.proposals.end() && p->second.status == ProposalStatus::Open) {
    governance::cancel(state, tx, a.proposal_id);
  }
  return a;
}

PurchaseRecord buy_artifact(LedgerState& state, const TxContext& tx, const AccountId& buyer,
                            const std::string& artifact_id,
                            const std::optional<AccountId>& expected_beneficiary) {
  state.require_account(buyer);
  Artifact& a = state.artifact(artifact_id);
  require(!expected_beneficiary || *expected_beneficiary == a.beneficiary, ErrorCode::WrongDomain,
          "artifact '" + artifact_id + "' is sold only for Bucks of '" + a.beneficiary.str() +
              "'");
  require(a.state == ArtifactState::OnSale, ErrorCode::NotOnSale,
          "artifact '" + artifact_id + "' is not on sale");
  require(!a.supply_limit || a.sold < *a.supply_limit, ErrorCode::SupplyExhausted,
          "artifact '" + artifact_id + "' is sold out");
  const Amount price = *a.price;
  TokenDomain& domain = state.domain(a.beneficiary);
  require(domain.balance_of(buyer, TokenKind::Buck) >= price, ErrorCode::InsufficientBucks,
          "insufficient Bucks for " + buyer.str());

  domain.burn_buck(buyer, price);
  a.owners[buyer] += 1;
  a.sold += 1;
  PurchaseRecord record{tx.seq(), tx.timestamp(), buyer, artifact_id, a.beneficiary, price};
  state.purchases.push_back(record);
  tx.emit("Purchased", {{"buyer", buyer.str()},
                        {"artifact_id", artifact_id},
                        {"beneficiary", a.beneficiary.str()},
                        {"price", price.to_string()}});
  tx.emit("Burned", {{"token", "buck"},
                     {"beneficiary", a.beneficiary.str()},
                     {"from", buyer.str()},
                     {"amount", price.to_string()}});
  return record;
}

std::vector<const Artifact*> list_artifacts(const LedgerState& state,
                                            const AccountId& beneficiary) {
  std::vector<const Artifact*> out;
  for (const auto& [id, a] : state.artifacts) {
    if (a.beneficiary == beneficiary) out.push_back(&a);
  }
  return out;
}

std::vector<std::pair<std::string, std::uint64_t>> owned_artifacts(const LedgerState& state,
                                                                   const AccountId& account) {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  for (const auto& [id, a] : state.artifacts) {
    if (const auto it = a.owners.find(account); it != a.owners.end()) {
      out.emplace_back(id, it->second);
    }
  }
  return out;
}

}  // namespace likestarter::artifacts
