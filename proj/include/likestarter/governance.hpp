#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "likestarter/account_id.hpp"
#include "likestarter/amount.hpp"
#include "likestarter/events.hpp"

namespace likestarter {

class LedgerState;

/// Likoin balances of one domain frozen at proposal time. Membership and
/// vote weight for the proposal are read from here, never from live state.
struct Snapshot {
  std::string snapshot_id;
  AccountId beneficiary;
  Timestamp taken_at = 0;
  std::map<AccountId, Amount> balances;
  Amount total;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

using SuggestionId = std::uint32_t;

struct Suggestion {
  Amount price;
  AccountId proposer;
  Timestamp created_at = 0;

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

enum class ProposalStatus { Open, Finalized, Cancelled };

struct Outcome {
  SuggestionId suggestion_id = 0;
  Amount price;
  bool quorum_met = false;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Exact vote weight: balance / snapshot total.
struct Weight {
  u128 num = 0;
  u128 den = 1;

  friend bool operator==(const Weight&, const Weight&) = default;
};

struct Proposal {
  std::string proposal_id;
  std::string artifact_id;
  AccountId beneficiary;
  std::shared_ptr<const Snapshot> snapshot;
  /// Suggestion ids are dense from 1; id 1 is the beneficiary's initial price.
  std::map<SuggestionId, Suggestion> suggestions;
  std::map<AccountId, SuggestionId> votes;
  Timestamp opened_at = 0;
  Timestamp min_close_at = 0;
  ProposalStatus status = ProposalStatus::Open;
  std::optional<Outcome> outcome;

  bool is_member(const AccountId& account) const;
  Amount snapshot_balance(const AccountId& account) const;

  friend bool operator==(const Proposal& a, const Proposal& b);
};

namespace governance {

/// Snapshot-weighted tally: suggestion id -> sum of voters' snapshot balances.
/// Every suggestion appears, including those with zero weight.
std::map<SuggestionId, Amount> tally(const Proposal& proposal);

/// Weighted plurality with quorum. Quorum is met when the voted snapshot
/// balance is positive and at least quorum * snapshot total; the winner is
/// then the heaviest suggestion (ties: lower price, then earlier creation,
/// then lower id). Otherwise the initial suggestion stands.
Outcome decide(const Proposal& proposal, const Ratio& quorum_fraction);

Weight vote_weight(const Proposal& proposal, const AccountId& actor);
Weight vote_weight(const LedgerState& state, const std::string& proposal_id,
                   const AccountId& actor);

/// Opens a proposal on `artifact_id` with the beneficiary's initial price
/// and a fresh snapshot of the domain's Likoin balances.
const Proposal& open_proposal(LedgerState& state, const TxContext& tx,
                              const std::string& proposal_id, const std::string& artifact_id,
                              const AccountId& beneficiary, Amount initial_price);

/// Adds a price suggestion and moves the actor's vote onto it.
SuggestionId suggest_price(LedgerState& state, const TxContext& tx, const AccountId& actor,
                           const std::string& proposal_id, Amount price);
const Proposal& vote(LedgerState& state, const TxContext& tx, const AccountId& actor,
                     const std::string& proposal_id, SuggestionId suggestion_id);
/// Closes voting and puts the artifact on sale at the winning price.
const Proposal& finalize(LedgerState& state, const TxContext& tx, const AccountId& actor,
                         const std::string& proposal_id);
const Proposal& cancel(LedgerState& state, const TxContext& tx, const std::string& proposal_id);

}  // namespace governance
}  // namespace likestarter
