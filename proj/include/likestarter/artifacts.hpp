#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "likestarter/account_id.hpp"
#include "likestarter/amount.hpp"
#include "likestarter/events.hpp"

namespace likestarter {

class LedgerState;
struct Proposal;

enum class ArtifactState { Pricing, OnSale, Removed };

struct Artifact {
  std::string artifact_id;
  AccountId beneficiary;
  std::string title;
  std::string description;
  std::string content_ref;
  ArtifactState state = ArtifactState::Pricing;
  /// Set by vote finalization only.
  std::optional<Amount> price;
  std::optional<std::uint64_t> supply_limit;
  std::uint64_t sold = 0;
  std::map<AccountId, std::uint64_t> owners;
  std::string proposal_id;

  friend bool operator==(const Artifact&, const Artifact&) = default;
};

struct PurchaseRecord {
  std::uint64_t seq = 0;
  Timestamp timestamp = 0;
  AccountId buyer;
  std::string artifact_id;
  AccountId beneficiary;
  Amount price;

  friend bool operator==(const PurchaseRecord&, const PurchaseRecord&) = default;
};

struct ArtifactDraft {
  std::string title;
  std::string description;
  std::string content_ref;
  Amount suggested_price;
  std::optional<std::uint64_t> supply_limit;
  /// Generated from the transaction sequence number when absent.
  std::optional<std::string> artifact_id;
};

namespace artifacts {

/// Registers an artifact in the pricing state and opens its price proposal
/// with a Likoin snapshot taken now.
std::pair<const Artifact*, const Proposal*> propose_artifact(LedgerState& state,
                                                             const TxContext& tx,
                                                             const AccountId& actor,
                                                             const ArtifactDraft& draft);
/// Removes the artifact and cancels its open proposal. Ownerships persist.
const Artifact& remove_artifact(LedgerState& state, const TxContext& tx, const AccountId& actor,
                                const std::string& artifact_id);
/// Burns `price` Bucks from the buyer's balance in the artifact's domain.
/// `expected_beneficiary`, when given, must match the artifact's domain.
PurchaseRecord buy_artifact(LedgerState& state, const TxContext& tx, const AccountId& buyer,
                            const std::string& artifact_id,
                            const std::optional<AccountId>& expected_beneficiary = std::nullopt);

std::vector<const Artifact*> list_artifacts(const LedgerState& state, const AccountId& beneficiary);
std::vector<std::pair<std::string, std::uint64_t>> owned_artifacts(const LedgerState& state,
                                                                   const AccountId& account);

}  // namespace artifacts
}  // namespace likestarter
