#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "likestarter/account_id.hpp"
#include "likestarter/amount.hpp"
#include "likestarter/artifacts.hpp"
#include "likestarter/crowdsale.hpp"
#include "likestarter/governance.hpp"
#include "likestarter/token_domain.hpp"

namespace likestarter {

/// Genesis parameters; recorded in the journal header.
struct LedgerParams {
  Ratio likoin_rate{1000, 1};
  Amount like_price{10'000'000'000'000'000};  // 0.01 currency units
  Ratio buck_rate = Ratio::one();
  Ratio quorum_fraction{1, 10};
  std::uint64_t min_voting_period_ms = 24ULL * 60 * 60 * 1000;

  friend bool operator==(const LedgerParams&, const LedgerParams&) = default;
};

Json to_json(const LedgerParams& params);
/// Missing keys keep their defaults; malformed values raise ConfigError.
LedgerParams params_from_json(const Json& j);

struct Account {
  AccountId id;
  /// Spendable currency (the Ether analog).
  Amount currency;
  /// Hex SHA-256 of the session secret; empty when the account has none.
  std::string secret_digest;

  friend bool operator==(const Account&, const Account&) = default;
};

/// The whole deterministic world state. Every map is ordered, so iteration
/// order never depends on insertion history.
class LedgerState {
 public:
  LedgerState() = default;
  explicit LedgerState(LedgerParams p) : params(std::move(p)) {}

  LedgerParams params;
  std::map<AccountId, Account> accounts;
  std::map<AccountId, TokenDomain> domains;
  std::map<AccountId, Campaign> campaigns;
  std::map<std::string, Post> posts;
  std::map<std::string, Artifact> artifacts;
  std::map<std::string, Proposal> proposals;
  std::vector<DonationRecord> donations;
  std::vector<PurchaseRecord> purchases;
  /// Total currency created by faucet deposits.
  Amount currency_issued;

  // Journal position; not part of the state hash.
  std::uint64_t last_seq = 0;
  Timestamp last_timestamp = 0;

  bool has_account(const AccountId& id) const { return accounts.contains(id); }
  const Account& account(const AccountId& id) const;
  Account& account(const AccountId& id);
  void require_account(const AccountId& id) const;

  const TokenDomain& domain(const AccountId& beneficiary) const;
  TokenDomain& domain(const AccountId& beneficiary);
  const Campaign& campaign(const AccountId& beneficiary) const;
  Campaign& campaign(const AccountId& beneficiary);
  const Artifact& artifact(const std::string& id) const;
  Artifact& artifact(const std::string& id);
  const Proposal& proposal(const std::string& id) const;
  Proposal& proposal(const std::string& id);
  const Post& post(const std::string& id) const;

  friend bool operator==(const LedgerState& a, const LedgerState& b);
};

namespace accounts {

const Account& create_account(LedgerState& state, const TxContext& tx, const AccountId& id,
                              std::string secret_digest = {});
/// Faucet: credits currency from outside the ledger.
const Account& deposit(LedgerState& state, const TxContext& tx, const AccountId& id,
                       Amount amount);

}  // namespace accounts

// Ledger-level wrappers around TokenDomain: resolve the domain, check that
// the named accounts exist, and emit events.
namespace tokens {

void transfer_likoin(LedgerState& state, const TxContext& tx, const AccountId& beneficiary,
                     const AccountId& from, const AccountId& to, Amount amount);
void approve(LedgerState& state, const TxContext& tx, const AccountId& beneficiary,
             const AccountId& owner, const AccountId& spender, Amount amount);
void transfer_from(LedgerState& state, const TxContext& tx, const AccountId& beneficiary,
                   const AccountId& spender, const AccountId& owner, const AccountId& to,
                   Amount amount);
ConversionReceipt convert(LedgerState& state, const TxContext& tx, const AccountId& beneficiary,
                          const AccountId& converter, Amount amount);

}  // namespace tokens

/// Generated identifiers embed the zero-padded sequence number so that
/// lexical and creation order agree up to 10^10 transactions.
std::string sequence_id(std::string_view prefix, std::uint64_t seq);

}  // namespace likestarter
