#pragma once

#include <map>
#include <utility>

#include "likestarter/account_id.hpp"
#include "likestarter/amount.hpp"

namespace likestarter {

enum class TokenKind { Likoin, Buck };

/// Result of converting Likoins into Bucks. The converted Likoins are not
/// burned: they are handed out to the holders in `distribution`, or to the
/// domain reserve (`dust`) when nobody is left holding.
struct ConversionReceipt {
  AccountId converter;
  AccountId beneficiary;
  Amount likoin_in;
  Amount buck_out;
  std::map<AccountId, Amount> distribution;
  Amount dust;
};

/// Splits `amount` over `holders` proportionally to their balances using the
/// largest-remainder method. Leftover atto-units go one each to the holders
/// with the largest remainders; equal remainders favour the lower AccountId.
/// Zero shares are omitted from the result. `holders` must be non-empty with
/// a positive sum.
std::map<AccountId, Amount> largest_remainder_split(const std::map<AccountId, Amount>& holders,
                                                    Amount amount);

/// One beneficiary's Likoin and Buck ledgers.
///
/// Invariants, exact at every public-call boundary:
///   sum(likoin balances) + reserve == likoin_total
///   sum(buck balances) == buck_total
///   no map stores a zero amount
///
/// Every mutator validates fully before touching state, so a thrown
/// LedgerError leaves the domain unchanged.
class TokenDomain {
 public:
  using AllowanceKey = std::pair<AccountId, AccountId>;  // (owner, spender)

  explicit TokenDomain(AccountId beneficiary, Ratio buck_rate = Ratio::one());

  const AccountId& beneficiary() const { return beneficiary_; }
  const Ratio& buck_rate() const { return buck_rate_; }
  void set_buck_rate(Ratio rate);

  Amount balance_of(const AccountId& account, TokenKind kind) const;
  Amount allowance(const AccountId& owner, const AccountId& spender) const;
  Amount likoin_total() const { return likoin_total_; }
  Amount buck_total() const { return buck_total_; }
  Amount reserve() const { return reserve_; }

  const std::map<AccountId, Amount>& likoin_balances() const { return likoins_; }
  const std::map<AccountId, Amount>& buck_balances() const { return bucks_; }
  const std::map<AllowanceKey, Amount>& allowances() const { return allowances_; }

  /// Crowdsale-only entry point.
  void mint_likoin(const AccountId& to, Amount amount);
  void transfer_likoin(const AccountId& from, const AccountId& to, Amount amount);
  /// Overwrites the allowance; zero removes the entry.
  void approve(const AccountId& owner, const AccountId& spender, Amount amount);
  void transfer_from(const AccountId& spender, const AccountId& owner, const AccountId& to,
                     Amount amount);
  ConversionReceipt convert_likoin_to_buck(const AccountId& converter, Amount amount);
  /// Artifact purchases are the only Buck sink.
  void burn_buck(const AccountId& from, Amount amount);

  friend bool operator==(const TokenDomain&, const TokenDomain&) = default;

 private:
  static void credit(std::map<AccountId, Amount>& book, const AccountId& who, Amount amount);
  static void debit(std::map<AccountId, Amount>& book, const AccountId& who, Amount amount);

  AccountId beneficiary_;
  Ratio buck_rate_;
  std::map<AccountId, Amount> likoins_;
  std::map<AccountId, Amount> bucks_;
  std::map<AllowanceKey, Amount> allowances_;
  Amount likoin_total_;
  Amount buck_total_;
  Amount reserve_;
};

}  // namespace likestarter
