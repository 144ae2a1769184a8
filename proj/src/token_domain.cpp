#include "likestarter/token_domain.hpp"

#include <algorithm>
#include <vector>

#include "likestarter/errors.hpp"

namespace likestarter {

std::map<AccountId, Amount> largest_remainder_split(const std::map<AccountId, Amount>& holders,
                                                    Amount amount) {
  Amount base;
  for (const auto& [id, balance] : holders) base = base.plus(balance);
  require(!base.is_zero(), ErrorCode::ValidationError, "split over an empty holder set");

  struct Share {
    const AccountId* id;
    u128 quotient;
    u128 remainder;
  };
  std::vector<Share> shares;
  shares.reserve(holders.size());
  u128 assigned = 0;
  for (const auto& [id, balance] : holders) {
    const auto [q, r] = mul_div(amount.value(), balance.value(), base.value());
    shares.push_back(Share{&id, q, r});
    assigned += q;
  }

  // Fewer leftover units than holders: every floor loses < 1 unit.
  const u128 leftover = amount.value() - assigned;
  std::vector<Share*> order;
  order.reserve(shares.size());
  for (auto& s : shares) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const Share* a, const Share* b) { return a->remainder > b->remainder; });
  for (u128 i = 0; i < leftover; ++i) order[static_cast<std::size_t>(i)]->quotient += 1;

  std::map<AccountId, Amount> out;
  for (const auto& s : shares) {
    if (s.quotient != 0) out.emplace(*s.id, Amount(s.quotient));
  }
  return out;
}

TokenDomain::TokenDomain(AccountId beneficiary, Ratio buck_rate)
    : beneficiary_(std::move(beneficiary)), buck_rate_(buck_rate) {
  require(!buck_rate_.is_zero(), ErrorCode::ZeroParameter, "buck rate must be positive");
}

void TokenDomain::set_buck_rate(Ratio rate) {
  require(!rate.is_zero(), ErrorCode::ZeroParameter, "buck rate must be positive");
  buck_rate_ = rate;
}

Amount TokenDomain::balance_of(const AccountId& account, TokenKind kind) const {
  const auto& book = kind == TokenKind::Likoin ? likoins_ : bucks_;
  const auto it = book.find(account);
  return it == book.end() ? Amount{} : it->second;
}

Amount TokenDomain::allowance(const AccountId& owner, const AccountId& spender) const {
  const auto it = allowances_.find({owner, spender});
  return it == allowances_.end() ? Amount{} : it->second;
}

void TokenDomain::credit(std::map<AccountId, Amount>& book, const AccountId& who, Amount amount) {
  if (amount.is_zero()) return;
  auto [it, inserted] = book.try_emplace(who, amount);
  if (!inserted) it->second = it->second.plus(amount);
}

void TokenDomain::debit(std::map<AccountId, Amount>& book, const AccountId& who, Amount amount) {
  if (amount.is_zero()) return;
  auto it = book.find(who);
  it->second = it->second.minus(amount);
  if (it->second.is_zero()) book.erase(it);
}

void TokenDomain::mint_likoin(const AccountId& to, Amount amount) {
  require(!amount.is_zero(), ErrorCode::ZeroAmount, "mint amount must be positive");
  const Amount new_total = likoin_total_.plus(amount);
  credit(likoins_, to, amount);
  likoin_total_ = new_total;
}

void TokenDomain::transfer_likoin(const AccountId& from, const AccountId& to, Amount amount) {
  require(!amount.is_zero(), ErrorCode::ZeroAmount, "transfer amount must be positive");
  require(from != to, ErrorCode::SelfTransfer, "cannot transfer to self");
  require(balance_of(from, TokenKind::Likoin) >= amount, ErrorCode::InsufficientBalance,
          "insufficient Likoin balance for " + from.str());
  debit(likoins_, from, amount);
  credit(likoins_, to, amount);
}

void TokenDomain::approve(const AccountId& owner, const AccountId& spender, Amount amount) {
  if (amount.is_zero()) {
    allowances_.erase({owner, spender});
  } else {
    allowances_[{owner, spender}] = amount;
  }
}

void TokenDomain::transfer_from(const AccountId& spender, const AccountId& owner,
                                const AccountId& to, Amount amount) {
  require(!amount.is_zero(), ErrorCode::ZeroAmount, "transfer amount must be positive");
  const Amount allowed = allowance(owner, spender);
  require(allowed >= amount, ErrorCode::InsufficientAllowance,
          "allowance of " + spender.str() + " over " + owner.str() + " is too small");
  require(owner != to, ErrorCode::SelfTransfer, "cannot transfer to self");
  require(balance_of(owner, TokenKind::Likoin) >= amount, ErrorCode::InsufficientBalance,
          "insufficient Likoin balance for " + owner.str());
  approve(owner, spender, allowed.minus(amount));
  debit(likoins_, owner, amount);
  credit(likoins_, to, amount);
}

ConversionReceipt TokenDomain::convert_likoin_to_buck(const AccountId& converter, Amount amount) {
  require(!amount.is_zero(), ErrorCode::ZeroAmount, "conversion amount must be positive");
  const Amount held = balance_of(converter, TokenKind::Likoin);
  require(held >= amount, ErrorCode::InsufficientBalance,
          "insufficient Likoin balance for " + converter.str());
  const Amount buck_out = buck_rate_.apply_floor(amount);
  require(!buck_out.is_zero(), ErrorCode::ZeroAmount, "conversion yields zero Bucks");
  const Amount new_buck_total = buck_total_.plus(buck_out);

  // Redistribution base: every holder's balance after the converter's deduction.
  std::map<AccountId, Amount> base = likoins_;
  debit(base, converter, amount);

  ConversionReceipt receipt{converter, beneficiary_, amount, buck_out, {}, Amount{}};
  if (base.empty()) {
    receipt.dust = amount;
  } else {
    receipt.distribution = largest_remainder_split(base, amount);
  }

  // Commit. Credits cannot overflow: likoin_total is unchanged and bounds them.
  likoins_ = std::move(base);
  for (const auto& [holder, share] : receipt.distribution) credit(likoins_, holder, share);
  reserve_ = reserve_.plus(receipt.dust);
  credit(bucks_, converter, buck_out);
  buck_total_ = new_buck_total;
  return receipt;
}

void TokenDomain::burn_buck(const AccountId& from, Amount amount) {
  require(!amount.is_zero(), ErrorCode::ZeroAmount, "burn amount must be positive");
  require(balance_of(from, TokenKind::Buck) >= amount, ErrorCode::InsufficientBucks,
          "insufficient Bucks for " + from.str());
  debit(bucks_, from, amount);
  buck_total_ = buck_total_.minus(amount);
}

}  // namespace likestarter
