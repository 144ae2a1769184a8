#include "likestarter/ledger_state.hpp"

#include <iomanip>
#include <sstream>

#include "likestarter/errors.hpp"

namespace likestarter {

namespace {

std::string amount_json(Amount a) { return a.to_string(); }

const std::string& string_field(const Json& j, const char* key) {
  if (!j.at(key).is_string()) fail(ErrorCode::ConfigError, std::string(key) + " must be a string");
  return j.at(key).get_ref<const std::string&>();
}

}  // namespace

Json to_json(const LedgerParams& p) {
  return Json{{"likoin_rate", p.likoin_rate.to_string()},
              {"like_price", amount_json(p.like_price)},
              {"buck_rate", p.buck_rate.to_string()},
              {"quorum_fraction", p.quorum_fraction.to_string()},
              {"min_voting_period_ms", p.min_voting_period_ms}};
}

LedgerParams params_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::ConfigError, "parameters must be a JSON object");
  LedgerParams p;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "likoin_rate") {
        p.likoin_rate = Ratio::parse(string_field(j, "likoin_rate"));
      } else if (key == "like_price") {
        p.like_price = Amount::parse(string_field(j, "like_price"));
      } else if (key == "buck_rate") {
        p.buck_rate = Ratio::parse(string_field(j, "buck_rate"));
      } else if (key == "quorum_fraction") {
        p.quorum_fraction = Ratio::parse(string_field(j, "quorum_fraction"));
      } else if (key == "min_voting_period_ms") {
        if (!value.is_number_unsigned()) {
          fail(ErrorCode::ConfigError, "min_voting_period_ms must be an unsigned integer");
        }
        p.min_voting_period_ms = value.get<std::uint64_t>();
      } else {
        fail(ErrorCode::ConfigError, "unknown parameter '" + key + "'");
      }
    }
  } catch (const LedgerError& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(ErrorCode::ConfigError, e.what());
  }
  if (p.likoin_rate.is_zero() || p.like_price.is_zero() || p.buck_rate.is_zero()) {
    fail(ErrorCode::ConfigError, "rates and like_price must be positive");
  }
  if (p.quorum_fraction.num() > p.quorum_fraction.den()) {
    fail(ErrorCode::ConfigError, "quorum_fraction must be within [0, 1]");
  }
  return p;
}

const Account& LedgerState::account(const AccountId& id) const {
  const auto it = accounts.find(id);
  if (it == accounts.end()) fail(ErrorCode::UnknownAccount, "unknown account '" + id.str() + "'");
  return it->second;
}

Account& LedgerState::account(const AccountId& id) {
  return const_cast<Account&>(std::as_const(*this).account(id));
}

void LedgerState::require_account(const AccountId& id) const { (void)account(id); }

const TokenDomain& LedgerState::domain(const AccountId& beneficiary) const {
  const auto it = domains.find(beneficiary);
  if (it == domains.end()) {
    fail(ErrorCode::NoCampaign, "no token domain for beneficiary '" + beneficiary.str() + "'");
  }
  return it->second;
}

TokenDomain& LedgerState::domain(const AccountId& beneficiary) {
  return const_cast<TokenDomain&>(std::as_const(*this).domain(beneficiary));
}

const Campaign& LedgerState::campaign(const AccountId& beneficiary) const {
  const auto it = campaigns.find(beneficiary);
  if (it == campaigns.end()) {
    fail(ErrorCode::NoCampaign, "no campaign for '" + beneficiary.str() + "'");
  }
  return it->second;
}

Campaign& LedgerState::campaign(const AccountId& beneficiary) {
  return const_cast<Campaign&>(std::as_const(*this).campaign(beneficiary));
}

const Artifact& LedgerState::artifact(const std::string& id) const {
  const auto it = artifacts.find(id);
  if (it == artifacts.end()) fail(ErrorCode::UnknownArtifact, "unknown artifact '" + id + "'");
  return it->second;
}

Artifact& LedgerState::artifact(const std::string& id) {
  return const_cast<Artifact&>(std::as_const(*this).artifact(id));
}

const Proposal& LedgerState::proposal(const std::string& id) const {
  const auto it = proposals.find(id);
  if (it == proposals.end()) fail(ErrorCode::UnknownProposal, "unknown proposal '" + id + "'");
  return it->second;
}

Proposal& LedgerState::proposal(const std::string& id) {
  return const_cast<Proposal&>(std::as_const(*this).proposal(id));
}

const Post& LedgerState::post(const std::string& id) const {
  const auto it = posts.find(id);
  if (it == posts.end()) fail(ErrorCode::UnknownPost, "unknown post '" + id + "'");
  return it->second;
}

bool operator==(const LedgerState& a, const LedgerState& b) {
  return a.params == b.params && a.accounts == b.accounts && a.domains == b.domains &&
         a.campaigns == b.campaigns && a.posts == b.posts && a.artifacts == b.artifacts &&
         a.proposals == b.proposals && a.donations == b.donations &&
         a.purchases == b.purchases && a.currency_issued == b.currency_issued;
}

std::string sequence_id(std::string_view prefix, std::uint64_t seq) {
  std::ostringstream out;
  out << prefix << '-' << std::setw(10) << std::setfill('0') << seq;
  return out.str();
}

namespace accounts {

const Account& create_account(LedgerState& state, const TxContext& tx, const AccountId& id,
                              std::string secret_digest) {
  require(!id.empty(), ErrorCode::ValidationError, "account id is empty");
  require(!state.has_account(id), ErrorCode::DuplicateAccount,
          "account '" + id.str() + "' already exists");
  const auto& account =
      state.accounts.emplace(id, Account{id, Amount{}, std::move(secret_digest)}).first->second;
  tx.emit("AccountCreated", {{"account", id.str()}});
  return account;
}

const Account& deposit(LedgerState& state, const TxContext& tx, const AccountId& id,
                       Amount amount) {
  require(!amount.is_zero(), ErrorCode::ZeroAmount, "deposit must be positive");
  Account& account = state.account(id);
  const Amount balance = account.currency.plus(amount);
  const Amount issued = state.currency_issued.plus(amount);
  account.currency = balance;
  state.currency_issued = issued;
  tx.emit("Deposited", {{"account", id.str()}, {"amount", amount_json(amount)}});
  return account;
}

}  // namespace accounts

namespace tokens {

void transfer_likoin(LedgerState& state, const TxContext& tx, const AccountId& beneficiary,
                     const AccountId& from, const AccountId& to, Amount amount) {
  state.require_account(to);
  state.domain(beneficiary).transfer_likoin(from, to, amount);
  tx.emit("Transferred", {{"token", "likoin"},
                          {"beneficiary", beneficiary.str()},
                          {"from", from.str()},
                          {"to", to.str()},
                          {"amount", amount_json(amount)}});
}

void approve(LedgerState& state, const TxContext& tx, const AccountId& beneficiary,
             const AccountId& owner, const AccountId& spender, Amount amount) {
  state.require_account(owner);
  state.require_account(spender);
  state.domain(beneficiary).approve(owner, spender, amount);
  tx.emit("Approved", {{"beneficiary", beneficiary.str()},
                       {"owner", owner.str()},
                       {"spender", spender.str()},
                       {"amount", amount_json(amount)}});
}

void transfer_from(LedgerState& state, const TxContext& tx, const AccountId& beneficiary,
                   const AccountId& spender, const AccountId& owner, const AccountId& to,
                   Amount amount) {
  state.require_account(owner);
  state.require_account(to);
  state.domain(beneficiary).transfer_from(spender, owner, to, amount);
  tx.emit("Transferred", {{"token", "likoin"},
                          {"beneficiary", beneficiary.str()},
                          {"from", owner.str()},
                          {"to", to.str()},
                          {"spender", spender.str()},
                          {"amount", amount_json(amount)}});
}

ConversionReceipt convert(LedgerState& state, const TxContext& tx, const AccountId& beneficiary,
                          const AccountId& converter, Amount amount) {
  ConversionReceipt receipt = state.domain(beneficiary).convert_likoin_to_buck(converter, amount);
  tx.emit("Converted", {{"beneficiary", beneficiary.str()},
                        {"converter", converter.str()},
                        {"likoin_in", amount_json(receipt.likoin_in)},
                        {"buck_out", amount_json(receipt.buck_out)},
                        {"dust", amount_json(receipt.dust)}});
  for (const auto& [holder, share] : receipt.distribution) {
    tx.emit("Distributed", {{"beneficiary", beneficiary.str()},
                            {"to", holder.str()},
                            {"amount", amount_json(share)}});
  }
  if (!receipt.dust.is_zero()) {
    tx.emit("ReserveCredited",
            {{"beneficiary", beneficiary.str()}, {"amount", amount_json(receipt.dust)}});
  }
  tx.emit("Minted", {{"token", "buck"},
                     {"beneficiary", beneficiary.str()},
                     {"to", converter.str()},
                     {"amount", amount_json(receipt.buck_out)}});
  return receipt;
}

}  // namespace tokens
}  // namespace likestarter
