#pragma once

// Convenience driver over a memory-only Ledger for unit and acceptance tests.

#include <functional>
#include <optional>
#include <string>

#include "likestarter/errors.hpp"
#include "likestarter/journal.hpp"
#include "likestarter/state_hash.hpp"

namespace likestarter::testing {

inline Amount units(std::uint64_t n) { return Amount::whole(n); }
inline Amount atto(u128 n) { return Amount(n); }
inline Amount eth(std::string_view text) { return Amount::parse_units(text); }
inline AccountId id(const char* s) { return AccountId(s); }

class Scenario {
 public:
  explicit Scenario(LedgerParams params = {}) : ledger_(JournalHeader{params, Json::object()}) {}

  Ledger& ledger() { return ledger_; }
  const LedgerState& state() const { return ledger_.state(); }
  std::string hash() const { return state_hash(ledger_.state()); }

  void advance(Timestamp ms) { now_ += ms; }
  Timestamp now() const { return now_; }

  SubmitResult submit(const std::string& actor, TxKind kind, Json payload = Json::object()) {
    return ledger_.submit(now_, AccountId(actor), kind, std::move(payload));
  }

  SubmitResult account(const std::string& who, std::optional<Amount> funds = std::nullopt) {
    auto r = submit(who, TxKind::CreateAccount);
    if (funds) r = deposit(who, *funds);
    return r;
  }
  SubmitResult deposit(const std::string& who, Amount amount) {
    return submit(who, TxKind::Deposit, {{"amount", amount.to_string()}});
  }
  SubmitResult start_campaign(const std::string& who, Json params = Json::object()) {
    return submit(who, TxKind::StartCampaign, std::move(params));
  }
  SubmitResult close_campaign(const std::string& who) {
    return submit(who, TxKind::CloseCampaign);
  }
  SubmitResult withdraw(const std::string& who, Amount amount) {
    return submit(who, TxKind::WithdrawFunds, {{"amount", amount.to_string()}});
  }
  SubmitResult post(const std::string& who, const std::string& post_id) {
    return submit(who, TxKind::CreatePost, {{"post_id", post_id}, {"content_ref", "ipfs://" + post_id}});
  }
  SubmitResult like(const std::string& who, const std::string& post_id) {
    return submit(who, TxKind::LikePost, {{"post_id", post_id}});
  }
  SubmitResult donate(const std::string& who, const std::string& beneficiary, Amount amount) {
    return submit(who, TxKind::Donate,
                  {{"beneficiary", beneficiary}, {"amount", amount.to_string()}});
  }
  SubmitResult transfer(const std::string& who, const std::string& beneficiary,
                        const std::string& to, Amount amount) {
    return submit(who, TxKind::TransferLikoin,
                  {{"beneficiary", beneficiary}, {"to", to}, {"amount", amount.to_string()}});
  }
  SubmitResult approve(const std::string& owner, const std::string& beneficiary,
                       const std::string& spender, Amount amount) {
    return submit(owner, TxKind::Approve,
                  {{"beneficiary", beneficiary}, {"spender", spender}, {"amount", amount.to_string()}});
  }
  SubmitResult transfer_from(const std::string& spender, const std::string& beneficiary,
                             const std::string& owner, const std::string& to, Amount amount) {
    return submit(spender, TxKind::TransferFrom,
                  {{"beneficiary", beneficiary},
                   {"owner", owner},
                   {"to", to},
                   {"amount", amount.to_string()}});
  }
  SubmitResult convert(const std::string& who, const std::string& beneficiary, Amount amount) {
    return submit(who, TxKind::Convert,
                  {{"beneficiary", beneficiary}, {"amount", amount.to_string()}});
  }
  /// Returns the generated artifact id.
  std::string propose(const std::string& who, Amount price, Json extra = Json::object()) {
    Json payload{{"title", "Christmas single"},
                 {"description", "A new song"},
                 {"content_ref", "ipfs://song"},
                 {"suggested_price", price.to_string()}};
    for (auto& [k, v] : extra.items()) payload[k] = v;
    const auto r = submit(who, TxKind::ProposeArtifact, payload);
    for (const auto& e : r.events) {
      if (e.kind == "ArtifactProposed") return e.data.at("artifact_id").get<std::string>();
    }
    return {};
  }
  const std::string& proposal_of(const std::string& artifact_id) const {
    return state().artifact(artifact_id).proposal_id;
  }
  SubmitResult suggest(const std::string& who, const std::string& proposal_id, Amount price) {
    return submit(who, TxKind::SuggestPrice,
                  {{"proposal_id", proposal_id}, {"price", price.to_string()}});
  }
  SubmitResult vote(const std::string& who, const std::string& proposal_id, SuggestionId sid) {
    return submit(who, TxKind::Vote, {{"proposal_id", proposal_id}, {"suggestion_id", sid}});
  }
  SubmitResult finalize(const std::string& who, const std::string& proposal_id) {
    return submit(who, TxKind::Finalize, {{"proposal_id", proposal_id}});
  }
  SubmitResult remove(const std::string& who, const std::string& artifact_id) {
    return submit(who, TxKind::RemoveArtifact, {{"artifact_id", artifact_id}});
  }
  SubmitResult buy(const std::string& who, const std::string& artifact_id) {
    return submit(who, TxKind::BuyArtifact, {{"artifact_id", artifact_id}});
  }

  Amount likoin(const std::string& who, const std::string& beneficiary) const {
    return state().domain(AccountId(beneficiary)).balance_of(AccountId(who), TokenKind::Likoin);
  }
  Amount buck(const std::string& who, const std::string& beneficiary) const {
    return state().domain(AccountId(beneficiary)).balance_of(AccountId(who), TokenKind::Buck);
  }
  Amount currency(const std::string& who) const {
    return state().account(AccountId(who)).currency;
  }

 private:
  Ledger ledger_;
  Timestamp now_ = 0;
};

/// Runs `fn`, expecting LedgerError with `code`; returns true when it matches.
inline std::optional<ErrorCode> error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const LedgerError& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace likestarter::testing
