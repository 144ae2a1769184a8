#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "likestarter/account_id.hpp"
#include "likestarter/events.hpp"

namespace likestarter {

enum class TxKind {
  CreateAccount,
  Deposit,
  StartCampaign,
  LikePost,
  Donate,
  CloseCampaign,
  WithdrawFunds,
  TransferLikoin,
  Approve,
  TransferFrom,
  Convert,
  CreatePost,
  ProposeArtifact,
  RemoveArtifact,
  SuggestPrice,
  Vote,
  Finalize,
  BuyArtifact,
};

inline constexpr std::array kAllTxKinds = {
    TxKind::CreateAccount,  TxKind::Deposit,       TxKind::StartCampaign,  TxKind::LikePost,
    TxKind::Donate,         TxKind::CloseCampaign, TxKind::WithdrawFunds,  TxKind::TransferLikoin,
    TxKind::Approve,        TxKind::TransferFrom,  TxKind::Convert,        TxKind::CreatePost,
    TxKind::ProposeArtifact, TxKind::RemoveArtifact, TxKind::SuggestPrice, TxKind::Vote,
    TxKind::Finalize,       TxKind::BuyArtifact,
};

std::string_view tx_kind_name(TxKind kind) noexcept;
std::optional<TxKind> tx_kind_from_name(std::string_view name) noexcept;

/// The sole mutation path into the ledger. `payload` holds kind-specific
/// fields; amounts are decimal atto-unit strings.
struct TransactionEnvelope {
  std::uint64_t seq = 0;
  Timestamp timestamp = 0;
  AccountId actor;
  TxKind kind = TxKind::CreateAccount;
  Json payload = Json::object();

  friend bool operator==(const TransactionEnvelope&, const TransactionEnvelope&) = default;
};

/// {"seq", "ts", "actor", "kind", "payload"}.
Json to_json(const TransactionEnvelope& env);
/// Throws MalformedEnvelope on any shape error.
TransactionEnvelope envelope_from_json(const Json& j);

}  // namespace likestarter
