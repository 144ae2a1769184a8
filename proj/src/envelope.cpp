#include "likestarter/envelope.hpp"

#include "likestarter/errors.hpp"

namespace likestarter {

std::string_view tx_kind_name(TxKind kind) noexcept {
  switch (kind) {
    case TxKind::CreateAccount: return "CreateAccount";
    case TxKind::Deposit: return "Deposit";
    case TxKind::StartCampaign: return "StartCampaign";
    case TxKind::LikePost: return "LikePost";
    case TxKind::Donate: return "Donate";
    case TxKind::CloseCampaign: return "CloseCampaign";
    case TxKind::WithdrawFunds: return "WithdrawFunds";
    case TxKind::TransferLikoin: return "TransferLikoin";
    case TxKind::Approve: return "Approve";
    case TxKind::TransferFrom: return "TransferFrom";
    case TxKind::Convert: return "Convert";
    case TxKind::CreatePost: return "CreatePost";
    case TxKind::ProposeArtifact: return "ProposeArtifact";
    case TxKind::RemoveArtifact: return "RemoveArtifact";
    case TxKind::SuggestPrice: return "SuggestPrice";
    case TxKind::Vote: return "Vote";
    case TxKind::Finalize: return "Finalize";
    case TxKind::BuyArtifact: return "BuyArtifact";
  }
  return "";
}

std::optional<TxKind> tx_kind_from_name(std::string_view name) noexcept {
  for (TxKind kind : kAllTxKinds) {
    if (tx_kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

Json to_json(const TransactionEnvelope& env) {
  return Json{{"seq", env.seq},
              {"ts", env.timestamp},
              {"actor", env.actor.str()},
              {"kind", tx_kind_name(env.kind)},
              {"payload", env.payload}};
}

TransactionEnvelope envelope_from_json(const Json& j) {
  const auto malformed = [](const std::string& why) { fail(ErrorCode::MalformedEnvelope, why); };
  if (!j.is_object()) malformed("envelope must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "seq" && key != "ts" && key != "actor" && key != "kind" && key != "payload") {
      malformed("unexpected envelope field '" + key + "'");
    }
  }
  if (!j.contains("seq") || !j["seq"].is_number_unsigned()) malformed("seq must be unsigned");
  if (!j.contains("ts") || !j["ts"].is_number_unsigned()) malformed("ts must be unsigned");
  if (!j.contains("actor") || !j["actor"].is_string()) malformed("actor must be a string");
  if (!j.contains("kind") || !j["kind"].is_string()) malformed("kind must be a string");
  if (!j.contains("payload") || !j["payload"].is_object()) malformed("payload must be an object");

  TransactionEnvelope env;
  env.seq = j["seq"].get<std::uint64_t>();
  env.timestamp = j["ts"].get<std::uint64_t>();
  const auto& actor = j["actor"].get_ref<const std::string&>();
  if (!AccountId::is_valid(actor)) malformed("invalid actor '" + actor + "'");
  env.actor = AccountId(actor);
  const auto kind = tx_kind_from_name(j["kind"].get_ref<const std::string&>());
  if (!kind) malformed("unknown kind '" + j["kind"].get<std::string>() + "'");
  env.kind = *kind;
  env.payload = j["payload"];
  return env;
}

Json to_json(const Event& event) {
  return Json{{"seq", event.seq}, {"kind", event.kind}, {"data", event.data}};
}

Event event_from_json(const Json& j) {
  return Event{j.at("seq").get<std::uint64_t>(), j.at("kind").get<std::string>(), j.at("data")};
}

}  // namespace likestarter
