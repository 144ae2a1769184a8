#include "likestarter/engine.hpp"

#include <set>

#include "likestarter/errors.hpp"

namespace likestarter {

namespace {

// Strict reader over an envelope payload: every field must be consumed and
// have the expected JSON type.
class PayloadReader {
 public:
  explicit PayloadReader(const Json& payload) : payload_(payload) {
    if (!payload_.is_object()) malformed("payload must be an object");
  }

  std::string text(const char* key) {
    const Json& v = field(key);
    if (!v.is_string()) malformed(std::string(key) + " must be a string");
    return v.get<std::string>();
  }

  std::optional<std::string> optional_text(const char* key) {
    if (!payload_.contains(key)) return std::nullopt;
    return text(key);
  }

  AccountId account(const char* key) {
    const std::string raw = text(key);
    if (!AccountId::is_valid(raw)) malformed(std::string(key) + " is not a valid account id");
    return AccountId(raw);
  }

  std::optional<AccountId> optional_account(const char* key) {
    if (!payload_.contains(key)) return std::nullopt;
    return account(key);
  }

  Amount amount(const char* key) {
    const std::string raw = text(key);
    try {
      return Amount::parse(raw);
    } catch (const LedgerError& e) {
      if (e.code() == ErrorCode::Overflow) throw;
      malformed(std::string(key) + " must be a decimal atto-unit string");
    }
  }

  std::optional<Amount> optional_amount(const char* key) {
    if (!payload_.contains(key)) return std::nullopt;
    return amount(key);
  }

  std::optional<Ratio> optional_ratio(const char* key) {
    if (!payload_.contains(key)) return std::nullopt;
    const std::string raw = text(key);
    try {
      return Ratio::parse(raw);
    } catch (const LedgerError& e) {
      malformed(std::string(key) + " must be a ratio string");
    }
  }

  std::uint64_t unsigned_int(const char* key) {
    const Json& v = field(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      malformed(std::string(key) + " must be an unsigned integer");
    }
    return v.get<std::uint64_t>();
  }

  std::optional<std::uint64_t> optional_unsigned(const char* key) {
    if (!payload_.contains(key)) return std::nullopt;
    return unsigned_int(key);
  }

  void finish() const {
    for (const auto& [key, value] : payload_.items()) {
      if (!used_.contains(key)) malformed("unexpected payload field '" + key + "'");
    }
  }

 private:
  [[noreturn]] static void malformed(const std::string& why) {
    fail(ErrorCode::MalformedEnvelope, why);
  }

  const Json& field(const char* key) {
    if (!payload_.contains(key)) malformed(std::string("missing payload field '") + key + "'");
    used_.insert(key);
    return payload_.at(key);
  }

  const Json& payload_;
  std::set<std::string> used_;
};

}  // namespace

Engine::Engine(LedgerParams params) : state_(std::move(params)) {}

Engine::Engine(LedgerState state) : state_(std::move(state)) {}

std::vector<Event> Engine::apply(const TransactionEnvelope& env) {
  require(env.seq == state_.last_seq + 1, ErrorCode::MalformedEnvelope,
          "expected seq " + std::to_string(state_.last_seq + 1) + ", got " +
              std::to_string(env.seq));
  require(env.timestamp >= state_.last_timestamp, ErrorCode::TimestampRegression,
          "timestamp " + std::to_string(env.timestamp) + " precedes " +
              std::to_string(state_.last_timestamp));
  require(!env.actor.empty(), ErrorCode::MalformedEnvelope, "envelope has no actor");
  if (env.kind != TxKind::CreateAccount) state_.require_account(env.actor);

  std::vector<Event> events;
  const TxContext tx(env.seq, env.timestamp, events);
  dispatch(env, tx);
  state_.last_seq = env.seq;
  state_.last_timestamp = env.timestamp;
  return events;
}

// Every case decodes the full payload before calling into a module, so a
// malformed payload never reaches state.
void Engine::dispatch(const TransactionEnvelope& env, const TxContext& tx) {
  PayloadReader in(env.payload);
  const AccountId& actor = env.actor;
  switch (env.kind) {
    case TxKind::CreateAccount: {
      auto digest = in.optional_text("secret_digest").value_or("");
      in.finish();
      accounts::create_account(state_, tx, actor, std::move(digest));
      break;
    }
    case TxKind::Deposit: {
      const Amount amount = in.amount("amount");
      in.finish();
      accounts::deposit(state_, tx, actor, amount);
      break;
    }
    case TxKind::StartCampaign: {
      CampaignParams params;
      params.likoin_rate = in.optional_ratio("likoin_rate");
      params.like_price = in.optional_amount("like_price");
      params.buck_rate = in.optional_ratio("buck_rate");
      in.finish();
      crowdsale::start_campaign(state_, tx, actor, params);
      break;
    }
    case TxKind::LikePost: {
      const std::string post_id = in.text("post_id");
      in.finish();
      crowdsale::like_post(state_, tx, actor, post_id);
      break;
    }
    case TxKind::Donate: {
      const AccountId beneficiary = in.account("beneficiary");
      const Amount amount = in.amount("amount");
      in.finish();
      crowdsale::donate(state_, tx, actor, beneficiary, amount);
      break;
    }
    case TxKind::CloseCampaign: {
      in.finish();
      crowdsale::close_campaign(state_, tx, actor);
      break;
    }
    case TxKind::WithdrawFunds: {
      const Amount amount = in.amount("amount");
      in.finish();
      crowdsale::withdraw_funds(state_, tx, actor, amount);
      break;
    }
    case TxKind::TransferLikoin: {
      const AccountId beneficiary = in.account("beneficiary");
      const AccountId to = in.account("to");
      const Amount amount = in.amount("amount");
      in.finish();
      tokens::transfer_likoin(state_, tx, beneficiary, actor, to, amount);
      break;
    }
    case TxKind::Approve: {
      const AccountId beneficiary = in.account("beneficiary");
      const AccountId spender = in.account("spender");
      const Amount amount = in.amount("amount");
      in.finish();
      tokens::approve(state_, tx, beneficiary, actor, spender, amount);
      break;
    }
    case TxKind::TransferFrom: {
      const AccountId beneficiary = in.account("beneficiary");
      const AccountId owner = in.account("owner");
      const AccountId to = in.account("to");
      const Amount amount = in.amount("amount");
      in.finish();
      tokens::transfer_from(state_, tx, beneficiary, actor, owner, to, amount);
      break;
    }
    case TxKind::Convert: {
      const AccountId beneficiary = in.account("beneficiary");
      const Amount amount = in.amount("amount");
      in.finish();
      tokens::convert(state_, tx, beneficiary, actor, amount);
      break;
    }
    case TxKind::CreatePost: {
      const std::string post_id = in.text("post_id");
      const std::string content_ref = in.optional_text("content_ref").value_or("");
      in.finish();
      crowdsale::create_post(state_, tx, actor, post_id, content_ref);
      break;
    }
    case TxKind::ProposeArtifact: {
      ArtifactDraft draft;
      draft.title = in.text("title");
      draft.description = in.optional_text("description").value_or("");
      draft.content_ref = in.optional_text("content_ref").value_or("");
      draft.suggested_price = in.amount("suggested_price");
      draft.supply_limit = in.optional_unsigned("supply_limit");
      draft.artifact_id = in.optional_text("artifact_id");
      in.finish();
      artifacts::propose_artifact(state_, tx, actor, draft);
      break;
    }
    case TxKind::RemoveArtifact: {
      const std::string artifact_id = in.text("artifact_id");
      in.finish();
      artifacts::remove_artifact(state_, tx, actor, artifact_id);
      break;
    }
    case TxKind::SuggestPrice: {
      const std::string proposal_id = in.text("proposal_id");
      const Amount price = in.amount("price");
      in.finish();
      governance::suggest_price(state_, tx, actor, proposal_id, price);
      break;
    }
    case TxKind::Vote: {
      const std::string proposal_id = in.text("proposal_id");
      const std::uint64_t suggestion = in.unsigned_int("suggestion_id");
      in.finish();
      require(suggestion <= 0xffffffffULL, ErrorCode::UnknownSuggestion, "unknown suggestion");
      governance::vote(state_, tx, actor, proposal_id, static_cast<SuggestionId>(suggestion));
      break;
    }
    case TxKind::Finalize: {
      const std::string proposal_id = in.text("proposal_id");
      in.finish();
      governance::finalize(state_, tx, actor, proposal_id);
      break;
    }
    case TxKind::BuyArtifact: {
      const std::string artifact_id = in.text("artifact_id");
      const auto beneficiary = in.optional_account("beneficiary");
      in.finish();
      artifacts::buy_artifact(state_, tx, actor, artifact_id, beneficiary);
      break;
    }
  }
}

}  // namespace likestarter
