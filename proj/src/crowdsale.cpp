#include "likestarter/crowdsale.hpp"

#include "likestarter/errors.hpp"
#include "likestarter/ledger_state.hpp"

namespace likestarter::crowdsale {

namespace {

Json campaign_event(const Campaign& c) {
  return Json{{"beneficiary", c.beneficiary.str()},
              {"round", c.round},
              {"likoin_rate", c.likoin_rate.to_string()},
              {"like_price", c.like_price.to_string()}};
}

DonationRecord accept_donation(LedgerState& state, const TxContext& tx, const AccountId& donor,
                               const AccountId& beneficiary, Amount amount,
                               std::optional<std::string> post_id) {
  require(!amount.is_zero(), ErrorCode::ZeroAmount, "donation must be positive");
  require(donor != beneficiary, ErrorCode::SelfDonation, "beneficiaries cannot fund themselves");
  Campaign& campaign = state.campaign(beneficiary);
  require(campaign.status == CampaignStatus::Open, ErrorCode::CampaignClosed,
          "campaign of '" + beneficiary.str() + "' is closed");
  Account& payer = state.account(donor);
  require(payer.currency >= amount, ErrorCode::InsufficientFunds,
          "insufficient funds for " + donor.str());

  const Amount minted = likoins_for(amount, campaign.likoin_rate);
  require(!minted.is_zero(), ErrorCode::ZeroAmount, "donation too small to mint any Likoin");
  TokenDomain& domain = state.domain(beneficiary);
  (void)domain.likoin_total().plus(minted);
  const Amount escrow = campaign.escrow.plus(amount);
  const Amount raised = campaign.total_raised.plus(amount);

  payer.currency = payer.currency.minus(amount);
  campaign.escrow = escrow;
  campaign.total_raised = raised;
  domain.mint_likoin(donor, minted);

  DonationRecord record{tx.seq(), tx.timestamp(), donor, beneficiary, amount, minted,
                        std::move(post_id)};
  Json donated{{"donor", donor.str()},
               {"beneficiary", beneficiary.str()},
               {"amount", amount.to_string()}};
  if (record.post_id) donated["post_id"] = *record.post_id;
  tx.emit("Donated", std::move(donated));
  tx.emit("Minted", {{"token", "likoin"},
                     {"beneficiary", beneficiary.str()},
                     {"to", donor.str()},
                     {"amount", minted.to_string()}});
  state.donations.push_back(record);
  return record;
}

}  // namespace

Amount likoins_for(Amount amount, const Ratio& rate) { return rate.apply_floor(amount); }

const Campaign& start_campaign(LedgerState& state, const TxContext& tx,
                               const AccountId& beneficiary, const CampaignParams& params) {
  state.require_account(beneficiary);
  const Ratio likoin_rate = params.likoin_rate.value_or(state.params.likoin_rate);
  const Amount like_price = params.like_price.value_or(state.params.like_price);
  const Ratio buck_rate = params.buck_rate.value_or(state.params.buck_rate);
  require(!likoin_rate.is_zero() && !like_price.is_zero() && !buck_rate.is_zero(),
          ErrorCode::ZeroParameter, "campaign rates and like price must be positive");

  auto it = state.campaigns.find(beneficiary);
  if (it != state.campaigns.end()) {
    require(it->second.status != CampaignStatus::Open, ErrorCode::CampaignAlreadyOpen,
            "campaign of '" + beneficiary.str() + "' is already open");
    Campaign& c = it->second;
    c.status = CampaignStatus::Open;
    c.likoin_rate = likoin_rate;
    c.like_price = like_price;
    c.created_at = tx.timestamp();
    c.round += 1;
    state.domain(beneficiary).set_buck_rate(buck_rate);
  } else {
    Campaign c;
    c.beneficiary = beneficiary;
    c.likoin_rate = likoin_rate;
    c.like_price = like_price;
    c.created_at = tx.timestamp();
    it = state.campaigns.emplace(beneficiary, std::move(c)).first;
    state.domains.emplace(beneficiary, TokenDomain(beneficiary, buck_rate));
  }
  Json event = campaign_event(it->second);
  event["buck_rate"] = buck_rate.to_string();
  tx.emit("CampaignStarted", std::move(event));
  return it->second;
}

const Campaign& close_campaign(LedgerState& state, const TxContext& tx,
                               const AccountId& beneficiary) {
  Campaign& c = state.campaign(beneficiary);
  require(c.status == CampaignStatus::Open, ErrorCode::AlreadyClosed,
          "campaign of '" + beneficiary.str() + "' is already closed");
  c.status = CampaignStatus::Closed;
  tx.emit("CampaignClosed", campaign_event(c));
  return c;
}

const Campaign& withdraw_funds(LedgerState& state, const TxContext& tx,
                               const AccountId& beneficiary, Amount amount) {
  require(!amount.is_zero(), ErrorCode::ZeroAmount, "withdrawal must be positive");
  Campaign& c = state.campaign(beneficiary);
  require(c.escrow >= amount, ErrorCode::InsufficientEscrow, "withdrawal exceeds escrow");
  Account& account = state.account(beneficiary);
  const Amount balance = account.currency.plus(amount);
  c.escrow = c.escrow.minus(amount);
  account.currency = balance;
  tx.emit("FundsWithdrawn",
          {{"beneficiary", beneficiary.str()}, {"amount", amount.to_string()}});
  return c;
}

const Post& create_post(LedgerState& state, const TxContext& tx, const AccountId& beneficiary,
                        const std::string& post_id, const std::string& content_ref) {
  require(!post_id.empty(), ErrorCode::ValidationError, "post id is empty");
  Campaign& c = state.campaign(beneficiary);
  require(!state.posts.contains(post_id), ErrorCode::DuplicatePost,
          "post '" + post_id + "' already exists");
  const Post& post =
      state.posts.emplace(post_id, Post{post_id, beneficiary, content_ref, tx.timestamp(), 0})
          .first->second;
  c.posts.push_back(post_id);
  tx.emit("PostCreated", {{"post_id", post_id},
                          {"beneficiary", beneficiary.str()},
                          {"content_ref", content_ref}});
  return post;
}

DonationRecord like_post(LedgerState& state, const TxContext& tx, const AccountId& donor,
                         const std::string& post_id) {
  const Post& post = state.post(post_id);
  const Amount price = state.campaign(post.beneficiary).like_price;
  DonationRecord record = accept_donation(state, tx, donor, post.beneficiary, price, post_id);
  state.posts.at(post_id).like_count += 1;
  return record;
}

DonationRecord donate(LedgerState& state, const TxContext& tx, const AccountId& donor,
                      const AccountId& beneficiary, Amount amount) {
  return accept_donation(state, tx, donor, beneficiary, amount, std::nullopt);
}

}  // namespace likestarter::crowdsale
