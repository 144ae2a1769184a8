#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "likestarter/account_id.hpp"
#include "likestarter/amount.hpp"
#include "likestarter/events.hpp"

namespace likestarter {

class LedgerState;

enum class CampaignStatus { Open, Closed };

/// A beneficiary's crowdfunding campaign. Donations land in `escrow`; the
/// beneficiary moves them out with an explicit withdrawal.
struct Campaign {
  AccountId beneficiary;
  CampaignStatus status = CampaignStatus::Open;
  /// Likoin atto-units minted per currency atto-unit.
  Ratio likoin_rate;
  /// Currency atto-units charged per like.
  Amount like_price;
  Amount escrow;
  Amount total_raised;
  Timestamp created_at = 0;
  /// 1 for the first campaign, incremented on every restart after a close.
  std::uint32_t round = 1;
  std::vector<std::string> posts;

  friend bool operator==(const Campaign&, const Campaign&) = default;
};

struct Post {
  std::string post_id;
  AccountId beneficiary;
  std::string content_ref;
  Timestamp created_at = 0;
  std::uint64_t like_count = 0;

  friend bool operator==(const Post&, const Post&) = default;
};

struct DonationRecord {
  std::uint64_t seq = 0;
  Timestamp timestamp = 0;
  AccountId donor;
  AccountId beneficiary;
  Amount amount;
  Amount likoin_minted;
  std::optional<std::string> post_id;

  friend bool operator==(const DonationRecord&, const DonationRecord&) = default;
};

/// Optional per-campaign overrides; unset fields fall back to the ledger
/// parameters.
struct CampaignParams {
  std::optional<Ratio> likoin_rate;
  std::optional<Amount> like_price;
  std::optional<Ratio> buck_rate;
};

namespace crowdsale {

/// Opens a campaign. The first campaign creates the beneficiary's token
/// domain; a restart after closing reuses it together with the remaining
/// escrow and raised total.
const Campaign& start_campaign(LedgerState& state, const TxContext& tx,
                               const AccountId& beneficiary, const CampaignParams& params);
const Campaign& close_campaign(LedgerState& state, const TxContext& tx,
                               const AccountId& beneficiary);
const Campaign& withdraw_funds(LedgerState& state, const TxContext& tx,
                               const AccountId& beneficiary, Amount amount);

const Post& create_post(LedgerState& state, const TxContext& tx, const AccountId& beneficiary,
                        const std::string& post_id, const std::string& content_ref);

/// Moves like_price from donor to escrow and mints floor(like_price * rate)
/// Likoins to the donor.
DonationRecord like_post(LedgerState& state, const TxContext& tx, const AccountId& donor,
                         const std::string& post_id);
DonationRecord donate(LedgerState& state, const TxContext& tx, const AccountId& donor,
                      const AccountId& beneficiary, Amount amount);

/// Likoins minted for a donation of `amount` at `rate`.
Amount likoins_for(Amount amount, const Ratio& rate);

}  // namespace crowdsale
}  // namespace likestarter
