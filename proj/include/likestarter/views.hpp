#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "likestarter/events.hpp"
#include "likestarter/journal.hpp"
#include "likestarter/ledger_state.hpp"

namespace likestarter::views {

// Read-only JSON projections of LedgerState shared by the HTTP service, the
// CLI, and the Python module. Amounts are decimal atto-unit strings; ratios
// are "p/q" strings (or "p" when q is 1).

Json post(const Post& post);
Json campaign(const LedgerState& state, const AccountId& beneficiary);
Json artifact(const LedgerState& state, const std::string& artifact_id);
Json proposal(const LedgerState& state, const std::string& proposal_id);

/// Personal page: account, campaign summary (or null), posts, donations made
/// in chronological order, Likoin/Buck holdings, owned artifacts.
Json user(const LedgerState& state, const AccountId& account);

/// Balances of `account` in every domain, or only in `beneficiary`'s.
Json balances(const LedgerState& state, const AccountId& account,
              const std::optional<AccountId>& beneficiary = std::nullopt);

/// Posts ordered by like count (desc), then creation time (desc), then id.
Json feed(const LedgerState& state, std::size_t offset = 0,
          std::size_t limit = static_cast<std::size_t>(-1));

Json artifact_list(const LedgerState& state, const AccountId& beneficiary);

/// {"seq", "events", "state_hash"}.
Json submit_result(const SubmitResult& result);

std::string weight_string(const Weight& w);

}  // namespace likestarter::views
