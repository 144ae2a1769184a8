#pragma once

#include <string>

#include "likestarter/ledger_state.hpp"
#include "likestarter/sha256.hpp"

namespace likestarter {

/// Canonical byte serialization of the ledger content.
///
/// Encoding: integers are fixed-width big-endian (u8 tags, u32 lengths and
/// counts, u64 counters and timestamps, u128 amounts); strings are a u32 byte
/// length followed by the bytes; optionals are a u8 presence flag followed by
/// the value; maps are a u32 count followed by entries in ascending key
/// order. Journal position (last_seq, last_timestamp) is not included.
std::string canonical_bytes(const LedgerState& state);

/// SHA-256 of canonical_bytes, lowercase hex.
std::string state_hash(const LedgerState& state);

/// Hash of a single token domain; used by isolation checks.
std::string domain_hash(const TokenDomain& domain);

}  // namespace likestarter
