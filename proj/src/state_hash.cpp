#include "likestarter/state_hash.hpp"

#include <cstdint>

namespace likestarter {

namespace {

class Encoder {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }

  void u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) u8(static_cast<std::uint8_t>(v >> shift));
  }

  void u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) u8(static_cast<std::uint8_t>(v >> shift));
  }

  void u128(likestarter::u128 v) {
    u64(static_cast<std::uint64_t>(v >> 64));
    u64(static_cast<std::uint64_t>(v));
  }

  void amount(Amount a) { u128(a.value()); }
  void ratio(const Ratio& r) {
    u128(r.num());
    u128(r.den());
  }

  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void id(const AccountId& a) { str(a.str()); }
  void count(std::size_t n) { u32(static_cast<std::uint32_t>(n)); }

  template <typename T, typename F>
  void opt(const std::optional<T>& v, F&& encode) {
    u8(v ? 1 : 0);
    if (v) encode(*v);
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

void encode_domain(Encoder& e, const TokenDomain& d) {
  e.id(d.beneficiary());
  e.ratio(d.buck_rate());
  e.count(d.likoin_balances().size());
  for (const auto& [k, v] : d.likoin_balances()) {
    e.id(k);
    e.amount(v);
  }
  e.amount(d.likoin_total());
  e.count(d.buck_balances().size());
  for (const auto& [k, v] : d.buck_balances()) {
    e.id(k);
    e.amount(v);
  }
  e.amount(d.buck_total());
  e.count(d.allowances().size());
  for (const auto& [k, v] : d.allowances()) {
    e.id(k.first);
    e.id(k.second);
    e.amount(v);
  }
  e.amount(d.reserve());
}

void encode_snapshot(Encoder& e, const Snapshot& s) {
  e.str(s.snapshot_id);
  e.id(s.beneficiary);
  e.u64(s.taken_at);
  e.count(s.balances.size());
  for (const auto& [k, v] : s.balances) {
    e.id(k);
    e.amount(v);
  }
  e.amount(s.total);
}

}  // namespace

std::string canonical_bytes(const LedgerState& state) {
  Encoder e;
  e.str("likestarter-state/1");

  const LedgerParams& p = state.params;
  e.ratio(p.likoin_rate);
  e.amount(p.like_price);
  e.ratio(p.buck_rate);
  e.ratio(p.quorum_fraction);
  e.u64(p.min_voting_period_ms);

  e.count(state.accounts.size());
  for (const auto& [id, a] : state.accounts) {
    e.id(id);
    e.amount(a.currency);
    e.str(a.secret_digest);
  }

  e.count(state.domains.size());
  for (const auto& [id, d] : state.domains) encode_domain(e, d);

  e.count(state.campaigns.size());
  for (const auto& [id, c] : state.campaigns) {
    e.id(id);
    e.u8(c.status == CampaignStatus::Open ? 0 : 1);
    e.ratio(c.likoin_rate);
    e.amount(c.like_price);
    e.amount(c.escrow);
    e.amount(c.total_raised);
    e.u64(c.created_at);
    e.u32(c.round);
    e.count(c.posts.size());
    for (const auto& post : c.posts) e.str(post);
  }

  e.count(state.posts.size());
  for (const auto& [id, post] : state.posts) {
    e.str(id);
    e.id(post.beneficiary);
    e.str(post.content_ref);
    e.u64(post.created_at);
    e.u64(post.like_count);
  }

  e.count(state.artifacts.size());
  for (const auto& [id, a] : state.artifacts) {
    e.str(id);
    e.id(a.beneficiary);
    e.str(a.title);
    e.str(a.description);
    e.str(a.content_ref);
    e.u8(static_cast<std::uint8_t>(a.state));
    e.opt(a.price, [&](Amount v) { e.amount(v); });
    e.opt(a.supply_limit, [&](std::uint64_t v) { e.u64(v); });
    e.u64(a.sold);
    e.count(a.owners.size());
    for (const auto& [owner, copies] : a.owners) {
      e.id(owner);
      e.u64(copies);
    }
    e.str(a.proposal_id);
  }

  e.count(state.proposals.size());
  for (const auto& [id, prop] : state.proposals) {
    e.str(id);
    e.str(prop.artifact_id);
    e.id(prop.beneficiary);
    encode_snapshot(e, *prop.snapshot);
    e.count(prop.suggestions.size());
    for (const auto& [sid, s] : prop.suggestions) {
      e.u32(sid);
      e.amount(s.price);
      e.id(s.proposer);
      e.u64(s.created_at);
    }
    e.count(prop.votes.size());
    for (const auto& [voter, sid] : prop.votes) {
      e.id(voter);
      e.u32(sid);
    }
    e.u64(prop.opened_at);
    e.u64(prop.min_close_at);
    e.u8(static_cast<std::uint8_t>(prop.status));
    e.opt(prop.outcome, [&](const Outcome& o) {
      e.u32(o.suggestion_id);
      e.amount(o.price);
      e.u8(o.quorum_met ? 1 : 0);
    });
  }

  e.count(state.donations.size());
  for (const auto& d : state.donations) {
    e.u64(d.seq);
    e.u64(d.timestamp);
    e.id(d.donor);
    e.id(d.beneficiary);
    e.amount(d.amount);
    e.amount(d.likoin_minted);
    e.opt(d.post_id, [&](const std::string& v) { e.str(v); });
  }

  e.count(state.purchases.size());
  for (const auto& r : state.purchases) {
    e.u64(r.seq);
    e.u64(r.timestamp);
    e.id(r.buyer);
    e.str(r.artifact_id);
    e.id(r.beneficiary);
    e.amount(r.price);
  }

  e.amount(state.currency_issued);
  return e.take();
}

std::string state_hash(const LedgerState& state) { return sha256_hex(canonical_bytes(state)); }

std::string domain_hash(const TokenDomain& domain) {
  Encoder e;
  encode_domain(e, domain);
  return sha256_hex(e.take());
}

}  // namespace likestarter
