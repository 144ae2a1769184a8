#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "scenario.hpp"

using namespace likestarter;
using namespace likestarter::testing;

namespace {

constexpr Timestamp kDay = 24ULL * 60 * 60 * 1000;

cpp_rational as_rational(const Weight& w) { return cpp_rational(to_big(w.num), to_big(w.den)); }

// jeff plus holders funded with the given currency donations (atto-units,
// rate 1 so Likoin balances equal the donations).
Scenario holders(const std::vector<std::pair<std::string, Amount>>& donations) {
  Scenario s;
  s.account("jeff");
  s.start_campaign("jeff", {{"likoin_rate", "1"}});
  for (const auto& [who, amount] : donations) {
    s.account(who, amount);
    s.donate(who, "jeff", amount);
  }
  return s;
}

// A proposal built directly, without a ledger, for decide() checks.
Proposal bare_proposal(std::map<AccountId, Amount> balances) {
  auto snap = std::make_shared<Snapshot>();
  snap->beneficiary = id("jeff");
  for (const auto& [k, v] : balances) snap->total = snap->total.plus(v);
  snap->balances = std::move(balances);
  Proposal p;
  p.proposal_id = "prop";
  p.beneficiary = id("jeff");
  p.snapshot = std::move(snap);
  return p;
}

}  // namespace

TEST_CASE("suggest_price auto-votes and rejects duplicates") {
  Scenario s = holders({{"alice", units(6)}, {"bob", units(4)}});
  const std::string art = s.propose("jeff", units(50));
  const std::string prop = s.proposal_of(art);
  const auto r = s.suggest("alice", prop, units(40));
  REQUIRE(r.events.size() == 2);
  CHECK(r.events[0].kind == "Suggested");
  CHECK(r.events[1].kind == "Voted");
  const Proposal& p = s.state().proposal(prop);
  CHECK(p.suggestions.size() == 2);
  CHECK(p.votes.at(id("alice")) == 2);
  CHECK(error_of([&] { s.suggest("bob", prop, units(40)); }) == ErrorCode::DuplicatePrice);
  CHECK(error_of([&] { s.suggest("bob", prop, units(50)); }) == ErrorCode::DuplicatePrice);
  CHECK(error_of([&] { s.suggest("bob", prop, atto(0)); }) == ErrorCode::ZeroPrice);
  CHECK(error_of([&] { s.suggest("bob", "prop-missing", units(1)); }) ==
        ErrorCode::UnknownProposal);
  // The beneficiary may suggest even without Likoins.
  CHECK_NOTHROW(s.suggest("jeff", prop, units(45)));
}

TEST_CASE("membership is fixed at the snapshot") {
  Scenario s = holders({{"alice", units(6)}, {"bob", units(4)}});
  s.account("late", units(5));
  const std::string prop = s.proposal_of(s.propose("jeff", units(50)));
  s.donate("late", "jeff", units(5));
  CHECK(error_of([&] { s.suggest("late", prop, units(30)); }) == ErrorCode::NotMember);
  CHECK(error_of([&] { s.vote("late", prop, 1); }) == ErrorCode::NotMember);
  CHECK(error_of([&] { s.vote("jeff", prop, 1); }) == ErrorCode::NotMember);
  CHECK(error_of([&] { s.vote("alice", prop, 9); }) == ErrorCode::UnknownSuggestion);
}

TEST_CASE("vote replacement") {
  Scenario s = holders({{"alice", units(6)}, {"bob", units(4)}});
  const std::string prop = s.proposal_of(s.propose("jeff", units(50)));
  s.suggest("bob", prop, units(30));
  s.vote("alice", prop, 2);
  s.vote("alice", prop, 1);
  const auto t = governance::tally(s.state().proposal(prop));
  CHECK(t.at(1) == units(6));
  CHECK(t.at(2) == units(4));
}

TEST_CASE("weights are exact snapshot ratios") {
  Scenario s = holders({{"alice", units(60)}, {"bob", units(40)}});
  const std::string prop = s.proposal_of(s.propose("jeff", units(50)));
  const Weight wa = governance::vote_weight(s.state(), prop, id("alice"));
  const Weight wb = governance::vote_weight(s.state(), prop, id("bob"));
  CHECK(as_rational(wa) == cpp_rational(6, 10));
  CHECK(as_rational(wb) == cpp_rational(4, 10));
  CHECK(as_rational(wa) + as_rational(wb) == 1);
  CHECK(governance::vote_weight(s.state(), prop, id("jeff")) == Weight{0, 1});
  CHECK(error_of([&] { governance::vote_weight(s.state(), "nope", id("alice")); }) ==
        ErrorCode::UnknownProposal);

  Scenario sole = holders({{"alice", atto(7)}});
  const std::string p2 = sole.proposal_of(sole.propose("jeff", units(1)));
  CHECK(governance::vote_weight(sole.state(), p2, id("alice")) == Weight{1, 1});

  Scenario one_pct = holders({{"probe", units(100)}, {"donor", units(9900)}});
  const std::string p3 = one_pct.proposal_of(one_pct.propose("jeff", units(1)));
  CHECK(governance::vote_weight(one_pct.state(), p3, id("probe")) == Weight{1, 100});
}

TEST_CASE("snapshot immunity") {
  Scenario s = holders({{"alice", units(60)}, {"bob", units(40)}});
  s.account("carol");
  const std::string prop = s.proposal_of(s.propose("jeff", units(50)));
  const Weight before = governance::vote_weight(s.state(), prop, id("alice"));
  s.transfer("alice", "jeff", "carol", units(30));
  s.convert("bob", "jeff", units(20));
  s.deposit("bob", units(100));
  s.donate("bob", "jeff", units(100));
  CHECK(governance::vote_weight(s.state(), prop, id("alice")) == before);
  CHECK(governance::vote_weight(s.state(), prop, id("carol")) == Weight{0, 1});
  CHECK(error_of([&] { s.vote("carol", prop, 1); }) == ErrorCode::NotMember);
}

TEST_CASE("finalize") {
  Scenario s = holders({{"alice", units(60)}, {"bob", units(40)}});
  const std::string art = s.propose("jeff", units(50));
  const std::string prop = s.proposal_of(art);
  s.suggest("alice", prop, units(40));
  s.suggest("bob", prop, units(60));
  CHECK(error_of([&] { s.finalize("jeff", prop); }) == ErrorCode::TooEarly);
  s.advance(kDay);
  CHECK(error_of([&] { s.finalize("alice", prop); }) == ErrorCode::NotAuthorized);
  const auto r = s.finalize("jeff", prop);
  CHECK(r.events.back().kind == "Finalized");
  const Proposal& p = s.state().proposal(prop);
  CHECK(p.status == ProposalStatus::Finalized);
  REQUIRE(p.outcome.has_value());
  CHECK(p.outcome->price == units(40));
  CHECK(p.outcome->quorum_met);
  CHECK(s.state().artifact(art).state == ArtifactState::OnSale);
  CHECK(s.state().artifact(art).price == units(40));
  CHECK(error_of([&] { s.finalize("jeff", prop); }) == ErrorCode::ProposalClosed);
  CHECK(error_of([&] { s.vote("alice", prop, 1); }) == ErrorCode::ProposalClosed);
}

TEST_CASE("quorum fallback keeps the initial price") {
  Scenario s = holders({{"alice", units(95)}, {"bob", units(5)}});
  const std::string art = s.propose("jeff", units(50));
  const std::string prop = s.proposal_of(art);
  s.suggest("bob", prop, units(10));  // 5% < 10% quorum
  s.advance(kDay);
  s.finalize("jeff", prop);
  CHECK(s.state().artifact(art).price == units(50));
  CHECK_FALSE(s.state().proposal(prop).outcome->quorum_met);

  Scenario empty;
  empty.account("jeff");
  empty.start_campaign("jeff");
  const std::string a2 = empty.propose("jeff", units(7));
  empty.advance(kDay);
  empty.finalize("jeff", empty.proposal_of(a2));
  CHECK(empty.state().artifact(a2).price == units(7));
}

TEST_CASE("cancel discards votes") {
  Scenario s = holders({{"alice", units(60)}});
  const std::string art = s.propose("jeff", units(50));
  const std::string prop = s.proposal_of(art);
  s.suggest("alice", prop, units(40));
  s.remove("jeff", art);
  const Proposal& p = s.state().proposal(prop);
  CHECK(p.status == ProposalStatus::Cancelled);
  CHECK(p.votes.empty());
  CHECK_FALSE(p.outcome.has_value());
  s.advance(kDay);
  CHECK(error_of([&] { s.finalize("jeff", prop); }) == ErrorCode::ProposalClosed);

  LedgerState st = s.state();
  std::vector<Event> sink;
  const TxContext tx(99, s.now(), sink);
  CHECK(error_of([&] { governance::cancel(st, tx, prop); }) == ErrorCode::ProposalClosed);
}

TEST_CASE("equal weight resolves to the lower price") {
  Proposal p = bare_proposal({{id("a"), atto(3)}, {id("b"), atto(3)}, {id("c"), atto(4)}});
  p.suggestions.emplace(1, Suggestion{atto(60), id("jeff"), 0});
  p.suggestions.emplace(2, Suggestion{atto(40), id("a"), 5});
  p.votes = {{id("a"), 2}, {id("b"), 1}};
  const Outcome o = governance::decide(p, Ratio(1, 10));
  CHECK(o.price == atto(40));
  CHECK(o.suggestion_id == 2);
}

TEST_CASE("exhaustive 3 members x 3 suggestions against the brute-force tally") {
  const std::vector<std::map<AccountId, Amount>> snapshots = {
      {{id("a"), atto(1)}, {id("b"), atto(1)}, {id("c"), atto(1)}},
      {{id("a"), atto(5)}, {id("b"), atto(3)}, {id("c"), atto(2)}},
      {{id("a"), atto(1)}, {id("b"), atto(1)}, {id("c"), atto(98)}},
      {{id("a"), units(3)}, {id("b"), units(3)}, {id("c"), atto(1)}},
  };
  const std::vector<std::map<SuggestionId, Suggestion>> suggestion_sets = {
      {{1, {atto(50), id("jeff"), 0}}, {2, {atto(40), id("a"), 1}}, {3, {atto(60), id("b"), 2}}},
      {{1, {atto(10), id("jeff"), 0}}, {2, {atto(30), id("a"), 0}}, {3, {atto(20), id("b"), 0}}},
  };
  const std::vector<Ratio> quorums = {Ratio(1, 10), Ratio(1, 2), Ratio(0, 1), Ratio(1, 1)};
  int checked = 0;
  for (const auto& snap : snapshots) {
    for (const auto& sugg : suggestion_sets) {
      for (const auto& q : quorums) {
        // Each member abstains (0) or votes for suggestion 1..3: 4^3 cases.
        for (int code = 0; code < 64; ++code) {
          Proposal p = bare_proposal(snap);
          p.suggestions = sugg;
          std::map<AccountId, SuggestionId> votes;
          int c = code;
          for (const char* m : {"a", "b", "c"}) {
            const int choice = c % 4;
            c /= 4;
            if (choice) votes[id(m)] = static_cast<SuggestionId>(choice);
          }
          p.votes = votes;
          const Outcome got = governance::decide(p, q);
          const OracleOutcome want =
              decide_oracle(snap, sugg, votes, cpp_rational(to_big(q.num()), to_big(q.den())));
          REQUIRE(got.suggestion_id == want.winner);
          REQUIRE(got.quorum_met == want.quorum_met);
          ++checked;
        }
      }
    }
  }
  CHECK(checked == 4 * 2 * 4 * 64);
}

TEST_CASE("scaling snapshot balances changes no winner") {
  std::mt19937_64 rng(314);
  for (int instance = 0; instance < 200; ++instance) {
    std::map<AccountId, Amount> snap;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) snap[AccountId("m" + std::to_string(i))] = atto(1 + rng() % 1000);
    std::map<SuggestionId, Suggestion> sugg;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int j = 1; j <= k; ++j) {
      sugg[static_cast<SuggestionId>(j)] = Suggestion{atto(10 * j + rng() % 5 * 100), id("jeff"), 0};
    }
    // Keep prices distinct.
    std::set<Amount> prices;
    for (auto& [sid, sg] : sugg) {
      while (prices.contains(sg.price)) sg.price = sg.price.plus(atto(1));
      prices.insert(sg.price);
    }
    std::map<AccountId, SuggestionId> votes;
    for (const auto& [m, b] : snap) {
      if (rng() % 4) votes[m] = static_cast<SuggestionId>(1 + rng() % k);
    }
    Proposal base = bare_proposal(snap);
    base.suggestions = sugg;
    base.votes = votes;
    const Outcome ref = governance::decide(base, Ratio(1, 10));
    for (const u128 factor : {u128{2}, u128{10}, u128{1000}}) {
      std::map<AccountId, Amount> scaled;
      for (const auto& [m, b] : snap) scaled[m] = Amount(b.value() * factor);
      Proposal p = bare_proposal(scaled);
      p.suggestions = sugg;
      p.votes = votes;
      REQUIRE(governance::decide(p, Ratio(1, 10)) == ref);
      for (const auto& [m, b] : snap) {
        REQUIRE(governance::vote_weight(p, m) == governance::vote_weight(base, m));
      }
    }
  }
}

TEST_CASE("weights sum to one exactly") {
  std::mt19937_64 rng(2718);
  for (int instance = 0; instance < 200; ++instance) {
    std::map<AccountId, Amount> snap;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      snap[AccountId("m" + std::to_string(i))] = atto(1 + rng() % 1'000'000'000'000'000'000ULL);
    }
    const Proposal p = bare_proposal(snap);
    cpp_rational sum = 0;
    for (const auto& [m, b] : snap) sum += as_rational(governance::vote_weight(p, m));
    REQUIRE(sum == 1);
  }
}

TEST_CASE("finalization ignores vote arrival order") {
  const std::map<AccountId, Amount> snap = {
      {id("a"), atto(4)}, {id("b"), atto(4)}, {id("c"), atto(2)}, {id("d"), atto(1)}};
  std::vector<std::pair<AccountId, SuggestionId>> ballots = {
      {id("a"), 2}, {id("b"), 3}, {id("c"), 2}, {id("d"), 3}};
  std::optional<Outcome> first;
  std::sort(ballots.begin(), ballots.end());
  do {
    Proposal p = bare_proposal(snap);
    p.suggestions = {{1, {atto(5), id("jeff"), 0}}, {2, {atto(7), id("a"), 1}},
                     {3, {atto(3), id("b"), 2}}};
    for (const auto& [who, sid] : ballots) p.votes[who] = sid;
    const Outcome got = governance::decide(p, Ratio(1, 10));
    if (!first) first = got;
    REQUIRE(got == *first);
  } while (std::next_permutation(ballots.begin(), ballots.end()));
  // 6 vs 5: suggestion 2 outweighs the cheaper suggestion 3.
  CHECK(first->suggestion_id == 2);
}
