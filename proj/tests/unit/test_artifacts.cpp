#include <doctest.h>

#include "scenario.hpp"

using namespace likestarter;
using namespace likestarter::testing;

namespace {

constexpr Timestamp kDay = 24ULL * 60 * 60 * 1000;

// jeff's campaign with alice holding 1000 Likoins.
Scenario with_holder() {
  Scenario s;
  s.account("jeff");
  s.account("alice", units(10));
  s.account("bob", units(10));
  s.start_campaign("jeff");
  s.donate("alice", "jeff", units(1));
  return s;
}

std::string on_sale(Scenario& s, Amount price, Json extra = Json::object()) {
  const std::string art = s.propose("jeff", price, std::move(extra));
  s.advance(kDay);
  s.finalize("jeff", s.proposal_of(art));
  return art;
}

}  // namespace

TEST_CASE("propose_artifact opens a pricing proposal") {
  Scenario s = with_holder();
  const std::string art = s.propose("jeff", units(50));
  const Artifact& a = s.state().artifact(art);
  CHECK(a.state == ArtifactState::Pricing);
  CHECK_FALSE(a.price.has_value());
  CHECK(a.title == "Christmas single");
  const Proposal& p = s.state().proposal(a.proposal_id);
  CHECK(p.status == ProposalStatus::Open);
  REQUIRE(p.suggestions.size() == 1);
  CHECK(p.suggestions.at(1).price == units(50));
  CHECK(p.suggestions.at(1).proposer == id("jeff"));
  CHECK(p.snapshot->balances.at(id("alice")) == units(1000));
  CHECK(p.min_close_at == s.now() + kDay);
}

TEST_CASE("propose_artifact guards") {
  Scenario s = with_holder();
  CHECK(error_of([&] { s.propose("alice", units(50)); }) == ErrorCode::NotBeneficiary);
  CHECK(error_of([&] { s.propose("jeff", atto(0)); }) == ErrorCode::ZeroPrice);
  CHECK(error_of([&] { s.propose("jeff", units(1), {{"supply_limit", 0}}); }) ==
        ErrorCode::ZeroParameter);
  s.propose("jeff", units(1), {{"artifact_id", "single"}});
  CHECK(error_of([&] { s.propose("jeff", units(1), {{"artifact_id", "single"}}); }) ==
        ErrorCode::DuplicateArtifact);
  s.close_campaign("jeff");
  CHECK_NOTHROW(s.propose("jeff", units(1)));
}

TEST_CASE("buy_artifact burns Bucks and records ownership") {
  Scenario s = with_holder();
  const std::string art = on_sale(s, units(50));
  s.convert("alice", "jeff", units(50));
  const Amount likoins = s.state().domain(id("jeff")).likoin_total();

  const auto r = s.buy("alice", art);
  REQUIRE(r.events.size() == 2);
  CHECK(r.events[0].kind == "Purchased");
  CHECK(r.events[1].kind == "Burned");
  CHECK(s.buck("alice", "jeff").is_zero());
  CHECK(s.state().domain(id("jeff")).buck_total().is_zero());
  CHECK(s.state().domain(id("jeff")).likoin_total() == likoins);
  CHECK(s.state().artifact(art).owners.at(id("alice")) == 1);
  CHECK(s.state().artifact(art).sold == 1);
  CHECK(artifacts::owned_artifacts(s.state(), id("alice")) ==
        std::vector<std::pair<std::string, std::uint64_t>>{{art, 1}});
}

TEST_CASE("buy_artifact guards") {
  Scenario s = with_holder();
  const std::string pricing = s.propose("jeff", units(5));
  s.convert("alice", "jeff", units(49));
  CHECK(error_of([&] { s.buy("alice", pricing); }) == ErrorCode::NotOnSale);

  s.advance(kDay);
  const std::string art = on_sale(s, units(50));
  CHECK(error_of([&] { s.buy("alice", art); }) == ErrorCode::InsufficientBucks);
  CHECK(error_of([&] { s.buy("alice", "missing"); }) == ErrorCode::UnknownArtifact);
  CHECK(error_of([&] {
          s.submit("alice", TxKind::BuyArtifact, {{"artifact_id", art}, {"beneficiary", "bob"}});
        }) == ErrorCode::WrongDomain);
}

TEST_CASE("Bucks of another beneficiary do not buy") {
  Scenario s = with_holder();
  s.start_campaign("bob");
  s.donate("alice", "bob", units(1));
  s.convert("alice", "bob", units(500));
  const std::string art = on_sale(s, units(50));
  CHECK(error_of([&] { s.buy("alice", art); }) == ErrorCode::InsufficientBucks);
  CHECK(s.buck("alice", "bob") == units(500));
}

TEST_CASE("supply limit") {
  Scenario s = with_holder();
  const std::string art = on_sale(s, units(10), {{"supply_limit", 1}});
  s.convert("alice", "jeff", units(30));
  s.buy("alice", art);
  CHECK(error_of([&] { s.buy("alice", art); }) == ErrorCode::SupplyExhausted);
}

TEST_CASE("repeat purchases count copies") {
  Scenario s = with_holder();
  const std::string art = on_sale(s, units(10));
  s.convert("alice", "jeff", units(30));
  s.buy("alice", art);
  s.buy("alice", art);
  CHECK(s.state().artifact(art).owners.at(id("alice")) == 2);
  CHECK(s.state().artifact(art).sold == 2);
}

TEST_CASE("remove_artifact") {
  Scenario s = with_holder();
  const std::string pricing = s.propose("jeff", units(5));
  CHECK(error_of([&] { s.remove("alice", pricing); }) == ErrorCode::NotBeneficiary);
  const auto r = s.remove("jeff", pricing);
  REQUIRE(r.events.size() == 2);
  CHECK(r.events[1].kind == "ProposalCancelled");
  CHECK(s.state().proposal(s.proposal_of(pricing)).status == ProposalStatus::Cancelled);
  CHECK(error_of([&] { s.remove("jeff", pricing); }) == ErrorCode::AlreadyRemoved);
  CHECK(error_of([&] { s.remove("jeff", "missing"); }) == ErrorCode::UnknownArtifact);

  const std::string art = on_sale(s, units(10));
  s.convert("alice", "jeff", units(30));
  s.buy("alice", art);
  s.remove("jeff", art);
  CHECK(error_of([&] { s.buy("alice", art); }) == ErrorCode::NotOnSale);
  CHECK(s.state().artifact(art).owners.at(id("alice")) == 1);
  CHECK(s.state().artifact(art).price == units(10));
}

TEST_CASE("list_artifacts orders by id") {
  Scenario s = with_holder();
  CHECK(artifacts::list_artifacts(s.state(), id("jeff")).empty());
  s.propose("jeff", units(1), {{"artifact_id", "b-side"}});
  s.propose("jeff", units(1), {{"artifact_id", "a-side"}});
  const auto list = artifacts::list_artifacts(s.state(), id("jeff"));
  REQUIRE(list.size() == 2);
  CHECK(list[0]->artifact_id == "a-side");
  CHECK(list[1]->artifact_id == "b-side");
  CHECK(artifacts::list_artifacts(s.state(), id("bob")).empty());
}

TEST_CASE("ownership equals the fold of purchase records") {
  Scenario s = with_holder();
  s.donate("bob", "jeff", units(1));
  const std::string a1 = on_sale(s, units(3));
  const std::string a2 = on_sale(s, units(4));
  s.convert("alice", "jeff", units(100));
  s.convert("bob", "jeff", units(100));
  for (int i = 0; i < 5; ++i) {
    s.buy(i % 2 ? "alice" : "bob", i % 3 ? a1 : a2);
  }
  std::map<std::pair<std::string, AccountId>, std::uint64_t> fold;
  for (const auto& rec : s.state().purchases) fold[{rec.artifact_id, rec.buyer}] += 1;
  std::map<std::pair<std::string, AccountId>, std::uint64_t> owners;
  for (const auto& [aid, a] : s.state().artifacts) {
    for (const auto& [who, n] : a.owners) owners[{aid, who}] = n;
  }
  CHECK(fold == owners);
}
