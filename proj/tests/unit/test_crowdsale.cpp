#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "scenario.hpp"

using namespace likestarter;
using namespace likestarter::testing;

namespace {

// floor(amount * num / den) through exact rationals.
Amount rate_oracle(Amount amount, u128 num, u128 den) {
  return Amount(from_big(floor_of(cpp_rational(to_big(amount.value()) * to_big(num), to_big(den)))));
}

Scenario funded_jeff() {
  Scenario s;
  s.account("jeff");
  s.account("alice", units(10));
  s.account("bob", units(10));
  s.start_campaign("jeff");
  s.post("jeff", "p1");
  return s;
}

}  // namespace

TEST_CASE("start_campaign defaults mint ten Likoins per like") {
  Scenario s = funded_jeff();
  const Campaign& c = s.state().campaign(id("jeff"));
  CHECK(c.status == CampaignStatus::Open);
  CHECK(c.like_price == eth("0.01"));
  CHECK(c.likoin_rate == Ratio(1000, 1));
  CHECK(crowdsale::likoins_for(c.like_price, c.likoin_rate) == rate_oracle(eth("0.01"), 1000, 1));
  CHECK(crowdsale::likoins_for(c.like_price, c.likoin_rate) == units(10));
  CHECK(c.escrow.is_zero());
  CHECK(s.state().domains.contains(id("jeff")));
}

TEST_CASE("start_campaign guards") {
  Scenario s = funded_jeff();
  CHECK(error_of([&] { s.start_campaign("jeff"); }) == ErrorCode::CampaignAlreadyOpen);
  CHECK(error_of([&] { s.start_campaign("alice", {{"like_price", "0"}}); }) ==
        ErrorCode::ZeroParameter);
  CHECK(error_of([&] { s.start_campaign("alice", {{"likoin_rate", "0"}}); }) ==
        ErrorCode::ZeroParameter);
  CHECK(error_of([&] { s.start_campaign("ghost"); }) == ErrorCode::UnknownAccount);
}

TEST_CASE("like_post moves like_price into escrow and mints") {
  Scenario s = funded_jeff();
  const auto r = s.like("alice", "p1");
  REQUIRE(r.events.size() == 2);
  CHECK(r.events[0].kind == "Donated");
  CHECK(r.events[1].kind == "Minted");
  CHECK(s.likoin("alice", "jeff") == units(10));
  CHECK(s.currency("alice") == eth("9.99"));
  CHECK(s.state().campaign(id("jeff")).escrow == eth("0.01"));
  CHECK(s.state().campaign(id("jeff")).total_raised == eth("0.01"));
  CHECK(s.state().post("p1").like_count == 1);
  REQUIRE(s.state().donations.size() == 1);
  CHECK(s.state().donations[0].post_id == std::optional<std::string>("p1"));
}

TEST_CASE("like_post guards") {
  Scenario s = funded_jeff();
  s.account("broke");
  CHECK(error_of([&] { s.like("broke", "p1"); }) == ErrorCode::InsufficientFunds);
  CHECK(error_of([&] { s.like("jeff", "p1"); }) == ErrorCode::SelfDonation);
  CHECK(error_of([&] { s.like("alice", "nope"); }) == ErrorCode::UnknownPost);
  s.close_campaign("jeff");
  CHECK(error_of([&] { s.like("alice", "p1"); }) == ErrorCode::CampaignClosed);
  CHECK(s.state().post("p1").like_count == 0);
}

TEST_CASE("donate") {
  Scenario s = funded_jeff();
  s.donate("alice", "jeff", units(1));
  CHECK(s.likoin("alice", "jeff") == rate_oracle(units(1), 1000, 1));
  CHECK(s.likoin("alice", "jeff") == units(1000));
  CHECK(error_of([&] { s.donate("alice", "jeff", atto(0)); }) == ErrorCode::ZeroAmount);
  CHECK(error_of([&] { s.donate("alice", "jeff", units(100)); }) == ErrorCode::InsufficientFunds);
  CHECK(error_of([&] { s.donate("alice", "bob", units(1)); }) == ErrorCode::NoCampaign);
  CHECK(error_of([&] { s.donate("jeff", "jeff", units(1)); }) == ErrorCode::SelfDonation);
}

TEST_CASE("donation that would mint nothing is rejected") {
  Scenario s;
  s.account("jeff");
  s.account("alice", units(1));
  s.start_campaign("jeff", {{"likoin_rate", "1/3"}});
  CHECK(error_of([&] { s.donate("alice", "jeff", atto(2)); }) == ErrorCode::ZeroAmount);
  s.donate("alice", "jeff", atto(7));
  CHECK(s.likoin("alice", "jeff") == rate_oracle(atto(7), 1, 3));
}

TEST_CASE("hundred ETH raised through likes and donations") {
  Scenario s;
  s.account("jeff");
  for (int i = 0; i < 20; ++i) s.account("d" + std::to_string(i), units(10));
  s.start_campaign("jeff");
  s.post("jeff", "song");
  for (int i = 0; i < 20; ++i) {
    const std::string d = "d" + std::to_string(i);
    for (int k = 0; k < 100; ++k) s.like(d, "song");
    s.donate(d, "jeff", units(4));
  }
  CHECK(s.state().campaign(id("jeff")).total_raised == units(100));
  CHECK(s.state().post("song").like_count == 2000);
}

TEST_CASE("close and restart keep the token domain") {
  Scenario s = funded_jeff();
  s.like("alice", "p1");
  const auto domain_before = s.state().domain(id("jeff"));
  s.close_campaign("jeff");
  CHECK(error_of([&] { s.close_campaign("jeff"); }) == ErrorCode::AlreadyClosed);
  CHECK(error_of([&] { s.close_campaign("alice"); }) == ErrorCode::NoCampaign);

  // Tokens outlive the campaign.
  s.convert("alice", "jeff", units(1));
  CHECK(s.buck("alice", "jeff") == units(1));

  s.start_campaign("jeff", {{"like_price", eth("0.02").to_string()}});
  const Campaign& c = s.state().campaign(id("jeff"));
  CHECK(c.round == 2);
  CHECK(c.total_raised == eth("0.01"));
  CHECK(s.state().domain(id("jeff")).likoin_total() == domain_before.likoin_total());
  s.like("alice", "p1");
  CHECK(s.state().campaign(id("jeff")).escrow == eth("0.03"));
}

TEST_CASE("withdraw_funds") {
  Scenario s = funded_jeff();
  s.donate("alice", "jeff", units(5));
  s.withdraw("jeff", units(2));
  CHECK(s.state().campaign(id("jeff")).escrow == units(3));
  CHECK(s.currency("jeff") == units(2));
  CHECK(error_of([&] { s.withdraw("jeff", units(4)); }) == ErrorCode::InsufficientEscrow);
  CHECK(error_of([&] { s.withdraw("jeff", atto(0)); }) == ErrorCode::ZeroAmount);
}

TEST_CASE("posts") {
  Scenario s = funded_jeff();
  CHECK(error_of([&] { s.post("jeff", "p1"); }) == ErrorCode::DuplicatePost);
  CHECK(error_of([&] { s.post("alice", "p2"); }) == ErrorCode::NoCampaign);
  s.post("jeff", "p2");
  CHECK(s.state().campaign(id("jeff")).posts == std::vector<std::string>{"p1", "p2"});
}

TEST_CASE("property: escrow plus withdrawals equals total raised") {
  std::mt19937_64 rng(99);
  Scenario s;
  s.account("jeff");
  for (int i = 0; i < 6; ++i) s.account("d" + std::to_string(i), units(50));
  s.start_campaign("jeff");
  s.post("jeff", "p");
  Amount withdrawn;
  Amount issued = units(300);
  for (int step = 0; step < 500; ++step) {
    const std::string d = "d" + std::to_string(rng() % 6);
    const Amount amt(1 + rng() % 2'000'000'000'000'000'000ULL);
    switch (rng() % 3) {
      case 0:
        (void)error_of([&] { s.like(d, "p"); });
        break;
      case 1:
        (void)error_of([&] { s.donate(d, "jeff", amt); });
        break;
      default:
        if (!error_of([&] { s.withdraw("jeff", amt); })) withdrawn = withdrawn.plus(amt);
        break;
    }
    const Campaign& c = s.state().campaign(id("jeff"));
    REQUIRE(c.escrow.plus(withdrawn) == c.total_raised);
    Amount currency;
    for (const auto& [k, a] : s.state().accounts) currency = currency.plus(a.currency);
    REQUIRE(currency.plus(c.escrow) == issued);
  }
}

TEST_CASE("minting linearity") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const Ratio rate(1 + rng() % 5000, 1 + rng() % 97);
    const Amount a(rng() % 1'000'000'000'000ULL);
    const Amount one = crowdsale::likoins_for(a, rate);
    const Amount two = crowdsale::likoins_for(a.plus(a), rate);
    CHECK(one == rate_oracle(a, rate.num(), rate.den()));
    CHECK(one.plus(one) <= two);
    CHECK(two.value() <= one.value() * 2 + 1);
    if (rate.den() == 1) CHECK(one.plus(one) == two);
  }
}
