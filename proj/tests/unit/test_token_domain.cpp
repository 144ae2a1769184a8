#include <doctest.h>

#include <random>

#include "likestarter/token_domain.hpp"
#include "oracles.hpp"
#include "scenario.hpp"

using namespace likestarter;
using namespace likestarter::testing;

namespace {

Amount brute_force_sum(const std::map<AccountId, Amount>& book) {
  Amount s;
  for (const auto& [k, v] : book) s = s.plus(v);
  return s;
}

void check_conservation(const TokenDomain& d) {
  CHECK(brute_force_sum(d.likoin_balances()).plus(d.reserve()) == d.likoin_total());
  CHECK(brute_force_sum(d.buck_balances()) == d.buck_total());
  for (const auto& [k, v] : d.likoin_balances()) CHECK_FALSE(v.is_zero());
  for (const auto& [k, v] : d.buck_balances()) CHECK_FALSE(v.is_zero());
}

}  // namespace

TEST_CASE("mint_likoin") {
  TokenDomain d(id("jeff"));
  d.mint_likoin(id("alice"), atto(100));
  CHECK(d.balance_of(id("alice"), TokenKind::Likoin) == atto(100));
  CHECK(d.likoin_total() == atto(100));

  d.mint_likoin(id("bob"), atto(50));
  d.mint_likoin(id("bob"), atto(50));
  CHECK(d.likoin_total() == atto(200));

  CHECK(error_of([&] { d.mint_likoin(id("bob"), atto(0)); }) == ErrorCode::ZeroAmount);

  TokenDomain full(id("jeff"));
  full.mint_likoin(id("alice"), Amount(~u128{0}));
  CHECK(error_of([&] { full.mint_likoin(id("bob"), atto(1)); }) == ErrorCode::Overflow);
  CHECK(full.balance_of(id("bob"), TokenKind::Likoin).is_zero());
}

TEST_CASE("balance_of defaults to zero") {
  TokenDomain d(id("jeff"));
  CHECK(d.balance_of(id("ghost"), TokenKind::Likoin).is_zero());
  CHECK(d.balance_of(id("ghost"), TokenKind::Buck).is_zero());
}

TEST_CASE("transfer_likoin") {
  TokenDomain d(id("jeff"));
  d.mint_likoin(id("alice"), atto(100));
  d.transfer_likoin(id("alice"), id("bob"), atto(40));
  CHECK(d.balance_of(id("alice"), TokenKind::Likoin) == atto(60));
  CHECK(d.balance_of(id("bob"), TokenKind::Likoin) == atto(40));
  CHECK(d.likoin_total() == atto(100));

  CHECK(error_of([&] { d.transfer_likoin(id("alice"), id("bob"), atto(61)); }) ==
        ErrorCode::InsufficientBalance);
  CHECK(error_of([&] { d.transfer_likoin(id("alice"), id("bob"), atto(0)); }) ==
        ErrorCode::ZeroAmount);
  CHECK(error_of([&] { d.transfer_likoin(id("alice"), id("alice"), atto(1)); }) ==
        ErrorCode::SelfTransfer);

  d.transfer_likoin(id("bob"), id("alice"), atto(40));
  CHECK_FALSE(d.likoin_balances().contains(id("bob")));
}

TEST_CASE("approve and transfer_from") {
  TokenDomain d(id("jeff"));
  d.mint_likoin(id("alice"), atto(100));

  d.approve(id("alice"), id("bob"), atto(50));
  d.approve(id("alice"), id("bob"), atto(10));
  CHECK(d.allowance(id("alice"), id("bob")) == atto(10));
  d.approve(id("alice"), id("bob"), atto(0));
  CHECK(d.allowances().empty());

  d.approve(id("alice"), id("bob"), atto(50));
  d.transfer_from(id("bob"), id("alice"), id("carol"), atto(30));
  CHECK(d.allowance(id("alice"), id("bob")) == atto(20));
  CHECK(d.balance_of(id("alice"), TokenKind::Likoin) == atto(70));
  CHECK(d.balance_of(id("carol"), TokenKind::Likoin) == atto(30));

  d.approve(id("alice"), id("bob"), atto(50));
  CHECK(error_of([&] { d.transfer_from(id("bob"), id("alice"), id("carol"), atto(51)); }) ==
        ErrorCode::InsufficientAllowance);

  TokenDomain poor(id("jeff"));
  poor.mint_likoin(id("alice"), atto(10));
  poor.approve(id("alice"), id("bob"), atto(50));
  CHECK(error_of([&] { poor.transfer_from(id("bob"), id("alice"), id("carol"), atto(20)); }) ==
        ErrorCode::InsufficientBalance);
  CHECK(poor.allowance(id("alice"), id("bob")) == atto(50));
}

TEST_CASE("one percent holder receives ~0.01 Likoin when another converts one") {
  TokenDomain d(id("jeff"));
  d.mint_likoin(id("donor"), units(9900));
  d.mint_likoin(id("probe"), units(100));
  REQUIRE(d.likoin_total() == units(10000));

  const auto receipt = d.convert_likoin_to_buck(id("donor"), units(1));

  // Frozen from the exact-rational oracle: floor(10^20 / 9999) for the probe;
  // the single leftover atto goes to the donor (remainder .9999 vs .0001).
  CHECK(receipt.distribution.at(id("probe")) == atto(10001000100010001ULL));
  CHECK(receipt.distribution.at(id("donor")) == atto(989998999899989999ULL));
  CHECK(receipt.dust.is_zero());
  CHECK(receipt.buck_out == units(1));
  CHECK(d.balance_of(id("probe"), TokenKind::Likoin) == units(100).plus(atto(10001000100010001ULL)));
  CHECK(d.likoin_total() == units(10000));
  CHECK(d.buck_total() == units(1));

  const auto oracle = distribution_oracle({{id("donor"), units(9900)}, {id("probe"), units(100)}},
                                          id("donor"), units(1));
  CHECK(oracle.shares == receipt.distribution);
  check_conservation(d);
}

TEST_CASE("sole holder converting everything credits the reserve") {
  TokenDomain d(id("jeff"));
  d.mint_likoin(id("alice"), atto(500));
  const auto receipt = d.convert_likoin_to_buck(id("alice"), atto(500));
  CHECK(receipt.distribution.empty());
  CHECK(receipt.dust == atto(500));
  CHECK(d.reserve() == atto(500));
  CHECK(d.likoin_balances().empty());
  CHECK(d.balance_of(id("alice"), TokenKind::Buck) == atto(500));
  CHECK(d.likoin_total() == atto(500));
  check_conservation(d);
}

TEST_CASE("three holders small case matches the oracle") {
  TokenDomain d(id("jeff"));
  d.mint_likoin(id("a"), atto(5));
  d.mint_likoin(id("b"), atto(3));
  d.mint_likoin(id("c"), atto(2));
  const std::map<AccountId, Amount> before = d.likoin_balances();

  const auto receipt = d.convert_likoin_to_buck(id("a"), atto(2));
  const auto oracle = distribution_oracle(before, id("a"), atto(2));
  CHECK(receipt.distribution == oracle.shares);
  // Post-deduction {a:3,b:3,c:2}; remainders .75/.75/.5 so a and b get one each.
  CHECK(receipt.distribution == std::map<AccountId, Amount>{{id("a"), atto(1)}, {id("b"), atto(1)}});
  CHECK(d.balance_of(id("a"), TokenKind::Likoin) == atto(4));
  CHECK(d.balance_of(id("b"), TokenKind::Likoin) == atto(4));
  CHECK(d.balance_of(id("c"), TokenKind::Likoin) == atto(2));
}

TEST_CASE("conversion errors leave the domain unchanged") {
  TokenDomain d(id("jeff"));
  d.mint_likoin(id("a"), atto(5));
  const TokenDomain before = d;
  CHECK(error_of([&] { d.convert_likoin_to_buck(id("a"), atto(6)); }) ==
        ErrorCode::InsufficientBalance);
  CHECK(error_of([&] { d.convert_likoin_to_buck(id("a"), atto(0)); }) == ErrorCode::ZeroAmount);
  CHECK(d == before);

  TokenDomain halves(id("jeff"), Ratio(1, 2));
  halves.mint_likoin(id("a"), atto(5));
  CHECK(error_of([&] { halves.convert_likoin_to_buck(id("a"), atto(1)); }) == ErrorCode::ZeroAmount);
  const auto r = halves.convert_likoin_to_buck(id("a"), atto(3));
  CHECK(r.buck_out == atto(1));
}

TEST_CASE("distribution oracle edge cases") {
  // Equal remainders: the lower id takes the leftover atto.
  const auto tie = distribution_oracle({{id("x"), atto(3)}, {id("b"), atto(1)}, {id("a"), atto(1)}},
                                       id("x"), atto(3));
  CHECK(tie.shares == std::map<AccountId, Amount>{{id("a"), atto(2)}, {id("b"), atto(1)}});
  const auto minimal = distribution_oracle({{id("c"), atto(1)}, {id("a"), atto(1)}, {id("b"), atto(1)}},
                                           id("c"), atto(1));
  CHECK(minimal.shares == std::map<AccountId, Amount>{{id("a"), atto(1)}});
  CHECK(error_of([] { distribution_oracle({{id("a"), atto(1)}}, id("a"), atto(2)); }) ==
        ErrorCode::InsufficientBalance);

  const auto split = largest_remainder_split({{id("a"), atto(1)}, {id("b"), atto(1)}}, atto(1));
  CHECK(split == std::map<AccountId, Amount>{{id("a"), atto(1)}});
}

TEST_CASE("property: conversions match the oracle and stay proportional") {
  std::mt19937_64 rng(20240917);
  for (int instance = 0; instance < 300; ++instance) {
    const int n = 1 + static_cast<int>(rng() % 12);
    TokenDomain d(id("jeff"));
    for (int i = 0; i < n; ++i) {
      const u128 bal = 1 + rng() % (instance % 2 == 0 ? 50 : 1'000'000'000'000ULL);
      d.mint_likoin(AccountId("h" + std::to_string(i)), Amount(bal));
    }
    const AccountId converter("h" + std::to_string(rng() % n));
    const u128 held = d.balance_of(converter, TokenKind::Likoin).value();
    const Amount amount(1 + rng() % static_cast<std::uint64_t>(held));

    const auto before = d.likoin_balances();
    const auto oracle = distribution_oracle(before, converter, amount);
    const auto receipt = d.convert_likoin_to_buck(converter, amount);
    REQUIRE(receipt.distribution == oracle.shares);
    REQUIRE(receipt.dust == oracle.dust);

    // |assigned - exact| < 1 for every post-deduction holder.
    cpp_int base = 0;
    std::map<AccountId, cpp_int> post;
    for (const auto& [k, v] : before) {
      cpp_int b = to_big(v.value());
      if (k == converter) b -= to_big(amount.value());
      if (b > 0) {
        post[k] = b;
        base += b;
      }
    }
    for (const auto& [k, b] : post) {
      const cpp_rational exact(to_big(amount.value()) * b, base);
      const auto it = receipt.distribution.find(k);
      const cpp_rational got = it == receipt.distribution.end() ? 0 : to_rat(it->second);
      const cpp_rational diff = got > exact ? got - exact : exact - got;
      REQUIRE(diff < 1);
      if (exact >= 1) REQUIRE(got >= 1);
    }
    check_conservation(d);
  }
}

TEST_CASE("property: random transfer sequences conserve supply") {
  std::mt19937_64 rng(7);
  TokenDomain d(id("jeff"));
  std::vector<AccountId> who;
  for (int i = 0; i < 8; ++i) who.emplace_back("acct" + std::to_string(i));
  for (int step = 0; step < 2000; ++step) {
    const auto& a = who[rng() % who.size()];
    const auto& b = who[rng() % who.size()];
    const Amount amt(rng() % 1000);
    switch (rng() % 4) {
      case 0:
        if (!amt.is_zero()) d.mint_likoin(a, amt);
        break;
      case 1:
        (void)error_of([&] { d.transfer_likoin(a, b, amt); });
        break;
      case 2:
        (void)error_of([&] { d.convert_likoin_to_buck(a, amt); });
        break;
      default:
        (void)error_of([&] { d.burn_buck(a, amt); });
        break;
    }
    check_conservation(d);
  }
}
