#include "likestarter/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "likestarter/errors.hpp"
#include "likestarter/state_hash.hpp"

namespace likestarter::sim {

namespace {

constexpr u128 kMilli = kAttoPerUnit / 1000;
constexpr u128 kCent = kAttoPerUnit / 100;

long double to_units(Amount a) {
  return static_cast<long double>(a.value()) / static_cast<long double>(kAttoPerUnit);
}

// ---- configuration ----------------------------------------------------------

double probability(const Json& v, const std::string& key) {
  if (!v.is_number()) fail(ErrorCode::ConfigError, key + " must be a number");
  const double x = v.get<double>();
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorCode::ConfigError, key + " must be within [0, 1]");
  return x;
}

std::uint64_t unsigned_value(const Json& v, const std::string& key,
                             std::uint64_t max = std::numeric_limits<std::uint64_t>::max()) {
  const bool ok = v.is_number_integer() && (v.is_number_unsigned() || v.get<std::int64_t>() >= 0);
  if (!ok) fail(ErrorCode::ConfigError, key + " must be a non-negative integer");
  const auto x = v.get<std::uint64_t>();
  if (x > max) fail(ErrorCode::ConfigError, key + " is too large");
  return x;
}

Amount units_value(const Json& v, const std::string& key) {
  if (!v.is_string()) fail(ErrorCode::ConfigError, key + " must be a decimal string");
  try {
    return Amount::parse_units(v.get<std::string>());
  } catch (const LedgerError& e) {
    fail(ErrorCode::ConfigError, key + ": " + e.what());
  }
}

std::string donor_name(std::uint32_t i, std::uint32_t n) {
  std::string digits = std::to_string(i);
  const std::size_t width = std::to_string(n == 0 ? 0 : n - 1).size();
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "donor" + digits;
}

std::vector<std::string> beneficiary_names(const ScenarioConfig& c) {
  if (!c.beneficiary_names.empty()) return c.beneficiary_names;
  std::vector<std::string> out;
  for (std::uint32_t i = 0; i < c.n_beneficiaries; ++i) out.push_back("ben" + std::to_string(i));
  return out;
}

void validate(const ScenarioConfig& c) {
  auto bad = [](const std::string& m) { fail(ErrorCode::ConfigError, m); };
  if (c.n_beneficiaries == 0) bad("n_beneficiaries must be at least 1");
  if (!c.beneficiary_names.empty() && c.beneficiary_names.size() != c.n_beneficiaries) {
    bad("beneficiary_names must list n_beneficiaries names");
  }
  if (c.step_ms == 0) bad("step_ms must be positive");
  if (c.steps > 0 && c.step_ms > std::numeric_limits<Timestamp>::max() / c.steps) {
    bad("steps * step_ms overflows the clock");
  }
  if (c.artifact_price_min.is_zero()) bad("artifact_price_min must be positive");
  if (c.artifact_price_min > c.artifact_price_max) {
    bad("artifact_price_min exceeds artifact_price_max");
  }
  if (c.policy.donate_max.is_zero()) bad("donate_max must be positive");
  if (c.artifact_supply && *c.artifact_supply == 0) bad("artifact_supply must be positive");
  if (!(c.policy.herding_gain >= 0.0) || !std::isfinite(c.policy.herding_gain)) {
    bad("herding_gain must be a finite non-negative number");
  }
  std::set<std::string> names;
  for (const auto& b : beneficiary_names(c)) {
    if (!AccountId::is_valid(b)) bad("invalid beneficiary name '" + b + "'");
    if (!names.insert(b).second) bad("duplicate beneficiary name '" + b + "'");
  }
  for (std::uint32_t i = 0; i < c.n_donors; ++i) {
    if (names.contains(donor_name(i, c.n_donors))) bad("beneficiary name collides with a donor");
  }
}

// ---- metrics ----------------------------------------------------------------

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

double like_probability(const AgentPolicy& policy, Amount total_raised) {
  const double p = policy.base_like_prob +
                   policy.herding_gain * static_cast<double>(to_units(total_raised));
  return std::clamp(p, 0.0, 1.0);
}

double gini(const std::vector<Amount>& balances) {
  if (balances.size() < 2) return 0.0;
  std::vector<long double> x;
  x.reserve(balances.size());
  for (Amount a : balances) x.push_back(static_cast<long double>(a.value()));
  std::sort(x.begin(), x.end());
  long double sum = 0, weighted = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += x[i];
    weighted += static_cast<long double>(i + 1) * x[i];
  }
  if (sum == 0) return 0.0;
  const auto n = static_cast<long double>(x.size());
  return static_cast<double>(2 * weighted / (n * sum) - (n + 1) / n);
}

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c;
  if (name == "default") {
    c.name = "default";
    return c;
  }
  if (name == "jeff") {
    c.name = "jeff";
    c.seed = 2018;
    c.n_beneficiaries = 1;
    c.beneficiary_names = {"jeff"};
    c.n_donors = 200;
    c.steps = 144;
    c.initial_deposit = Amount::parse_units("0.6");
    c.policy.base_like_prob = 0.1;
    c.policy.herding_gain = 0.01;
    c.policy.donate_prob = 0.02;
    c.policy.donate_max = Amount::whole(1);
    c.policy.convert_prob = 0.03;
    c.policy.buy_prob = 0.5;
    c.policy.transfer_prob = 0.005;
    c.policy.suggest_prob = 0.02;
    c.policy.vote_prob = 0.2;
    c.policy.artifact_prob = 0.25;
    c.artifact_price_min = Amount::whole(5);
    c.artifact_price_max = Amount::whole(50);
    return c;
  }
  fail(ErrorCode::ConfigError, "unknown scenario preset '" + std::string(name) + "'");
}

ScenarioConfig config_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::ConfigError, "scenario config must be a JSON object");
  ScenarioConfig c;
  if (j.contains("preset")) {
    if (!j.at("preset").is_string()) fail(ErrorCode::ConfigError, "preset must be a string");
    c = preset(j.at("preset").get<std::string>());
  }
  AgentPolicy& p = c.policy;
  const std::map<std::string, double*> probabilities = {
      {"base_like_prob", &p.base_like_prob}, {"donate_prob", &p.donate_prob},
      {"convert_prob", &p.convert_prob},     {"buy_prob", &p.buy_prob},
      {"transfer_prob", &p.transfer_prob},   {"suggest_prob", &p.suggest_prob},
      {"vote_prob", &p.vote_prob},           {"post_prob", &p.post_prob},
      {"artifact_prob", &p.artifact_prob},
  };
  const std::map<std::string, Amount*> amounts = {
      {"initial_deposit", &c.initial_deposit},
      {"donate_max", &p.donate_max},
      {"artifact_price_min", &c.artifact_price_min},
      {"artifact_price_max", &c.artifact_price_max},
  };
  constexpr auto u32max = std::numeric_limits<std::uint32_t>::max();
  for (const auto& [key, v] : j.items()) {
    if (key == "preset") continue;
    if (auto it = probabilities.find(key); it != probabilities.end()) {
      *it->second = probability(v, key);
    } else if (auto a = amounts.find(key); a != amounts.end()) {
      *a->second = units_value(v, key);
    } else if (key == "name") {
      if (!v.is_string()) fail(ErrorCode::ConfigError, "name must be a string");
      c.name = v.get<std::string>();
    } else if (key == "seed") {
      c.seed = unsigned_value(v, key);
    } else if (key == "n_donors") {
      c.n_donors = static_cast<std::uint32_t>(unsigned_value(v, key, u32max));
    } else if (key == "n_beneficiaries") {
      c.n_beneficiaries = static_cast<std::uint32_t>(unsigned_value(v, key, u32max));
    } else if (key == "steps") {
      c.steps = static_cast<std::uint32_t>(unsigned_value(v, key, u32max));
    } else if (key == "step_ms") {
      c.step_ms = unsigned_value(v, key);
    } else if (key == "herding_gain") {
      if (!v.is_number()) fail(ErrorCode::ConfigError, "herding_gain must be a number");
      p.herding_gain = v.get<double>();
    } else if (key == "beneficiary_names") {
      if (!v.is_array()) fail(ErrorCode::ConfigError, "beneficiary_names must be an array");
      c.beneficiary_names.clear();
      for (const auto& n : v) {
        if (!n.is_string()) fail(ErrorCode::ConfigError, "beneficiary names must be strings");
        c.beneficiary_names.push_back(n.get<std::string>());
      }
    } else if (key == "artifact_supply") {
      c.artifact_supply = v.is_null() ? std::nullopt
                                      : std::optional<std::uint64_t>(unsigned_value(v, key));
    } else if (key == "campaign") {
      c.campaign = params_from_json(v);
    } else {
      fail(ErrorCode::ConfigError, "unknown scenario key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

Json to_json(const ScenarioConfig& c) {
  const AgentPolicy& p = c.policy;
  Json names = Json::array();
  for (const auto& n : c.beneficiary_names) names.push_back(n);
  return Json{{"name", c.name},
              {"seed", c.seed},
              {"n_donors", c.n_donors},
              {"n_beneficiaries", c.n_beneficiaries},
              {"beneficiary_names", std::move(names)},
              {"steps", c.steps},
              {"step_ms", c.step_ms},
              {"initial_deposit", c.initial_deposit.to_units_string()},
              {"base_like_prob", p.base_like_prob},
              {"herding_gain", p.herding_gain},
              {"donate_prob", p.donate_prob},
              {"donate_max", p.donate_max.to_units_string()},
              {"convert_prob", p.convert_prob},
              {"buy_prob", p.buy_prob},
              {"transfer_prob", p.transfer_prob},
              {"suggest_prob", p.suggest_prob},
              {"vote_prob", p.vote_prob},
              {"post_prob", p.post_prob},
              {"artifact_prob", p.artifact_prob},
              {"artifact_price_min", c.artifact_price_min.to_units_string()},
              {"artifact_price_max", c.artifact_price_max.to_units_string()},
              {"artifact_supply", c.artifact_supply ? Json(*c.artifact_supply) : Json(nullptr)},
              {"campaign", likestarter::to_json(c.campaign)}};
}

// ---- simulator --------------------------------------------------------------

namespace {

class Simulator {
 public:
  explicit Simulator(const ScenarioConfig& c) : c_(c), rng_(c.seed), ledger_(header_for(c)) {
    ledger_.set_hash_on_submit(false);
    for (const auto& b : beneficiary_names(c)) bens_.emplace_back(b);
    for (std::uint32_t i = 0; i < c.n_donors; ++i) donors_.emplace_back(donor_name(i, c.n_donors));
    csv_ << kMetricsHeader << '\n';
  }

  ScenarioRun run() {
    setup();
    for (std::uint32_t t = 1; t <= c_.steps; ++t) step(t);
    ScenarioRun out;
    out.header = ledger_.header();
    out.envelopes = ledger_.envelopes();
    out.metrics_csv = csv_.str();
    out.state = st();
    out.state_hash = state_hash(out.state);
    for (const auto& e : out.envelopes) ++out.kind_counts[std::string(tx_kind_name(e.kind))];
    return out;
  }

 private:
  static JournalHeader header_for(const ScenarioConfig& c) {
    JournalHeader h;
    h.genesis = c.campaign;
    h.meta = Json{{"generator", "likestarter-sim"},
                  {"rng", kRngAlgorithm},
                  {"seed", c.seed},
                  {"scenario", to_json(c)}};
    return h;
  }

  const LedgerState& st() const { return ledger_.state(); }

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  bool chance(double p) { return uniform() < p; }

  void submit(const AccountId& actor, TxKind kind, Json payload) {
    std::vector<Event> events;
    try {
      events = ledger_.submit(now_, actor, kind, std::move(payload)).events;
    } catch (const LedgerError& e) {
      fail(ErrorCode::InvariantViolation,
           "simulator submitted a rejected " + std::string(tx_kind_name(kind)) + " for " +
               actor.str() + " at seq " + std::to_string(st().last_seq + 1) + ": " +
               std::string(e.name()) + ": " + e.what());
    }
    for (const auto& e : events) {
      if (e.kind != "Distributed") continue;
      const AccountId b(e.data.at("beneficiary").get<std::string>());
      const AccountId to(e.data.at("to").get<std::string>());
      Amount& got = received_[b][to];
      got = got.plus(Amount::parse(e.data.at("amount").get<std::string>()));
    }
  }

  Amount random_price() {
    const u128 span = (c_.artifact_price_max.value() - c_.artifact_price_min.value()) / kCent;
    const auto steps = static_cast<std::uint64_t>(
        std::min<u128>(span, std::numeric_limits<std::uint64_t>::max() - 1));
    return Amount(c_.artifact_price_min.value() + kCent * below(steps + 1));
  }

  void setup() {
    for (const auto& b : bens_) {
      submit(b, TxKind::CreateAccount, Json::object());
      submit(b, TxKind::StartCampaign, Json::object());
      create_post(b);
    }
    for (const auto& d : donors_) {
      submit(d, TxKind::CreateAccount, Json::object());
      if (!c_.initial_deposit.is_zero()) {
        submit(d, TxKind::Deposit, Json{{"amount", c_.initial_deposit.to_string()}});
      }
    }
    record_metrics(0);
  }

  void create_post(const AccountId& b) {
    const std::uint64_t k = post_counter_[b]++;
    submit(b, TxKind::CreatePost,
           Json{{"post_id", b.str() + "-post-" + std::to_string(k)},
                {"content_ref", "sim://" + b.str() + "/" + std::to_string(k)}});
  }

  void step(std::uint32_t t) {
    now_ = static_cast<Timestamp>(t) * c_.step_ms;
    received_.clear();
    start_balances_.clear();
    for (const auto& [b, d] : st().domains) start_balances_[b] = d.likoin_balances();
    for (const auto& b : bens_) beneficiary_turn(b);
    for (const auto& d : donors_) donor_turn(d);
    record_metrics(t);
  }

  std::vector<std::string> open_proposals(const AccountId& b) const {
    std::vector<std::string> out;
    const auto it = artifacts_of_.find(b);
    if (it == artifacts_of_.end()) return out;
    for (const auto& id : it->second) {
      const Artifact& a = st().artifacts.at(id);
      if (a.state == ArtifactState::Pricing) out.push_back(a.proposal_id);
    }
    return out;
  }

  std::vector<const Artifact*> on_sale(const AccountId& b) const {
    std::vector<const Artifact*> out;
    const auto it = artifacts_of_.find(b);
    if (it == artifacts_of_.end()) return out;
    for (const auto& id : it->second) {
      const Artifact& a = st().artifacts.at(id);
      const bool available = !a.supply_limit || a.sold < *a.supply_limit;
      if (a.state == ArtifactState::OnSale && available) out.push_back(&a);
    }
    return out;
  }

  void beneficiary_turn(const AccountId& b) {
    for (const auto& pid : open_proposals(b)) {
      if (now_ >= st().proposal(pid).min_close_at) {
        submit(b, TxKind::Finalize, Json{{"proposal_id", pid}});
      }
    }
    if (chance(c_.policy.post_prob)) create_post(b);
    if (chance(c_.policy.artifact_prob) && open_proposals(b).empty() &&
        !st().domain(b).likoin_balances().empty()) {
      const std::uint64_t k = artifact_counter_[b]++;
      const std::string id = b.str() + "-art-" + std::to_string(k);
      Json payload{{"artifact_id", id},
                   {"title", "Artifact " + std::to_string(k) + " by " + b.str()},
                   {"content_ref", "sim://" + id},
                   {"suggested_price", random_price().to_string()}};
      if (c_.artifact_supply) payload["supply_limit"] = *c_.artifact_supply;
      submit(b, TxKind::ProposeArtifact, std::move(payload));
      artifacts_of_[b].push_back(id);
    }
  }

  void donor_turn(const AccountId& d) {
    const AccountId& b = bens_[below(bens_.size())];
    const AgentPolicy& p = c_.policy;
    const std::string bs = b.str();

    {
      const Campaign& camp = st().campaign(b);
      if (chance(like_probability(p, camp.total_raised))) {
        const bool can = camp.status == CampaignStatus::Open && !camp.posts.empty() &&
                         st().account(d).currency >= camp.like_price &&
                         !crowdsale::likoins_for(camp.like_price, camp.likoin_rate).is_zero();
        if (can) {
          const std::string post = camp.posts[below(camp.posts.size())];
          submit(d, TxKind::LikePost, Json{{"post_id", post}});
        }
      }
    }

    if (chance(p.donate_prob)) {
      const Campaign& camp = st().campaign(b);
      const u128 slots = p.donate_max.value() / kMilli;
      const Amount amount =
          slots == 0 ? p.donate_max
                     : Amount(kMilli * (1 + below(static_cast<std::uint64_t>(
                                                std::min<u128>(slots, 1ULL << 62)))));
      const bool can = camp.status == CampaignStatus::Open &&
                       st().account(d).currency >= amount &&
                       !crowdsale::likoins_for(amount, camp.likoin_rate).is_zero();
      if (can) {
        submit(d, TxKind::Donate, Json{{"beneficiary", bs}, {"amount", amount.to_string()}});
      }
    }

    if (chance(p.convert_prob)) {
      const TokenDomain& dom = st().domain(b);
      const Amount held = dom.balance_of(d, TokenKind::Likoin);
      if (!held.is_zero()) {
        // Convert just enough for the cheapest artifact on sale, else a slice.
        std::optional<Amount> target;
        for (const Artifact* a : on_sale(b)) {
          if (!target || *a->price < *target) target = *a->price;
        }
        const Amount bucks = dom.balance_of(d, TokenKind::Buck);
        Amount want;
        if (target && *target > bucks) {
          const Ratio& rate = dom.buck_rate();
          const MulDivResult need = mul_div(target->minus(bucks).value(), rate.den(), rate.num());
          want = std::min(held, Amount(need.quotient + (need.remainder != 0 ? 1 : 0)));
        } else {
          const u128 slice = mul_div(held.value(), 5 + below(46), 100).quotient;
          want = Amount(std::max<u128>(slice, 1));
        }
        if (!dom.buck_rate().apply_floor(want).is_zero()) {
          submit(d, TxKind::Convert, Json{{"beneficiary", bs}, {"amount", want.to_string()}});
        }
      }
    }

    if (chance(p.buy_prob)) {
      const Amount bucks = st().domain(b).balance_of(d, TokenKind::Buck);
      std::vector<std::string> affordable;
      for (const Artifact* a : on_sale(b)) {
        if (*a->price <= bucks) affordable.push_back(a->artifact_id);
      }
      if (!affordable.empty()) {
        const std::string id = affordable[below(affordable.size())];
        submit(d, TxKind::BuyArtifact, Json{{"artifact_id", id}, {"beneficiary", bs}});
      }
    }

    if (chance(p.transfer_prob) && donors_.size() > 1) {
      const Amount held = st().domain(b).balance_of(d, TokenKind::Likoin);
      if (!held.is_zero()) {
        const std::size_t self = static_cast<std::size_t>(&d - donors_.data());
        std::size_t k = below(donors_.size() - 1);
        if (k >= self) ++k;
        const u128 part = mul_div(held.value(), 1 + below(50), 100).quotient;
        const Amount amount(std::max<u128>(part, 1));
        submit(d, TxKind::TransferLikoin,
               Json{{"beneficiary", bs}, {"to", donors_[k].str()}, {"amount", amount.to_string()}});
      }
    }

    for (const auto& pid : open_proposals(b)) {
      const Proposal& prop = st().proposal(pid);
      if (!prop.is_member(d)) continue;
      if (chance(p.suggest_prob)) {
        const Amount base = prop.suggestions.at(1).price;
        const u128 scaled = mul_div(base.value(), 50 + below(101), 100).quotient;
        const Amount price(std::max<u128>(scaled / kCent * kCent, kCent));
        bool fresh = true;
        for (const auto& [sid, s] : prop.suggestions) fresh = fresh && s.price != price;
        if (fresh) {
          submit(d, TxKind::SuggestPrice,
                 Json{{"proposal_id", pid}, {"price", price.to_string()}});
        }
      } else if (chance(p.vote_prob)) {
        const auto sid = static_cast<SuggestionId>(1 + below(prop.suggestions.size()));
        const auto current = prop.votes.find(d);
        if (current == prop.votes.end() || current->second != sid) {
          submit(d, TxKind::Vote, Json{{"proposal_id", pid}, {"suggestion_id", sid}});
        }
      }
    }
  }

  void record_metrics(std::uint32_t step) {
    for (const auto& b : bens_) {
      const Campaign& camp = st().campaign(b);
      const TokenDomain& dom = st().domain(b);
      std::uint64_t sold = 0;
      if (auto it = artifacts_of_.find(b); it != artifacts_of_.end()) {
        for (const auto& id : it->second) sold += st().artifacts.at(id).sold;
      }
      std::vector<Amount> holdings;
      for (const auto& [who, bal] : dom.likoin_balances()) holdings.push_back(bal);

      double yield_sum = 0;
      std::size_t holders = 0;
      if (auto it = start_balances_.find(b); it != start_balances_.end()) {
        const auto& got = received_[b];
        for (const auto& [who, bal] : it->second) {
          const auto r = got.find(who);
          const long double in = r == got.end() ? 0 : static_cast<long double>(r->second.value());
          yield_sum += static_cast<double>(in / static_cast<long double>(bal.value()));
          ++holders;
        }
      }
      csv_ << step << ',' << b.str() << ',' << camp.total_raised.to_string() << ','
           << dom.likoin_total().to_string() << ',' << dom.buck_total().to_string() << ','
           << camp.escrow.to_string() << ',' << sold << ',' << fmt(gini(holdings)) << ','
           << fmt(holders == 0 ? 0.0 : yield_sum / static_cast<double>(holders)) << '\n';
    }
  }

  ScenarioConfig c_;
  std::mt19937_64 rng_;
  Ledger ledger_;
  Timestamp now_ = 0;
  std::vector<AccountId> bens_;
  std::vector<AccountId> donors_;
  std::map<AccountId, std::uint64_t> post_counter_;
  std::map<AccountId, std::uint64_t> artifact_counter_;
  std::map<AccountId, std::vector<std::string>> artifacts_of_;
  std::map<AccountId, std::map<AccountId, Amount>> start_balances_;
  std::map<AccountId, std::map<AccountId, Amount>> received_;
  std::ostringstream csv_;
};

}  // namespace

ScenarioRun run_scenario(const ScenarioConfig& config) {
  validate(config);
  return Simulator(config).run();
}

void write_run(const ScenarioRun& run, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  write_journal(out_dir / "journal.jsonl", run.header, run.envelopes);
  std::ofstream csv(out_dir / "metrics.csv", std::ios::binary | std::ios::trunc);
  csv << run.metrics_csv;
  csv.flush();
  if (!csv) fail(ErrorCode::IoError, "cannot write " + (out_dir / "metrics.csv").string());
}

// ---- analyzer ---------------------------------------------------------------

namespace {

class Analyzer {
 public:
  Analyzer(const JournalContents& journal, const AnalyzeOptions& options)
      : journal_(journal), options_(options), engine_(journal.header.genesis) {}

  Report run() {
    bool replayed = true;
    for (const auto& env : journal_.envelopes) {
      const std::string kind(tx_kind_name(env.kind));
      ++report_.kind_counts[kind];
      ++report_.envelopes;
      const std::optional<AccountId> touched = touched_domain(env);
      try {
        engine_.apply(env);
      } catch (const LedgerError& e) {
        violate("replayable", env.seq, kind + " rejected: " + std::string(e.name()) + ": " + e.what());
        replayed = false;
        break;
      }
      if (options_.tamper) options_.tamper(env.seq, engine_.mutable_state_for_testing());
      check(env, touched);
      if (touched) {
        if (auto it = engine_.state().domains.find(*touched); it != engine_.state().domains.end()) {
          shadow_.insert_or_assign(*touched, it->second);
        }
      }
    }
    const std::uint64_t last = engine_.state().last_seq;
    report_.final_state_hash = state_hash(engine_.state());
    check_ownership(last);
    if (replayed) {
      try {
        report_.replay_hash = replay(journal_).state_hash;
      } catch (const LedgerError& e) {
        violate("replayable", last, std::string(e.name()) + ": " + e.what());
      }
      if (report_.replay_hash != report_.final_state_hash) {
        violate("replay_hash", last,
                "checked state " + report_.final_state_hash + " != replay " + report_.replay_hash);
      }
    }
    return report_;
  }

 private:
  const LedgerState& st() const { return engine_.state(); }

  void violate(std::string invariant, std::uint64_t seq, std::string detail) {
    if (report_.violations.size() < options_.max_violations) {
      report_.violations.push_back(Violation{std::move(invariant), seq, std::move(detail)});
    }
  }

  // The one domain an envelope may change, resolved against the pre-state.
  std::optional<AccountId> touched_domain(const TransactionEnvelope& env) const {
    const Json& p = env.payload;
    auto text = [&](const char* key) -> std::optional<std::string> {
      if (!p.is_object() || !p.contains(key) || !p.at(key).is_string()) return std::nullopt;
      return p.at(key).get<std::string>();
    };
    switch (env.kind) {
      case TxKind::CreateAccount:
      case TxKind::Deposit:
        return std::nullopt;
      case TxKind::StartCampaign:
      case TxKind::CloseCampaign:
      case TxKind::WithdrawFunds:
      case TxKind::CreatePost:
      case TxKind::ProposeArtifact:
        return env.actor;
      case TxKind::Donate:
      case TxKind::TransferLikoin:
      case TxKind::Approve:
      case TxKind::TransferFrom:
      case TxKind::Convert:
        if (auto b = text("beneficiary"); b && AccountId::is_valid(*b)) return AccountId(*b);
        return std::nullopt;
      case TxKind::LikePost:
        if (auto id = text("post_id"); id && st().posts.contains(*id)) {
          return st().posts.at(*id).beneficiary;
        }
        return std::nullopt;
      case TxKind::RemoveArtifact:
      case TxKind::BuyArtifact:
        if (auto id = text("artifact_id"); id && st().artifacts.contains(*id)) {
          return st().artifacts.at(*id).beneficiary;
        }
        return std::nullopt;
      case TxKind::SuggestPrice:
      case TxKind::Vote:
      case TxKind::Finalize:
        if (auto id = text("proposal_id"); id && st().proposals.contains(*id)) {
          return st().proposals.at(*id).beneficiary;
        }
        return std::nullopt;
    }
    return std::nullopt;
  }

  void check(const TransactionEnvelope& env, const std::optional<AccountId>& touched) {
    const std::uint64_t seq = env.seq;
    check_conservation(seq);
    check_currency(seq);
    check_isolation(seq, touched);
    if (touched) {
      const auto pre = shadow_.find(*touched);
      const auto post = st().domains.find(*touched);
      if (pre != shadow_.end() && post != st().domains.end()) {
        check_tokens(env, pre->second, post->second);
        if (env.kind == TxKind::Convert) check_autocatalysis(env, pre->second, post->second);
        if (env.kind == TxKind::ProposeArtifact) record_snapshots(seq, pre->second);
      } else if (post != st().domains.end() && env.kind == TxKind::StartCampaign) {
        if (!post->second.likoin_total().is_zero() || !post->second.buck_total().is_zero()) {
          violate("conservation", seq, "new domain " + touched->str() + " is not empty");
        }
      }
    }
    check_snapshots(seq);
    if (env.kind == TxKind::BuyArtifact) {
      const std::string id = env.payload.at("artifact_id").get<std::string>();
      ++fold_[id][env.actor];
      check_owners(seq, id);
    }
  }

  void check_conservation(std::uint64_t seq) {
    for (const auto& [b, d] : st().domains) {
      Amount likoins = d.reserve();
      bool zero_entry = false;
      for (const auto& [who, bal] : d.likoin_balances()) {
        likoins = likoins.plus(bal);
        zero_entry = zero_entry || bal.is_zero();
      }
      Amount bucks;
      for (const auto& [who, bal] : d.buck_balances()) {
        bucks = bucks.plus(bal);
        zero_entry = zero_entry || bal.is_zero();
      }
      if (likoins != d.likoin_total()) {
        violate("conservation", seq,
                b.str() + ": likoin balances + reserve = " + likoins.to_string() +
                    " but likoin_total = " + d.likoin_total().to_string());
      }
      if (bucks != d.buck_total()) {
        violate("conservation", seq,
                b.str() + ": buck balances = " + bucks.to_string() + " but buck_total = " +
                    d.buck_total().to_string());
      }
      if (zero_entry) violate("conservation", seq, b.str() + ": zero balance entry stored");
    }
  }

  void check_currency(std::uint64_t seq) {
    Amount held;
    for (const auto& [id, a] : st().accounts) held = held.plus(a.currency);
    for (const auto& [b, c] : st().campaigns) {
      held = held.plus(c.escrow);
      if (c.escrow > c.total_raised) {
        violate("escrow_bound", seq, b.str() + ": escrow exceeds total_raised");
      }
    }
    if (held != st().currency_issued) {
      violate("currency_conservation", seq,
              "accounts + escrow = " + held.to_string() + " but issued = " +
                  st().currency_issued.to_string());
    }
  }

  void check_isolation(std::uint64_t seq, const std::optional<AccountId>& touched) {
    for (const auto& [b, d] : st().domains) {
      if (touched && b == *touched) continue;
      const auto it = shadow_.find(b);
      if (it == shadow_.end() || !(it->second == d)) {
        violate("isolation", seq, "domain " + b.str() + " changed by an envelope for " +
                                      (touched ? touched->str() : std::string("no domain")));
        shadow_.insert_or_assign(b, d);
      }
    }
    for (auto it = shadow_.begin(); it != shadow_.end();) {
      if (!st().domains.contains(it->first)) {
        violate("isolation", seq, "domain " + it->first.str() + " disappeared");
        it = shadow_.erase(it);
      } else {
        ++it;
      }
    }
  }

  // Bucks only appear through conversion and only disappear through
  // purchases; Likoins are only minted by donations.
  void check_tokens(const TransactionEnvelope& env, const TokenDomain& pre,
                    const TokenDomain& post) {
    const std::uint64_t seq = env.seq;
    const bool mints = env.kind == TxKind::LikePost || env.kind == TxKind::Donate;
    if (!mints && post.likoin_total() != pre.likoin_total()) {
      violate("likoin_supply", seq,
              std::string(tx_kind_name(env.kind)) + " changed likoin_total");
    }
    if (mints && post.likoin_total() < pre.likoin_total()) {
      violate("likoin_supply", seq, "donation reduced likoin_total");
    }
    std::map<AccountId, Amount> expected = pre.buck_balances();
    Amount expected_total = pre.buck_total();
    if (env.kind == TxKind::Convert) {
      const Amount in = Amount::parse(env.payload.at("amount").get<std::string>());
      const Amount out = pre.buck_rate().apply_floor(in);
      Amount& mine = expected[env.actor];
      mine = mine.plus(out);
      expected_total = expected_total.plus(out);
    } else if (env.kind == TxKind::BuyArtifact) {
      const Artifact& a = st().artifact(env.payload.at("artifact_id").get<std::string>());
      const Amount price = a.price.value_or(Amount());
      const auto mine = expected.find(env.actor);
      if (mine == expected.end() || mine->second < price) {
        violate("buck_irreversibility", seq, "purchase exceeded the buyer's Bucks");
        return;
      }
      mine->second = mine->second.minus(price);
      if (mine->second.is_zero()) expected.erase(mine);
      expected_total = expected_total.minus(price);
      if (post.likoin_balances() != pre.likoin_balances()) {
        violate("buck_irreversibility", seq, "purchase moved Likoins");
      }
    }
    if (post.buck_balances() != expected || post.buck_total() != expected_total) {
      violate("buck_irreversibility", seq,
              std::string(tx_kind_name(env.kind)) + " moved Bucks outside conversion or purchase");
    }
  }

  void check_autocatalysis(const TransactionEnvelope& env, const TokenDomain& pre,
                           const TokenDomain& post) {
    ++report_.conversions;
    const Amount amount = Amount::parse(env.payload.at("amount").get<std::string>());
    std::map<AccountId, Amount> remaining = pre.likoin_balances();
    const auto mine = remaining.find(env.actor);
    if (mine == remaining.end() || mine->second < amount) return;  // caught by replay
    mine->second = mine->second.minus(amount);
    if (mine->second.is_zero()) remaining.erase(mine);
    Amount base;
    for (const auto& [who, bal] : remaining) base = base.plus(bal);
    for (const auto& [who, bal] : remaining) {
      if (who == env.actor) continue;
      ++report_.autocatalysis_checks;
      const Amount before = pre.balance_of(who, TokenKind::Likoin);
      const Amount after = post.balance_of(who, TokenKind::Likoin);
      const bool whole_share = compare_products(amount.value(), bal.value(), 1, base.value()) >= 0;
      const bool ok = whole_share ? after > before : after >= before;
      if (!ok) {
        ++report_.autocatalysis_counterexamples;
        violate("autocatalysis", env.seq,
                who.str() + " went from " + before.to_string() + " to " + after.to_string());
      }
    }
  }

  void record_snapshots(std::uint64_t seq, const TokenDomain& pre) {
    for (const auto& [id, p] : st().proposals) {
      if (snapshots_.contains(id)) continue;
      Amount total;
      for (const auto& [who, bal] : pre.likoin_balances()) total = total.plus(bal);
      if (p.snapshot->balances != pre.likoin_balances() || p.snapshot->total != total) {
        violate("snapshot_immunity", seq, id + ": snapshot differs from the balances at proposal");
      }
      snapshots_.emplace(id, *p.snapshot);
      open_.insert(id);
    }
  }

  void check_snapshots(std::uint64_t seq) {
    for (auto it = open_.begin(); it != open_.end();) {
      const auto p = st().proposals.find(*it);
      if (p == st().proposals.end()) {
        violate("snapshot_immunity", seq, *it + ": proposal disappeared");
        it = open_.erase(it);
        continue;
      }
      if (!(*p->second.snapshot == snapshots_.at(*it))) {
        violate("snapshot_immunity", seq, *it + ": snapshot changed after proposal");
        snapshots_.insert_or_assign(*it, *p->second.snapshot);
      }
      it = p->second.status == ProposalStatus::Open ? std::next(it) : open_.erase(it);
    }
  }

  void check_owners(std::uint64_t seq, const std::string& id) {
    const auto a = st().artifacts.find(id);
    if (a == st().artifacts.end()) return;
    const auto it = fold_.find(id);
    const std::map<AccountId, std::uint64_t> expected =
        it == fold_.end() ? std::map<AccountId, std::uint64_t>{} : it->second;
    std::uint64_t copies = 0;
    for (const auto& [who, n] : expected) copies += n;
    if (a->second.owners != expected || a->second.sold != copies) {
      violate("ownership_fold", seq, id + ": owners differ from the purchase history");
    }
  }

  void check_ownership(std::uint64_t seq) {
    for (const auto& [id, a] : st().artifacts) check_owners(seq, id);
    for (const auto& [id, owners] : fold_) {
      if (!st().artifacts.contains(id)) {
        violate("ownership_fold", seq, id + ": purchased artifact is missing");
      }
    }
  }

  const JournalContents& journal_;
  const AnalyzeOptions& options_;
  Engine engine_;
  Report report_;
  std::map<AccountId, TokenDomain> shadow_;
  std::map<std::string, Snapshot> snapshots_;
  std::set<std::string> open_;
  std::map<std::string, std::map<AccountId, std::uint64_t>> fold_;
};

}  // namespace

Report analyze(const JournalContents& journal, const AnalyzeOptions& options) {
  return Analyzer(journal, options).run();
}

Json to_json(const Report& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back(Json{{"invariant", v.invariant}, {"seq", v.seq}, {"detail", v.detail}});
  }
  return Json{{"clean", r.clean()},
              {"envelopes", r.envelopes},
              {"final_state_hash", r.final_state_hash},
              {"replay_hash", r.replay_hash},
              {"conversions", r.conversions},
              {"autocatalysis_checks", r.autocatalysis_checks},
              {"autocatalysis_counterexamples", r.autocatalysis_counterexamples},
              {"kind_counts", r.kind_counts},
              {"violations", std::move(violations)}};
}

void require_clean(const Report& report) {
  if (report.clean()) return;
  const Violation& v = report.violations.front();
  fail(ErrorCode::InvariantViolation,
       v.invariant + " violated at seq " + std::to_string(v.seq) + ": " + v.detail);
}

}  // namespace likestarter::sim
