#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "likestarter/journal.hpp"

namespace likestarter::sim {

/// Recorded in the journal header as meta.rng. Draws: u = (x >> 11) * 2^-53
/// for probabilities, x % n for choices, one draw per decision in the fixed
/// loop order documented in run_scenario.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

inline constexpr const char* kMetricsHeader =
    "step,beneficiary,total_raised,likoin_total,buck_total,escrow,artifacts_sold,gini,"
    "mean_holder_yield";

struct AgentPolicy {
  double base_like_prob = 0.05;
  /// Like probability added per whole currency unit the campaign has raised.
  double herding_gain = 0.001;
  double donate_prob = 0.01;
  /// Free donations are uniform in (0, donate_max], in steps of 0.001 units.
  Amount donate_max = Amount::whole(1);
  double convert_prob = 0.05;
  double buy_prob = 0.5;
  double transfer_prob = 0.01;
  double suggest_prob = 0.05;
  double vote_prob = 0.2;
  /// Per beneficiary and step.
  double post_prob = 0.1;
  double artifact_prob = 0.2;

  friend bool operator==(const AgentPolicy&, const AgentPolicy&) = default;
};

struct ScenarioConfig {
  std::string name = "custom";
  std::uint64_t seed = 1;
  std::uint32_t n_donors = 50;
  std::uint32_t n_beneficiaries = 3;
  /// Optional explicit beneficiary names; must match n_beneficiaries.
  std::vector<std::string> beneficiary_names;
  std::uint32_t steps = 100;
  std::uint64_t step_ms = 3'600'000;
  Amount initial_deposit = Amount::whole(10);
  AgentPolicy policy;
  Amount artifact_price_min = Amount::whole(1);
  Amount artifact_price_max = Amount::whole(20);
  std::optional<std::uint64_t> artifact_supply;
  /// Genesis parameters; campaigns start with these defaults.
  LedgerParams campaign;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Keys mirror the struct fields; policy fields sit at top level, amounts are
/// whole-unit decimal strings, "campaign" takes ledger parameters. A "preset"
/// key starts from a named preset before applying the other keys. Unknown
/// keys and out-of-range values raise ConfigError.
ScenarioConfig config_from_json(const Json& j);
Json to_json(const ScenarioConfig& config);

/// "default" or "jeff" (one beneficiary, 200 donors, ends above 100 units
/// raised with artifacts sold). Throws ConfigError for other names.
ScenarioConfig preset(std::string_view name);

/// Herding policy: min(1, base_like_prob + herding_gain * total_raised in
/// whole units).
double like_probability(const AgentPolicy& policy, Amount total_raised);

/// Population Gini coefficient of the given balances; 0 for fewer than two.
double gini(const std::vector<Amount>& balances);

struct ScenarioRun {
  JournalHeader header;
  std::vector<TransactionEnvelope> envelopes;
  std::string metrics_csv;
  LedgerState state;
  std::string state_hash;
  std::map<std::string, std::uint64_t> kind_counts;
};

/// Runs the agent loop. Step 0 creates accounts, campaigns and first posts;
/// every later step advances the clock by step_ms, lets each beneficiary
/// finalize due proposals, post and propose, then lets each donor in order
/// like, donate, convert, buy, transfer and take part in open votes. Agents
/// check preconditions, so a rejected envelope is an internal error
/// (InvariantViolation). Emits one metrics row per step and beneficiary.
ScenarioRun run_scenario(const ScenarioConfig& config);

/// Writes journal.jsonl and metrics.csv into `out_dir`, creating it.
void write_run(const ScenarioRun& run, const std::filesystem::path& out_dir);

struct Violation {
  std::string invariant;
  std::uint64_t seq = 0;
  std::string detail;
};

struct Report {
  std::uint64_t envelopes = 0;
  std::string final_state_hash;
  /// Hash from the journal module's independent replay.
  std::string replay_hash;
  std::uint64_t conversions = 0;
  /// Holder checks performed by the autocatalysis scan.
  std::uint64_t autocatalysis_checks = 0;
  std::uint64_t autocatalysis_counterexamples = 0;
  std::map<std::string, std::uint64_t> kind_counts;
  std::vector<Violation> violations;

  bool clean() const { return violations.empty(); }
};

struct AnalyzeOptions {
  /// Called after each envelope is applied and before it is checked. Used to
  /// fork a corrupted replay in detector tests.
  std::function<void(std::uint64_t seq, LedgerState& state)> tamper;
  std::size_t max_violations = 100;
};

/// Replays the journal and re-checks after every envelope: per-domain token
/// conservation, currency conservation, escrow bounds, isolation of untouched
/// domains, Buck irreversibility, snapshot immunity, and the autocatalysis
/// property of conversions; at the end the artifact ownership fold and the
/// replay hash.
Report analyze(const JournalContents& journal, const AnalyzeOptions& options = {});
Json to_json(const Report& report);

/// Throws InvariantViolation naming the first violated invariant and its seq.
void require_clean(const Report& report);

}  // namespace likestarter::sim
