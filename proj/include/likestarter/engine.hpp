#pragma once

#include <vector>

#include "likestarter/envelope.hpp"
#include "likestarter/events.hpp"
#include "likestarter/ledger_state.hpp"

namespace likestarter {

/// Deterministic state machine over LedgerState. apply() is
/// validate-then-commit: it either performs exactly one module operation and
/// returns its events, or throws LedgerError with the state untouched.
class Engine {
 public:
  explicit Engine(LedgerParams params = {});
  explicit Engine(LedgerState state);

  const LedgerState& state() const { return state_; }

  /// Requires env.seq == state().last_seq + 1 and a non-decreasing timestamp.
  std::vector<Event> apply(const TransactionEnvelope& env);

  /// Test hook for invariant-checker sanity tests: direct mutable access.
  LedgerState& mutable_state_for_testing() { return state_; }

 private:
  void dispatch(const TransactionEnvelope& env, const TxContext& tx);

  LedgerState state_;
};

}  // namespace likestarter
