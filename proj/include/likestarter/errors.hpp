#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace likestarter {

// Machine-readable error codes. The names are surfaced verbatim by the
// HTTP service and the CLI, so renaming one is a wire-format change.
enum class ErrorCode {
  ValidationError,
  MalformedEnvelope,
  TimestampRegression,
  DuplicateAccount,
  UnknownAccount,
  ZeroAmount,
  Overflow,
  InsufficientBalance,
  SelfTransfer,
  InsufficientAllowance,
  CampaignAlreadyOpen,
  ZeroParameter,
  NoCampaign,
  AlreadyClosed,
  CampaignClosed,
  UnknownPost,
  DuplicatePost,
  InsufficientFunds,
  SelfDonation,
  InsufficientEscrow,
  NotBeneficiary,
  ZeroPrice,
  UnknownArtifact,
  DuplicateArtifact,
  AlreadyRemoved,
  NotOnSale,
  InsufficientBucks,
  SupplyExhausted,
  WrongDomain,
  UnknownProposal,
  ProposalClosed,
  NotMember,
  DuplicatePrice,
  UnknownSuggestion,
  TooEarly,
  NotAuthorized,
  IoError,
  CorruptJournal,
  ConfigError,
  InvariantViolation,
};

// Coarse classification used to pick HTTP statuses and CLI exit codes.
enum class ErrorClass {
  Validation,     // request shape is wrong
  Authorization,  // caller may not do this
  NotFound,       // referenced entity does not exist
  Domain,         // well-formed request rejected by ledger rules
  Io,             // journal or filesystem failure
};

std::string_view error_name(ErrorCode code) noexcept;
ErrorClass error_class(ErrorCode code) noexcept;

class LedgerError : public std::runtime_error {
 public:
  LedgerError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw LedgerError(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace likestarter
