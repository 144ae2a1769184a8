#include "likestarter/errors.hpp"

namespace likestarter {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::MalformedEnvelope: return "MalformedEnvelope";
    case ErrorCode::TimestampRegression: return "TimestampRegression";
    case ErrorCode::DuplicateAccount: return "DuplicateAccount";
    case ErrorCode::UnknownAccount: return "UnknownAccount";
    case ErrorCode::ZeroAmount: return "ZeroAmount";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InsufficientBalance: return "InsufficientBalance";
    case ErrorCode::SelfTransfer: return "SelfTransfer";
    case ErrorCode::InsufficientAllowance: return "InsufficientAllowance";
    case ErrorCode::CampaignAlreadyOpen: return "CampaignAlreadyOpen";
    case ErrorCode::ZeroParameter: return "ZeroParameter";
    case ErrorCode::NoCampaign: return "NoCampaign";
    case ErrorCode::AlreadyClosed: return "AlreadyClosed";
    case ErrorCode::CampaignClosed: return "CampaignClosed";
    case ErrorCode::UnknownPost: return "UnknownPost";
    case ErrorCode::DuplicatePost: return "DuplicatePost";
    case ErrorCode::InsufficientFunds: return "InsufficientFunds";
    case ErrorCode::SelfDonation: return "SelfDonation";
    case ErrorCode::InsufficientEscrow: return "InsufficientEscrow";
    case ErrorCode::NotBeneficiary: return "NotBeneficiary";
    case ErrorCode::ZeroPrice: return "ZeroPrice";
    case ErrorCode::UnknownArtifact: return "UnknownArtifact";
    case ErrorCode::DuplicateArtifact: return "DuplicateArtifact";
    case ErrorCode::AlreadyRemoved: return "AlreadyRemoved";
    case ErrorCode::NotOnSale: return "NotOnSale";
    case ErrorCode::InsufficientBucks: return "InsufficientBucks";
    case ErrorCode::SupplyExhausted: return "SupplyExhausted";
    case ErrorCode::WrongDomain: return "WrongDomain";
    case ErrorCode::UnknownProposal: return "UnknownProposal";
    case ErrorCode::ProposalClosed: return "ProposalClosed";
    case ErrorCode::NotMember: return "NotMember";
    case ErrorCode::DuplicatePrice: return "DuplicatePrice";
    case ErrorCode::UnknownSuggestion: return "UnknownSuggestion";
    case ErrorCode::TooEarly: return "TooEarly";
    case ErrorCode::NotAuthorized: return "NotAuthorized";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::CorruptJournal: return "CorruptJournal";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

ErrorClass error_class(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ValidationError:
    case ErrorCode::MalformedEnvelope:
    case ErrorCode::ConfigError:
      return ErrorClass::Validation;
    case ErrorCode::NotBeneficiary:
    case ErrorCode::NotAuthorized:
      return ErrorClass::Authorization;
    case ErrorCode::UnknownAccount:
    case ErrorCode::NoCampaign:
    case ErrorCode::UnknownPost:
    case ErrorCode::UnknownArtifact:
    case ErrorCode::UnknownProposal:
    case ErrorCode::UnknownSuggestion:
      return ErrorClass::NotFound;
    case ErrorCode::IoError:
    case ErrorCode::CorruptJournal:
      return ErrorClass::Io;
    default:
      return ErrorClass::Domain;
  }
}

}  // namespace likestarter
