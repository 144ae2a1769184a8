#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace likestarter {

/// Opaque account identifier: 1-64 printable ASCII characters.
class AccountId {
 public:
  AccountId() = default;
  explicit AccountId(std::string id);

  static bool is_valid(std::string_view id) noexcept;

  const std::string& str() const noexcept { return id_; }
  bool empty() const noexcept { return id_.empty(); }

  friend auto operator<=>(const AccountId&, const AccountId&) = default;

 private:
  std::string id_;
};

/// Logical milliseconds, supplied by the submitter and validated monotone.
using Timestamp = std::uint64_t;

}  // namespace likestarter
