#include "likestarter/account_id.hpp"

#include "likestarter/errors.hpp"

namespace likestarter {

AccountId::AccountId(std::string id) : id_(std::move(id)) {
  if (!is_valid(id_)) fail(ErrorCode::ValidationError, "invalid account id '" + id_ + "'");
}

bool AccountId::is_valid(std::string_view id) noexcept {
  if (id.empty() || id.size() > 64) return false;
  for (char ch : id) {
    if (ch < 0x20 || ch > 0x7e) return false;
  }
  return true;
}

}  // namespace likestarter
