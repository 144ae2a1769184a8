#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "likestarter/account_id.hpp"

namespace likestarter {

using Json = nlohmann::json;

/// Audit record emitted by an applied envelope. Events are a pure function of
/// the prior state and the envelope.
struct Event {
  std::uint64_t seq = 0;
  std::string kind;
  Json data;

  friend bool operator==(const Event&, const Event&) = default;
};

Json to_json(const Event& event);
Event event_from_json(const Json& j);

/// Per-transaction context threaded through the module operations.
class TxContext {
 public:
  TxContext(std::uint64_t seq, Timestamp timestamp, std::vector<Event>& sink)
      : seq_(seq), timestamp_(timestamp), sink_(&sink) {}

  std::uint64_t seq() const { return seq_; }
  Timestamp timestamp() const { return timestamp_; }

  void emit(std::string kind, Json data) const {
    sink_->push_back(Event{seq_, std::move(kind), std::move(data)});
  }

 private:
  std::uint64_t seq_;
  Timestamp timestamp_;
  std::vector<Event>* sink_;
};

}  // namespace likestarter
