#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "likestarter/journal.hpp"

namespace httplib {
class Server;
}

namespace likestarter {

struct ServiceConfig {
  /// Journal file; memory-only when empty.
  std::optional<std::filesystem::path> journal;
  /// Genesis parameters for a new journal. An existing journal keeps its own.
  LedgerParams params;
  /// Enables POST /deposit.
  bool faucet = false;
  /// Logical clock used when a request carries no "timestamp". Defaults to
  /// wall-clock milliseconds; the writer never lets time run backwards.
  std::function<Timestamp()> clock;
};

/// HTTP facade over a Ledger. Mutations are queued to one writer thread and
/// answered after the journal append; reads are served from an immutable
/// state snapshot published after every commit.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listener; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call bind() first.
  void run();
  void stop();

  std::shared_ptr<const LedgerState> state() const;
  std::vector<std::string> warnings() const { return warnings_; }

  /// "host:port" or ":port".
  static std::pair<std::string, int> parse_listen(const std::string& listen);

 private:
  struct Reply {
    int status = 200;
    Json body;
  };
  using Task = std::function<void()>;

  void routes();
  void writer_loop();
  /// Queues an envelope and waits for its commit or rejection.
  Reply submit(const AccountId& actor, TxKind kind, Json payload,
               std::optional<Timestamp> timestamp);
  void publish(std::string hash = {});
  std::optional<AccountId> session(const std::string& authorization) const;

  ServiceConfig config_;
  std::unique_ptr<httplib::Server> server_;
  std::unique_ptr<Ledger> ledger_;
  std::vector<std::string> warnings_;

  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const LedgerState> snapshot_;
  std::string snapshot_hash_;

  mutable std::mutex sessions_mutex_;
  std::map<std::string, AccountId> sessions_;

  std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::deque<Task> queue_;
  bool stopping_ = false;
  std::thread writer_;
};

}  // namespace likestarter
