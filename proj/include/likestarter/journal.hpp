#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "likestarter/engine.hpp"
#include "likestarter/envelope.hpp"
#include "likestarter/ledger_state.hpp"

namespace likestarter {

inline constexpr const char* kJournalFormat = "likestarter-journal";
inline constexpr int kJournalVersion = 1;
inline constexpr const char* kHashAlgorithm = "sha256";

/// First line of every journal.
struct JournalHeader {
  LedgerParams genesis;
  /// Free-form metadata, e.g. the simulator's RNG identifier and seed.
  Json meta = Json::object();
};

/// File layout: UTF-8, one JSON object per '\n'-terminated line.
///
///   line 1: {"format","genesis","hash_algorithm","meta","version"}
///   line n: {"actor","digest","kind","payload","seq","ts"}
///
/// Keys are written in sorted order. `digest` chains the records:
/// digest_n = sha256_hex(digest_{n-1} + record_n without its digest), with
/// digest_0 = sha256_hex(header line without '\n'). A flipped byte anywhere
/// breaks the chain.
std::string encode_header(const JournalHeader& header);
std::string encode_record(const TransactionEnvelope& env, const std::string& prev_digest,
                          std::string* digest_out = nullptr);

struct JournalContents {
  JournalHeader header;
  std::vector<TransactionEnvelope> envelopes;
  /// Digest of the last complete record (or of the header).
  std::string tip_digest;
  /// Byte length of the complete prefix; a torn tail lies beyond it.
  std::uintmax_t complete_bytes = 0;
  std::vector<std::string> warnings;
};

/// Parses a journal. A torn final line (no terminating '\n') is dropped with
/// a warning; any other damage throws CorruptJournal.
JournalContents parse_journal(std::string_view bytes);
JournalContents read_journal(const std::filesystem::path& path);

/// Writes a complete journal in one pass (single fsync at the end).
void write_journal(const std::filesystem::path& path, const JournalHeader& header,
                   const std::vector<TransactionEnvelope>& envelopes);

/// Append-only journal file. Each append is written and fsync'd before it
/// returns.
class JournalWriter {
 public:
  /// Creates a new journal, or opens an existing one and truncates any torn
  /// tail. `header` is used only when the file is created.
  static JournalWriter open(const std::filesystem::path& path, const JournalHeader& header,
                            JournalContents* existing = nullptr);

  JournalWriter(JournalWriter&& other) noexcept;
  JournalWriter& operator=(JournalWriter&& other) noexcept;
  JournalWriter(const JournalWriter&) = delete;
  JournalWriter& operator=(const JournalWriter&) = delete;
  ~JournalWriter();

  void append(const TransactionEnvelope& env);
  const std::filesystem::path& path() const { return path_; }

 private:
  friend void write_journal(const std::filesystem::path&, const JournalHeader&,
                            const std::vector<TransactionEnvelope>&);
  JournalWriter(std::filesystem::path path, int fd, std::string tip);
  void write_all(std::string_view bytes);

  std::filesystem::path path_;
  int fd_ = -1;
  std::string tip_;
};

std::string encode_journal(const JournalHeader& header,
                           const std::vector<TransactionEnvelope>& envelopes);

struct ReplayResult {
  LedgerState state;
  std::string state_hash;
  std::vector<std::vector<Event>> events;  // per envelope
};

/// Re-applies every envelope from genesis. Any rejected envelope is fatal
/// (CorruptJournal): journals only hold accepted envelopes.
ReplayResult replay(const JournalContents& journal, bool keep_events = false);

struct SubmitResult {
  std::uint64_t seq = 0;
  std::vector<Event> events;
  /// Empty when hashing on submit is disabled.
  std::string state_hash;
};

/// Engine plus optional durable journal: assigns sequence numbers, applies,
/// then appends. Without a journal path the ledger is memory-only but still
/// records accepted envelopes for replay.
class Ledger {
 public:
  explicit Ledger(JournalHeader header = {});
  /// Opens or creates the journal at `path`, replaying existing content.
  Ledger(const std::filesystem::path& path, JournalHeader header);

  const LedgerState& state() const { return engine_.state(); }
  const JournalHeader& header() const { return header_; }
  const std::vector<TransactionEnvelope>& envelopes() const { return envelopes_; }
  std::vector<std::string> warnings() const { return warnings_; }

  SubmitResult submit(Timestamp timestamp, const AccountId& actor, TxKind kind,
                      Json payload = Json::object());
  /// Timestamp defaults to the last applied one.
  SubmitResult submit(const AccountId& actor, TxKind kind, Json payload = Json::object());

  const Engine& engine() const { return engine_; }

  /// Hashing walks the whole state; bulk drivers such as the simulator turn
  /// it off and hash once at the end.
  void set_hash_on_submit(bool enabled) { hash_on_submit_ = enabled; }

 private:
  JournalHeader header_;
  Engine engine_;
  std::optional<JournalWriter> writer_;
  std::vector<TransactionEnvelope> envelopes_;
  std::vector<std::string> warnings_;
  bool failed_ = false;
  bool hash_on_submit_ = true;
};

}  // namespace likestarter
