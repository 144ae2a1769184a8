#include "likestarter/journal.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "likestarter/errors.hpp"
#include "likestarter/sha256.hpp"
#include "likestarter/state_hash.hpp"

namespace likestarter {

namespace {

[[noreturn]] void corrupt(const std::string& why) { fail(ErrorCode::CorruptJournal, why); }

[[noreturn]] void io_error(const std::string& what) {
  fail(ErrorCode::IoError, what + ": " + std::strerror(errno));
}

JournalHeader decode_header(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::exception& e) {
    corrupt(std::string("unreadable journal header: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kJournalFormat) corrupt("not a likestarter journal");
  if (j.value("version", 0) != kJournalVersion) corrupt("unsupported journal version");
  if (j.value("hash_algorithm", "") != kHashAlgorithm) corrupt("unsupported hash algorithm");
  JournalHeader header;
  try {
    header.genesis = params_from_json(j.at("genesis"));
  } catch (const std::exception& e) {
    corrupt(std::string("bad genesis parameters: ") + e.what());
  }
  header.meta = j.value("meta", Json::object());
  if (encode_header(header) != std::string(line) + "\n") corrupt("journal header is not canonical");
  return header;
}

}  // namespace

std::string encode_header(const JournalHeader& header) {
  const Json j{{"format", kJournalFormat},
               {"version", kJournalVersion},
               {"hash_algorithm", kHashAlgorithm},
               {"genesis", to_json(header.genesis)},
               {"meta", header.meta}};
  return j.dump() + "\n";
}

std::string encode_record(const TransactionEnvelope& env, const std::string& prev_digest,
                          std::string* digest_out) {
  Json j = to_json(env);
  const std::string digest = sha256_hex(prev_digest + j.dump());
  j["digest"] = digest;
  if (digest_out) *digest_out = digest;
  return j.dump() + "\n";
}

JournalContents parse_journal(std::string_view bytes) {
  JournalContents out;
  const auto header_end = bytes.find('\n');
  if (header_end == std::string_view::npos) corrupt("journal has no complete header line");
  const std::string_view header_line = bytes.substr(0, header_end);
  out.header = decode_header(header_line);
  out.tip_digest = sha256_hex(header_line);
  out.complete_bytes = header_end + 1;

  std::size_t pos = header_end + 1;
  std::size_t line_no = 1;
  while (pos < bytes.size()) {
    ++line_no;
    const auto end = bytes.find('\n', pos);
    if (end == std::string_view::npos) {
      out.warnings.push_back("dropped torn record at line " + std::to_string(line_no) + " (" +
                             std::to_string(bytes.size() - pos) + " bytes)");
      break;
    }
    const std::string_view line = bytes.substr(pos, end - pos);
    const std::string where = "line " + std::to_string(line_no);
    TransactionEnvelope env;
    std::string digest;
    try {
      Json j = Json::parse(line);
      if (!j.is_object() || !j.contains("digest") || !j["digest"].is_string()) {
        corrupt(where + ": record has no digest");
      }
      digest = j["digest"].get<std::string>();
      j.erase("digest");
      env = envelope_from_json(j);
    } catch (const Json::exception& e) {
      corrupt(where + ": " + e.what());
    } catch (const LedgerError& e) {
      if (e.code() == ErrorCode::CorruptJournal) throw;
      corrupt(where + ": " + e.what());
    }
    std::string expected;
    if (encode_record(env, out.tip_digest, &expected) != std::string(line) + "\n" ||
        expected != digest) {
      corrupt(where + ": digest mismatch");
    }
    if (env.seq != out.envelopes.size() + 1) corrupt(where + ": sequence gap");
    out.envelopes.push_back(std::move(env));
    out.tip_digest = digest;
    pos = end + 1;
    out.complete_bytes = pos;
  }
  return out;
}

JournalContents read_journal(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open journal " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_journal(buf.str());
}

JournalWriter::JournalWriter(std::filesystem::path path, int fd, std::string tip)
    : path_(std::move(path)), fd_(fd), tip_(std::move(tip)) {}

JournalWriter::JournalWriter(JournalWriter&& other) noexcept
    : path_(std::move(other.path_)), fd_(std::exchange(other.fd_, -1)), tip_(std::move(other.tip_)) {}

JournalWriter& JournalWriter::operator=(JournalWriter&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    path_ = std::move(other.path_);
    fd_ = std::exchange(other.fd_, -1);
    tip_ = std::move(other.tip_);
  }
  return *this;
}

JournalWriter::~JournalWriter() {
  if (fd_ >= 0) ::close(fd_);
}

JournalWriter JournalWriter::open(const std::filesystem::path& path, const JournalHeader& header,
                                  JournalContents* existing) {
  std::error_code ec;
  const bool has_content = std::filesystem::exists(path, ec) &&
                           std::filesystem::file_size(path, ec) > 0;
  if (has_content) {
    JournalContents contents = read_journal(path);
    const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CLOEXEC);
    if (fd < 0) io_error("cannot open journal " + path.string());
    if (std::filesystem::file_size(path) != contents.complete_bytes &&
        ::ftruncate(fd, static_cast<off_t>(contents.complete_bytes)) != 0) {
      ::close(fd);
      io_error("cannot truncate torn journal tail");
    }
    JournalWriter writer(path, fd, contents.tip_digest);
    if (existing) *existing = std::move(contents);
    return writer;
  }

  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) io_error("cannot create journal " + path.string());
  const std::string line = encode_header(header);
  JournalWriter writer(path, fd, sha256_hex(std::string_view(line).substr(0, line.size() - 1)));
  writer.write_all(line);
  if (existing) *existing = parse_journal(line);
  return writer;
}

void JournalWriter::write_all(std::string_view bytes) {
  while (!bytes.empty()) {
    const ssize_t n = ::write(fd_, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_error("journal write failed");
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
  if (::fdatasync(fd_) != 0) io_error("journal sync failed");
}

void JournalWriter::append(const TransactionEnvelope& env) {
  std::string digest;
  const std::string line = encode_record(env, tip_, &digest);
  write_all(line);
  tip_ = std::move(digest);
}

std::string encode_journal(const JournalHeader& header,
                           const std::vector<TransactionEnvelope>& envelopes) {
  std::string out = encode_header(header);
  std::string tip = sha256_hex(std::string_view(out).substr(0, out.size() - 1));
  for (const auto& env : envelopes) out += encode_record(env, tip, &tip);
  return out;
}

void write_journal(const std::filesystem::path& path, const JournalHeader& header,
                   const std::vector<TransactionEnvelope>& envelopes) {
  const std::string bytes = encode_journal(header, envelopes);
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_error("cannot create journal " + path.string());
  JournalWriter writer(path, fd, {});
  writer.write_all(bytes);
}

ReplayResult replay(const JournalContents& journal, bool keep_events) {
  Engine engine(journal.header.genesis);
  ReplayResult out;
  for (const auto& env : journal.envelopes) {
    try {
      auto events = engine.apply(env);
      if (keep_events) out.events.push_back(std::move(events));
    } catch (const LedgerError& e) {
      corrupt("envelope " + std::to_string(env.seq) + " rejected on replay: " +
              std::string(e.name()) + ": " + e.what());
    }
  }
  out.state = engine.state();
  out.state_hash = state_hash(out.state);
  return out;
}

Ledger::Ledger(JournalHeader header) : header_(std::move(header)), engine_(header_.genesis) {}

Ledger::Ledger(const std::filesystem::path& path, JournalHeader header) {
  JournalContents existing;
  writer_.emplace(JournalWriter::open(path, header, &existing));
  header_ = existing.header;
  warnings_ = existing.warnings;
  Engine engine(header_.genesis);
  for (const auto& env : existing.envelopes) {
    try {
      engine.apply(env);
    } catch (const LedgerError& e) {
      corrupt("envelope " + std::to_string(env.seq) + " rejected on replay: " + e.what());
    }
  }
  engine_ = std::move(engine);
  envelopes_ = std::move(existing.envelopes);
}

SubmitResult Ledger::submit(Timestamp timestamp, const AccountId& actor, TxKind kind,
                            Json payload) {
  require(!failed_, ErrorCode::IoError, "ledger stopped after a journal write failure");
  TransactionEnvelope env{engine_.state().last_seq + 1, timestamp, actor, kind, std::move(payload)};
  auto events = engine_.apply(env);
  if (writer_) {
    try {
      writer_->append(env);
    } catch (...) {
      failed_ = true;
      throw;
    }
  }
  envelopes_.push_back(std::move(env));
  return SubmitResult{engine_.state().last_seq, std::move(events),
                      hash_on_submit_ ? state_hash(engine_.state()) : std::string{}};
}

SubmitResult Ledger::submit(const AccountId& actor, TxKind kind, Json payload) {
  return submit(engine_.state().last_timestamp, actor, kind, std::move(payload));
}

}  // namespace likestarter
