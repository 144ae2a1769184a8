// likestarter: operator and scripting front end.
//
// Exit codes: 0 success, 1 ledger error (code name on stderr), 2 usage error,
// 3 journal or I/O failure.

#include <algorithm>
#include <cctype>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>
#include <httplib.h>

#include "likestarter/errors.hpp"
#include "likestarter/journal.hpp"
#include "likestarter/service.hpp"
#include "likestarter/sha256.hpp"
#include "likestarter/sim.hpp"
#include "likestarter/state_hash.hpp"
#include "likestarter/views.hpp"

using namespace likestarter;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitLedger = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Error reported by a remote service.
struct RemoteError : std::runtime_error {
  RemoteError(int status, std::string name, const std::string& message)
      : std::runtime_error(message), status(status), name(std::move(name)) {}
  int status;
  std::string name;
};

struct Globals {
  std::string journal;
  std::string server;
  std::string as;
  std::string secret;
  std::string config;
  std::string format = "table";
  std::optional<Timestamp> time;
};

// ---- output -----------------------------------------------------------------

const std::set<std::string>& amount_keys() {
  static const std::set<std::string> keys = {
      "amount",      "likoin_in",  "buck_out", "dust",       "price",
      "escrow",      "total_raised", "likoin_total", "buck_total", "reserve",
      "currency",    "likoin",     "buck",     "balance",    "tally",
      "total",       "like_price", "likoins_per_like", "likoin_minted", "suggested_price",
  };
  return keys;
}

bool all_digits(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

// Amount fields are decimal atto-unit strings on the wire; tables show them
// in whole units.
std::string scalar(const std::string& key, const Json& v) {
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (amount_keys().contains(key) && all_digits(s) && s.size() <= 39) {
      return Amount::parse(s).to_units_string();
    }
    return s;
  }
  if (v.is_null()) return "-";
  return v.dump();
}

void flatten(const Json& j, const std::string& prefix, const std::string& key,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    if (j.empty()) out.emplace_back(prefix, "{}");
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, k, out);
  } else if (j.is_array()) {
    const bool scalars = std::all_of(j.begin(), j.end(), [](const Json& v) {
      return !v.is_object() && !v.is_array();
    });
    if (scalars) {
      std::string joined;
      for (const auto& v : j) joined += (joined.empty() ? "" : ", ") + scalar(key, v);
      out.emplace_back(prefix, joined.empty() ? "[]" : joined);
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) {
        flatten(j[i], prefix + "." + std::to_string(i), key, out);
      }
    }
  } else {
    out.emplace_back(prefix, scalar(key, j));
  }
}

void print_rows(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) {
    std::cout << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  }
}

void print(const Json& j, const Globals& g) {
  if (g.format == "json") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  if (j.is_object() && j.contains("events") && j.contains("seq")) {
    print_rows({{"seq", j.at("seq").dump()}, {"state_hash", scalar("", j.at("state_hash"))}});
    for (const auto& e : j.at("events")) {
      std::string line = e.at("kind").get<std::string>();
      for (const auto& [k, v] : e.at("data").items()) line += " " + k + "=" + scalar(k, v);
      std::cout << line << '\n';
    }
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", "", rows);
  print_rows(rows);
}

// ---- helpers ----------------------------------------------------------------

std::string percent_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::exception& e) {
    fail(ErrorCode::ConfigError, path + ": " + e.what());
  }
}

LedgerParams params_for(const Globals& g) {
  if (g.config.empty()) return LedgerParams{};
  return params_from_json(read_json_file(g.config));
}

std::string units_to_atto(const std::string& units) { return Amount::parse_units(units).to_string(); }

const CLI::Validator& units_validator() {
  static const CLI::Validator v(
      [](std::string& s) -> std::string {
        try {
          Amount::parse_units(s);
          return {};
        } catch (const LedgerError& e) {
          return e.what();
        }
      },
      "UNITS");
  return v;
}

const CLI::Validator& account_validator() {
  static const CLI::Validator v(
      [](std::string& s) -> std::string {
        return AccountId::is_valid(s) ? std::string() : "account ids are 1-64 printable characters";
      },
      "ACCOUNT");
  return v;
}

// ---- backends ---------------------------------------------------------------

/// A mutation: one envelope locally, one HTTP request remotely.
struct Mutation {
  Mutation(TxKind kind, Json payload = Json::object(), std::string method = "POST",
           std::string path = {})
      : kind(kind), payload(std::move(payload)), method(std::move(method)), path(std::move(path)) {}

  TxKind kind;
  Json payload;
  std::string method;
  std::string path;
  /// Account creation runs unauthenticated with its own actor.
  std::optional<std::string> self_actor;
  Json remote_body = nullptr;
};

/// A read: a view over local state, or a GET.
struct Query {
  std::function<Json(const LedgerState&)> local;
  std::string path;
};

class Remote {
 public:
  explicit Remote(const Globals& g) : g_(g), client_(g.server) {
    if (!client_.is_valid()) throw UsageError("invalid --server URL '" + g.server + "'");
    client_.set_connection_timeout(5);
    client_.set_read_timeout(30);
  }

  Json mutate(const Mutation& m) {
    Json body = m.remote_body.is_null() ? m.payload : m.remote_body;
    if (g_.time) body["timestamp"] = *g_.time;
    httplib::Headers headers;
    if (!m.self_actor) headers.emplace("Authorization", "Bearer " + token());
    const std::string text = body.dump();
    auto res = m.method == "DELETE" ? client_.Delete(m.path, headers, text, "application/json")
                                    : client_.Post(m.path, headers, text, "application/json");
    return unwrap(res);
  }

  Json read(const Query& q) { return unwrap(client_.Get(q.path)); }

 private:
  std::string token() {
    if (g_.as.empty() || g_.secret.empty()) {
      throw UsageError("remote mutations need --as and --secret");
    }
    const Json body{{"account_id", g_.as}, {"secret", g_.secret}};
    return unwrap(client_.Post("/session", body.dump(), "application/json")).at("token");
  }

  static Json unwrap(const httplib::Result& res) {
    if (!res) {
      fail(ErrorCode::IoError, "request failed: " + httplib::to_string(res.error()));
    }
    Json body;
    try {
      body = Json::parse(res->body);
    } catch (const Json::exception&) {
      fail(ErrorCode::IoError, "server sent a non-JSON reply (HTTP " +
                                   std::to_string(res->status) + ")");
    }
    if (res->status != 200) {
      throw RemoteError(res->status, body.value("error", "HttpError"), body.value("message", ""));
    }
    return body;
  }

  const Globals& g_;
  httplib::Client client_;
};

class Local {
 public:
  explicit Local(const Globals& g) : g_(g) {}

  Json mutate(const Mutation& m) {
    const std::string actor = m.self_actor ? *m.self_actor : g_.as;
    if (actor.empty()) throw UsageError("this command needs --as ACCOUNT");
    if (!AccountId::is_valid(actor)) throw UsageError("invalid --as account");
    Ledger ledger(g_.journal, JournalHeader{params_for(g_), Json::object()});
    for (const auto& w : ledger.warnings()) std::cerr << "warning: " << w << '\n';
    const Timestamp ts = g_.time.value_or(ledger.state().last_timestamp);
    return views::submit_result(ledger.submit(ts, AccountId(actor), m.kind, m.payload));
  }

  Json read(const Query& q) { return q.local(load().state); }

  ReplayResult load() {
    const JournalContents contents = read_journal(g_.journal);
    for (const auto& w : contents.warnings) std::cerr << "warning: " << w << '\n';
    return replay(contents);
  }

 private:
  const Globals& g_;
};

// ---- serve ------------------------------------------------------------------

int serve(const Globals& g, const std::string& listen, bool faucet) {
  ServiceConfig config;
  if (!g.journal.empty()) config.journal = g.journal;
  config.params = params_for(g);
  config.faucet = faucet;

  // Block the stop signals before any thread starts; a waiter thread turns
  // them into an orderly shutdown.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  Service service(config);
  for (const auto& w : service.warnings()) std::cerr << "warning: " << w << '\n';
  const auto [host, port] = Service::parse_listen(listen);
  const int bound = service.bind(host, port);
  std::cout << "listening on " << host << ":" << bound << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    service.stop();
  });
  service.run();
  // run() also returns on listener failure; wake the waiter either way.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  return error_class(code) == ErrorClass::Io ? kExitIo : kExitLedger;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LikeStarter ledger: service, scripting and simulation front end"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  auto* journal_opt = app.add_option("--journal", g.journal, "Journal file (local mode)");
  auto* server_opt = app.add_option("--server", g.server, "Service URL (remote mode)");
  journal_opt->excludes(server_opt);
  server_opt->excludes(journal_opt);
  app.add_option("--as", g.as, "Acting account")->check(account_validator());
  app.add_option("--secret", g.secret, "Session secret");
  app.add_option("--time", g.time, "Logical timestamp in milliseconds");
  app.add_option("--config", g.config, "JSON file with ledger parameters for new journals");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"table", "json"}));

  // Each leaf command stores what to run once parsing succeeds.
  std::optional<Mutation> mutation;
  std::optional<Query> query;
  std::function<int()> special;

  auto account = app.add_subcommand("account", "Accounts")->require_subcommand(1);
  std::string new_id;
  std::string new_secret;
  auto account_create = account->add_subcommand("create", "Create an account");
  account_create->add_option("id", new_id)->required()->check(account_validator());
  account_create->add_option("--secret", new_secret, "Secret for service sessions");
  account_create->callback([&] {
    Mutation m{TxKind::CreateAccount};
    m.self_actor = new_id;
    m.remote_body = Json{{"account_id", new_id}};
    if (!new_secret.empty()) {
      m.payload["secret_digest"] = sha256_hex(new_secret);
      m.remote_body["secret"] = new_secret;
    }
    m.path = "/accounts";
    mutation = m;
  });

  std::string amount;
  auto deposit = app.add_subcommand("deposit", "Faucet deposit of currency");
  deposit->add_option("--amount", amount)->required()->check(units_validator());
  deposit->callback([&] {
    mutation = Mutation{TxKind::Deposit, {{"amount", units_to_atto(amount)}}, "POST", "/deposit"};
  });

  auto campaign = app.add_subcommand("campaign", "Campaigns")->require_subcommand(1);
  std::string likoin_rate, like_price, buck_rate, beneficiary;
  auto start = campaign->add_subcommand("start", "Start or restart the acting account's campaign");
  start->add_option("--likoin-rate", likoin_rate, "Likoins per currency unit, \"p\" or \"p/q\"");
  start->add_option("--like-price", like_price)->check(units_validator());
  start->add_option("--buck-rate", buck_rate, "Bucks per Likoin, \"p\" or \"p/q\"");
  start->callback([&] {
    Json p = Json::object();
    if (!likoin_rate.empty()) p["likoin_rate"] = likoin_rate;
    if (!like_price.empty()) p["like_price"] = units_to_atto(like_price);
    if (!buck_rate.empty()) p["buck_rate"] = buck_rate;
    mutation = Mutation{TxKind::StartCampaign, p, "POST", "/campaigns"};
  });
  campaign->add_subcommand("close", "Close the acting account's campaign")->callback([&] {
    mutation = Mutation{TxKind::CloseCampaign, Json::object(), "DELETE",
                        "/campaigns/" + percent_encode(g.as)};
  });
  auto withdraw = campaign->add_subcommand("withdraw", "Withdraw escrowed funds");
  withdraw->add_option("--amount", amount)->required()->check(units_validator());
  withdraw->callback([&] {
    mutation = Mutation{TxKind::WithdrawFunds, {{"amount", units_to_atto(amount)}}, "POST",
                        "/campaigns/" + percent_encode(g.as) + "/withdraw"};
  });
  auto status = campaign->add_subcommand("status", "Show a campaign");
  status->add_option("beneficiary", beneficiary)->required()->check(account_validator());
  status->callback([&] {
    query = Query{[&](const LedgerState& s) { return views::campaign(s, AccountId(beneficiary)); },
                  "/campaigns/" + percent_encode(beneficiary)};
  });

  auto post = app.add_subcommand("post", "Posts")->require_subcommand(1);
  std::string post_id, content_ref;
  auto post_create = post->add_subcommand("create", "Create a post in the acting campaign");
  post_create->add_option("id", post_id)->required();
  post_create->add_option("--content-ref", content_ref);
  post_create->callback([&] {
    Json p{{"post_id", post_id}};
    if (!content_ref.empty()) p["content_ref"] = content_ref;
    mutation = Mutation{TxKind::CreatePost, p, "POST", "/posts"};
  });
  auto like = post->add_subcommand("like", "Like a post (pays the like price)");
  like->add_option("id", post_id)->required();
  like->callback([&] {
    mutation = Mutation{TxKind::LikePost, {{"post_id", post_id}}, "POST",
                        "/posts/" + percent_encode(post_id) + "/like"};
  });

  auto donate = app.add_subcommand("donate", "Free donation");
  donate->add_option("--beneficiary", beneficiary)->required()->check(account_validator());
  donate->add_option("--amount", amount)->required()->check(units_validator());
  donate->callback([&] {
    mutation = Mutation{TxKind::Donate,
                        {{"beneficiary", beneficiary}, {"amount", units_to_atto(amount)}},
                        "POST", "/donations"};
  });

  std::string to, from, spender;
  auto transfer = app.add_subcommand("transfer", "Transfer Likoins");
  transfer->add_option("--beneficiary", beneficiary)->required()->check(account_validator());
  transfer->add_option("--to", to)->required()->check(account_validator());
  transfer->add_option("--amount", amount)->required()->check(units_validator());
  transfer->add_option("--from", from, "Owner, for a transfer under allowance")
      ->check(account_validator());
  transfer->callback([&] {
    Json p{{"beneficiary", beneficiary}, {"to", to}, {"amount", units_to_atto(amount)}};
    if (!from.empty()) p["owner"] = from;
    mutation = Mutation{from.empty() ? TxKind::TransferLikoin : TxKind::TransferFrom, p, "POST",
                        "/transfers"};
  });

  auto approve = app.add_subcommand("approve", "Set a Likoin allowance");
  approve->add_option("--beneficiary", beneficiary)->required()->check(account_validator());
  approve->add_option("--spender", spender)->required()->check(account_validator());
  approve->add_option("--amount", amount)->required()->check(units_validator());
  approve->callback([&] {
    mutation = Mutation{TxKind::Approve,
                        {{"beneficiary", beneficiary},
                         {"spender", spender},
                         {"amount", units_to_atto(amount)}},
                        "POST", "/approvals"};
  });

  auto convert = app.add_subcommand("convert", "Convert Likoins into Bucks");
  convert->add_option("--beneficiary", beneficiary)->required()->check(account_validator());
  convert->add_option("--amount", amount)->required()->check(units_validator());
  convert->callback([&] {
    mutation = Mutation{TxKind::Convert,
                        {{"beneficiary", beneficiary}, {"amount", units_to_atto(amount)}},
                        "POST", "/conversions"};
  });

  auto artifact = app.add_subcommand("artifact", "Artifacts")->require_subcommand(1);
  std::string title, description, artifact_id, price;
  std::optional<std::uint64_t> supply;
  auto propose = artifact->add_subcommand("propose", "Propose an artifact and open its vote");
  propose->add_option("--title", title)->required();
  propose->add_option("--price", price, "Initial suggested price")->required()->check(
      units_validator());
  propose->add_option("--description", description);
  propose->add_option("--content-ref", content_ref);
  propose->add_option("--supply", supply, "Supply limit");
  propose->add_option("--id", artifact_id, "Artifact id (generated when absent)");
  propose->callback([&] {
    Json p{{"title", title}, {"suggested_price", units_to_atto(price)}};
    if (!description.empty()) p["description"] = description;
    if (!content_ref.empty()) p["content_ref"] = content_ref;
    if (supply) p["supply_limit"] = *supply;
    if (!artifact_id.empty()) p["artifact_id"] = artifact_id;
    mutation = Mutation{TxKind::ProposeArtifact, p, "POST", "/artifacts"};
  });
  auto buy = artifact->add_subcommand("buy", "Buy an artifact with Bucks");
  buy->add_option("id", artifact_id)->required();
  buy->add_option("--beneficiary", beneficiary, "Expected domain")->check(account_validator());
  buy->callback([&] {
    Json p{{"artifact_id", artifact_id}};
    if (!beneficiary.empty()) p["beneficiary"] = beneficiary;
    mutation = Mutation{TxKind::BuyArtifact, p, "POST",
                        "/artifacts/" + percent_encode(artifact_id) + "/buy"};
  });
  auto remove = artifact->add_subcommand("remove", "Remove an artifact");
  remove->add_option("id", artifact_id)->required();
  remove->callback([&] {
    mutation = Mutation{TxKind::RemoveArtifact, {{"artifact_id", artifact_id}}, "DELETE",
                        "/artifacts/" + percent_encode(artifact_id)};
  });
  auto list = artifact->add_subcommand("list", "List a beneficiary's artifacts");
  list->add_option("beneficiary", beneficiary)->required()->check(account_validator());
  list->callback([&] {
    query = Query{[&](const LedgerState& s) {
                    (void)s.campaign(AccountId(beneficiary));
                    return views::artifact_list(s, AccountId(beneficiary));
                  },
                  "/campaigns/" + percent_encode(beneficiary) + "/artifacts"};
  });
  auto show_artifact = artifact->add_subcommand("show", "Show an artifact");
  show_artifact->add_option("id", artifact_id)->required();
  show_artifact->callback([&] {
    query = Query{[&](const LedgerState& s) { return views::artifact(s, artifact_id); },
                  "/artifacts/" + percent_encode(artifact_id)};
  });

  auto proposal = app.add_subcommand("proposal", "Price proposals")->require_subcommand(1);
  std::string proposal_id;
  std::uint32_t suggestion = 0;
  auto suggest = proposal->add_subcommand("suggest", "Suggest a price (and vote for it)");
  suggest->add_option("id", proposal_id)->required();
  suggest->add_option("--price", price)->required()->check(units_validator());
  suggest->callback([&] {
    mutation = Mutation{TxKind::SuggestPrice,
                        {{"proposal_id", proposal_id}, {"price", units_to_atto(price)}}, "POST",
                        "/proposals/" + percent_encode(proposal_id) + "/suggestions"};
  });
  auto vote = proposal->add_subcommand("vote", "Vote for a suggestion");
  vote->add_option("id", proposal_id)->required();
  vote->add_option("--suggestion", suggestion)->required();
  vote->callback([&] {
    mutation = Mutation{TxKind::Vote, {{"proposal_id", proposal_id}, {"suggestion_id", suggestion}},
                        "POST", "/proposals/" + percent_encode(proposal_id) + "/votes"};
  });
  auto finalize = proposal->add_subcommand("finalize", "Close voting and put on sale");
  finalize->add_option("id", proposal_id)->required();
  finalize->callback([&] {
    mutation = Mutation{TxKind::Finalize, {{"proposal_id", proposal_id}}, "POST",
                        "/proposals/" + percent_encode(proposal_id) + "/finalize"};
  });
  auto show_proposal = proposal->add_subcommand("show", "Show a proposal with weights");
  show_proposal->add_option("id", proposal_id)->required();
  show_proposal->callback([&] {
    query = Query{[&](const LedgerState& s) { return views::proposal(s, proposal_id); },
                  "/proposals/" + percent_encode(proposal_id)};
  });

  std::string who;
  auto balance = app.add_subcommand("balance", "Currency and token balances");
  balance->add_option("account", who)->required()->check(account_validator());
  balance->add_option("--beneficiary", beneficiary)->check(account_validator());
  balance->callback([&] {
    std::string path = "/balances/" + percent_encode(who);
    if (!beneficiary.empty()) path += "?beneficiary=" + percent_encode(beneficiary);
    query = Query{[&](const LedgerState& s) {
                    std::optional<AccountId> b;
                    if (!beneficiary.empty()) {
                      b = AccountId(beneficiary);
                      (void)s.campaign(*b);
                    }
                    return views::balances(s, AccountId(who), b);
                  },
                  path};
  });

  auto user = app.add_subcommand("user", "Personal page of an account");
  user->add_option("account", who)->required()->check(account_validator());
  user->callback([&] {
    query = Query{[&](const LedgerState& s) { return views::user(s, AccountId(who)); },
                  "/users/" + percent_encode(who)};
  });

  std::size_t offset = 0, limit = 20;
  auto feed = app.add_subcommand("feed", "Posts by popularity");
  feed->add_option("--offset", offset);
  feed->add_option("--limit", limit);
  feed->callback([&] {
    query = Query{[&](const LedgerState& s) { return views::feed(s, offset, limit); },
                  "/feed?offset=" + std::to_string(offset) + "&limit=" + std::to_string(limit)};
  });

  app.add_subcommand("hash-state", "State hash and journal position")->callback([&] {
    query = Query{[](const LedgerState& s) {
                    return Json{{"state_hash", state_hash(s)},
                                {"last_seq", s.last_seq},
                                {"last_timestamp", s.last_timestamp}};
                  },
                  "/state"};
  });

  std::string verify_path;
  auto verify = app.add_subcommand("verify-journal", "Check a journal and replay it");
  verify->add_option("path", verify_path, "Journal file (defaults to --journal)");
  verify->callback([&] {
    special = [&] {
      const std::string path = verify_path.empty() ? g.journal : verify_path;
      if (path.empty()) throw UsageError("verify-journal needs a journal path");
      const JournalContents contents = read_journal(path);
      for (const auto& w : contents.warnings) std::cerr << "warning: " << w << '\n';
      const ReplayResult r = replay(contents);
      if (g.format == "json") {
        print(Json{{"status", "OK"},
                   {"state_hash", r.state_hash},
                   {"envelopes", contents.envelopes.size()}},
              g);
      } else {
        std::cout << "OK " << r.state_hash << '\n';
      }
      return kExitOk;
    };
  });

  std::string listen = "127.0.0.1:8080";
  bool faucet = false;
  auto serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--listen", listen, "host:port; port 0 picks a free port");
  serve_cmd->add_flag("--faucet", faucet, "Enable POST /deposit");
  serve_cmd->callback([&] {
    special = [&] {
      if (!g.server.empty()) throw UsageError("serve runs locally; drop --server");
      return serve(g, listen, faucet);
    };
  });

  auto sim_cmd = app.add_subcommand("sim", "Agent simulation")->require_subcommand(1);
  std::string scenario_name, out_dir, analyze_path;
  std::optional<std::uint64_t> seed;
  auto sim_run = sim_cmd->add_subcommand("run", "Run a scenario, writing journal and metrics");
  sim_run->add_option("--scenario", scenario_name, "Preset: default or jeff");
  sim_run->add_option("--seed", seed, "Override the scenario seed");
  sim_run->add_option("--out", out_dir, "Output directory")->required();
  sim_run->callback([&] {
    special = [&] {
      // Inside "sim run", --config names the scenario file.
      if (!g.config.empty() && !scenario_name.empty()) {
        throw UsageError("give either --config or --scenario");
      }
      sim::ScenarioConfig cfg =
          !g.config.empty() ? sim::config_from_json(read_json_file(g.config))
                            : sim::preset(scenario_name.empty() ? "default" : scenario_name);
      if (seed) cfg.seed = *seed;
      const sim::ScenarioRun run = sim::run_scenario(cfg);
      sim::write_run(run, out_dir);
      Json raised = Json::object();
      for (const auto& [b, c] : run.state.campaigns) raised[b.str()] = c.total_raised.to_string();
      print(Json{{"scenario", cfg.name},
                 {"seed", cfg.seed},
                 {"journal", (std::filesystem::path(out_dir) / "journal.jsonl").string()},
                 {"metrics", (std::filesystem::path(out_dir) / "metrics.csv").string()},
                 {"envelopes", run.envelopes.size()},
                 {"state_hash", run.state_hash},
                 {"total_raised", raised},
                 {"kind_counts", run.kind_counts}},
            g);
      return kExitOk;
    };
  });
  auto sim_analyze = sim_cmd->add_subcommand("analyze", "Re-check every invariant over a journal");
  sim_analyze->add_option("path", analyze_path, "Journal file (defaults to --journal)");
  sim_analyze->callback([&] {
    special = [&] {
      const std::string path = analyze_path.empty() ? g.journal : analyze_path;
      if (path.empty()) throw UsageError("sim analyze needs a journal path");
      const JournalContents contents = read_journal(path);
      for (const auto& w : contents.warnings) std::cerr << "warning: " << w << '\n';
      const sim::Report report = sim::analyze(contents);
      print(sim::to_json(report), g);
      sim::require_clean(report);
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (special) return special();
    if (g.journal.empty() && g.server.empty()) {
      throw UsageError("choose --journal PATH (local) or --server URL (remote)");
    }
    Json result;
    if (!g.server.empty()) {
      Remote remote(g);
      result = mutation ? remote.mutate(*mutation) : remote.read(*query);
    } else {
      Local local(g);
      result = mutation ? local.mutate(*mutation) : local.read(*query);
    }
    print(result, g);
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RemoteError& e) {
    std::cerr << e.name << ": " << e.what() << '\n';
    return e.status >= 500 ? kExitIo : kExitLedger;
  } catch (const LedgerError& e) {
    std::cerr << e.name() << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "IoError: " << e.what() << '\n';
    return kExitIo;
  }
}
