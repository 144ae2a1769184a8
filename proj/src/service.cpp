#include "likestarter/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <future>
#include <random>

#include "likestarter/errors.hpp"
#include "likestarter/sha256.hpp"
#include "likestarter/state_hash.hpp"
#include "likestarter/views.hpp"

namespace likestarter {

namespace {

Timestamp wall_clock_ms() {
  using namespace std::chrono;
  return static_cast<Timestamp>(
      duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count());
}

int status_for(ErrorCode code, bool mutation) {
  switch (error_class(code)) {
    case ErrorClass::Validation: return 400;
    case ErrorClass::Authorization: return 403;
    case ErrorClass::NotFound: return mutation ? 409 : 404;
    case ErrorClass::Io: return 500;
    case ErrorClass::Domain: return 409;
  }
  return 500;
}

Json error_body(std::string_view code, std::string_view message) {
  return Json{{"error", code}, {"message", message}};
}

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::string new_token() {
  std::random_device rd;
  Digest raw{};
  for (auto& b : raw) b = static_cast<unsigned char>(rd() & 0xff);
  return to_hex(raw);
}

// Request body as a JSON object; an empty body is an empty object.
std::optional<Json> parse_body(const std::string& text) {
  if (text.empty()) return Json::object();
  try {
    Json j = Json::parse(text);
    if (j.is_object()) return j;
  } catch (const Json::exception&) {
  }
  return std::nullopt;
}

std::optional<std::size_t> size_param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  const std::string v = req.get_param_value(key);
  if (v.empty() || v.size() > 18 || v.find_first_not_of("0123456789") != std::string::npos) {
    fail(ErrorCode::ValidationError, std::string(key) + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(std::stoull(v));
}

}  // namespace

Service::Service(ServiceConfig config)
    : config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
  if (!config_.clock) config_.clock = wall_clock_ms;
  const JournalHeader header{config_.params, Json::object()};
  if (config_.journal) {
    ledger_ = std::make_unique<Ledger>(*config_.journal, header);
    warnings_ = ledger_->warnings();
  } else {
    ledger_ = std::make_unique<Ledger>(header);
  }
  publish();
  routes();
  writer_ = std::thread([this] { writer_loop(); });
}

Service::~Service() {
  stop();
  {
    std::lock_guard lock(queue_mutex_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  if (writer_.joinable()) writer_.join();
}

std::pair<std::string, int> Service::parse_listen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  const std::string host = colon == std::string::npos ? listen : listen.substr(0, colon);
  const std::string port = colon == std::string::npos ? "" : listen.substr(colon + 1);
  if (port.empty() || port.size() > 5 || port.find_first_not_of("0123456789") != std::string::npos ||
      std::stoi(port) > 65535) {
    fail(ErrorCode::ConfigError, "--listen expects host:port, got '" + listen + "'");
  }
  return {host.empty() ? "127.0.0.1" : host, std::stoi(port)};
}

int Service::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) fail(ErrorCode::IoError, "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    fail(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void Service::run() { server_->listen_after_bind(); }

void Service::stop() {
  if (server_) server_->stop();
}

std::shared_ptr<const LedgerState> Service::state() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

void Service::publish(std::string hash) {
  auto snap = std::make_shared<const LedgerState>(ledger_->state());
  if (hash.empty()) hash = state_hash(*snap);
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(snap);
  snapshot_hash_ = std::move(hash);
}

void Service::writer_loop() {
  for (;;) {
    Task task;
    {
      std::unique_lock lock(queue_mutex_);
      queue_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      task = std::move(queue_.front());
      queue_.pop_front();
    }
    task();
  }
}

Service::Reply Service::submit(const AccountId& actor, TxKind kind, Json payload,
                               std::optional<Timestamp> timestamp) {
  auto promise = std::make_shared<std::promise<Reply>>();
  auto future = promise->get_future();
  {
    std::lock_guard lock(queue_mutex_);
    queue_.push_back([this, promise, actor, kind, payload = std::move(payload), timestamp]() {
      Reply reply;
      try {
        const Timestamp ts =
            timestamp.value_or(std::max(config_.clock(), ledger_->state().last_timestamp));
        const SubmitResult r = ledger_->submit(ts, actor, kind, payload);
        publish(r.state_hash);
        reply.body = views::submit_result(r);
      } catch (const LedgerError& e) {
        reply.status = status_for(e.code(), true);
        reply.body = error_body(e.name(), e.what());
        std::lock_guard lock(snapshot_mutex_);
        reply.body["state_hash"] = snapshot_hash_;
      } catch (const std::exception& e) {
        reply.status = 500;
        reply.body = error_body("InternalError", e.what());
      }
      promise->set_value(std::move(reply));
    });
  }
  queue_cv_.notify_one();
  return future.get();
}

std::optional<AccountId> Service::session(const std::string& authorization) const {
  constexpr std::string_view prefix = "Bearer ";
  if (authorization.size() <= prefix.size() || authorization.compare(0, prefix.size(), prefix) != 0) {
    return std::nullopt;
  }
  std::lock_guard lock(sessions_mutex_);
  const auto it = sessions_.find(authorization.substr(prefix.size()));
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

void Service::routes() {
  using Req = httplib::Request;
  using Res = httplib::Response;

  // Read endpoints: public, served from the published snapshot.
  auto read = [this](auto fn) {
    return [this, fn](const Req& req, Res& res) {
      const auto snap = state();
      try {
        send(res, 200, fn(*snap, req));
      } catch (const LedgerError& e) {
        send(res, status_for(e.code(), false), error_body(e.name(), e.what()));
      }
    };
  };

  // Mutating endpoints: `build` turns (actor, path match, body) into an
  // envelope kind and payload, or throws LedgerError to reject up front.
  struct Built {
    TxKind kind;
    Json payload;
  };
  auto mutate = [this](auto build) {
    return [this, build](const Req& req, Res& res) {
      const auto actor = session(req.get_header_value("Authorization"));
      if (!actor) {
        send(res, 401, error_body("Unauthorized", "missing or unknown session token"));
        return;
      }
      auto body = parse_body(req.body);
      if (!body) {
        send(res, 400, error_body("ValidationError", "request body must be a JSON object"));
        return;
      }
      std::optional<Timestamp> ts;
      try {
        if (body->contains("timestamp")) {
          const Json& t = (*body)["timestamp"];
          require(t.is_number_unsigned(), ErrorCode::ValidationError,
                  "timestamp must be an unsigned integer");
          ts = t.get<Timestamp>();
          body->erase("timestamp");
        }
        Built b = build(*actor, req, std::move(*body));
        const Reply r = submit(*actor, b.kind, std::move(b.payload), ts);
        send(res, r.status, r.body);
      } catch (const LedgerError& e) {
        Json err = error_body(e.name(), e.what());
        std::lock_guard lock(snapshot_mutex_);
        err["state_hash"] = snapshot_hash_;
        send(res, status_for(e.code(), true), err);
      }
    };
  };
  auto require_self = [](const AccountId& actor, const std::string& who) {
    require(actor.str() == who, ErrorCode::NotBeneficiary,
            "only '" + who + "' may manage this campaign");
  };

  auto& s = *server_;

  s.Post("/accounts", [this](const Req& req, Res& res) {
    auto body = parse_body(req.body);
    if (!body || !body->contains("account_id") || !(*body)["account_id"].is_string() ||
        !AccountId::is_valid((*body)["account_id"].get<std::string>())) {
      send(res, 400, error_body("ValidationError", "account_id must be 1-64 printable characters"));
      return;
    }
    Json payload = Json::object();
    if (body->contains("secret")) {
      if (!(*body)["secret"].is_string() || (*body)["secret"].get<std::string>().empty()) {
        send(res, 400, error_body("ValidationError", "secret must be a non-empty string"));
        return;
      }
      payload["secret_digest"] = sha256_hex((*body)["secret"].get<std::string>());
    }
    std::optional<Timestamp> ts;
    if (body->contains("timestamp")) {
      if (!(*body)["timestamp"].is_number_unsigned()) {
        send(res, 400, error_body("ValidationError", "timestamp must be an unsigned integer"));
        return;
      }
      ts = (*body)["timestamp"].get<Timestamp>();
    }
    const Reply r = submit(AccountId((*body)["account_id"].get<std::string>()),
                           TxKind::CreateAccount, std::move(payload), ts);
    send(res, r.status, r.body);
  });

  s.Post("/session", [this](const Req& req, Res& res) {
    const auto body = parse_body(req.body);
    if (!body || !body->contains("account_id") || !body->contains("secret") ||
        !(*body)["account_id"].is_string() || !(*body)["secret"].is_string()) {
      send(res, 400, error_body("ValidationError", "expected {account_id, secret}"));
      return;
    }
    const std::string who = (*body)["account_id"].get<std::string>();
    const auto snap = state();
    const auto it = AccountId::is_valid(who) ? snap->accounts.find(AccountId(who))
                                             : snap->accounts.end();
    if (it == snap->accounts.end() || it->second.secret_digest.empty() ||
        it->second.secret_digest != sha256_hex((*body)["secret"].get<std::string>())) {
      send(res, 401, error_body("Unauthorized", "invalid account or secret"));
      return;
    }
    const std::string token = new_token();
    {
      std::lock_guard lock(sessions_mutex_);
      sessions_.emplace(token, it->first);
    }
    send(res, 200, Json{{"token", token}, {"account_id", who}});
  });

  s.Post("/deposit", [this, mutate](const Req& req, Res& res) {
    if (!config_.faucet) {
      send(res, 403, error_body("FaucetDisabled", "start the service with --faucet"));
      return;
    }
    mutate([](const AccountId&, const Req&, Json body) {
      return Built{TxKind::Deposit, std::move(body)};
    })(req, res);
  });

  s.Post("/campaigns", mutate([](const AccountId&, const Req&, Json body) {
    return Built{TxKind::StartCampaign, std::move(body)};
  }));
  s.Delete(R"(/campaigns/([^/]+))", mutate([require_self](const AccountId& actor, const Req& req,
                                                          Json body) {
    require_self(actor, req.matches[1]);
    return Built{TxKind::CloseCampaign, std::move(body)};
  }));
  s.Post(R"(/campaigns/([^/]+)/withdraw)",
         mutate([require_self](const AccountId& actor, const Req& req, Json body) {
           require_self(actor, req.matches[1]);
           return Built{TxKind::WithdrawFunds, std::move(body)};
         }));
  s.Post("/posts", mutate([](const AccountId&, const Req&, Json body) {
    return Built{TxKind::CreatePost, std::move(body)};
  }));
  s.Post(R"(/posts/([^/]+)/like)", mutate([](const AccountId&, const Req& req, Json body) {
    body["post_id"] = req.matches[1].str();
    return Built{TxKind::LikePost, std::move(body)};
  }));
  s.Post("/donations", mutate([](const AccountId&, const Req&, Json body) {
    return Built{TxKind::Donate, std::move(body)};
  }));
  s.Post("/transfers", mutate([](const AccountId&, const Req&, Json body) {
    const TxKind kind = body.contains("owner") ? TxKind::TransferFrom : TxKind::TransferLikoin;
    return Built{kind, std::move(body)};
  }));
  s.Post("/approvals", mutate([](const AccountId&, const Req&, Json body) {
    return Built{TxKind::Approve, std::move(body)};
  }));
  s.Post("/conversions", mutate([](const AccountId&, const Req&, Json body) {
    return Built{TxKind::Convert, std::move(body)};
  }));
  s.Post("/artifacts", mutate([](const AccountId&, const Req&, Json body) {
    return Built{TxKind::ProposeArtifact, std::move(body)};
  }));
  s.Delete(R"(/artifacts/([^/]+))", mutate([](const AccountId&, const Req& req, Json body) {
    body["artifact_id"] = req.matches[1].str();
    return Built{TxKind::RemoveArtifact, std::move(body)};
  }));
  s.Post(R"(/artifacts/([^/]+)/buy)", mutate([](const AccountId&, const Req& req, Json body) {
    body["artifact_id"] = req.matches[1].str();
    return Built{TxKind::BuyArtifact, std::move(body)};
  }));
  s.Post(R"(/proposals/([^/]+)/suggestions)",
         mutate([](const AccountId&, const Req& req, Json body) {
           body["proposal_id"] = req.matches[1].str();
           return Built{TxKind::SuggestPrice, std::move(body)};
         }));
  s.Post(R"(/proposals/([^/]+)/votes)", mutate([](const AccountId&, const Req& req, Json body) {
    body["proposal_id"] = req.matches[1].str();
    return Built{TxKind::Vote, std::move(body)};
  }));
  s.Post(R"(/proposals/([^/]+)/finalize)",
         mutate([](const AccountId&, const Req& req, Json body) {
           body["proposal_id"] = req.matches[1].str();
           return Built{TxKind::Finalize, std::move(body)};
         }));

  s.Get("/feed", read([](const LedgerState& st, const Req& req) {
    const std::size_t offset = size_param(req, "offset").value_or(0);
    const std::size_t limit = size_param(req, "limit").value_or(static_cast<std::size_t>(-1));
    return views::feed(st, offset, limit);
  }));
  auto account_param = [](const std::string& raw) {
    require(AccountId::is_valid(raw), ErrorCode::UnknownAccount, "unknown account '" + raw + "'");
    return AccountId(raw);
  };
  s.Get(R"(/users/([^/]+))", read([account_param](const LedgerState& st, const Req& req) {
    return views::user(st, account_param(req.matches[1]));
  }));
  s.Get(R"(/campaigns/([^/]+))", read([account_param](const LedgerState& st, const Req& req) {
    return views::campaign(st, account_param(req.matches[1]));
  }));
  s.Get(R"(/campaigns/([^/]+)/artifacts)",
        read([account_param](const LedgerState& st, const Req& req) {
          const AccountId b = account_param(req.matches[1]);
          (void)st.campaign(b);
          return views::artifact_list(st, b);
        }));
  s.Get(R"(/artifacts/([^/]+))", read([](const LedgerState& st, const Req& req) {
    return views::artifact(st, req.matches[1]);
  }));
  s.Get(R"(/proposals/([^/]+))", read([](const LedgerState& st, const Req& req) {
    return views::proposal(st, req.matches[1]);
  }));
  s.Get(R"(/balances/([^/]+))", read([account_param](const LedgerState& st, const Req& req) {
    std::optional<AccountId> beneficiary;
    if (req.has_param("beneficiary")) beneficiary = account_param(req.get_param_value("beneficiary"));
    if (beneficiary) (void)st.campaign(*beneficiary);
    return views::balances(st, account_param(req.matches[1]), beneficiary);
  }));
  s.Get("/state", [this](const Req&, Res& res) {
    std::lock_guard lock(snapshot_mutex_);
    send(res, 200, Json{{"state_hash", snapshot_hash_},
                        {"last_seq", snapshot_->last_seq},
                        {"last_timestamp", snapshot_->last_timestamp}});
  });

  s.set_error_handler([](const Req&, Res& res) {
    if (res.body.empty()) {
      res.set_content(error_body(res.status == 404 ? "NotFound" : "HttpError",
                                 httplib::status_message(res.status))
                          .dump(),
                      "application/json");
    }
  });
}

}  // namespace likestarter
