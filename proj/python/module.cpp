#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>

#include "likestarter/errors.hpp"
#include "likestarter/journal.hpp"
#include "likestarter/sim.hpp"
#include "likestarter/state_hash.hpp"
#include "likestarter/token_domain.hpp"
#include "likestarter/views.hpp"

namespace py = pybind11;
using namespace likestarter;

namespace {

// JSON crosses the boundary as text; the json module does the rest.
py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::handle& obj) {
  if (obj.is_none()) return Json::object();
  return Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::int_ to_py_int(Amount a) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(a.to_string().c_str(), nullptr, 10));
}

Amount amount_from_py(const py::handle& obj) {
  if (!py::isinstance<py::int_>(obj) || py::isinstance<py::bool_>(obj)) {
    fail(ErrorCode::ValidationError, "amounts are ints in atto-units");
  }
  const py::int_ value = py::reinterpret_borrow<py::int_>(obj);
  if (value < py::int_(0)) fail(ErrorCode::ValidationError, "amount is negative");
  return Amount::parse(py::str(py::handle(value)).cast<std::string>());
}

TxKind kind_from(const std::string& name) {
  const auto kind = tx_kind_from_name(name);
  if (!kind) fail(ErrorCode::MalformedEnvelope, "unknown kind '" + name + "'");
  return *kind;
}

JournalHeader header_from(const py::object& genesis, const py::object& meta) {
  JournalHeader h;
  h.genesis = params_from_json(from_py(genesis));
  h.meta = from_py(meta);
  return h;
}

// Owns the ledger; optional arguments mirror the C++ constructors.
class PyLedger {
 public:
  PyLedger(std::optional<std::filesystem::path> path, const py::object& genesis, const py::object& meta)
      : ledger_(path ? Ledger(*path, header_from(genesis, meta)) : Ledger(header_from(genesis, meta))) {}

  py::object submit(const std::string& actor, const std::string& kind, const py::object& payload,
                    std::optional<Timestamp> timestamp) {
    const Timestamp ts = timestamp.value_or(ledger_.state().last_timestamp);
    return to_py(views::submit_result(ledger_.submit(ts, AccountId(actor), kind_from(kind), from_py(payload))));
  }

  std::string hash() const { return state_hash(ledger_.state()); }
  const LedgerState& state() const { return ledger_.state(); }

  py::list envelopes() const {
    py::list out;
    for (const auto& e : ledger_.envelopes()) out.append(to_py(to_json(e)));
    return out;
  }

 private:
  Ledger ledger_;
};

std::optional<AccountId> optional_id(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  return AccountId(*s);
}

JournalContents journal_at(const std::filesystem::path& path) { return read_journal(path); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "likestarter ledger engine";

  static py::exception<LedgerError> ledger_error(m, "LedgerError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const LedgerError& e) {
      PyErr_SetObject(ledger_error.ptr(),
                      py::make_tuple(std::string(e.name()), std::string(e.what())).ptr());
    }
  });

  m.attr("ATTO_PER_UNIT") = to_py_int(Amount::whole(1));
  m.attr("METRICS_HEADER") = sim::kMetricsHeader;

  py::class_<PyLedger>(m, "Ledger")
      .def(py::init<std::optional<std::filesystem::path>, py::object, py::object>(),
           py::arg("path") = py::none(), py::arg("genesis") = py::none(), py::arg("meta") = py::none())
      .def("submit", &PyLedger::submit, py::arg("actor"), py::arg("kind"),
           py::arg("payload") = py::none(), py::arg("timestamp") = py::none())
      .def("state_hash", &PyLedger::hash)
      .def_property_readonly("last_seq", [](const PyLedger& l) { return l.state().last_seq; })
      .def_property_readonly("last_timestamp", [](const PyLedger& l) { return l.state().last_timestamp; })
      .def("envelopes", &PyLedger::envelopes)
      .def("campaign", [](const PyLedger& l, const std::string& b) {
        return to_py(views::campaign(l.state(), AccountId(b)));
      })
      .def("balances",
           [](const PyLedger& l, const std::string& account, std::optional<std::string> beneficiary) {
             return to_py(views::balances(l.state(), AccountId(account), optional_id(beneficiary)));
           },
           py::arg("account"), py::arg("beneficiary") = py::none())
      .def("likoin", [](const PyLedger& l, const std::string& account, const std::string& b) {
        return to_py_int(l.state().domain(AccountId(b)).balance_of(AccountId(account), TokenKind::Likoin));
      })
      .def("buck", [](const PyLedger& l, const std::string& account, const std::string& b) {
        return to_py_int(l.state().domain(AccountId(b)).balance_of(AccountId(account), TokenKind::Buck));
      })
      .def("likoin_balances", [](const PyLedger& l, const std::string& b) {
        py::dict out;
        for (const auto& [k, v] : l.state().domain(AccountId(b)).likoin_balances()) out[py::str(k.str())] = to_py_int(v);
        return out;
      })
      .def("artifact", [](const PyLedger& l, const std::string& id) { return to_py(views::artifact(l.state(), id)); })
      .def("artifacts", [](const PyLedger& l, const std::string& b) {
        return to_py(views::artifact_list(l.state(), AccountId(b)));
      })
      .def("proposal", [](const PyLedger& l, const std::string& id) { return to_py(views::proposal(l.state(), id)); })
      .def("user", [](const PyLedger& l, const std::string& a) { return to_py(views::user(l.state(), AccountId(a))); })
      .def("feed",
           [](const PyLedger& l, std::size_t offset, std::size_t limit) {
             return to_py(views::feed(l.state(), offset, limit));
           },
           py::arg("offset") = 0, py::arg("limit") = 20);

  m.def("parse_units", [](const std::string& text) { return to_py_int(Amount::parse_units(text)); },
        "Whole-unit decimal string to atto-units.");
  m.def("format_units", [](const py::object& atto) { return amount_from_py(atto).to_units_string(); });

  m.def("split",
        [](const py::dict& holders, const py::object& amount) {
          std::map<AccountId, Amount> book;
          for (const auto& [k, v] : holders) book[AccountId(py::str(k).cast<std::string>())] = amount_from_py(v);
          py::dict out;
          for (const auto& [k, v] : largest_remainder_split(book, amount_from_py(amount))) {
            out[py::str(k.str())] = to_py_int(v);
          }
          return out;
        },
        py::arg("holders"), py::arg("amount"),
        "Largest-remainder pro-rata split of `amount`; zero shares are omitted.");

  m.def("verify_journal",
        [](const std::filesystem::path& path) {
          const auto contents = journal_at(path);
          const auto result = replay(contents);
          py::dict out;
          out["state_hash"] = result.state_hash;
          out["envelopes"] = contents.envelopes.size();
          out["warnings"] = contents.warnings;
          return out;
        },
        py::arg("path"));

  m.def("preset", [](const std::string& name) { return to_py(sim::to_json(sim::preset(name))); });

  m.def("run_scenario",
        [](const py::object& config, std::optional<std::filesystem::path> out_dir) {
          const sim::ScenarioRun run = sim::run_scenario(sim::config_from_json(from_py(config)));
          if (out_dir) sim::write_run(run, *out_dir);
          py::dict out;
          out["state_hash"] = run.state_hash;
          out["envelopes"] = run.envelopes.size();
          out["kind_counts"] = run.kind_counts;
          out["metrics_csv"] = run.metrics_csv;
          return out;
        },
        py::arg("config") = py::none(), py::arg("out_dir") = py::none());

  m.def("analyze",
        [](const std::filesystem::path& path) { return to_py(sim::to_json(sim::analyze(journal_at(path)))); },
        py::arg("path"));
}
