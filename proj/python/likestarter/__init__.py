"""Deterministic crowdfunding ledger with per-beneficiary token domains.

Amounts are Python ints in atto-units (10**18 per whole unit). Views return
the same JSON shapes as the HTTP service, with amounts as decimal strings.
"""

from ._core import (
    ATTO_PER_UNIT,
    METRICS_HEADER,
    Ledger,
    LedgerError,
    analyze,
    format_units,
    parse_units,
    preset,
    run_scenario,
    split,
    verify_journal,
)

LedgerError.code = property(lambda self: self.args[0])

__all__ = [
    "ATTO_PER_UNIT",
    "METRICS_HEADER",
    "Ledger",
    "LedgerError",
    "analyze",
    "format_units",
    "parse_units",
    "preset",
    "run_scenario",
    "split",
    "verify_journal",
]
