"""Exception hierarchy shared by all modules.

Each subclass maps to one CLI exit code so scripted callers can tell
configuration mistakes apart from bad input files and numeric blowups.
"""


class CtrlfeatError(Exception):
    """Base class for every error raised by this package."""


class ContractError(CtrlfeatError):
    """A precondition or configuration value was violated (exit code 2)."""


class DegenerateGraphError(ContractError):
    """The requested quantity is undefined for this graph (e.g. no edges)."""


class IngestError(CtrlfeatError):
    """An input file could not be parsed (exit code 3)."""


class IntegrityError(IngestError):
    """Parsed data violates a structural invariant of the data model."""


class NumericError(CtrlfeatError):
    """A computation produced non-finite values or failed to converge (exit code 4)."""
