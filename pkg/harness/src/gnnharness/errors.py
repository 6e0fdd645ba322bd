"""Exception hierarchy.

Mirrors the exit-code convention of the feature package: 2 for contract
and configuration violations, 3 for unreadable or inconsistent input files.
"""


class HarnessError(Exception):
    """Base class for every error raised by this package."""


class ContractError(HarnessError):
    """A precondition or configuration value was violated (exit code 2)."""


class FormatError(HarnessError):
    """An input file is malformed or internally inconsistent (exit code 3)."""
