"""Explicit sieve verification: every N >= 2 is a + b with Omega(ab) <= 21."""

from ._core import *  # noqa: F401,F403
from ._core import (
    InvalidArgument,
    IoError,
    PreconditionError,
    PrimeTable,
    RangeError,
    VerificationFailure,
)

__version__ = "0.1.0"
