"""Exception types shared by every famcat module."""

from __future__ import annotations


class FamcatError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FamcatError):
    """A caller supplied an operand that violates a documented precondition.

    Examples: malformed JSON, atoms outside the universe, a chain query for a
    set that is not a member of the family, factoring a pair with no arrow.
    """


class ResourceLimitError(FamcatError):
    """A computation would exceed a configured hard cap.

    The caps (universe size, enumeration pool size) exist so that exhaustive
    searches stay at desk scale.  They can be lifted explicitly via
    :func:`famcat.core.set_caps_enabled`.
    """
