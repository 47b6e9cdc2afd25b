"""Exception hierarchy shared by every module."""

from __future__ import annotations


class MFError(Exception):
    """Base class for all kernel errors."""


class InputError(MFError):
    """Malformed input: unknown identifiers, bad element sets."""


class UnknownElementError(InputError):
    def __init__(self, ident):
        super().__init__(f"unknown element: {ident!r}")
        self.ident = ident


class ParseError(InputError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class StructuralError(MFError):
    """A carrier fails to be a poset / bounded distributive lattice."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceError(MFError):
    """A configured oracle or depth bound was exceeded."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class WitnessError(MFError):
    """A regularity witness or chain precondition is missing or violated."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DomainError(MFError):
    """A point lies outside the domain an operation was asked about."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class Deferred(MFError):
    """A budgeted evaluation could not be completed.

    ``partial`` carries whatever bracket or progress was reached.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
