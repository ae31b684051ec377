"""Exception types shared across the library.

Every error carries a machine-readable ``kind`` (the class name) and an
optional ``witness`` payload, so front ends can emit replayable error
reports without string parsing.
"""

from __future__ import annotations

from typing import Any


class LatlangError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_doc(self) -> dict:
        return {"kind": self.kind, "message": str(self), "witness": self.witness}


class MalformedDocument(LatlangError):
    pass


# -- lattices -----------------------------------------------------------

class NotAntisymmetric(LatlangError):
    pass


class NotALattice(LatlangError):
    pass


class TrivialLattice(LatlangError):
    pass


class SizeOutOfRange(LatlangError):
    pass


class SizeCapExceeded(LatlangError):
    pass


class UnknownElement(LatlangError):
    pass


class NotOrderPreserving(LatlangError):
    pass


# -- monoids and colorings ----------------------------------------------

class NotAssociative(LatlangError):
    pass


class NoIdentity(LatlangError):
    pass


class NotCompatible(LatlangError):
    pass


class NotAMorphism(LatlangError):
    pass


class MismatchedCarrier(LatlangError):
    pass


class MismatchedLattice(LatlangError):
    pass


# -- automata -----------------------------------------------------------

class MismatchedAlphabet(LatlangError):
    pass


class UnknownLetter(LatlangError):
    pass


class NotARecognizer(LatlangError):
    pass


class InternalInconsistency(LatlangError):
    """A well-definedness assertion failed; signals a library bug, not bad input."""


class WitnessNotFound(InternalInconsistency):
    """A context witness required by the order definition does not exist."""


# -- Markov chains ------------------------------------------------------

class BadFraction(LatlangError):
    pass


class RowSumNotOne(LatlangError):
    pass


class NegativeEntry(LatlangError):
    pass


class NoErgodicClass(LatlangError):
    pass


class NoInitial(LatlangError):
    pass


class SingularSystem(LatlangError):
    pass
