"""Exception hierarchy shared by every module.

All errors derive from ``MolsError`` so callers (the CLI in particular)
can map the whole family onto one exit code.
"""

from __future__ import annotations


class MolsError(ValueError):
    """Base class for invalid-input conditions."""


class MalformedInputError(MolsError):
    pass


class DimensionError(MolsError):
    pass


class NotLatinError(MolsError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class OrthogonalityError(MolsError):
    """Two squares repeat an ordered symbol pair.

    ``pair`` holds the 0-based square indices, ``witness`` the repeated
    symbol pair and ``cells`` the two 1-based treatments carrying it.
    """

    def __init__(self, message: str, pair=None, witness=None, cells=None):
        super().__init__(message)
        self.pair = pair
        self.witness = witness
        self.cells = cells


class InvalidAnchorError(MolsError):
    def __init__(self, message: str, pair=None, relation: str | None = None):
        super().__init__(message)
        self.pair = pair
        self.relation = relation


class MalformedRelationError(MolsError):
    pass


class StructuralError(MolsError):
    pass


class IncompatibilityError(MolsError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionError(MolsError):
    pass


class ParseError(MolsError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class InvalidCliqueError(StructuralError):
    pass
