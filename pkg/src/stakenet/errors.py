"""Exception hierarchy.

Every domain failure derives from :class:`StakenetError` (itself a
``ValueError``) so callers and the CLI can separate validation problems from
I/O problems.
"""

from __future__ import annotations


class StakenetError(ValueError):
    """Base class for all domain and validation errors."""


# network construction


class EmptyNetwork(StakenetError):
    pass


class DuplicateNodeId(StakenetError):
    def __init__(self, node_id: str):
        super().__init__(f"duplicate node id {node_id!r}")
        self.node_id = node_id


class DanglingEdgeEndpoint(StakenetError):
    def __init__(self, source: str, target: str, missing: str):
        super().__init__(f"edge {source!r}->{target!r} refers to unknown node {missing!r}")
        self.edge = (source, target)
        self.missing = missing


class SelfLoop(StakenetError):
    def __init__(self, node_id: str):
        super().__init__(f"self-loop on {node_id!r}")
        self.node_id = node_id


class DuplicateEdge(StakenetError):
    def __init__(self, source: str, target: str):
        super().__init__(f"duplicate edge {source!r}->{target!r}")
        self.edge = (source, target)


class ZeroStrengthEdge(StakenetError):
    def __init__(self, source: str, target: str):
        super().__init__(f"edge {source!r}->{target!r} has strength 0; absent relations are not stored")
        self.edge = (source, target)


class InvalidStrength(StakenetError):
    pass


class UnknownNode(StakenetError, KeyError):
    def __init__(self, node_id: str):
        StakenetError.__init__(self, f"unknown node {node_id!r}")
        self.node_id = node_id

    def __str__(self) -> str:
        return self.args[0]


# sociomatrix


class NonSquareMatrix(StakenetError):
    pass


class EntryOutOfRange(StakenetError):
    pass


class NonZeroDiagonal(StakenetError):
    pass


# ingest


class ParseError(StakenetError):
    """A malformed input row. ``line`` is 1-based, or None for JSON paths."""

    def __init__(self, line: int | None, reason: str, problems: list["ParseError"] | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{reason}")
        self.line = line
        self.reason = reason
        # every problem found in the file, this one first
        self.problems = problems if problems is not None else [self]


class UnknownTieType(ParseError):
    pass


class StrengthOutOfRange(ParseError):
    pass


class EmptyInput(StakenetError):
    pass


class NoSurvivingEdges(UserWarning):
    """Merged network has nodes but no edges."""


# metrics


class NetworkTooLarge(StakenetError):
    pass


class InsufficientNodes(StakenetError):
    pass


# synthesis


class UnmappedRole(StakenetError):
    def __init__(self, name: str):
        super().__init__(f"role {name!r} has no entry in the alias table")
        self.name = name


class UnknownCanonicalRole(StakenetError):
    pass


class QuorumExceedsProjects(StakenetError):
    pass


class InvalidPhase(StakenetError):
    pass
