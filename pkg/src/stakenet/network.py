"""Stakeholder network types, validation and sociomatrix conversion.

A :class:`StakeholderNetwork` is an immutable directed graph over role nodes.
Each arc carries the influence strength of its source over its target on the
0-3 scale; strength 0 means "no relation" and is never stored.

Example:
    >>> a = StakeholderNode("A", "Project Manager")
    >>> b = StakeholderNode("B", "Development Team")
    >>> net = build_network([a, b], [RelationEdge("A", "B", 2)], "p1")
    >>> to_sociomatrix(net)[1].tolist()
    [[0, 2], [0, 0]]
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Literal

import numpy as np

from .errors import (
    DanglingEdgeEndpoint,
    DuplicateEdge,
    DuplicateNodeId,
    EmptyNetwork,
    EntryOutOfRange,
    InvalidStrength,
    NonSquareMatrix,
    NonZeroDiagonal,
    SelfLoop,
    StakenetError,
    UnknownNode,
    ZeroStrengthEdge,
)

MAX_STRENGTH = 3

NeighborMode = Literal["out", "in", "all"]


class OrgGroup(str, Enum):
    PROJECT = "ProjectOrganization"
    BUSINESS = "BusinessOrganization"
    COMPANY = "CompanyManagement"

    @classmethod
    def parse(cls, value: str | "OrgGroup") -> "OrgGroup":
        if isinstance(value, OrgGroup):
            return value
        key = "".join(ch for ch in str(value).casefold() if ch.isalnum())
        for member in cls:
            if key in (member.value.casefold(), member.name.casefold()):
                return member
        aliases = {"project": cls.PROJECT, "business": cls.BUSINESS, "company": cls.COMPANY}
        if key in aliases:
            return aliases[key]
        raise StakenetError(f"unknown org group {value!r}")


class TieType(str, Enum):
    """Character of a relation: formal authority ("A") or information sharing ("B")."""

    AUTHORITY = "A"
    INFO_SHARING = "B"
    UNKNOWN = "?"

    @classmethod
    def parse(cls, value: str | "TieType" | None) -> "TieType":
        if isinstance(value, TieType):
            return value
        if value is None:
            return cls.UNKNOWN
        key = str(value).strip().casefold()
        lookup = {
            "": cls.UNKNOWN,
            "?": cls.UNKNOWN,
            "unknown": cls.UNKNOWN,
            "a": cls.AUTHORITY,
            "authority": cls.AUTHORITY,
            "b": cls.INFO_SHARING,
            "infosharing": cls.INFO_SHARING,
            "info_sharing": cls.INFO_SHARING,
        }
        try:
            return lookup[key]
        except KeyError:
            raise StakenetError(f"unknown tie type {value!r}") from None


@dataclass(frozen=True)
class StakeholderNode:
    id: str
    role_name: str
    org_group: OrgGroup = OrgGroup.PROJECT
    canonical_role: str | None = None
    notes: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise StakenetError("node id must be a non-empty string")
        if not self.role_name or not self.role_name.strip():
            raise StakenetError(f"node {self.id!r} has an empty role name")
        object.__setattr__(self, "org_group", OrgGroup.parse(self.org_group))


@dataclass(frozen=True)
class RelationEdge:
    """Directed influence of ``source`` over ``target``."""

    source: str
    target: str
    strength: int
    tie_type: TieType = TieType.UNKNOWN
    conflict: bool = False
    frequency_label: str | None = None
    provenance: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if isinstance(self.strength, bool) or not isinstance(self.strength, (int, np.integer)):
            raise InvalidStrength(f"strength of {self.source!r}->{self.target!r} must be an integer")
        object.__setattr__(self, "strength", int(self.strength))
        if self.strength == 0:
            raise ZeroStrengthEdge(self.source, self.target)
        if not 1 <= self.strength <= MAX_STRENGTH:
            raise InvalidStrength(
                f"strength {self.strength} of {self.source!r}->{self.target!r} outside 0..{MAX_STRENGTH}"
            )
        object.__setattr__(self, "tie_type", TieType.parse(self.tie_type))
        object.__setattr__(self, "conflict", bool(self.conflict))
        object.__setattr__(self, "provenance", frozenset(self.provenance))

    @property
    def key(self) -> tuple[str, str]:
        return (self.source, self.target)


@dataclass(frozen=True)
class StakeholderNetwork:
    """Validated, immutable network. Nodes and edges are kept in sorted order."""

    nodes: tuple[StakeholderNode, ...]
    edges: tuple[RelationEdge, ...]
    project_id: str = ""
    _node_index: dict = field(init=False, repr=False, compare=False)
    _edge_index: dict = field(init=False, repr=False, compare=False)
    _succ: dict = field(init=False, repr=False, compare=False)
    _pred: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        nodes = tuple(sorted(self.nodes, key=lambda nd: nd.id))
        if not nodes:
            raise EmptyNetwork("a network needs at least one node")
        node_index: dict[str, StakeholderNode] = {}
        for nd in nodes:
            if nd.id in node_index:
                raise DuplicateNodeId(nd.id)
            node_index[nd.id] = nd

        edge_index: dict[tuple[str, str], RelationEdge] = {}
        succ: dict[str, set[str]] = {nid: set() for nid in node_index}
        pred: dict[str, set[str]] = {nid: set() for nid in node_index}
        for e in self.edges:
            if e.source == e.target:
                raise SelfLoop(e.source)
            for end in (e.source, e.target):
                if end not in node_index:
                    raise DanglingEdgeEndpoint(e.source, e.target, end)
            if e.key in edge_index:
                raise DuplicateEdge(e.source, e.target)
            edge_index[e.key] = e
            succ[e.source].add(e.target)
            pred[e.target].add(e.source)

        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(edge_index[k] for k in sorted(edge_index)))
        object.__setattr__(self, "_node_index", node_index)
        object.__setattr__(self, "_edge_index", edge_index)
        object.__setattr__(self, "_succ", {k: frozenset(v) for k, v in succ.items()})
        object.__setattr__(self, "_pred", {k: frozenset(v) for k, v in pred.items()})

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._node_index

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(nd.id for nd in self.nodes)

    def node(self, node_id: str) -> StakeholderNode:
        try:
            return self._node_index[node_id]
        except KeyError:
            raise UnknownNode(node_id) from None

    def edge(self, source: str, target: str) -> RelationEdge | None:
        return self._edge_index.get((source, target))

    def has_edge(self, source: str, target: str) -> bool:
        return (source, target) in self._edge_index

    def successors(self, node_id: str) -> frozenset[str]:
        self.node(node_id)
        return self._succ[node_id]

    def predecessors(self, node_id: str) -> frozenset[str]:
        self.node(node_id)
        return self._pred[node_id]

    def adjacency(self, directed: bool = False) -> dict[str, frozenset[str]]:
        """Out-neighbour sets, or undirected neighbour sets when ``directed`` is false."""
        if directed:
            return dict(self._succ)
        return {nid: self._succ[nid] | self._pred[nid] for nid in self.node_ids}

    def undirected_pairs(self) -> set[frozenset[str]]:
        return {frozenset(k) for k in self._edge_index}


def build_network(
    nodes: Iterable[StakeholderNode],
    edges: Iterable[RelationEdge],
    project_id: str = "",
) -> StakeholderNetwork:
    return StakeholderNetwork(tuple(nodes), tuple(edges), project_id)


def neighbors(net: StakeholderNetwork, node_id: str, mode: NeighborMode = "all") -> set[str]:
    if mode == "out":
        return set(net.successors(node_id))
    if mode == "in":
        return set(net.predecessors(node_id))
    if mode == "all":
        return set(net.successors(node_id) | net.predecessors(node_id))
    raise ValueError(f"mode must be 'out', 'in' or 'all', not {mode!r}")


def _merge_labels(*labels: str | None) -> str | None:
    present = sorted({lab for lab in labels if lab})
    return "; ".join(present) if present else None


def symmetrize(net: StakeholderNetwork) -> StakeholderNetwork:
    """Complete every arc with its reverse so each related pair is mutual.

    Both directions get the larger strength and the OR of the conflict flags;
    the tie type survives only when both directions agree on it.
    """
    edges = []
    for pair in sorted(tuple(sorted(p)) for p in net.undirected_pairs()):
        u, v = pair
        fwd, back = net.edge(u, v), net.edge(v, u)
        present = [e for e in (fwd, back) if e is not None]
        ties = {e.tie_type for e in present}
        merged = dict(
            strength=max(e.strength for e in present),
            tie_type=ties.pop() if len(ties) == 1 else TieType.UNKNOWN,
            conflict=any(e.conflict for e in present),
            frequency_label=_merge_labels(*(e.frequency_label for e in present)),
            provenance=frozenset().union(*(e.provenance for e in present)),
        )
        edges.append(RelationEdge(u, v, **merged))
        edges.append(RelationEdge(v, u, **merged))
    return StakeholderNetwork(net.nodes, tuple(edges), net.project_id)


def to_sociomatrix(net: StakeholderNetwork) -> tuple[list[str], np.ndarray]:
    labels = list(net.node_ids)
    pos = {nid: i for i, nid in enumerate(labels)}
    matrix = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for e in net.edges:
        matrix[pos[e.source], pos[e.target]] = e.strength
    return labels, matrix


def from_sociomatrix(
    labels: Sequence[str],
    matrix: Sequence[Sequence[int]] | np.ndarray,
    project_id: str = "",
) -> StakeholderNetwork:
    rows = [list(r) for r in matrix]
    n = len(labels)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise NonSquareMatrix(f"matrix must be {n}x{n} to match {n} labels")
    edges = []
    for i, row in enumerate(rows):
        for j, cell in enumerate(row):
            if isinstance(cell, bool) or not float(cell).is_integer():
                raise EntryOutOfRange(f"cell ({labels[i]}, {labels[j]}) = {cell!r} is not an integer")
            value = int(cell)
            if not 0 <= value <= MAX_STRENGTH:
                raise EntryOutOfRange(f"cell ({labels[i]}, {labels[j]}) = {value} outside 0..{MAX_STRENGTH}")
            if i == j:
                if value:
                    raise NonZeroDiagonal(f"diagonal cell for {labels[i]!r} is {value}")
                continue
            if value:
                edges.append(RelationEdge(labels[i], labels[j], value))
    nodes = [StakeholderNode(lab, lab) for lab in labels]
    return StakeholderNetwork(tuple(nodes), tuple(edges), project_id)


def without_node(net: StakeholderNetwork, node_id: str) -> StakeholderNetwork | None:
    """Copy of ``net`` with ``node_id`` and its incident arcs removed (None if nothing is left)."""
    net.node(node_id)
    nodes = tuple(nd for nd in net.nodes if nd.id != node_id)
    if not nodes:
        return None
    edges = tuple(e for e in net.edges if node_id not in e.key)
    return StakeholderNetwork(nodes, edges, net.project_id)


def relabel(net: StakeholderNetwork, mapping: dict[str, str]) -> StakeholderNetwork:
    """Rename node ids through a bijective ``mapping``; metadata is carried along."""
    nodes = tuple(replace(nd, id=mapping[nd.id]) for nd in net.nodes)
    edges = tuple(replace(e, source=mapping[e.source], target=mapping[e.target]) for e in net.edges)
    return StakeholderNetwork(nodes, edges, net.project_id)
