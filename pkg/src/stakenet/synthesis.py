"""Cross-project synthesis.

Project networks use project-specific titles ("Global Rollout Mgr",
"Business Deployment Mgr", ...). :func:`canonicalize_roles` maps them onto a
small shared role vocabulary so that :func:`aggregate_generic_model` can
combine projects by majority: a relation enters the generic model when enough
projects show it.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import statistics
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Any, Literal

import numpy as np

from .errors import (
    EmptyInput,
    InvalidPhase,
    QuorumExceedsProjects,
    StakenetError,
    UnknownCanonicalRole,
    UnmappedRole,
)
from .ingest import edge_to_dict, network_to_dict, normalize_role
from .metrics import CentralityReport
from .network import (
    OrgGroup,
    RelationEdge,
    StakeholderNetwork,
    StakeholderNode,
    TieType,
    to_sociomatrix,
)

logger = logging.getLogger(__name__)

CANONICAL_ROLES: dict[str, OrgGroup] = {
    "ProgramManager": OrgGroup.PROJECT,
    "ProjectManager": OrgGroup.PROJECT,
    "ProcessOwner": OrgGroup.BUSINESS,
    "BusinessOwner": OrgGroup.BUSINESS,
    "SolutionOwner": OrgGroup.PROJECT,
    "DeploymentManager": OrgGroup.PROJECT,
    "DevelopmentTeam": OrgGroup.PROJECT,
    "TechnicalTeam": OrgGroup.PROJECT,
    "IntegrationTeam": OrgGroup.PROJECT,
    "TrainingTeam": OrgGroup.PROJECT,
    "KeyUsers": OrgGroup.BUSINESS,
    "Users": OrgGroup.BUSINESS,
    "SteeringGroup": OrgGroup.COMPANY,
    "CompanyManagement": OrgGroup.COMPANY,
}


def _data_text(name: str) -> str:
    return resources.files("stakenet").joinpath("data", name).read_text(encoding="utf-8")


def _merge_labels(labels: Iterable[str | None]) -> str | None:
    present = sorted({lab for lab in labels if lab})
    return "; ".join(present) if present else None


def _combine_edges(source: str, target: str, edges: Sequence[RelationEdge], strength: int) -> RelationEdge:
    ties = {e.tie_type for e in edges}
    return RelationEdge(
        source,
        target,
        strength,
        ties.pop() if len(ties) == 1 else TieType.UNKNOWN,
        any(e.conflict for e in edges),
        _merge_labels(e.frequency_label for e in edges),
        frozenset().union(*(e.provenance for e in edges)),
    )


# -- role canonicalization ----------------------------------------------------


class RoleAliasTable:
    """Raw role name -> canonical role. Lookups ignore case and surrounding whitespace."""

    def __init__(self, mapping: Mapping[str, str] | None = None):
        self._map: dict[str, str] = {}
        for raw, canonical in (mapping or {}).items():
            self.add(raw, canonical)

    def add(self, raw_name: str, canonical_role: str) -> None:
        canonical_role = canonical_role.strip()
        if canonical_role not in CANONICAL_ROLES:
            raise UnknownCanonicalRole(
                f"{canonical_role!r} is not a canonical role; expected one of {', '.join(CANONICAL_ROLES)}"
            )
        self._map[normalize_role(raw_name)] = canonical_role

    def __contains__(self, raw_name: object) -> bool:
        return isinstance(raw_name, str) and normalize_role(raw_name) in self._map

    def __len__(self) -> int:
        return len(self._map)

    def __getitem__(self, raw_name: str) -> str:
        try:
            return self._map[normalize_role(raw_name)]
        except KeyError:
            raise UnmappedRole(raw_name) from None

    def get(self, raw_name: str, default: str | None = None) -> str | None:
        return self._map.get(normalize_role(raw_name), default)

    def items(self):
        return sorted(self._map.items())

    def extended(self, other: "RoleAliasTable | Mapping[str, str]") -> "RoleAliasTable":
        merged = RoleAliasTable()
        merged._map = dict(self._map)
        for raw, canonical in other.items():
            merged.add(raw, canonical)
        return merged

    @classmethod
    def from_csv(cls, content: str) -> "RoleAliasTable":
        table = cls()
        for lineno, row in enumerate(csv.reader(io.StringIO(content)), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if lineno == 1 and [c.strip().casefold() for c in row] == ["raw_name", "canonical_role"]:
                continue
            if len(row) != 2:
                raise StakenetError(f"alias table line {lineno}: expected raw_name,canonical_role")
            table.add(row[0], row[1])
        return table

    @classmethod
    def default(cls) -> "RoleAliasTable":
        """Built-in table covering every project role title seen in the three case projects."""
        table = cls.from_csv(_data_text("aliases.csv"))
        for role in CANONICAL_ROLES:
            table.add(role, role)
        return table


def canonicalize_roles(net: StakeholderNetwork, aliases: RoleAliasTable) -> StakeholderNetwork:
    """Collapse nodes onto canonical roles; parallel arcs keep the larger strength."""
    image = {nd.id: aliases[nd.role_name] for nd in net.nodes}

    members: dict[str, list[StakeholderNode]] = defaultdict(list)
    for nd in net.nodes:
        members[image[nd.id]].append(nd)
    nodes = []
    for role, group in sorted(members.items()):
        originals = sorted({nd.role_name for nd in group})
        notes = [f"from: {', '.join(originals)}"] + [nd.notes for nd in group if nd.notes]
        nodes.append(StakeholderNode(role, role, CANONICAL_ROLES[role], role, "; ".join(notes)))

    buckets: dict[tuple[str, str], list[RelationEdge]] = defaultdict(list)
    for e in net.edges:
        u, v = image[e.source], image[e.target]
        if u == v:
            logger.warning("dropping %s -> %s: both map to %s", e.source, e.target, u)
            continue
        buckets[(u, v)].append(e)
    edges = [_combine_edges(u, v, es, max(e.strength for e in es)) for (u, v), es in sorted(buckets.items())]
    return StakeholderNetwork(tuple(nodes), tuple(edges), net.project_id)


# -- generic model ----------------------------------------------------------------


@dataclass(frozen=True)
class GenericModel:
    network: StakeholderNetwork
    support: Mapping[tuple[str, str], int]
    external_validated: Mapping[tuple[str, str], bool]
    quorum: int
    projects: tuple[str, ...] = ()

    def strength(self, source: str, target: str) -> int:
        e = self.network.edge(source, target)
        return 0 if e is None else e.strength

    def to_dict(self) -> dict[str, Any]:
        doc = network_to_dict(self.network)
        doc["kind"] = "generic_model"
        doc["quorum"] = self.quorum
        doc["projects"] = list(self.projects)
        doc["edges"] = [
            {**edge_to_dict(e), "support": self.support[e.key], "external_validated": self.external_validated[e.key]}
            for e in self.network.edges
        ]
        return doc


def default_quorum(n_projects: int) -> int:
    return max(1, math.ceil(n_projects / 2))


def aggregate_generic_model(
    nets: Sequence[StakeholderNetwork],
    quorum: int | None = None,
    strength_rule: Literal["median-low", "max"] = "median-low",
    external_edges: Iterable[RelationEdge] = (),
) -> GenericModel:
    """Majority combination of canonicalized project networks.

    A directed relation is kept when at least ``quorum`` projects contain it
    (default: a strict majority rounded up). ``external_edges`` are added
    regardless of support and flagged as externally validated.
    """
    if not nets:
        raise EmptyInput("aggregate_generic_model needs at least one network")
    quorum = default_quorum(len(nets)) if quorum is None else quorum
    if quorum < 1:
        raise StakenetError("quorum must be at least 1")
    if quorum > len(nets):
        raise QuorumExceedsProjects(f"quorum {quorum} exceeds the {len(nets)} input projects")
    if strength_rule not in ("median-low", "max"):
        raise StakenetError(f"unknown strength rule {strength_rule!r}")

    node_support: dict[str, int] = defaultdict(int)
    node_seen: dict[str, list[StakeholderNode]] = defaultdict(list)
    edge_seen: dict[tuple[str, str], list[RelationEdge]] = defaultdict(list)
    for net in nets:
        for nd in net.nodes:
            node_support[nd.id] += 1
            node_seen[nd.id].append(nd)
        for e in net.edges:
            edge_seen[e.key].append(e)

    support: dict[tuple[str, str], int] = {}
    external: dict[tuple[str, str], bool] = {}
    edges: dict[tuple[str, str], RelationEdge] = {}
    for key, es in sorted(edge_seen.items()):
        if len(es) < quorum:
            continue
        strengths = [e.strength for e in es]
        agg = statistics.median_low(strengths) if strength_rule == "median-low" else max(strengths)
        edges[key] = _combine_edges(*key, es, agg)
        support[key] = len(es)
        external[key] = False

    for e in sorted(external_edges, key=lambda e: e.key):
        if e.key in edges:
            logger.info("external edge %s -> %s already has project support", *e.key)
            continue
        edges[e.key] = e
        support[e.key] = len(edge_seen.get(e.key, ()))
        external[e.key] = True

    keep = {nid for nid, count in node_support.items() if count >= quorum}
    keep |= {end for key in edges for end in key}
    if not keep:
        raise EmptyInput(f"no role or relation reaches quorum {quorum}")

    nodes = []
    for nid in sorted(keep):
        if nid in CANONICAL_ROLES:
            nodes.append(StakeholderNode(nid, nid, CANONICAL_ROLES[nid], nid))
        elif node_seen[nid]:
            first = min(node_seen[nid], key=lambda nd: (nd.role_name, nd.org_group.value))
            nodes.append(StakeholderNode(nid, first.role_name, first.org_group, first.canonical_role))
        else:
            nodes.append(StakeholderNode(nid, nid))
    network = StakeholderNetwork(tuple(nodes), tuple(edges.values()), "generic")
    projects = tuple(sorted(net.project_id for net in nets))
    return GenericModel(network, support, external, quorum, projects)


# -- criticality --------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalityScore:
    role: str
    quant: float
    votes: int
    votes_norm: float
    combined: float
    rank: int = 0


def _tied_percentiles(values: Mapping[str, float | None]) -> dict[str, float]:
    """1.0 for the top value, 0.0 for the bottom; tied values share their mean rank."""
    n = len(values)
    if n == 1:
        return {k: 1.0 for k in values}
    # None ranks below every defined value
    key = {k: (-math.inf if v is None else round(v, 9)) for k, v in values.items()}
    ordered = sorted(key.values(), reverse=True)
    out = {}
    for k, v in key.items():
        first = ordered.index(v) + 1
        last = len(ordered) - ordered[::-1].index(v)
        mean_rank = (first + last) / 2
        out[k] = (n - mean_rank) / (n - 1)
    return out


def criticality_scores(
    report: CentralityReport,
    votes: Mapping[str, int],
    weights: tuple[float, float] = (0.5, 0.5),
) -> list[CriticalityScore]:
    """Blend centrality standing with interviewees' critical votes.

    ``quant`` averages the degree, closeness and betweenness rank percentiles
    (top rank 1.0); ``votes_norm`` divides by the largest vote count.
    """
    w_quant, w_votes = (float(w) for w in weights)
    if w_quant < 0 or w_votes < 0 or (w_quant == 0 and w_votes == 0):
        raise StakenetError("weights must be non-negative and not both zero")
    rows = report.rows
    pct = [
        _tied_percentiles({r.node: float(r.degree_abs) for r in rows}),
        _tied_percentiles({r.node: r.closeness_rel_pct for r in rows}),
        _tied_percentiles({r.node: r.betweenness_raw for r in rows}),
    ]
    top_votes = max(votes.values(), default=0)
    total = w_quant + w_votes
    scored = []
    for r in rows:
        quant = sum(p[r.node] for p in pct) / 3
        v = int(votes.get(r.node, 0))
        v_norm = v / top_votes if top_votes > 0 else 0.0
        combined = w_quant * quant + w_votes * v_norm
        order_key = round((w_quant * quant + w_votes * v_norm) / total, 12)
        scored.append((order_key, CriticalityScore(r.node, quant, v, v_norm, combined)))
    scored.sort(key=lambda item: (-item[0], item[1].role))
    return [
        CriticalityScore(s.role, s.quant, s.votes, s.votes_norm, s.combined, rank)
        for rank, (_, s) in enumerate(scored, start=1)
    ]


# -- project phases -------------------------------------------------------------------


class ProjectPhase(str, Enum):
    FEASIBILITY_STUDY = "FeasibilityStudy"
    PLANNING = "Planning"
    ANALYSIS = "Analysis"
    DESIGN = "Design"
    BUILD = "Build"
    TEST = "Test"
    DEPLOY = "Deploy"
    HAND_OVER = "HandOver"

    @classmethod
    def parse(cls, token: "str | ProjectPhase") -> "ProjectPhase":
        if isinstance(token, ProjectPhase):
            return token
        key = "".join(ch for ch in str(token).casefold() if ch.isalnum())
        for phase in cls:
            if key in (phase.value.casefold(), phase.name.replace("_", "").casefold()):
                return phase
        raise InvalidPhase(f"unknown phase {token!r}; expected one of {', '.join(p.value for p in cls)}")


_PHASE_ROLES: dict[ProjectPhase, frozenset[str]] = {
    ProjectPhase.FEASIBILITY_STUDY: frozenset({"CompanyManagement", "BusinessOwner"}),
    ProjectPhase.PLANNING: frozenset({"ProgramManager", "ProcessOwner", "BusinessOwner"}),
    ProjectPhase.ANALYSIS: frozenset({"ProjectManager", "SolutionOwner", "DevelopmentTeam"}),
    ProjectPhase.DESIGN: frozenset({"ProjectManager", "SolutionOwner", "DevelopmentTeam"}),
    ProjectPhase.BUILD: frozenset({"ProjectManager", "SolutionOwner", "DevelopmentTeam"}),
    ProjectPhase.TEST: frozenset({"TrainingTeam", "KeyUsers", "DeploymentManager"}),
    ProjectPhase.DEPLOY: frozenset({"TrainingTeam", "KeyUsers", "DeploymentManager"}),
    ProjectPhase.HAND_OVER: frozenset({"DeploymentManager", "KeyUsers"}),
}


def phase_critical_roles(phase: ProjectPhase | str) -> frozenset[str]:
    return _PHASE_ROLES[ProjectPhase.parse(phase)]


def _role_of(node: StakeholderNode) -> str:
    return node.canonical_role or node.id


def phase_coverage_check(net: StakeholderNetwork, phase: ProjectPhase | str) -> list[str]:
    phase = ProjectPhase.parse(phase)
    adj = net.adjacency(directed=False)
    warnings = []
    for role in sorted(phase_critical_roles(phase)):
        holders = [nd.id for nd in net.nodes if _role_of(nd) == role]
        if not holders:
            warnings.append(f"{role}: critical in {phase.value} but absent from the network")
        elif all(not adj[h] for h in holders):
            warnings.append(f"{role}: critical in {phase.value}, present but isolated")
    return warnings


# -- conflicts ------------------------------------------------------------------------


@dataclass(frozen=True)
class ConflictRecord:
    conflict_id: int
    stakeholders: frozenset[str]
    description: str = ""
    consequences: str = ""
    mitigation: str = ""
    projects: frozenset[str] = frozenset()
    title: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "stakeholders", frozenset(self.stakeholders))
        object.__setattr__(self, "projects", frozenset(self.projects))
        if not self.stakeholders:
            raise StakenetError(f"conflict {self.conflict_id} lists no stakeholders")

    def to_dict(self) -> dict[str, Any]:
        return {
            "conflict_id": self.conflict_id,
            "title": self.title,
            "stakeholders": sorted(self.stakeholders),
            "description": self.description,
            "consequences": self.consequences,
            "mitigation": self.mitigation,
            "projects": sorted(self.projects),
        }


def parse_conflict_registry(content: str) -> list[ConflictRecord]:
    try:
        doc = json.loads(content)
    except json.JSONDecodeError as err:
        raise StakenetError(f"conflict registry is not valid JSON: {err.msg}") from None
    if not isinstance(doc, list):
        raise StakenetError("conflict registry must be a JSON array")
    records = []
    seen: set[int] = set()
    for item in doc:
        try:
            rec = ConflictRecord(
                int(item["conflict_id"]),
                frozenset(item["stakeholders"]),
                item.get("description", ""),
                item.get("consequences", ""),
                item.get("mitigation", ""),
                frozenset(item.get("projects", ())),
                item.get("title", ""),
            )
        except (KeyError, TypeError, ValueError) as err:
            raise StakenetError(f"malformed conflict record: {err}") from None
        if rec.conflict_id in seen:
            raise StakenetError(f"duplicate conflict_id {rec.conflict_id}")
        seen.add(rec.conflict_id)
        records.append(rec)
    return sorted(records, key=lambda r: r.conflict_id)


def default_conflict_registry() -> list[ConflictRecord]:
    return parse_conflict_registry(_data_text("conflicts.json"))


@dataclass(frozen=True)
class ConflictMatch:
    record: ConflictRecord
    edges: tuple[RelationEdge, ...]


@dataclass(frozen=True)
class ConflictMatches:
    matches: tuple[ConflictMatch, ...]
    unregistered: tuple[RelationEdge, ...] = ()

    def __len__(self) -> int:
        return len(self.matches)

    def __iter__(self):
        return iter(self.matches)

    @property
    def notes(self) -> list[str]:
        return [f"unregistered conflict: {e.source} -> {e.target}" for e in self.unregistered]


def match_conflicts(net: StakeholderNetwork, registry: Sequence[ConflictRecord]) -> ConflictMatches:
    """Registry entries whose roles appear in ``net`` joined by a conflict-flagged relation."""
    role = {nd.id: _role_of(nd) for nd in net.nodes}
    present = set(role.values())
    flagged = [e for e in net.edges if e.conflict]
    matches = []
    claimed: set[tuple[str, str]] = set()
    for rec in registry:
        if len(rec.stakeholders & present) < 2:
            continue
        hits = tuple(e for e in flagged if role[e.source] in rec.stakeholders and role[e.target] in rec.stakeholders)
        if hits:
            matches.append(ConflictMatch(rec, hits))
            claimed.update(e.key for e in hits)
    unregistered = tuple(e for e in flagged if e.key not in claimed)
    return ConflictMatches(tuple(matches), unregistered)


# -- relational ties ---------------------------------------------------------------------


def tie_matrices(net: StakeholderNetwork) -> tuple[list[str], np.ndarray, np.ndarray]:
    """(labels, authority, strength): authority[i, j] is true when i has formal authority over j."""
    labels, strength = to_sociomatrix(net)
    pos = {lab: i for i, lab in enumerate(labels)}
    authority = np.zeros(strength.shape, dtype=bool)
    for e in net.edges:
        if e.tie_type is TieType.AUTHORITY:
            authority[pos[e.source], pos[e.target]] = True
    return labels, authority, strength


def load_aliases(path: str | Path) -> RoleAliasTable:
    return RoleAliasTable.from_csv(Path(path).read_text(encoding="utf-8"))


def generic_model_from_dict(doc: Mapping[str, Any]) -> GenericModel:
    from .ingest import network_from_dict

    net = network_from_dict(doc)
    support = {}
    external = {}
    for e in doc.get("edges", []):
        key = (str(e["from"]), str(e["to"]))
        support[key] = int(e.get("support", 0))
        external[key] = bool(e.get("external_validated", False))
    return GenericModel(net, support, external, int(doc.get("quorum", 1)), tuple(doc.get("projects", ())))
