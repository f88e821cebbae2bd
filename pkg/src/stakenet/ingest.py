"""Interview-graph parsing, per-project merging and network file formats.

Interview files come in two shapes.

CSV::

    # comment lines are ignored
    from,to,strength,tie,conflict,frequency
    PM,DevTeam,2,B,false,weekly
    #critical
    PM

JSON::

    {"interviewee_id": "i1", "interviewee_role": "PM",
     "edges": [{"from": "PM", "to": "DevTeam", "strength": 2, "tie": "B",
                "conflict": false, "frequency": "weekly"}],
     "critical": ["PM"]}

Several interviews of the same project are folded into one
:class:`~stakenet.network.StakeholderNetwork` by :func:`merge_interviews`.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import statistics
import warnings
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal

from .errors import (
    EmptyInput,
    NoSurvivingEdges,
    ParseError,
    StakenetError,
    StrengthOutOfRange,
    UnknownTieType,
)
from .network import (
    MAX_STRENGTH,
    OrgGroup,
    RelationEdge,
    StakeholderNetwork,
    StakeholderNode,
    TieType,
    from_sociomatrix,
    to_sociomatrix,
)

logger = logging.getLogger(__name__)

CSV_HEADER = ("from", "to", "strength", "tie", "conflict", "frequency")
CRITICAL_MARKER = "#critical"

_TRUE = {"true", "t", "yes", "y", "1"}
_FALSE = {"false", "f", "no", "n", "0", ""}


def normalize_role(name: str) -> str:
    """Shared role token: whitespace-trimmed and case-folded."""
    return name.strip().casefold()


@dataclass(frozen=True)
class EdgeRecord:
    from_role: str
    to_role: str
    strength: int | None = None
    tie_type: TieType | None = None
    conflict: bool = False
    frequency_label: str | None = None
    line: int | None = None


@dataclass(frozen=True)
class InterviewGraph:
    interviewee_id: str
    interviewee_role: str = ""
    records: tuple[EdgeRecord, ...] = ()
    critical_votes: frozenset[str] = frozenset()

    def roles(self) -> set[str]:
        out = set()
        for r in self.records:
            out.add(normalize_role(r.from_role))
            out.add(normalize_role(r.to_role))
        return out


@dataclass(frozen=True)
class MergePolicy:
    strength_rule: Literal["max", "median-round-down"] = "max"
    require_corroboration: int = 1

    def __post_init__(self) -> None:
        if self.strength_rule not in ("max", "median-round-down"):
            raise StakenetError(f"unknown strength rule {self.strength_rule!r}")
        if int(self.require_corroboration) < 1:
            raise StakenetError("require_corroboration must be at least 1")


# -- parsing ------------------------------------------------------------------


def _parse_strength(raw: Any, line: int | None) -> int | None:
    if raw is None or (isinstance(raw, str) and not raw.strip()):
        return None
    if isinstance(raw, bool):
        raise ParseError(line, f"strength {raw!r} is not an integer")
    try:
        value = int(str(raw).strip()) if isinstance(raw, str) else int(raw)
        if not isinstance(raw, str) and value != raw:
            raise ValueError
    except (TypeError, ValueError):
        raise ParseError(line, f"strength {raw!r} is not an integer") from None
    if not 0 <= value <= MAX_STRENGTH:
        raise StrengthOutOfRange(line, f"strength {value} outside 0..{MAX_STRENGTH}")
    return value


def _parse_tie(raw: Any, line: int | None) -> TieType | None:
    if raw is None or not str(raw).strip():
        return None
    key = str(raw).strip().upper()
    if key == "A":
        return TieType.AUTHORITY
    if key == "B":
        return TieType.INFO_SHARING
    raise UnknownTieType(line, f"tie type {raw!r} is not A or B")


def _parse_conflict(raw: Any, line: int | None) -> bool:
    if isinstance(raw, bool):
        return raw
    key = "" if raw is None else str(raw).strip().casefold()
    if key in _TRUE:
        return True
    if key in _FALSE:
        return False
    raise ParseError(line, f"conflict flag {raw!r} is not a boolean")


def _make_record(src: Any, dst: Any, strength: Any, tie: Any, conflict: Any, freq: Any, line: int | None) -> EdgeRecord:
    src = "" if src is None else str(src).strip()
    dst = "" if dst is None else str(dst).strip()
    if not src or not dst:
        raise ParseError(line, "missing 'from' or 'to' role")
    if normalize_role(src) == normalize_role(dst):
        raise ParseError(line, f"relation from {src!r} to itself")
    freq = None if freq is None or not str(freq).strip() else str(freq).strip()
    return EdgeRecord(
        src,
        dst,
        _parse_strength(strength, line),
        _parse_tie(tie, line),
        _parse_conflict(conflict, line),
        freq,
        line,
    )


def _check_votes(
    votes: list[tuple[str, int | None]], records: list[EdgeRecord], interviewee_role: str
) -> list[ParseError]:
    known = {normalize_role(r.from_role) for r in records} | {normalize_role(r.to_role) for r in records}
    if interviewee_role:
        known.add(normalize_role(interviewee_role))
    return [
        ParseError(line, f"critical role {role!r} does not appear in any relation")
        for role, line in votes
        if normalize_role(role) not in known
    ]


def _parse_csv(text: str, interviewee_id: str) -> InterviewGraph:
    problems: list[ParseError] = []
    records: list[EdgeRecord] = []
    votes: list[tuple[str, int | None]] = []
    header_seen = False
    in_critical = False
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        stripped = raw_line.strip()
        if not stripped:
            continue
        if stripped.casefold() == CRITICAL_MARKER:
            in_critical = True
            continue
        if stripped.startswith("#"):
            continue
        if in_critical:
            votes.append((stripped, lineno))
            continue
        fields = next(csv.reader([raw_line]))
        if not header_seen:
            if tuple(f.strip().casefold() for f in fields) != CSV_HEADER:
                problems.append(ParseError(lineno, f"expected header {','.join(CSV_HEADER)}"))
                break
            header_seen = True
            continue
        if len(fields) > len(CSV_HEADER):
            problems.append(ParseError(lineno, f"expected at most {len(CSV_HEADER)} fields, got {len(fields)}"))
            continue
        fields += [""] * (len(CSV_HEADER) - len(fields))
        try:
            records.append(_make_record(*fields, line=lineno))
        except ParseError as err:
            problems.append(err)
    if not problems and not header_seen and (records or votes):
        problems.append(ParseError(1, "missing header"))
    problems.extend(_check_votes(votes, records, ""))
    if problems:
        first = problems[0]
        first.problems = problems
        raise first
    return InterviewGraph(interviewee_id, "", tuple(records), frozenset(v for v, _ in votes))


def _parse_json(text: str) -> InterviewGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.lineno, f"invalid JSON: {err.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(None, "interview JSON must be an object")
    interviewee_id = str(doc.get("interviewee_id") or "").strip()
    if not interviewee_id:
        raise ParseError(None, "interviewee_id is missing or empty")
    interviewee_role = str(doc.get("interviewee_role") or "").strip()
    edges = doc.get("edges", [])
    critical = doc.get("critical", [])
    if not isinstance(edges, list) or not isinstance(critical, list):
        raise ParseError(None, "'edges' and 'critical' must be arrays")
    problems: list[ParseError] = []
    records: list[EdgeRecord] = []
    for i, item in enumerate(edges):
        if not isinstance(item, dict):
            problems.append(ParseError(None, f"edges[{i}] is not an object"))
            continue
        try:
            records.append(
                _make_record(
                    item.get("from"),
                    item.get("to"),
                    item.get("strength"),
                    item.get("tie"),
                    item.get("conflict", False),
                    item.get("frequency"),
                    line=None,
                )
            )
        except ParseError as err:
            cls = type(err)
            problems.append(cls(None, f"edges[{i}]: {err.reason}"))
    votes = [(str(v).strip(), None) for v in critical if str(v).strip()]
    problems.extend(_check_votes(votes, records, interviewee_role))
    if problems:
        first = problems[0]
        first.problems = problems
        raise first
    return InterviewGraph(interviewee_id, interviewee_role, tuple(records), frozenset(v for v, _ in votes))


def parse_interview_graph(
    content: bytes | str,
    interviewee_id: str = "interviewee",
    fmt: Literal["csv", "json"] | None = None,
) -> InterviewGraph:
    """Parse one interview file. CSV files take ``interviewee_id`` from the caller.

    Raises the first :class:`ParseError` found; its ``problems`` attribute lists
    every malformed row in the file.
    """
    if isinstance(content, bytes):
        try:
            text = content.decode("utf-8-sig")
        except UnicodeDecodeError as err:
            raise ParseError(None, f"not valid UTF-8: {err.reason}") from None
    else:
        text = content
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "csv"
    if fmt == "json":
        return _parse_json(text)
    return _parse_csv(text, interviewee_id)


# -- merging --------------------------------------------------------------------


def _merged_strength(values: list[int], rule: str) -> int:
    if not values:
        # a drawn relation without a stated strength still counts as some influence
        return 1
    if rule == "max":
        return max(values)
    return math.floor(statistics.median(values))


def merge_interviews(
    graphs: Sequence[InterviewGraph],
    policy: MergePolicy | None = None,
    project_id: str = "",
    org_groups: Mapping[str, OrgGroup] | None = None,
) -> StakeholderNetwork:
    """Fold several interviewees' graphs of one project into a single network.

    ``org_groups`` maps normalized role tokens to their organization group;
    unlisted roles default to the project organization.
    """
    if not graphs:
        raise EmptyInput("merge_interviews needs at least one interview graph")
    policy = policy or MergePolicy()
    org_groups = {normalize_role(k): OrgGroup.parse(v) for k, v in (org_groups or {}).items()}

    raw_names: dict[str, set[str]] = defaultdict(set)
    # (u, v) -> interviewee -> records
    reports: dict[tuple[str, str], dict[str, list[EdgeRecord]]] = defaultdict(lambda: defaultdict(list))
    for g in graphs:
        for rec in g.records:
            u, v = normalize_role(rec.from_role), normalize_role(rec.to_role)
            raw_names[u].add(rec.from_role.strip())
            raw_names[v].add(rec.to_role.strip())
            if rec.strength == 0:
                logger.warning("dropping strength-0 relation %s -> %s reported by %s", u, v, g.interviewee_id)
                continue
            reports[(u, v)][g.interviewee_id].append(rec)

    if not raw_names:
        raise EmptyInput("no roles are mentioned in any interview")

    edges = []
    for (u, v), by_person in sorted(reports.items()):
        if len(by_person) < policy.require_corroboration:
            continue
        per_person = [
            max(r.strength for r in recs if r.strength is not None)
            for recs in by_person.values()
            if any(r.strength is not None for r in recs)
        ]
        strength = _merged_strength(per_person, policy.strength_rule)
        if strength == 0:
            continue
        records = [r for recs in by_person.values() for r in recs]
        ties = {r.tie_type or TieType.UNKNOWN for r in records}
        labels = sorted({r.frequency_label for r in records if r.frequency_label})
        edges.append(
            RelationEdge(
                u,
                v,
                strength,
                ties.pop() if len(ties) == 1 else TieType.UNKNOWN,
                any(r.conflict for r in records),
                "; ".join(labels) or None,
                frozenset(by_person),
            )
        )

    nodes = [
        StakeholderNode(role, min(names), org_groups.get(role, OrgGroup.PROJECT))
        for role, names in sorted(raw_names.items())
    ]
    if not edges:
        warnings.warn(f"project {project_id!r}: no relation survived merging", NoSurvivingEdges, stacklevel=2)
    return StakeholderNetwork(tuple(nodes), tuple(edges), project_id)


def tally_critical_votes(graphs: Iterable[InterviewGraph]) -> dict[str, int]:
    """Number of distinct interviewees naming each role critical, most votes first."""
    voters: dict[str, set[str]] = defaultdict(set)
    for g in graphs:
        for role in g.critical_votes:
            voters[normalize_role(role)].add(g.interviewee_id)
    ranked = sorted(voters.items(), key=lambda kv: (-len(kv[1]), kv[0]))
    return {role: len(who) for role, who in ranked}


# -- network files --------------------------------------------------------------


def parse_sociomatrix_csv(content: bytes | str, project_id: str = "") -> StakeholderNetwork:
    """Read a labelled sociomatrix: first row and column hold node ids."""
    text = content.decode("utf-8-sig") if isinstance(content, bytes) else content
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError(1, "empty sociomatrix")
    col_labels = [c.strip() for c in rows[0][1:]]
    row_labels = []
    matrix = []
    for lineno, row in enumerate(rows[1:], start=2):
        row_labels.append(row[0].strip())
        cells = []
        for cell in row[1:]:
            cell = cell.strip()
            try:
                cells.append(int(cell) if cell else 0)
            except ValueError:
                raise ParseError(lineno, f"cell {cell!r} is not an integer") from None
        matrix.append(cells)
    if row_labels != col_labels:
        raise ParseError(1, "row labels must match column labels in the same order")
    return from_sociomatrix(col_labels, matrix, project_id)


def format_sociomatrix_csv(net: StakeholderNetwork) -> str:
    labels, matrix = to_sociomatrix(net)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + labels)
    for lab, row in zip(labels, matrix.tolist()):
        writer.writerow([lab] + row)
    return buf.getvalue()


def edge_to_dict(e: RelationEdge) -> dict[str, Any]:
    return {
        "from": e.source,
        "to": e.target,
        "strength": e.strength,
        "tie": None if e.tie_type is TieType.UNKNOWN else e.tie_type.value,
        "conflict": e.conflict,
        "frequency": e.frequency_label,
        "provenance": sorted(e.provenance),
    }


def edge_from_dict(d: Mapping[str, Any]) -> RelationEdge:
    return RelationEdge(
        str(d["from"]),
        str(d["to"]),
        d["strength"],
        TieType.parse(d.get("tie")),
        bool(d.get("conflict", False)),
        d.get("frequency"),
        frozenset(str(p) for p in d.get("provenance", ())),
    )


def network_to_dict(net: StakeholderNetwork) -> dict[str, Any]:
    return {
        "project_id": net.project_id,
        "nodes": [
            {
                "id": nd.id,
                "role_name": nd.role_name,
                "org_group": nd.org_group.value,
                "canonical_role": nd.canonical_role,
                "notes": nd.notes,
            }
            for nd in net.nodes
        ],
        "edges": [edge_to_dict(e) for e in net.edges],
    }


def network_from_dict(doc: Mapping[str, Any]) -> StakeholderNetwork:
    try:
        nodes = [
            StakeholderNode(
                str(n["id"]),
                str(n.get("role_name") or n["id"]),
                n.get("org_group") or OrgGroup.PROJECT,
                n.get("canonical_role"),
                n.get("notes") or "",
            )
            for n in doc["nodes"]
        ]
        edges = [edge_from_dict(e) for e in doc.get("edges", [])]
    except (KeyError, TypeError) as err:
        raise ParseError(None, f"malformed network document: {err}") from None
    return StakeholderNetwork(tuple(nodes), tuple(edges), str(doc.get("project_id") or ""))


def load_network(path: str | Path, policy: MergePolicy | None = None) -> StakeholderNetwork:
    """Read any network-bearing file: network JSON, sociomatrix CSV or an interview file."""
    path = Path(path)
    content = path.read_bytes()
    text = content.decode("utf-8-sig", errors="strict") if content else ""
    head = text.lstrip()
    if head.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise ParseError(err.lineno, f"invalid JSON: {err.msg}") from None
        if isinstance(doc, dict) and "nodes" in doc:
            return network_from_dict(doc)
        graph = parse_interview_graph(text, fmt="json")
        return merge_interviews([graph], policy, project_id=path.stem)
    if head.startswith(","):
        return parse_sociomatrix_csv(text, project_id=path.stem)
    graph = parse_interview_graph(text, interviewee_id=path.stem, fmt="csv")
    return merge_interviews([graph], policy, project_id=path.stem)


def load_interview(path: str | Path) -> InterviewGraph:
    path = Path(path)
    return parse_interview_graph(path.read_bytes(), interviewee_id=path.stem)
