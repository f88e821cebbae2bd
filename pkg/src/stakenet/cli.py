"""``stakenet`` command line.

Exit codes: 0 success, 1 validation or domain error (including usage
errors), 2 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from . import __version__
from .cohesion import bottleneck_ranking, fragility, maximal_cliques
from .errors import ParseError, StakenetError
from .export import to_dot, to_graphml
from .ingest import (
    edge_from_dict,
    load_interview,
    load_network,
    merge_interviews,
)
from .metrics import CentralityReport, centrality_report
from .network import StakeholderNetwork
from .synthesis import (
    GenericModel,
    ProjectPhase,
    RoleAliasTable,
    aggregate_generic_model,
    canonicalize_roles,
    criticality_scores,
    default_conflict_registry,
    generic_model_from_dict,
    load_aliases,
    match_conflicts,
    parse_conflict_registry,
    phase_coverage_check,
)

logger = logging.getLogger("stakenet")

FORMATS = ("json", "csv", "dot", "graphml")


class UsageError(StakenetError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _pct(x: float | None) -> str:
    return "undefined" if x is None else f"{x:.3f}"


def _num(x: float) -> str:
    return f"{x:.6f}"


def _round(x: float | None, digits: int) -> float | None:
    return None if x is None else round(x, digits)


def _json(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _csv(rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _require_format(args: argparse.Namespace, allowed: Sequence[str]) -> str:
    fmt = args.format or allowed[0]
    if fmt not in allowed:
        raise UsageError(f"--format {fmt} is not available for '{args.command}' (use {', '.join(allowed)})")
    return fmt


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _load(paths: Sequence[str]) -> StakeholderNetwork:
    """One network file, or several interview files of the same project."""
    if len(paths) == 1:
        return load_network(paths[0])
    graphs = [load_interview(p) for p in paths]
    return merge_interviews(graphs, project_id=Path(paths[0]).parent.name or "project")


def _aliases(args: argparse.Namespace) -> RoleAliasTable:
    table = RoleAliasTable.default()
    if args.aliases:
        table = table.extended(load_aliases(args.aliases))
    return table


def _load_model_or_network(path: str) -> StakeholderNetwork | GenericModel:
    text = Path(path).read_text(encoding="utf-8-sig")
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise ParseError(err.lineno, f"invalid JSON: {err.msg}") from None
        if isinstance(doc, dict) and doc.get("kind") == "generic_model":
            return generic_model_from_dict(doc)
    return load_network(path)


# -- commands -----------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    diagnostics = []
    code = 0
    for path in args.inputs:
        try:
            load_network(path)
        except OSError as err:
            diagnostics.append(f"{path}: {err.strerror or err}")
            code = 2
        except ParseError as err:
            for problem in err.problems:
                where = f"{path}:{problem.line}" if problem.line is not None else path
                diagnostics.append(f"{where}: {problem.reason}")
            code = max(code, 1)
        except (StakenetError, UnicodeDecodeError) as err:
            diagnostics.append(f"{path}: {err}")
            code = max(code, 1)
    fmt = _require_format(args, ("csv", "json"))
    if fmt == "json":
        _emit(args, _json({"ok": code == 0, "diagnostics": diagnostics}))
    elif diagnostics:
        _emit(args, "".join(d + "\n" for d in diagnostics))
    return code


METRIC_COLUMNS = (
    "node",
    "degree_abs",
    "degree_rel_pct",
    "closeness_rel_pct",
    "betweenness_raw",
    "betweenness_rel",
    "degree_rank",
    "closeness_rank",
    "betweenness_rank",
)


def _metrics_rows(report: CentralityReport):
    return sorted(report.rows, key=lambda r: r.degree_rank)


def cmd_metrics(args: argparse.Namespace) -> int:
    fmt = _require_format(args, ("csv", "json"))
    report = centrality_report(_load(args.inputs), args.mode)
    if fmt == "csv":
        rows = [METRIC_COLUMNS]
        for r in _metrics_rows(report):
            rows.append(
                (
                    r.node,
                    r.degree_abs,
                    _pct(r.degree_rel_pct),
                    _pct(r.closeness_rel_pct),
                    _num(r.betweenness_raw),
                    _num(r.betweenness_rel),
                    r.degree_rank,
                    r.closeness_rank,
                    r.betweenness_rank,
                )
            )
        _emit(args, _csv(rows))
    else:
        doc = {
            "n": report.n,
            "mode": report.mode,
            "nodes": [
                {
                    "node": r.node,
                    "degree_abs": r.degree_abs,
                    "degree_rel_pct": _round(r.degree_rel_pct, 3),
                    "closeness_rel_pct": _round(r.closeness_rel_pct, 3),
                    "betweenness_raw": _round(r.betweenness_raw, 6),
                    "betweenness_rel": _round(r.betweenness_rel, 6),
                    "degree_rank": r.degree_rank,
                    "closeness_rank": r.closeness_rank,
                    "betweenness_rank": r.betweenness_rank,
                }
                for r in _metrics_rows(report)
            ],
            "rankings": {m: report.ranking(m) for m in ("degree", "closeness", "betweenness")},
        }
        _emit(args, _json(doc))
    return 0


def cmd_cliques(args: argparse.Namespace) -> int:
    fmt = _require_format(args, ("csv", "json"))
    cs = maximal_cliques(_load(args.inputs), args.min_size)
    if fmt == "csv":
        _emit(args, f"{len(cs)}\n" + "".join(",".join(c) + "\n" for c in cs))
    else:
        _emit(args, _json({"count": len(cs), "cliques": [list(c) for c in cs]}))
    return 0


def cmd_bottlenecks(args: argparse.Namespace) -> int:
    fmt = _require_format(args, ("csv", "json"))
    if args.k < 1:
        raise UsageError("--k must be a positive integer")
    ranking = bottleneck_ranking(_load(args.inputs), args.k)
    if fmt == "csv":
        rows = [("rank", "node", "role_name", "betweenness_rel", "cut")]
        rows += [(b.rank, b.node, b.role_name, _num(b.betweenness_rel), str(b.cut).lower()) for b in ranking]
        _emit(args, _csv(rows))
    else:
        _emit(
            args,
            _json(
                [
                    {
                        "rank": b.rank,
                        "node": b.node,
                        "role_name": b.role_name,
                        "betweenness_rel": round(b.betweenness_rel, 6),
                        "cut": b.cut,
                    }
                    for b in ranking
                ]
            ),
        )
    return 0


def cmd_fragility(args: argparse.Namespace) -> int:
    fmt = _require_format(args, ("csv", "json"))
    net = _load(args.inputs)
    targets = args.node or list(net.node_ids)
    reports = [fragility(net, nid) for nid in targets]
    if fmt == "csv":
        rows = [("removed", "lost_pairs", "components_before", "components_after", "newly_isolated")]
        rows += [
            (r.removed, r.lost_pairs, r.components_before, r.components_after, ";".join(r.newly_isolated))
            for r in reports
        ]
        _emit(args, _csv(rows))
    else:
        _emit(
            args,
            _json(
                [
                    {
                        "removed": r.removed,
                        "lost_pairs": r.lost_pairs,
                        "components_before": r.components_before,
                        "components_after": r.components_after,
                        "newly_isolated": list(r.newly_isolated),
                    }
                    for r in reports
                ]
            ),
        )
    return 0


def _load_external(path: str):
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    items = doc.get("edges", []) if isinstance(doc, dict) else doc
    try:
        return [edge_from_dict(item) for item in items]
    except (KeyError, TypeError) as err:
        raise ParseError(None, f"malformed external edge: {err}") from None


def _build_model(args: argparse.Namespace) -> GenericModel:
    aliases = _aliases(args)
    nets = [canonicalize_roles(load_network(p), aliases) for p in args.inputs]
    external = _load_external(args.external) if args.external else ()
    return aggregate_generic_model(nets, args.quorum, args.strength_rule, external)


def cmd_aggregate(args: argparse.Namespace) -> int:
    _require_format(args, ("json",))
    if len(args.inputs) < 2:
        raise UsageError("aggregate needs at least two project networks")
    _emit(args, _json(_build_model(args).to_dict()))
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    fmt = _require_format(args, ("dot", "graphml"))
    obj = _load_model_or_network(args.input)
    _emit(args, to_dot(obj) if fmt == "dot" else to_graphml(obj))
    return 0


def _load_votes(path: str, aliases: RoleAliasTable) -> tuple[dict[str, int], list[str]]:
    votes: dict[str, int] = {}
    notes = []
    text = Path(path).read_text(encoding="utf-8-sig")
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if lineno == 1 and [c.strip().casefold() for c in row] == ["role", "votes"]:
            continue
        if len(row) != 2:
            raise ParseError(lineno, "expected role,votes")
        try:
            count = int(row[1])
        except ValueError:
            raise ParseError(lineno, f"vote count {row[1]!r} is not an integer") from None
        if count < 0:
            raise ParseError(lineno, "vote count must be non-negative")
        role = aliases.get(row[0])
        if role is None:
            role = row[0].strip()
            notes.append(f"votes for {role!r} have no alias entry and are matched by node id")
        votes[role] = votes.get(role, 0) + count
    return votes, notes


def _parse_weights(text: str) -> tuple[float, float]:
    try:
        q, v = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--weights expects Q,V, got {text!r}") from None
    return q, v


def cmd_report(args: argparse.Namespace) -> int:
    _require_format(args, ("json",))
    phase = ProjectPhase.parse(args.phase) if args.phase else None
    weights = _parse_weights(args.weights)
    aliases = _aliases(args)
    if len(args.inputs) > 1:
        net = _build_model(args).network
    else:
        net = canonicalize_roles(load_network(args.inputs[0]), aliases)
    votes, notes = _load_votes(args.votes, aliases) if args.votes else ({}, [])
    report = centrality_report(net, args.mode)
    scores = criticality_scores(report, votes, weights)
    registry = (
        parse_conflict_registry(Path(args.conflicts).read_text(encoding="utf-8"))
        if args.conflicts
        else default_conflict_registry()
    )
    conflicts = match_conflicts(net, registry)
    doc = {
        "network": net.project_id,
        "weights": list(weights),
        "criticality": [
            {
                "rank": s.rank,
                "role": s.role,
                "quant": round(s.quant, 6),
                "votes": s.votes,
                "votes_norm": round(s.votes_norm, 6),
                "combined": round(s.combined, 6),
            }
            for s in scores
        ],
        "phase": phase.value if phase else None,
        "phase_warnings": phase_coverage_check(net, phase) if phase else [],
        "conflicts": [
            {
                "conflict_id": m.record.conflict_id,
                "title": m.record.title,
                "stakeholders": sorted(m.record.stakeholders),
                "edges": [[e.source, e.target] for e in m.edges],
                "mitigation": m.record.mitigation,
            }
            for m in conflicts
        ],
        "notes": notes + conflicts.notes,
    }
    _emit(args, _json(doc))
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stakenet", description="Stakeholder network analysis for ERP projects.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--output", metavar="PATH")

    p = sub.add_parser("validate", help="check that input files parse and form valid networks")
    p.add_argument("inputs", nargs="+")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("metrics", help="degree, closeness and betweenness per stakeholder")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--mode", choices=("symmetrized", "directed"), default="symmetrized")
    common(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("cliques", help="maximal cliques of three or more stakeholders")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--min-size", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_cliques)

    p = sub.add_parser("bottlenecks", help="top-k stakeholders by relative betweenness")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--k", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_bottlenecks)

    p = sub.add_parser("fragility", help="effect of removing stakeholders")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--node", action="append", help="node id to remove (repeatable; default all)")
    common(p)
    p.set_defaults(func=cmd_fragility)

    def synthesis_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--aliases", metavar="PATH")
        p.add_argument("--quorum", type=int)
        p.add_argument("--external", metavar="PATH")
        p.add_argument("--strength-rule", choices=("median-low", "max"), default="median-low")

    p = sub.add_parser("aggregate", help="majority-combine project networks into a generic model")
    p.add_argument("inputs", nargs="+")
    synthesis_flags(p)
    common(p)
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("export", help="write a network or generic model as DOT or GraphML")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("report", help="criticality scores, phase coverage and conflict matches")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--mode", choices=("symmetrized", "directed"), default="symmetrized")
    p.add_argument("--votes", metavar="PATH")
    p.add_argument("--phase", metavar="NAME")
    p.add_argument("--weights", default="0.5,0.5", metavar="Q,V")
    p.add_argument("--conflicts", metavar="PATH")
    synthesis_flags(p)
    common(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as err:
        name = getattr(err, "filename", None)
        print(f"stakenet: I/O error: {name + ': ' if name else ''}{err.strerror or err}", file=sys.stderr)
        return 2
    except (StakenetError, ValueError) as err:
        print(f"stakenet: error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
