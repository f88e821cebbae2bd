"""Degree, closeness and betweenness centrality on hop-count geodesics.

All metrics default to the symmetrized view, where a relation is an unordered
stakeholder pair regardless of arc direction. ``mode="directed"`` follows arc
direction instead (for distances, closeness and betweenness; degree always
counts unordered pairs).

Relative values follow the usual sociometric conventions:

* relative degree    = 100 * degree / (n - 1)
* relative closeness = 100 * (n - 1) / farness, undefined on disconnected graphs
* relative betweenness = raw betweenness / (n - 1)
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .errors import InsufficientNodes, NetworkTooLarge
from .network import StakeholderNetwork

Mode = Literal["symmetrized", "directed"]

ORACLE_MAX_NODES = 12


def _adjacency(net: StakeholderNetwork, mode: Mode) -> dict[str, frozenset[str]]:
    if mode not in ("symmetrized", "directed"):
        raise ValueError(f"mode must be 'symmetrized' or 'directed', not {mode!r}")
    return net.adjacency(directed=mode == "directed")


def _bfs(adj: dict[str, frozenset[str]], source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


@dataclass(frozen=True)
class DistanceMatrix:
    """Hop counts between labelled nodes; ``None`` marks an unreachable pair."""

    labels: tuple[str, ...]
    dist: tuple[tuple[int | None, ...], ...]

    def __call__(self, source: str, target: str) -> int | None:
        return self.dist[self.labels.index(source)][self.labels.index(target)]


def geodesic_distances(net: StakeholderNetwork, mode: Mode = "symmetrized") -> DistanceMatrix:
    adj = _adjacency(net, mode)
    labels = net.node_ids
    rows = []
    for s in labels:
        d = _bfs(adj, s)
        rows.append(tuple(d.get(t) for t in labels))
    return DistanceMatrix(labels, tuple(rows))


def degree_centrality(net: StakeholderNetwork) -> dict[str, tuple[int, float | None]]:
    """(number of related stakeholders, relative degree in %) per node."""
    n = len(net)
    adj = net.adjacency(directed=False)
    out = {}
    for nid in net.node_ids:
        k = len(adj[nid])
        out[nid] = (k, 100.0 * k / (n - 1) if n >= 2 else None)
    return out


def closeness_centrality(net: StakeholderNetwork, mode: Mode = "symmetrized") -> dict[str, float | None]:
    """Relative closeness in % per node; ``None`` when some node is unreachable."""
    n = len(net)
    adj = _adjacency(net, mode)
    out: dict[str, float | None] = {}
    for nid in net.node_ids:
        d = _bfs(adj, nid)
        if n < 2 or len(d) < n:
            out[nid] = None
        else:
            out[nid] = 100.0 * (n - 1) / sum(d.values())
    return out


def _brandes(adj: dict[str, frozenset[str]], nodes: tuple[str, ...]) -> dict[str, float]:
    score = dict.fromkeys(nodes, 0.0)
    for s in nodes:
        stack = []
        preds: dict[str, list[str]] = {v: [] for v in nodes}
        sigma = dict.fromkeys(nodes, 0)
        sigma[s] = 1
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in sorted(adj[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(nodes, 0.0)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]
    return score


def betweenness_centrality(net: StakeholderNetwork, mode: Mode = "symmetrized") -> dict[str, tuple[float, float]]:
    """(raw, relative) betweenness per node via single-source dependency accumulation.

    In the symmetrized view each unordered pair is counted once; in directed
    mode every ordered pair counts.
    """
    adj = _adjacency(net, mode)
    raw = _brandes(adj, net.node_ids)
    if mode == "symmetrized":
        raw = {k: v / 2.0 for k, v in raw.items()}
    n = len(net)
    return {k: (v, v / (n - 1) if n > 1 else 0.0) for k, v in raw.items()}


def _shortest_paths_by_enumeration(
    adj: dict[str, frozenset[str]], s: str, t: str, max_len: int
) -> list[tuple[str, ...]]:
    # iterative deepening over simple paths; no distance labels involved
    for length in range(1, max_len + 1):
        found: list[tuple[str, ...]] = []
        path = [s]

        def extend() -> None:
            tail = path[-1]
            if len(path) - 1 == length:
                if tail == t:
                    found.append(tuple(path))
                return
            for w in adj[tail]:
                if w in path or (w == t and len(path) < length):
                    continue
                path.append(w)
                extend()
                path.pop()

        extend()
        if found:
            return found
    return []


def enumerate_betweenness(net: StakeholderNetwork, mode: Mode = "symmetrized") -> dict[str, Fraction]:
    """Exact raw betweenness by listing every shortest path. Verification oracle."""
    n = len(net)
    if n > ORACLE_MAX_NODES:
        raise NetworkTooLarge(f"enumeration oracle supports at most {ORACLE_MAX_NODES} nodes, got {n}")
    adj = _adjacency(net, mode)
    nodes = net.node_ids
    score = {v: Fraction(0) for v in nodes}
    if mode == "symmetrized":
        pairs = [(s, t) for i, s in enumerate(nodes) for t in nodes[i + 1 :]]
    else:
        pairs = [(s, t) for s in nodes for t in nodes if s != t]
    for s, t in pairs:
        paths = _shortest_paths_by_enumeration(adj, s, t, n - 1)
        if not paths:
            continue
        for v in nodes:
            if v in (s, t):
                continue
            through = sum(1 for p in paths if v in p)
            if through:
                score[v] += Fraction(through, len(paths))
    return score


@dataclass(frozen=True)
class NodeCentrality:
    node: str
    degree_abs: int
    degree_rel_pct: float | None
    closeness_rel_pct: float | None
    betweenness_raw: float
    betweenness_rel: float
    degree_rank: int
    closeness_rank: int
    betweenness_rank: int


@dataclass(frozen=True)
class CentralityReport:
    n: int
    mode: str
    rows: tuple[NodeCentrality, ...]

    def __getitem__(self, node: str) -> NodeCentrality:
        for row in self.rows:
            if row.node == node:
                return row
        raise KeyError(node)

    def ranking(self, metric: Literal["degree", "closeness", "betweenness"]) -> list[str]:
        attr = f"{metric}_rank"
        return [r.node for r in sorted(self.rows, key=lambda r: getattr(r, attr))]


def rank_descending(values: dict[str, float | None]) -> dict[str, int]:
    """1-based ranks, highest value first, ties broken by node id; ``None`` sorts last."""
    order = sorted(values, key=lambda k: (values[k] is None, -(values[k] or 0.0), k))
    return {k: i for i, k in enumerate(order, start=1)}


def centrality_report(net: StakeholderNetwork, mode: Mode = "symmetrized") -> CentralityReport:
    n = len(net)
    if n < 2:
        raise InsufficientNodes("a centrality report needs at least two nodes")
    degree = degree_centrality(net)
    closeness = closeness_centrality(net, mode)
    between = betweenness_centrality(net, mode)
    deg_rank = rank_descending({k: float(v[0]) for k, v in degree.items()})
    clo_rank = rank_descending({k: None if v is None else round(v, 9) for k, v in closeness.items()})
    # rounding keeps float noise from splitting genuine ties
    bet_rank = rank_descending({k: round(v[0], 9) for k, v in between.items()})
    rows = tuple(
        NodeCentrality(
            nid,
            degree[nid][0],
            degree[nid][1],
            closeness[nid],
            between[nid][0],
            between[nid][1],
            deg_rank[nid],
            clo_rank[nid],
            bet_rank[nid],
        )
        for nid in net.node_ids
    )
    return CentralityReport(n, mode, rows)
