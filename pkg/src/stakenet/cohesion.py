"""Cohesive subgroups and fragility: cliques, mediators, bottlenecks.

Everything here works on the symmetrized relation structure; strengths and
tie types play no part in membership.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .metrics import betweenness_centrality
from .network import StakeholderNetwork, without_node

MIN_CLIQUE_SIZE = 3


@dataclass(frozen=True)
class CliqueSet:
    """Maximal cliques, largest first, then lexicographic by sorted members."""

    cliques: tuple[tuple[str, ...], ...]
    min_size: int = MIN_CLIQUE_SIZE

    def __len__(self) -> int:
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)


def _bron_kerbosch(
    adj: dict[str, frozenset[str]], r: set[str], p: set[str], x: set[str], out: list[frozenset[str]]
) -> None:
    if not p and not x:
        out.append(frozenset(r))
        return
    # Tomita pivot: the vertex covering most of P leaves fewest branches
    pivot = max(sorted(p | x), key=lambda u: len(p & adj[u]))
    for v in sorted(p - adj[pivot]):
        _bron_kerbosch(adj, r | {v}, p & adj[v], x & adj[v], out)
        p = p - {v}
        x = x | {v}


def maximal_cliques(net: StakeholderNetwork, min_size: int = MIN_CLIQUE_SIZE) -> CliqueSet:
    if min_size < MIN_CLIQUE_SIZE:
        raise ValueError(f"cliques have at least {MIN_CLIQUE_SIZE} members")
    adj = net.adjacency(directed=False)
    found: list[frozenset[str]] = []
    _bron_kerbosch(adj, set(), set(adj), set(), found)
    cliques = sorted((tuple(sorted(c)) for c in found if len(c) >= min_size), key=lambda c: (-len(c), c))
    return CliqueSet(tuple(cliques), min_size)


def clique_co_membership(cs: CliqueSet, labels: Sequence[str]) -> np.ndarray:
    """Actor-by-actor count of shared cliques; the diagonal counts each actor's cliques."""
    pos = {lab: i for i, lab in enumerate(labels)}
    matrix = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for clique in cs.cliques:
        idx = [pos[m] for m in clique if m in pos]
        for i in idx:
            for j in idx:
                matrix[i, j] += 1
    return matrix


def _undirected_graph(net: StakeholderNetwork) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(net.node_ids)
    g.add_edges_from(e.key for e in net.edges)
    return g


def articulation_points(net: StakeholderNetwork) -> set[str]:
    return set(nx.articulation_points(_undirected_graph(net)))


@dataclass(frozen=True)
class Mediator:
    node: str
    cut: bool
    betweenness_rel: float


def mediators(net: StakeholderNetwork) -> list[Mediator]:
    """Nodes lying on some geodesic between others, highest relative betweenness first.

    ``cut`` marks articulation points, whose removal splits their component.
    """
    between = betweenness_centrality(net)
    cuts = articulation_points(net)
    found = [Mediator(nid, nid in cuts, rel) for nid, (raw, rel) in between.items() if raw > 1e-12]
    return sorted(found, key=lambda m: (-round(m.betweenness_rel, 9), m.node))


@dataclass(frozen=True)
class Bottleneck:
    rank: int
    node: str
    role_name: str
    betweenness_rel: float
    cut: bool


def bottleneck_ranking(net: StakeholderNetwork, k: int) -> list[Bottleneck]:
    if k < 1:
        raise ValueError("k must be a positive integer")
    between = betweenness_centrality(net)
    cuts = articulation_points(net)
    order = sorted(between, key=lambda nid: (-round(between[nid][1], 9), nid))
    return [
        Bottleneck(i, nid, net.node(nid).role_name, between[nid][1], nid in cuts)
        for i, nid in enumerate(order[:k], start=1)
    ]


@dataclass(frozen=True)
class FragilityReport:
    removed: str
    lost_pairs: int
    components_before: int
    components_after: int
    newly_isolated: tuple[str, ...]


def _components(adj: dict[str, frozenset[str]], nodes: Sequence[str]) -> list[set[str]]:
    seen: set[str] = set()
    comps = []
    for start in nodes:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def _reachable_pairs(comps: list[set[str]], exclude: str) -> int:
    total = 0
    for comp in comps:
        size = len(comp - {exclude})
        total += size * (size - 1) // 2
    return total


def fragility(net: StakeholderNetwork, node_id: str) -> FragilityReport:
    """Effect of deleting one stakeholder on who can still reach whom.

    Only pairs not involving the removed node are compared.
    ``components_before`` counts the groups those remaining nodes formed before
    the removal, so it never exceeds ``components_after``.
    """
    net.node(node_id)
    adj = net.adjacency(directed=False)
    others = [nid for nid in net.node_ids if nid != node_id]
    comps_before = _components(adj, net.node_ids)
    before_pairs = _reachable_pairs(comps_before, node_id)
    groups_before = sum(1 for c in comps_before if c - {node_id})

    reduced = without_node(net, node_id)
    if reduced is None:
        return FragilityReport(node_id, 0, 0, 0, ())
    adj_after = reduced.adjacency(directed=False)
    comps_after = _components(adj_after, others)
    after_pairs = _reachable_pairs(comps_after, node_id)
    isolated = tuple(nid for nid in others if adj[nid] and not adj_after[nid])
    return FragilityReport(node_id, before_pairs - after_pairs, groups_before, len(comps_after), isolated)
