"""Random network generators and brute-force oracles shared by the tests."""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from stakenet.network import RelationEdge, StakeholderNetwork, StakeholderNode, TieType


def node_ids(n: int) -> list[str]:
    return [f"v{i:02d}" for i in range(n)]


def make_net(n: int, arcs, project_id: str = "t") -> StakeholderNetwork:
    """Network over ``v00..`` from (u, v) index pairs or (u, v, strength) triples."""
    ids = node_ids(n)
    edges = []
    for arc in arcs:
        u, v, *rest = arc
        edges.append(RelationEdge(ids[u], ids[v], rest[0] if rest else 1))
    return StakeholderNetwork(tuple(StakeholderNode(i, i) for i in ids), tuple(edges), project_id)


def named_net(edges, nodes=(), directed=False) -> StakeholderNetwork:
    """Network from ("A", "B") pairs; each pair becomes one arc A->B of strength 1."""
    names = set(nodes)
    for u, v in edges:
        names.update((u, v))
    arcs = [RelationEdge(u, v, 1) for u, v in edges]
    return StakeholderNetwork(tuple(StakeholderNode(x, x) for x in sorted(names)), tuple(arcs), "t")


def random_network(rng: random.Random, n: int, p: float, connected: bool = False) -> StakeholderNetwork:
    """G(n, p) over unordered pairs, each kept pair oriented at random (sometimes both ways)."""
    while True:
        arcs = []
        for i, j in itertools.combinations(range(n), 2):
            if rng.random() < p:
                roll = rng.random()
                if roll < 0.4:
                    arcs.append((i, j, rng.randint(1, 3)))
                elif roll < 0.8:
                    arcs.append((j, i, rng.randint(1, 3)))
                else:
                    arcs += [(i, j, rng.randint(1, 3)), (j, i, rng.randint(1, 3))]
        net = make_net(n, arcs)
        if not connected or is_connected(net):
            return net


def is_connected(net: StakeholderNetwork) -> bool:
    adj = net.adjacency(directed=False)
    start = net.node_ids[0]
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(net)


@st.composite
def networks(draw, min_nodes: int = 1, max_nodes: int = 8):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    ids = node_ids(n)
    edges = []
    for i, j in chosen:
        edges.append(
            RelationEdge(
                ids[i],
                ids[j],
                draw(st.integers(1, 3)),
                draw(st.sampled_from(list(TieType))),
                draw(st.booleans()),
            )
        )
    return StakeholderNetwork(tuple(StakeholderNode(i, i) for i in ids), tuple(edges), "h")


# -- oracles -----------------------------------------------------------------------


def brute_force_cliques(net: StakeholderNetwork, min_size: int = 3) -> set[frozenset[str]]:
    """Every vertex subset that is complete and cannot be extended."""
    adj = net.adjacency(directed=False)
    nodes = net.node_ids
    complete = set()
    for size in range(1, len(nodes) + 1):
        for subset in itertools.combinations(nodes, size):
            if all(b in adj[a] for a, b in itertools.combinations(subset, 2)):
                complete.add(frozenset(subset))
    maximal = {c for c in complete if not any(c < other for other in complete)}
    return {c for c in maximal if len(c) >= min_size}


def floyd_warshall(net: StakeholderNetwork, directed: bool = False) -> dict[tuple[str, str], float]:
    inf = float("inf")
    nodes = net.node_ids
    d = {(u, v): (0 if u == v else inf) for u in nodes for v in nodes}
    for e in net.edges:
        d[e.key] = 1
        if not directed:
            d[(e.target, e.source)] = 1
    for k in nodes:
        for i in nodes:
            for j in nodes:
                if d[(i, k)] + d[(k, j)] < d[(i, j)]:
                    d[(i, j)] = d[(i, k)] + d[(k, j)]
    return d


def components_by_search(net: StakeholderNetwork, removed: str | None = None) -> int:
    adj = net.adjacency(directed=False)
    nodes = [x for x in net.node_ids if x != removed]
    seen: set[str] = set()
    count = 0
    for s in nodes:
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            for w in adj[stack.pop()]:
                if w != removed and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count
