import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stakenet.cohesion import (
    articulation_points,
    bottleneck_ranking,
    clique_co_membership,
    fragility,
    maximal_cliques,
    mediators,
)
from stakenet.errors import UnknownNode
from stakenet.network import relabel, to_sociomatrix

from .helpers import brute_force_cliques, components_by_search, make_net, named_net, networks, random_network


def test_cliques_on_small_graph():
    net = named_net([("a", "b"), ("b", "c"), ("c", "a"), ("c", "d"), ("d", "a"), ("d", "e")])
    cs = maximal_cliques(net)
    assert cs.cliques == (("a", "b", "c"), ("a", "c", "d"))
    assert len(cs) == 2
    assert maximal_cliques(net, min_size=4).cliques == ()
    with pytest.raises(ValueError):
        maximal_cliques(net, min_size=2)


def test_cliques_ordered_largest_first():
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    net = make_net(6, k4 + [(3, 4), (4, 5), (3, 5)])
    assert [len(c) for c in maximal_cliques(net)] == [4, 3]


def test_co_membership_matrix():
    net = named_net([("a", "b"), ("b", "c"), ("c", "a"), ("c", "d"), ("d", "a")])
    cs = maximal_cliques(net)
    labels = list(net.node_ids)
    m = clique_co_membership(cs, labels)
    i = {lab: k for k, lab in enumerate(labels)}
    assert m[i["a"], i["c"]] == 2
    assert m[i["a"], i["a"]] == 2
    assert m[i["b"], i["d"]] == 0
    assert (m == m.T).all()


def test_mediators_and_cut_flags():
    net = named_net([("a", "b"), ("b", "c"), ("c", "d"), ("d", "b")])
    meds = mediators(net)
    assert [m.node for m in meds] == ["b"]
    assert meds[0].cut
    assert articulation_points(net) == {"b"}


def test_bottleneck_ranking_on_path():
    net = named_net([("a", "b"), ("b", "c"), ("c", "d")])
    ranked = bottleneck_ranking(net, 3)
    assert [b.node for b in ranked] == ["b", "c", "a"]
    assert [b.rank for b in ranked] == [1, 2, 3]
    assert ranked[0].cut and not ranked[2].cut
    with pytest.raises(ValueError):
        bottleneck_ranking(net, 0)


def test_fragility_report():
    net = named_net([("a", "b"), ("b", "c"), ("x", "y")])
    rep = fragility(net, "b")
    assert rep.lost_pairs == 1
    assert rep.components_before == 2
    assert rep.components_after == 3
    assert rep.newly_isolated == ("a", "c")
    leaf = fragility(net, "a")
    assert leaf.lost_pairs == 0 and leaf.newly_isolated == ()
    with pytest.raises(UnknownNode):
        fragility(net, "nobody")


def test_fragility_single_node():
    rep = fragility(make_net(1, []), "v00")
    assert rep.lost_pairs == 0


def test_cliques_match_oracle_on_fixtures(project1):
    found = {frozenset(c) for c in maximal_cliques(project1)}
    assert found == brute_force_cliques(project1)


@settings(max_examples=100, deadline=None)
@given(networks(max_nodes=9), st.randoms(use_true_random=False))
def test_cliques_independent_of_labels(net, rng):
    ids = list(net.node_ids)
    shuffled = ids[:]
    rng.shuffle(shuffled)
    mapping = dict(zip(ids, shuffled))
    back = {v: k for k, v in mapping.items()}
    relabelled = maximal_cliques(relabel(net, mapping))
    assert {frozenset(back[m] for m in c) for c in relabelled} == {frozenset(c) for c in maximal_cliques(net)}


@settings(max_examples=100, deadline=None)
@given(networks(max_nodes=9))
def test_co_membership_symmetric(net):
    labels, _ = to_sociomatrix(net)
    cs = maximal_cliques(net)
    m = clique_co_membership(cs, labels)
    assert (m == m.T).all()
    assert m.trace() == sum(len(c) for c in cs)


def test_articulation_agrees_with_fragility():
    rng = random.Random(11)
    for _ in range(120):
        net = random_network(rng, rng.randint(2, 10), rng.choice([0.2, 0.35, 0.5]))
        cuts = articulation_points(net)
        for nid in net.node_ids:
            rep = fragility(net, nid)
            comps_after = components_by_search(net, removed=nid)
            assert rep.components_after == comps_after
            assert (nid in cuts) == (rep.components_after > rep.components_before)
            assert (nid in cuts) == (rep.lost_pairs > 0)


@settings(max_examples=100, deadline=None)
@given(networks(max_nodes=9))
def test_bottleneck_ranking_is_permutation(net):
    ranked = bottleneck_ranking(net, len(net))
    assert sorted(b.node for b in ranked) == sorted(net.node_ids)
    rels = [b.betweenness_rel for b in ranked]
    assert all(a >= b - 1e-9 for a, b in zip(rels, rels[1:]))
