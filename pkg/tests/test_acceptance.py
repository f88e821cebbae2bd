"""Acceptance gate. Each test prints one ``[criterion N] PASS|FAIL`` line."""

import json
import os
import random
import subprocess
import sys
import warnings
from contextlib import contextmanager
from time import perf_counter


from stakenet.cli import main
from stakenet.cohesion import articulation_points, bottleneck_ranking, fragility, maximal_cliques
from stakenet.errors import NoSurvivingEdges
from stakenet.ingest import EdgeRecord, InterviewGraph, MergePolicy, merge_interviews, network_to_dict
from stakenet.metrics import (
    betweenness_centrality,
    centrality_report,
    closeness_centrality,
    enumerate_betweenness,
    geodesic_distances,
)
from stakenet.network import RelationEdge, StakeholderNetwork, relabel, symmetrize
from stakenet.synthesis import RoleAliasTable, aggregate_generic_model, canonicalize_roles, criticality_scores

from .helpers import brute_force_cliques, components_by_search, named_net, random_network


@contextmanager
def criterion(capsys, number, title, budget=None):
    info = {"detail": ""}
    ok = False
    start = perf_counter()
    try:
        yield info
        elapsed = perf_counter() - start
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
        ok = True
    finally:
        elapsed = perf_counter() - start
        verdict = "PASS" if ok else "FAIL"
        with capsys.disabled():
            print(f"\n[criterion {number}] {verdict} {title}: {info['detail']} ({elapsed:.2f}s)")


def test_criterion_1_relative_degree(capsys, project1, project2):
    with criterion(capsys, 1, "relative degree", budget=1) as info:
        pm = centrality_report(project1)["ProjectManager"]
        bpo = centrality_report(project2)["BusinessProcessOwner"]
        info["detail"] = (
            f"n=13 k={pm.degree_abs} -> {pm.degree_rel_pct:.3f}%; n=22 k={bpo.degree_abs} -> {bpo.degree_rel_pct:.3f}%"
        )
        assert (len(project1), pm.degree_abs, len(project2), bpo.degree_abs) == (13, 10, 22, 15)
        assert abs(pm.degree_rel_pct - 83.333) <= 0.001
        assert abs(bpo.degree_rel_pct - 71.429) <= 0.001


def test_criterion_2_closeness(capsys, project1):
    with criterion(capsys, 2, "closeness", budget=1) as info:
        d = geodesic_distances(project1)
        hops = sorted(d("ProjectManager", v) for v in project1.node_ids if v != "ProjectManager")
        closeness = closeness_centrality(project1)
        high, low = closeness["ProjectManager"], closeness["Users"]
        info["detail"] = f"center {high:.3f}%, low-degree node {low:.3f}%"
        assert hops == [1] * 10 + [2, 2]
        assert abs(high - 85.714) <= 0.001
        assert abs(low - 35.3) <= 0.1


def test_criterion_3_betweenness_oracle(capsys):
    with criterion(capsys, 3, "betweenness vs enumeration oracle", budget=30) as info:
        rng = random.Random(20240303)
        worst = 0.0
        for i in range(200):
            n = rng.randint(4, 10)
            p = (0.3, 0.5, 0.8)[i % 3]
            net = random_network(rng, n, p, connected=True)
            fast = betweenness_centrality(net)
            exact = enumerate_betweenness(net)
            for nid in net.node_ids:
                worst = max(worst, abs(fast[nid][0] - float(exact[nid])))
        info["detail"] = f"200 connected graphs, max abs error {worst:.2e}"
        assert worst <= 1e-9


def test_criterion_4_clique_oracle(capsys):
    with criterion(capsys, 4, "maximal cliques vs subset oracle", budget=60) as info:
        rng = random.Random(77)
        mismatches = 0
        total = 0
        for _ in range(200):
            net = random_network(rng, rng.randint(1, 12), rng.choice((0.2, 0.4, 0.6, 0.8)))
            found = {frozenset(c) for c in maximal_cliques(net)}
            total += len(found)
            mismatches += found != brute_force_cliques(net)
        info["detail"] = f"200 graphs, {total} cliques, {mismatches} mismatches"
        assert mismatches == 0


def test_criterion_5_bottleneck_order(capsys, project2):
    with criterion(capsys, 5, "bottleneck ordinal fidelity") as info:
        order = [b.node for b in bottleneck_ranking(project2, len(project2))]
        bpo, prog = order.index("BusinessProcessOwner") + 1, order.index("ProgramMgr") + 1
        info["detail"] = f"BusinessProcessOwner rank {bpo}, ProgramMgr rank {prog}"
        assert bpo < prog


def test_criterion_6_majority_aggregation(capsys, projects, generic_model):
    with criterion(capsys, 6, "majority aggregation", budget=1) as info:
        table = RoleAliasTable.default()
        canon = [canonicalize_roles(n, table) for n in projects]
        external = [e for e in generic_model.network.edges if generic_model.external_validated[e.key]]
        q2 = aggregate_generic_model(canon, quorum=2, external_edges=external)
        q3 = aggregate_generic_model(canon, quorum=3, external_edges=external)
        presence = {}
        for net in canon:
            for e in net.edges:
                presence[e.key] = presence.get(e.key, 0) + 1
        for model, q in ((q2, 2), (q3, 3)):
            for e in model.network.edges:
                assert model.support[e.key] >= q or model.external_validated[e.key]
                if not model.external_validated[e.key]:
                    assert model.support[e.key] == presence[e.key]
            # every relation present in enough projects is emitted
            assert {k for k, c in presence.items() if c >= q} <= {e.key for e in model.network.edges}
        e2 = {e.key for e in q2.network.edges}
        e3 = {e.key for e in q3.network.edges}
        info["detail"] = f"quorum 2: {len(e2)} edges, quorum 3: {len(e3)} edges, {len(external)} external"
        assert e3 <= e2


def test_criterion_7_criticality_votes(capsys):
    with criterion(capsys, 7, "criticality votes", budget=1) as info:
        # a cycle makes every role structurally equivalent
        net = named_net(
            [
                ("BusinessOwner", "ProjectManager"),
                ("ProjectManager", "KeyUsers"),
                ("KeyUsers", "TrainingTeam"),
                ("TrainingTeam", "BusinessOwner"),
            ]
        )
        scores = criticality_scores(centrality_report(net), {"BusinessOwner": 9, "ProjectManager": 7})
        by_role = {s.role: s for s in scores}
        info["detail"] = " > ".join(f"{s.role}({s.combined:.3f})" for s in scores[:2])
        assert by_role["BusinessOwner"].quant == by_role["ProjectManager"].quant
        assert scores[0].role == "BusinessOwner" and scores[1].role == "ProjectManager"


def _permuted(net, rng):
    ids = list(net.node_ids)
    shuffled = ids[:]
    rng.shuffle(shuffled)
    mapping = {a: f"x{b}" for a, b in zip(ids, shuffled)}
    return relabel(net, mapping), mapping


def _random_interviews(rng):
    roles = "abcdef"
    graphs = []
    for k in range(rng.randint(1, 5)):
        recs = []
        for _ in range(rng.randint(1, 8)):
            u, v = rng.sample(roles, 2)
            recs.append(EdgeRecord(u, v, rng.choice((None, 0, 1, 2, 3)), None, rng.random() < 0.2))
        graphs.append(InterviewGraph(f"i{k}", "", tuple(recs)))
    return graphs


def test_criterion_8_invariant_suite(capsys):
    instances = 120
    with criterion(capsys, 8, "invariant suite", budget=60) as info:
        rng = random.Random(8)
        checked = dict.fromkeys(("isomorphism", "closeness-monotone", "symmetrize", "merge-order", "articulation"), 0)

        for _ in range(instances):
            net = random_network(rng, rng.randint(2, 10), rng.choice((0.2, 0.4, 0.7)))
            twin, mapping = _permuted(net, rng)
            a, b = centrality_report(net), centrality_report(twin)
            for row in a.rows:
                other = b[mapping[row.node]]
                assert other.degree_abs == row.degree_abs
                assert (other.closeness_rel_pct is None) == (row.closeness_rel_pct is None)
                if row.closeness_rel_pct is not None:
                    assert abs(other.closeness_rel_pct - row.closeness_rel_pct) < 1e-9
                assert abs(other.betweenness_raw - row.betweenness_raw) < 1e-9
            assert {frozenset(mapping[m] for m in c) for c in maximal_cliques(net)} == {
                frozenset(c) for c in maximal_cliques(twin)
            }
            assert {mapping[x] for x in articulation_points(net)} == articulation_points(twin)
            checked["isomorphism"] += 1

        for _ in range(instances):
            net = random_network(rng, rng.randint(3, 10), rng.choice((0.3, 0.5)), connected=True)
            adj = net.adjacency()
            missing = [(u, v) for u in net.node_ids for v in net.node_ids if u < v and v not in adj[u]]
            if not missing:
                continue
            u, v = rng.choice(missing)
            bigger = StakeholderNetwork(net.nodes, net.edges + (RelationEdge(u, v, 1),))
            before, after = closeness_centrality(net), closeness_centrality(bigger)
            assert all(after[k] >= before[k] - 1e-12 for k in net.node_ids)
            checked["closeness-monotone"] += 1

        for _ in range(instances):
            net = random_network(rng, rng.randint(1, 10), rng.random())
            once = symmetrize(net)
            assert symmetrize(once) == once
            checked["symmetrize"] += 1

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NoSurvivingEdges)
            for _ in range(instances):
                graphs = _random_interviews(rng)
                shuffled = graphs[:]
                rng.shuffle(shuffled)
                policy = MergePolicy(rng.choice(("max", "median-round-down")), rng.randint(1, 2))
                assert merge_interviews(graphs, policy) == merge_interviews(shuffled, policy)
                checked["merge-order"] += 1

        for _ in range(instances):
            net = random_network(rng, rng.randint(2, 10), rng.choice((0.15, 0.3, 0.5)))
            cuts = articulation_points(net)
            for nid in net.node_ids:
                rep = fragility(net, nid)
                assert rep.components_after == components_by_search(net, removed=nid)
                assert (nid in cuts) == (rep.lost_pairs > 0)
            checked["articulation"] += 1

        info["detail"] = ", ".join(f"{k} x{v}" for k, v in checked.items())
        assert all(v >= 100 for v in checked.values())


def _cli_runs(files):
    return [
        ["metrics", files["project1"], "--format", "csv"],
        ["metrics", files["project2"], "--format", "json", "--mode", "directed"],
        ["cliques", files["project3"], "--format", "json"],
        ["bottlenecks", files["project2"], "--k", "5", "--format", "csv"],
        ["fragility", files["project1"], "--format", "json"],
        ["aggregate", files["project1"], files["project2"], files["project3"], "--quorum", "2"],
        ["export", files["project1"], "--format", "dot"],
        ["export", files["project2"], "--format", "graphml"],
        ["report", files["project1"], files["project2"], files["project3"], "--phase", "Build"],
    ]


def test_criterion_9_cli_determinism_and_errors(capsys, tmp_path, projects):
    with criterion(capsys, 9, "CLI determinism and exit codes") as info:
        files = {}
        for net in projects:
            p = tmp_path / f"{net.project_id}.json"
            p.write_text(json.dumps(network_to_dict(net)))
            files[net.project_id] = str(p)

        runs = _cli_runs(files)
        identical = 0
        for i, argv in enumerate(runs):
            outputs = []
            for seed in ("0", "1"):
                out = tmp_path / f"out{i}_{seed}"
                env = {**os.environ, "PYTHONHASHSEED": seed}
                proc = subprocess.run(
                    [sys.executable, "-m", "stakenet.cli", *argv, "--output", str(out)],
                    env=env,
                    capture_output=True,
                    check=False,
                )
                assert proc.returncode == 0, proc.stderr.decode()
                outputs.append(out.read_bytes())
            assert outputs[0] == outputs[1], argv
            identical += 1

        bad = tmp_path / "bad.csv"
        bad.write_text("from,to,strength,tie,conflict,frequency\nA,B,5,A,,\n")
        garbage = tmp_path / "garbage.json"
        garbage.write_text("{ nope")
        cases = [
            (["metrics", str(bad)], 1),
            (["metrics", str(garbage)], 1),
            (["validate", str(bad)], 1),
            (["aggregate", files["project1"], files["project2"], files["project3"], "--quorum", "4"], 1),
            (["metrics", str(tmp_path / "absent.json")], 2),
            (["export", str(tmp_path)], 2),
        ]
        codes = []
        for argv, expected in cases:
            try:
                code = main(argv)
            except SystemExit as exc:
                code = exc.code
            out, err = capsys.readouterr()
            codes.append(code)
            assert code == expected, (argv, code, err)
            assert (err + out).strip() and "Traceback" not in err
        info["detail"] = f"{identical} commands byte-identical across runs; malformed-input exit codes {codes}"
