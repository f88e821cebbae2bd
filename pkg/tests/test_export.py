import io

import networkx as nx

from stakenet.export import to_dot, to_graphml, to_networkx

from .helpers import named_net


def test_dot_has_one_statement_per_node_and_edge(project1):
    text = to_dot(project1)
    assert text.startswith('digraph "project1" {')
    body = [ln for ln in text.splitlines()[1:-1]]
    assert len(body) == len(project1) + len(project1.edges)
    assert sum("->" in ln for ln in body) == len(project1.edges)
    conflict_lines = [ln for ln in body if "conflict=true" in ln]
    assert conflict_lines and all('color="red"' in ln for ln in conflict_lines)


def test_dot_quotes_awkward_names():
    net = named_net([('say "hi"', "back\\slash")])
    text = to_dot(net)
    assert '"say \\"hi\\""' in text
    assert '"back\\\\slash"' in text


def test_generic_model_attributes(generic_model):
    text = to_dot(generic_model)
    assert "support=" in text and "external_validated=true" in text
    g = to_networkx(generic_model)
    assert all("support" in d for _, _, d in g.edges(data=True))


def test_graphml_round_trip(project2):
    text = to_graphml(project2)
    g = nx.read_graphml(io.StringIO(text))
    assert set(g.nodes) == set(project2.node_ids)
    assert {(u, v) for u, v in g.edges} == {e.key for e in project2.edges}
    u, v = project2.edges[0].key
    assert int(g.edges[u, v]["strength"]) == project2.edges[0].strength
    assert to_graphml(project2) == text
