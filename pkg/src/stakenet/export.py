"""DOT and GraphML writers for networks and generic models."""

from __future__ import annotations

import io

import networkx as nx

from .network import StakeholderNetwork, TieType
from .synthesis import GenericModel


def _quote(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _unpack(obj: StakeholderNetwork | GenericModel) -> tuple[StakeholderNetwork, GenericModel | None]:
    if isinstance(obj, GenericModel):
        return obj.network, obj
    return obj, None


def to_dot(obj: StakeholderNetwork | GenericModel) -> str:
    """Directed DOT graph: one statement per node and per arc, edge label = strength."""
    net, model = _unpack(obj)
    lines = [f"digraph {_quote(net.project_id or 'stakeholders')} {{"]
    for nd in net.nodes:
        attrs = [
            f"label={_quote(nd.role_name)}",
            f"org_group={_quote(nd.org_group.value)}",
        ]
        if nd.canonical_role:
            attrs.append(f"canonical_role={_quote(nd.canonical_role)}")
        lines.append(f"  {_quote(nd.id)} [{', '.join(attrs)}];")
    for e in net.edges:
        attrs = [
            f"label={_quote(e.strength)}",
            f"strength={e.strength}",
            f"tie={_quote(e.tie_type.name)}",
            f"conflict={'true' if e.conflict else 'false'}",
        ]
        if e.conflict:
            attrs += ['color="red"', 'style="bold"']
        if model is not None:
            attrs.append(f"support={model.support[e.key]}")
            attrs.append(f"external_validated={'true' if model.external_validated[e.key] else 'false'}")
        lines.append(f"  {_quote(e.source)} -> {_quote(e.target)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_networkx(obj: StakeholderNetwork | GenericModel) -> nx.DiGraph:
    net, model = _unpack(obj)
    g = nx.DiGraph(name=net.project_id)
    for nd in net.nodes:
        g.add_node(
            nd.id,
            role_name=nd.role_name,
            org_group=nd.org_group.value,
            canonical_role=nd.canonical_role or "",
            notes=nd.notes,
        )
    for e in net.edges:
        attrs = dict(
            strength=e.strength,
            tie=e.tie_type.name if e.tie_type is not TieType.UNKNOWN else "UNKNOWN",
            conflict=e.conflict,
            frequency=e.frequency_label or "",
            provenance=";".join(sorted(e.provenance)),
        )
        if model is not None:
            attrs["support"] = model.support[e.key]
            attrs["external_validated"] = model.external_validated[e.key]
        g.add_edge(e.source, e.target, **attrs)
    return g


def to_graphml(obj: StakeholderNetwork | GenericModel) -> str:
    buf = io.BytesIO()
    nx.write_graphml(to_networkx(obj), buf, encoding="utf-8", prettyprint=True)
    return buf.getvalue().decode("utf-8")
