"""Deterministic DOT / JSON / text renderings of graphs, plans and traces."""

from __future__ import annotations

from .composer import SINK, SOURCE, CompositionGraph, InteractionGraph, RelationKind
from .planner import ExecutionPlan, SimulationTrace

FORMAT_VERSION = 1


def _q(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


def _label(labels) -> str:
    return ",".join(sorted(labels))


def composition_dot(g: CompositionGraph) -> str:
    lines = ["digraph composition {", "  rankdir=LR;"]
    lines.append(f"  {_q(SOURCE)} [shape=box];")
    for name in g.selected:
        lines.append(f"  {_q(name)} [shape=ellipse];")
    lines.append(f"  {_q(SINK)} [shape=box];")
    for layer in sorted(set(g.layers.values())):
        members = " ".join(f"{_q(n)};" for n in g.selected if g.layers[n] == layer)
        lines.append(f"  {{ rank=same; {members} }}")
    for e in g.edges:
        lines.append(f"  {_q(e.source)} -> {_q(e.target)} [label={_q(_label(e.labels))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def interaction_dot(g: InteractionGraph) -> str:
    lines = ["digraph interaction {", "  rankdir=LR;"]
    for v in g.vertices:
        lines.append(f"  {_q(v)};")
    for e in g.edges:
        style = "solid" if e.kind is RelationKind.COMPLETE else "dashed"
        lines.append(
            f"  {_q(e.source)} -> {_q(e.target)} [label={_q(_label(e.labels))}, style={style}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def composition_json(g: CompositionGraph, plan: ExecutionPlan | None = None) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "request": g.request.to_record(),
        "services": [{"name": n, "layer": g.layers[n]} for n in g.selected],
        "edges": [
            {"source": e.source, "target": e.target, "labels": list(e.labels)} for e in g.edges
        ],
        "sink_layer": g.sink_layer,
    }
    if plan is not None:
        doc["plan"] = {"stages": [list(s) for s in plan.stages]}
    return doc


def interaction_json(g: InteractionGraph) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "vertices": list(g.vertices),
        "edges": [
            {"source": e.source, "target": e.target, "kind": e.kind.value, "labels": list(e.labels)}
            for e in g.edges
        ],
    }


def trace_json(t: SimulationTrace) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "strict": t.strict,
        "steps": [
            {
                "stage": s.stage,
                "service": s.service,
                "inputs": list(s.inputs),
                "outputs": list(s.outputs),
                "preconditions": list(s.preconditions),
                "unmet_preconditions": list(s.unmet_preconditions),
                "effects": list(s.effects),
            }
            for s in t.steps
        ],
        "known": sorted(t.known),
        "world": sorted(t.world),
        "violations": [{"service": s, "proposition": p} for s, p in t.violations],
    }


def trace_text(t: SimulationTrace) -> str:
    out = []
    for s in t.steps:
        line = (
            f"stage {s.stage} {s.service}: in={_label(s.inputs)} out={_label(s.outputs)}"
            f" pre={_label(s.preconditions)} eff={_label(s.effects)}"
        )
        if s.unmet_preconditions:
            line += f" unmet={_label(s.unmet_preconditions)}"
        out.append(line)
    out.append(f"known: {_label(t.known)}")
    out.append(f"world: {_label(t.world)}")
    return "\n".join(out) + "\n"
