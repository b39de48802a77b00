"""Interaction graph, layered forward chaining, and solution-graph extraction."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .matcher import SubRequest, similarity
from .model import ConceptId, PropositionId, Request, ServiceDescriptor, Taxonomy, WorldState
from .model import concept_satisfies
from .registry import Registry

SOURCE = "SOURCE"
SINK = "SINK"


class RelationKind(enum.Enum):
    COMPLETE = "complete"
    PARTIAL = "partial"


@dataclass(frozen=True)
class InteractionEdge:
    source: str
    target: str
    kind: RelationKind
    labels: tuple[ConceptId, ...]


@dataclass(frozen=True)
class InteractionGraph:
    vertices: tuple[str, ...]
    edges: tuple[InteractionEdge, ...]

    def edge(self, source: str, target: str) -> InteractionEdge | None:
        for e in self.edges:
            if e.source == source and e.target == target:
                return e
        return None


def relation(
    a: ServiceDescriptor,
    b: ServiceDescriptor,
    tax: Taxonomy | None = None,
    approx_threshold: float | None = None,
) -> tuple[RelationKind, frozenset[ConceptId]] | None:
    """How much of ``b``'s input ``a``'s outputs can feed.

    Complete when every input of ``b`` is matched, Partial when only some
    are, None when none are.
    """
    if a.name == b.name:
        raise ValueError("relation of a service with itself")
    matched = frozenset(
        i for i in b.inputs if any(concept_satisfies(o, i, tax, approx_threshold) for o in a.outputs)
    )
    if not matched:
        return None
    if matched == b.inputs:
        return RelationKind.COMPLETE, matched
    return RelationKind.PARTIAL, matched


def build_interaction_graph(r: Registry) -> InteractionGraph:
    input_universe = frozenset(r.consumers)
    edges = []
    for a in r:
        targets: set[str] = set()
        for o in a.outputs:
            for i in r.satisfied_by(o, input_universe):
                targets.update(r.consumers_of(i))
        targets.discard(a.name)
        for t in sorted(targets):
            rel = relation(a, r[t], r.taxonomy, r.approx_threshold)
            if rel is not None:
                edges.append(InteractionEdge(a.name, t, rel[0], tuple(sorted(rel[1]))))
    return InteractionGraph(tuple(r.names()), tuple(edges))


@dataclass(frozen=True)
class Closure:
    """Result of layered saturation from a request.

    ``layers[name]`` is the layer a service fired at (1-based).
    ``concept_layer[c]`` is the layer at which some known concept first
    satisfied ``c``; 0 means a provided concept does. Only concepts some
    service consumes, or the request asks for, are tracked there.
    """

    layers: dict[str, int]
    known: frozenset[ConceptId]
    known_layer: dict[ConceptId, int]
    concept_layer: dict[ConceptId, int]
    worlds: tuple[frozenset[PropositionId], ...]
    unsatisfied: frozenset[ConceptId]
    _before: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def depth(self) -> int:
        return len(self.worlds) - 1

    @property
    def satisfied(self) -> bool:
        return not self.unsatisfied

    def fired_at(self, k: int) -> list[str]:
        return sorted(n for n, l in self.layers.items() if l == k)

    def known_before(self, k: int) -> frozenset[ConceptId]:
        if k not in self._before:
            self._before[k] = frozenset(c for c, l in self.known_layer.items() if l < k)
        return self._before[k]


def reachable_closure(r: Registry, req: Request) -> Closure:
    """Fire every invokable, still-useful service layer by layer.

    A service fires at layer k when each of its inputs is satisfied by the
    concepts known after layer k-1 and it outputs at least one concept not
    yet known. Stops once all goals are satisfied or nothing fires.
    """
    universe = set(r.consumers) | set(req.goals)
    pending: dict[str, int] = {}
    ready: set[str] = set()
    for s in r:
        pending[s.name] = len(s.inputs)
        if not s.inputs:
            ready.add(s.name)

    known_layer: dict[ConceptId, int] = {}
    known: set[ConceptId] = set()
    concept_layer: dict[ConceptId, int] = {}

    def learn(c: ConceptId, k: int) -> None:
        known_layer[c] = k
        known.add(c)
        for n in r.satisfied_by(c, universe):
            if n in concept_layer:
                continue
            concept_layer[n] = k
            for name in r.consumers_of(n):
                pending[name] -= 1
                if pending[name] == 0:
                    ready.add(name)

    for c in sorted(req.provided):
        learn(c, 0)
    world = frozenset(req.initial_world)
    worlds = [world]
    layers: dict[str, int] = {}
    k = 0
    while not all(g in concept_layer for g in req.goals):
        k += 1
        firing = []
        for name in sorted(ready):
            if not r[name].outputs <= known:
                firing.append(name)
        # services with nothing new to add never will; drop them
        ready.clear()
        if not firing:
            break
        new: set[ConceptId] = set()
        effects: set[PropositionId] = set()
        for name in firing:
            layers[name] = k
            s = r[name]
            new |= s.outputs - known
            effects |= s.effects
        world = world | effects
        for c in sorted(new):
            learn(c, k)
        worlds.append(world)

    return Closure(
        layers=layers,
        known=frozenset(known),
        known_layer=known_layer,
        concept_layer=concept_layer,
        worlds=tuple(worlds),
        unsatisfied=frozenset(g for g in req.goals if g not in concept_layer),
    )


class Unsatisfiable(Exception):
    def __init__(self, missing):
        self.missing = tuple(sorted(missing))
        super().__init__("unsatisfiable goals: " + ", ".join(self.missing))


@dataclass(frozen=True)
class GraphEdge:
    source: str
    target: str
    labels: tuple[ConceptId, ...]


@dataclass(frozen=True)
class CompositionGraph:
    """Solution subgraph between the virtual SOURCE (request inputs) and SINK (goals)."""

    SOURCE = SOURCE
    SINK = SINK

    layers: dict[str, int]
    edges: tuple[GraphEdge, ...]
    request: Request
    sink_layer: int = field(default=1)

    @property
    def selected(self) -> list[str]:
        return sorted(self.layers)

    def predecessors(self, node: str) -> list[str]:
        return sorted({e.source for e in self.edges if e.target == node})

    def successors(self, node: str) -> list[str]:
        return sorted({e.target for e in self.edges if e.source == node})

    def edge(self, source: str, target: str) -> GraphEdge | None:
        for e in self.edges:
            if e.source == source and e.target == target:
                return e
        return None

    def layer_of(self, node: str) -> int:
        if node == SOURCE:
            return 0
        if node == SINK:
            return self.sink_layer
        return self.layers[node]


def _choose_producer(r: Registry, closure: Closure, c: ConceptId) -> str:
    fired = [n for n in r.producers_of(c) if n in closure.layers]
    first = min(closure.layers[n] for n in fired)
    candidates = [n for n in fired if closure.layers[n] == first]
    if len(candidates) == 1:
        return candidates[0]
    sub = SubRequest.normalized(closure.known_before(first), frozenset((c,)))
    world = WorldState(closure.worlds[first - 1])

    def rank(n: str):
        score = similarity(sub, r[n], world, r.taxonomy, r.vocab, r.approx_threshold)
        return (-score.total, n)

    return min(candidates, key=rank)


def compose(r: Registry, req: Request, closure: Closure | None = None) -> CompositionGraph:
    """Saturate forward, then keep one producer per needed concept walking back from the goals.

    Producer ties are broken by earliest layer, then highest similarity
    against the sub-request at that layer, then name. Raises
    :class:`Unsatisfiable` naming the goals outside the forward closure.
    """
    if closure is None:
        closure = reachable_closure(r, req)
    if not closure.satisfied:
        raise Unsatisfiable(closure.unsatisfied)

    producer: dict[ConceptId, str] = {}
    labels: dict[tuple[str, str], set[ConceptId]] = {}

    def link(c: ConceptId, target: str) -> str | None:
        if closure.concept_layer[c] == 0:
            labels.setdefault((SOURCE, target), set()).add(c)
            return None
        if c not in producer:
            producer[c] = _choose_producer(r, closure, c)
        src = producer[c]
        labels.setdefault((src, target), set()).add(c)
        return src

    selected: set[str] = set()
    stack = []
    for g in sorted(req.goals, reverse=True):
        src = link(g, SINK)
        if src is not None:
            stack.append(src)
    while stack:
        name = stack.pop()
        if name in selected:
            continue
        selected.add(name)
        if not r[name].inputs:
            # input-less services hang off SOURCE with an empty label set
            labels.setdefault((SOURCE, name), set())
        for i in sorted(r[name].inputs, reverse=True):
            src = link(i, name)
            if src is not None and src not in selected:
                stack.append(src)

    layers = {n: closure.layers[n] for n in sorted(selected)}
    edges = tuple(
        GraphEdge(s, t, tuple(sorted(ls)))
        for (s, t), ls in sorted(labels.items(), key=lambda kv: _edge_key(kv[0]))
    )
    return CompositionGraph(layers, edges, req, max(layers.values(), default=0) + 1)


def _edge_key(pair: tuple[str, str]):
    s, t = pair
    return (s != SOURCE, t == SINK, s, t)
