"""Domain values: concepts, propositions, service descriptors, requests, world state."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .text import normalize, syntactic_approx

ConceptId = str
PropositionId = str


def normalize_concept(c: str) -> ConceptId:
    return normalize(c)


def normalize_proposition(p: str) -> PropositionId:
    return p.strip()


def _concepts(items: Iterable[str]) -> frozenset[ConceptId]:
    if isinstance(items, str):
        raise TypeError("expected an iterable of concept ids, got a bare string")
    return frozenset(normalize_concept(c) for c in items)


def _props(items: Iterable[str]) -> frozenset[PropositionId]:
    if isinstance(items, str):
        raise TypeError("expected an iterable of proposition ids, got a bare string")
    return frozenset(normalize_proposition(p) for p in items)


class TaxonomyError(ValueError):
    pass


@dataclass(frozen=True)
class Taxonomy:
    """Child -> parent concept edges forming a DAG.

    ``ancestors(c)`` is the reflexive-transitive closure, so ``c`` is always
    among its own ancestors.
    """

    edges: frozenset[tuple[ConceptId, ConceptId]] = frozenset()
    _closure: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        norm = frozenset((normalize_concept(c), normalize_concept(p)) for c, p in self.edges)
        for child, parent in norm:
            if not child or not parent:
                raise TaxonomyError("taxonomy edge with empty concept")
            if child == parent:
                raise TaxonomyError(f"self-loop on {child!r}")
        object.__setattr__(self, "edges", norm)
        parents: dict[str, set[str]] = {}
        for child, parent in norm:
            parents.setdefault(child, set()).add(parent)
        closure = self._closure
        # iterative DFS with cycle detection
        state: dict[str, int] = {}
        for root in sorted(parents):
            if root in closure:
                continue
            stack = [(root, iter(sorted(parents.get(root, ()))))]
            state[root] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    stack.pop()
                    acc = {node}
                    for p in parents.get(node, ()):
                        acc |= closure[p]
                    closure[node] = frozenset(acc)
                    state[node] = 2
                    continue
                s = state.get(nxt, 0)
                if s == 1:
                    raise TaxonomyError(f"taxonomy cycle through {nxt!r}")
                if s == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(sorted(parents.get(nxt, ())))))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "Taxonomy":
        return cls(frozenset(pairs))

    def __bool__(self) -> bool:
        return bool(self.edges)

    def ancestors(self, c: ConceptId) -> frozenset[ConceptId]:
        c = normalize_concept(c)
        return self._closure.get(c) or frozenset((c,))

    def is_descendant(self, child: ConceptId, ancestor: ConceptId) -> bool:
        return normalize_concept(ancestor) in self.ancestors(child)


EMPTY_TAXONOMY = Taxonomy()


def concept_satisfies(
    have: ConceptId,
    need: ConceptId,
    tax: Taxonomy | None = None,
    approx_threshold: float | None = None,
) -> bool:
    """True if a value of concept ``have`` can be supplied where ``need`` is required.

    Equality after normalization, or ``have`` below ``need`` in the taxonomy.
    With ``approx_threshold`` set, edit-distance similarity is also accepted.
    """
    h, n = normalize_concept(have), normalize_concept(need)
    if h == n:
        return True
    if tax and tax.is_descendant(h, n):
        return True
    return approx_threshold is not None and syntactic_approx(h, n, approx_threshold)


@dataclass(frozen=True)
class ServiceDescriptor:
    name: str
    inputs: frozenset[ConceptId] = frozenset()
    outputs: frozenset[ConceptId] = frozenset()
    preconditions: frozenset[PropositionId] = frozenset()
    effects: frozenset[PropositionId] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "name", self.name.strip())
        object.__setattr__(self, "inputs", _concepts(self.inputs))
        object.__setattr__(self, "outputs", _concepts(self.outputs))
        object.__setattr__(self, "preconditions", _props(self.preconditions))
        object.__setattr__(self, "effects", _props(self.effects))

    def renamed(self, name: str) -> "ServiceDescriptor":
        return ServiceDescriptor(name, self.inputs, self.outputs, self.preconditions, self.effects)

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "inputs": sorted(self.inputs),
            "outputs": sorted(self.outputs),
            "preconditions": sorted(self.preconditions),
            "effects": sorted(self.effects),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ServiceDescriptor":
        return cls(
            rec["name"],
            rec.get("inputs", ()),
            rec.get("outputs", ()),
            rec.get("preconditions", ()),
            rec.get("effects", ()),
        )


class RequestError(ValueError):
    pass


@dataclass(frozen=True)
class Request:
    provided: frozenset[ConceptId]
    goals: frozenset[ConceptId]
    initial_world: frozenset[PropositionId] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "provided", _concepts(self.provided))
        object.__setattr__(self, "goals", _concepts(self.goals))
        object.__setattr__(self, "initial_world", _props(self.initial_world))
        if not self.goals:
            raise RequestError("request has no goals")
        if "" in self.provided or "" in self.goals:
            raise RequestError("request contains an empty concept id")

    def to_record(self) -> dict:
        return {
            "provided": sorted(self.provided),
            "goals": sorted(self.goals),
            "initial_world": sorted(self.initial_world),
        }


@dataclass(frozen=True)
class WorldState:
    held: frozenset[PropositionId] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "held", _props(self.held))

    def holds_all(self, props: Iterable[PropositionId]) -> bool:
        return self.held.issuperset(props)

    def apply(self, effects: Iterable[PropositionId]) -> "WorldState":
        return WorldState(self.held | _props(effects))


# virtual endpoints of a composition graph
RESERVED_NAMES = frozenset({"SOURCE", "SINK"})


@dataclass(frozen=True)
class Violation:
    code: str
    service: str
    detail: str = ""

    def __str__(self) -> str:
        tail = f": {self.detail}" if self.detail else ""
        return f"{self.service or '<unnamed>'}: {self.code}{tail}"


def validate_descriptor(d: ServiceDescriptor, vocab: Iterable[PropositionId]) -> list[Violation]:
    """Structural check of one descriptor; returns violations, never raises."""
    vocab = _props(vocab)
    out: list[Violation] = []
    if not d.name:
        out.append(Violation("empty-name", d.name))
    elif d.name in RESERVED_NAMES:
        out.append(Violation("reserved-name", d.name))
    if not d.outputs:
        out.append(Violation("empty-outputs", d.name))
    if "" in d.inputs or "" in d.outputs:
        out.append(Violation("empty-concept", d.name))
    for kind, props in (("precondition", d.preconditions), ("effect", d.effects)):
        for p in sorted(props - vocab):
            out.append(Violation("unknown-proposition", d.name, f"{kind} {p!r}"))
    return out
