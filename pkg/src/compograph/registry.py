"""Immutable, indexed collection of published service descriptors."""

from __future__ import annotations

from types import MappingProxyType
from typing import TYPE_CHECKING, Iterable, Mapping

from .model import (
    EMPTY_TAXONOMY,
    RESERVED_NAMES,
    ConceptId,
    PropositionId,
    Request,
    ServiceDescriptor,
    Taxonomy,
    Violation,
    concept_satisfies,
    normalize_concept,
    normalize_proposition,
    validate_descriptor,
)
from .text import syntactic_approx

if TYPE_CHECKING:
    from .planner import ExecutionPlan


class RegistryError(ValueError):
    """Raised when records cannot form a registry; carries every violation found."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


class PublishError(ValueError):
    pass


class Registry:
    """Services keyed by name plus producer/consumer indexes.

    Index name sets are sorted tuples. Instances are never mutated;
    :meth:`with_service` and :func:`publish_composite` return new registries.
    """

    def __init__(
        self,
        services: Iterable[ServiceDescriptor] = (),
        vocab: Iterable[PropositionId] = (),
        taxonomy: Taxonomy = EMPTY_TAXONOMY,
        approx_threshold: float | None = None,
    ):
        svc = {}
        for s in services:
            if s.name in svc:
                raise RegistryError([Violation("duplicate-name", s.name)])
            svc[s.name] = s
        self._services = dict(sorted(svc.items()))
        self.services: Mapping[str, ServiceDescriptor] = MappingProxyType(self._services)
        self.vocab: frozenset[PropositionId] = frozenset(normalize_proposition(p) for p in vocab)
        self.taxonomy = taxonomy
        self.approx_threshold = approx_threshold
        self._build_indexes()

    def _build_indexes(self) -> None:
        producers: dict[str, set[str]] = {}
        consumers: dict[str, set[str]] = {}
        for s in self._services.values():
            for o in s.outputs:
                for c in self.taxonomy.ancestors(o):
                    producers.setdefault(c, set()).add(s.name)
            for i in s.inputs:
                consumers.setdefault(i, set()).add(s.name)
        self._producers = {c: tuple(sorted(v)) for c, v in sorted(producers.items())}
        self._consumers = {c: tuple(sorted(v)) for c, v in sorted(consumers.items())}
        self._output_concepts = tuple(sorted({o for s in self._services.values() for o in s.outputs}))

    @property
    def producers(self) -> Mapping[ConceptId, tuple[str, ...]]:
        return MappingProxyType(self._producers)

    @property
    def consumers(self) -> Mapping[ConceptId, tuple[str, ...]]:
        return MappingProxyType(self._consumers)

    def __len__(self) -> int:
        return len(self._services)

    def __iter__(self):
        return iter(self._services.values())

    def __contains__(self, name: str) -> bool:
        return name in self._services

    def __getitem__(self, name: str) -> ServiceDescriptor:
        return self._services[name]

    def names(self) -> list[str]:
        return list(self._services)

    def satisfies(self, have: ConceptId, need: ConceptId) -> bool:
        return concept_satisfies(have, need, self.taxonomy, self.approx_threshold)

    def satisfied_by(self, have: ConceptId, universe: Iterable[ConceptId]) -> set[ConceptId]:
        """Members of ``universe`` that a value of ``have`` satisfies."""
        if not isinstance(universe, (set, frozenset)):
            universe = set(universe)
        hits = set(self.taxonomy.ancestors(have) & universe)
        if self.approx_threshold is not None:
            hits |= {c for c in universe if syntactic_approx(have, c, self.approx_threshold)}
        return hits

    def producers_of(self, c: ConceptId) -> tuple[str, ...]:
        c = normalize_concept(c)
        found = self._producers.get(c, ())
        if self.approx_threshold is None:
            return found
        extra = {
            name
            for o in self._output_concepts
            if syntactic_approx(o, c, self.approx_threshold)
            for name in self._producers.get(o, ())
        }
        return tuple(sorted(set(found) | extra))

    def consumers_of(self, c: ConceptId) -> tuple[str, ...]:
        return self._consumers.get(normalize_concept(c), ())

    def with_service(self, d: ServiceDescriptor) -> "Registry":
        if d.name in self._services:
            raise PublishError(f"service name {d.name!r} already registered")
        return Registry([*self._services.values(), d], self.vocab, self.taxonomy, self.approx_threshold)

    def with_approx(self, threshold: float | None) -> "Registry":
        return Registry(self._services.values(), self.vocab, self.taxonomy, threshold)

    def to_document(self) -> dict:
        return {
            "propositions": sorted(self.vocab),
            "taxonomy": [{"child": c, "parent": p} for c, p in sorted(self.taxonomy.edges)],
            "services": [s.to_record() for s in self._services.values()],
        }

    def __repr__(self) -> str:
        return f"Registry({len(self)} services, {len(self.vocab)} propositions)"


def load_registry(
    documents: Iterable[ServiceDescriptor | dict],
    taxonomy: Taxonomy = EMPTY_TAXONOMY,
    vocab: Iterable[PropositionId] = (),
    approx_threshold: float | None = None,
) -> Registry:
    """Validate descriptor records and build a registry.

    All problems are collected before raising a single :class:`RegistryError`.
    Duplicate names report both record positions.
    """
    vocab = frozenset(normalize_proposition(p) for p in vocab)
    violations: list[Violation] = []
    seen: dict[str, int] = {}
    services = []
    for idx, doc in enumerate(documents):
        d = doc if isinstance(doc, ServiceDescriptor) else ServiceDescriptor.from_record(doc)
        violations.extend(validate_descriptor(d, vocab))
        if d.name in seen:
            violations.append(
                Violation("duplicate-name", d.name, f"records #{seen[d.name]} and #{idx}")
            )
            continue
        seen[d.name] = idx
        services.append(d)
    if violations:
        raise RegistryError(violations)
    return Registry(services, vocab, taxonomy, approx_threshold)


def publish_composite(r: Registry, name: str, plan: "ExecutionPlan", req: Request) -> Registry:
    """Register a verified plan as one atomic descriptor.

    Inputs are the provided concepts the plan reads; outputs are the request
    goals; preconditions are the members' preconditions minus those
    established by effects of strictly earlier stages; effects are the union.
    """
    from .planner import SimulationError, simulate

    name = name.strip()
    if not name:
        raise PublishError("composite name is empty")
    if name in RESERVED_NAMES:
        raise PublishError(f"{name!r} is a reserved name")
    if name in r:
        raise PublishError(f"service name {name!r} already registered")
    try:
        simulate(plan, req, r)
    except SimulationError as exc:
        raise PublishError(f"plan does not verify: {exc}") from exc

    consumed = set()
    for edge in plan.graph.edges:
        if edge.source == plan.graph.SOURCE:
            for label in edge.labels:
                consumed |= {p for p in req.provided if r.satisfies(p, label)}

    pre: set[str] = set()
    eff: set[str] = set()
    for stage in plan.stages:
        members = [r[n] for n in stage]
        for m in members:
            pre |= m.preconditions - eff
        for m in members:
            eff |= m.effects
    return r.with_service(ServiceDescriptor(name, consumed, req.goals, pre, eff))
