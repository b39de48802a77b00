"""Layered execution ordering and simulated execution of composition graphs."""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field

from .composer import SINK, SOURCE, CompositionGraph
from .model import ConceptId, PropositionId, Request
from .registry import Registry


class InvariantViolation(RuntimeError):
    """An internal guarantee did not hold (e.g. a cycle in a composition graph)."""


class SimulationError(Exception):
    pass


class MissingInput(SimulationError):
    def __init__(self, service: str, concept: ConceptId):
        self.service, self.concept = service, concept
        super().__init__(f"{service}: input {concept} not available")


class PreconditionViolation(SimulationError):
    def __init__(self, service: str, proposition: PropositionId):
        self.service, self.proposition = service, proposition
        super().__init__(f"{service}: precondition {proposition} does not hold")


class GoalShortfall(SimulationError):
    def __init__(self, concepts):
        self.concepts = tuple(sorted(concepts))
        super().__init__("goals not produced: " + ", ".join(self.concepts))


@dataclass(frozen=True)
class ExecutionPlan:
    stages: tuple[tuple[str, ...], ...]
    graph: CompositionGraph

    def stage_of(self, name: str) -> int:
        for k, stage in enumerate(self.stages, 1):
            if name in stage:
                return k
        raise KeyError(name)


def execution_order(g: CompositionGraph) -> ExecutionPlan:
    """Stage of a service = 1 + the highest stage among its predecessors (SOURCE is 0)."""
    preds: dict[str, set[str]] = {n: set() for n in g.layers}
    for e in g.edges:
        if e.source in (SOURCE, SINK) or e.target in (SOURCE, SINK):
            continue
        preds[e.target].add(e.source)
    ts = graphlib.TopologicalSorter(preds)
    try:
        order = list(ts.static_order())
    except graphlib.CycleError as exc:
        raise InvariantViolation(f"composition graph has a cycle: {exc.args[1]}") from exc
    stage: dict[str, int] = {}
    for n in order:
        stage[n] = 1 + max((stage[p] for p in preds[n]), default=0)
    depth = max(stage.values(), default=0)
    stages = tuple(
        tuple(sorted(n for n, k in stage.items() if k == level)) for level in range(1, depth + 1)
    )
    return ExecutionPlan(stages, g)


@dataclass(frozen=True)
class StepRecord:
    stage: int
    service: str
    inputs: tuple[ConceptId, ...]
    outputs: tuple[ConceptId, ...]
    preconditions: tuple[PropositionId, ...]
    unmet_preconditions: tuple[PropositionId, ...]
    effects: tuple[PropositionId, ...]


@dataclass(frozen=True)
class SimulationTrace:
    steps: tuple[StepRecord, ...]
    known: frozenset[ConceptId]
    world: frozenset[PropositionId]
    strict: bool = False
    violations: tuple[tuple[str, PropositionId], ...] = field(default=())

    @property
    def clean(self) -> bool:
        return not self.violations


class _Coverage:
    """Tracks which needed concepts the known set satisfies."""

    def __init__(self, r: Registry):
        self.r = r
        self.known: set[ConceptId] = set()
        self.up: set[ConceptId] = set()

    def add(self, concepts) -> None:
        for c in concepts:
            if c not in self.known:
                self.known.add(c)
                self.up |= self.r.taxonomy.ancestors(c)

    def covers(self, need: ConceptId) -> bool:
        if need in self.up:
            return True
        if self.r.approx_threshold is None:
            return False
        return any(self.r.satisfies(k, need) for k in self.known)


def simulate(
    plan: ExecutionPlan, req: Request, r: Registry, strict: bool = False
) -> SimulationTrace:
    """Replay the plan stage by stage against the declared model.

    Members of one stage all see the state left by the previous stage.
    Unmet preconditions are recorded and, in strict mode, raise
    :class:`PreconditionViolation`. Missing inputs always raise.
    """
    cov = _Coverage(r)
    cov.add(req.provided)
    world = set(req.initial_world)
    steps = []
    violations = []
    for k, stage in enumerate(plan.stages, 1):
        produced: set[ConceptId] = set()
        established: set[PropositionId] = set()
        for name in stage:
            s = r[name]
            for i in sorted(s.inputs):
                if not cov.covers(i):
                    raise MissingInput(name, i)
            unmet = tuple(sorted(s.preconditions - world))
            if unmet:
                if strict:
                    raise PreconditionViolation(name, unmet[0])
                violations.extend((name, p) for p in unmet)
            steps.append(
                StepRecord(
                    k,
                    name,
                    tuple(sorted(s.inputs)),
                    tuple(sorted(s.outputs)),
                    tuple(sorted(s.preconditions)),
                    unmet,
                    tuple(sorted(s.effects)),
                )
            )
            produced |= s.outputs
            established |= s.effects
        cov.add(sorted(produced))
        world |= established
    short = [g for g in req.goals if not cov.covers(g)]
    if short:
        raise GoalShortfall(short)
    return SimulationTrace(
        tuple(steps), frozenset(cov.known), frozenset(world), strict, tuple(violations)
    )
