"""Service discovery: degrees of matching, similarity scoring and best-service selection."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .model import (
    ConceptId,
    PropositionId,
    ServiceDescriptor,
    Taxonomy,
    WorldState,
    _concepts,
    concept_satisfies,
)
from .registry import Registry
from .text import syntactic_approx, syntactic_equal


__all__ = [
    "MatchDegree",
    "SimilarityScore",
    "SubRequest",
    "best_match",
    "discover",
    "match_degree",
    "similarity",
    "syntactic_approx",
    "syntactic_equal",
    "world_score",
]


class MatchDegree(enum.IntEnum):
    """Ordered by preference; the integer value is the input/output score."""

    FAIL = 0
    SUBSUMES = 1
    PLUGIN = 2
    EXACT = 3

    def __str__(self) -> str:
        return {3: "Exact", 2: "PlugIn", 1: "Subsumes", 0: "Fail"}[self.value]


@dataclass(frozen=True)
class SubRequest:
    available: frozenset[ConceptId]
    missing: frozenset[ConceptId]

    def __post_init__(self):
        object.__setattr__(self, "available", _concepts(self.available))
        object.__setattr__(self, "missing", _concepts(self.missing))

    @classmethod
    def normalized(cls, available: frozenset[ConceptId], missing: frozenset[ConceptId]) -> "SubRequest":
        """Build from sets already holding normalized ids, skipping re-normalization."""
        sub = object.__new__(cls)
        object.__setattr__(sub, "available", available)
        object.__setattr__(sub, "missing", missing)
        return sub


@dataclass(frozen=True)
class SimilarityScore:
    degree: MatchDegree
    world_score: int

    @property
    def io_score(self) -> int:
        return int(self.degree)

    @property
    def total(self) -> int:
        return self.io_score + self.world_score

    def as_dict(self) -> dict:
        return {
            "degree": str(self.degree),
            "io_score": self.io_score,
            "world_score": self.world_score,
            "total": self.total,
        }


def _ups(concepts: Iterable[ConceptId], tax: Taxonomy | None) -> set[ConceptId]:
    if not tax:
        return set(concepts)
    out: set[ConceptId] = set()
    for c in concepts:
        out |= tax.ancestors(c)
    return out


def _all_supplied(needs, haves, tax, approx) -> bool:
    """Every need is satisfied by some have."""
    if approx is None:
        return _ups(haves, tax).issuperset(needs)
    return all(any(concept_satisfies(h, n, tax, approx) for h in haves) for n in needs)


def _all_useful(haves, needs, tax, approx) -> bool:
    """Every have satisfies some need."""
    if approx is None:
        needs = set(needs)
        return all(not needs.isdisjoint(_ups((h,), tax)) for h in haves)
    return all(any(concept_satisfies(h, n, tax, approx) for n in needs) for h in haves)


def match_degree(
    req: SubRequest,
    sw: ServiceDescriptor,
    tax: Taxonomy | None = None,
    approx_threshold: float | None = None,
) -> MatchDegree:
    """Classify how ``sw`` covers ``req``; the first branch that holds wins.

    Set relations are non-strict and go through concept satisfaction, so
    PlugIn and Subsumes are the non-exact residual cases.
    """
    a = approx_threshold
    if (
        _all_supplied(req.available, sw.inputs, tax, a)
        and _all_supplied(sw.inputs, req.available, tax, a)
        and _all_supplied(req.missing, sw.outputs, tax, a)
        and _all_supplied(sw.outputs, req.missing, tax, a)
    ):
        return MatchDegree.EXACT
    if _all_supplied(sw.inputs, req.available, tax, a) and _all_supplied(
        req.missing, sw.outputs, tax, a
    ):
        return MatchDegree.PLUGIN
    # literal reading: inputs play no part here
    if _all_useful(sw.outputs, req.missing, tax, a):
        return MatchDegree.SUBSUMES
    return MatchDegree.FAIL


def world_score(sw: ServiceDescriptor, world: WorldState, vocab: Iterable[PropositionId]) -> int:
    """2 if preconditions hold and effects resolve, 1 if exactly one does, else 0.

    Preconditions hold when each is in ``world``; effects resolve when each
    is a known proposition. Empty sets pass vacuously.
    """
    pre_ok = world.holds_all(sw.preconditions)
    eff_ok = sw.effects <= frozenset(vocab)
    return int(pre_ok) + int(eff_ok)


def similarity(
    req: SubRequest,
    sw: ServiceDescriptor,
    world: WorldState,
    tax: Taxonomy | None = None,
    vocab: Iterable[PropositionId] = (),
    approx_threshold: float | None = None,
) -> SimilarityScore:
    return SimilarityScore(
        match_degree(req, sw, tax, approx_threshold), world_score(sw, world, vocab)
    )


def best_match(
    r: Registry, req: SubRequest, world: WorldState = WorldState()
) -> tuple[str, SimilarityScore] | None:
    """Scan services in name order keeping the first strictly better total.

    Services whose degree is Fail are never candidates, whatever their
    world score. The running best starts at 0.
    """
    best = None
    best_total = 0
    for s in r:
        score = similarity(req, s, world, r.taxonomy, r.vocab, r.approx_threshold)
        if score.degree is MatchDegree.FAIL:
            continue
        if score.total > best_total:
            best, best_total = (s.name, score), score.total
    return best


def discover(r: Registry, req: SubRequest, world: WorldState = WorldState()) -> str | None:
    found = best_match(r, req, world)
    return found[0] if found else None
