"""Seeded random registries and requests for property tests and benchmarks."""

from __future__ import annotations

import random

from .model import Request, ServiceDescriptor
from .registry import Registry


def concept_names(n: int) -> list[str]:
    return [f"C{i}" for i in range(n)]


def random_registry(
    rng: random.Random,
    n_services: int,
    n_concepts: int,
    max_inputs: int = 3,
    max_outputs: int = 3,
    n_props: int = 4,
) -> Registry:
    """Unstructured registry: inputs and outputs drawn uniformly from the concept pool."""
    concepts = concept_names(n_concepts)
    props = [f"P{i}" for i in range(n_props)]
    services = []
    for k in range(n_services):
        ins = rng.sample(concepts, rng.randint(0, min(max_inputs, n_concepts)))
        outs = rng.sample(concepts, rng.randint(1, min(max_outputs, n_concepts)))
        pre = rng.sample(props, rng.randint(0, min(2, n_props)))
        eff = rng.sample(props, rng.randint(0, min(2, n_props)))
        services.append(ServiceDescriptor(f"S{k:03d}", ins, outs, pre, eff))
    return Registry(services, props)


def random_request(rng: random.Random, n_concepts: int, max_provided: int = 3, max_goals: int = 2) -> Request:
    concepts = concept_names(n_concepts)
    provided = rng.sample(concepts, rng.randint(0, min(max_provided, n_concepts)))
    goals = rng.sample(concepts, rng.randint(1, min(max_goals, n_concepts)))
    props = [f"P{i}" for i in range(4)]
    world = rng.sample(props, rng.randint(0, 2))
    return Request(provided, goals, world)


def layered_registry(
    rng: random.Random,
    n_services: int = 10_000,
    n_levels: int = 20,
    concepts_per_level: int = 150,
) -> Registry:
    """Large registry with depth: services read concepts from lower levels and write higher ones."""
    level = [[f"L{l}_{j}" for j in range(concepts_per_level)] for l in range(n_levels)]
    props = [f"P{i}" for i in range(32)]
    services = []
    for k in range(n_services):
        out_level = rng.randint(1, n_levels - 1)
        ins = set()
        for _ in range(rng.randint(1, 3)):
            l = rng.randint(max(0, out_level - 3), out_level - 1)
            ins.add(rng.choice(level[l]))
        outs = rng.sample(level[out_level], rng.randint(1, 3))
        services.append(
            ServiceDescriptor(f"S{k:05d}", ins, outs, rng.sample(props, 1), rng.sample(props, rng.randint(0, 2)))
        )
    return Registry(services, props)


def layered_request(rng: random.Random, r: Registry, n_provided: int = 100) -> Request:
    """Provide part of level 0 and ask for reachable concepts from the deepest reachable level."""
    from .composer import reachable_closure

    level0 = sorted({c for s in r for c in s.inputs if c.startswith("L0_")})
    provided = rng.sample(level0, min(n_provided, len(level0)))
    # saturate toward an unreachable goal to see everything reachable
    probe = reachable_closure(r, Request(provided, ["__UNREACHABLE__"]))
    reached = sorted(probe.known - set(provided), key=lambda c: (-int(c[1:].split("_")[0]), c))
    return Request(provided, reached[:5])
