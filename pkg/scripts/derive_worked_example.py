#!/usr/bin/env python3
"""Hand-run derivation of the eight-service worked example.

This is a deliberately naive, self-contained oracle. It does not import the
engine's composer or planner; it re-derives the expected answer with plain
set arithmetic so the engine can be checked against it.

Services (inputs, outputs, preconditions, effects):

    WS1 ({a,b}, {c,d,f}, {P1}, {EF1,EF2})
    WS2 ({c},   {m,k},   {P2}, {})
    WS3 ({w,m}, {t},     {P3,P4}, {EF3})
    WS4 ({k,d,i}, {p},   {P5}, {EF4})
    WS5 ({f},   {i,g},   {P6}, {EF5})
    WS6 ({h,g,n}, {y,q}, {P7}, {EF5})
    WS7 ({a},   {f},     {P8}, {EF})
    WS8 ({t},   {z,g},   {P9}, {})

Request: provided {a,b,w}, goals {t,p}.

Derivation, step by step:

1. Forward chaining. Known = {a,b,w}.
   Round 1: services whose inputs are all known and that add something new:
   WS1 ({a,b} known; adds c,d,f) and WS7 ({a} known; adds f).
   WS3 needs m, WS2 needs c, WS5 needs f: not yet.  Known += {c,d,f}.
   Round 2: WS2 (c) adds m,k; WS5 (f) adds i,g. WS4 still lacks k,i at the
   start of the round. Known += {m,k,i,g}.
   Round 3: WS3 (w,m) adds t; WS4 (k,d,i) adds p; WS8 lacks t; WS6 lacks h,n.
   Goals {t,p} now known: stop.
   Rounds: WS1,WS7 -> 1; WS2,WS5 -> 2; WS3,WS4 -> 3.

2. Backward selection from the goals, one producer per needed concept,
   earliest round first, then by name:
   t <- WS3 (needs w: provided; m <- WS2 (needs c <- WS1 (needs a,b: provided)))
   p <- WS4 (needs k <- WS2; d <- WS1; i <- WS5 (needs f <- WS1 or WS7, both
   round 1; WS1 and WS7 score the same against the sub-request, so the name
   decides: WS1)).
   Selected: {WS1, WS2, WS3, WS4, WS5}. WS6, WS7, WS8 are not needed.

3. Execution stages by longest path from the request inputs:
   WS1 (only request inputs) -> 1; WS2, WS5 (fed by WS1) -> 2;
   WS3 (fed by WS2), WS4 (fed by WS1, WS2, WS5) -> 3.
   Stages: [{WS1}, {WS2, WS5}, {WS3, WS4}].

Run directly to print the derivation and compare it with the engine.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

SERVICES = {
    "WS1": ({"a", "b"}, {"c", "d", "f"}, {"P1"}, {"EF1", "EF2"}),
    "WS2": ({"c"}, {"m", "k"}, {"P2"}, set()),
    "WS3": ({"w", "m"}, {"t"}, {"P3", "P4"}, {"EF3"}),
    "WS4": ({"k", "d", "i"}, {"p"}, {"P5"}, {"EF4"}),
    "WS5": ({"f"}, {"i", "g"}, {"P6"}, {"EF5"}),
    "WS6": ({"h", "g", "n"}, {"y", "q"}, {"P7"}, {"EF5"}),
    "WS7": ({"a"}, {"f"}, {"P8"}, {"EF"}),
    "WS8": ({"t"}, {"z", "g"}, {"P9"}, set()),
}
PROVIDED = {"a", "b", "w"}
GOALS = {"t", "p"}

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def derive(services=SERVICES, provided=PROVIDED, goals=GOALS) -> dict:
    known = set(provided)
    rounds: dict[str, int] = {}
    k = 0
    while not goals <= known:
        k += 1
        fire = [
            n
            for n, (ins, outs, _, _) in sorted(services.items())
            if n not in rounds and ins <= known and not outs <= known
        ]
        if not fire:
            break
        for n in fire:
            rounds[n] = k
        for n in fire:
            known |= services[n][1]

    # backward: one producer per concept; earliest round, then name
    chosen: dict[str, str] = {}
    selected: set[str] = set()
    todo = sorted(goals - provided)
    while todo:
        c = todo.pop()
        if c in chosen:
            continue
        makers = sorted((rounds[n], n) for n in rounds if c in services[n][1])
        chosen[c] = makers[0][1]
        s = chosen[c]
        if s not in selected:
            selected.add(s)
            todo.extend(sorted(services[s][0] - provided))

    # longest-path stages
    stage: dict[str, int] = {}
    for s in sorted(selected, key=lambda n: rounds[n]):
        feeders = {chosen[i] for i in services[s][0] - provided}
        stage[s] = 1 + max((stage[f] for f in feeders), default=0)
    depth = max(stage.values(), default=0)
    stages = [sorted(n for n in stage if stage[n] == d) for d in range(1, depth + 1)]

    return {
        "rounds": dict(sorted(rounds.items())),
        "selected": sorted(selected),
        "excluded": sorted(set(services) - selected),
        "stages": stages,
        "goals_reached": goals <= known,
    }


def engine_result() -> dict:
    from compograph import compose, execution_order
    from compograph.io import read_registry, read_request

    r = read_registry(CORPUS / "ws_registry.json")
    req = read_request(CORPUS / "ws_request.json")
    t0 = time.perf_counter()
    g = compose(r, req)
    plan = execution_order(g)
    elapsed = time.perf_counter() - t0
    return {
        "selected": g.selected,
        "stages": [list(s) for s in plan.stages],
        "seconds": elapsed,
    }


def main() -> int:
    oracle = derive()
    print("oracle:", json.dumps(oracle, sort_keys=True))
    eng = engine_result()
    print("engine:", json.dumps(eng, sort_keys=True))
    ok = eng["selected"] == oracle["selected"] and eng["stages"] == oracle["stages"]
    print("agree" if ok else "DISAGREE")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
