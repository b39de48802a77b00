from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import settings

from compograph import Request, ServiceDescriptor, load_registry

settings.register_profile("default", deadline=None)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

WS_SERVICES = [
    ServiceDescriptor("WS1", {"a", "b"}, {"c", "d", "f"}, {"P1"}, {"EF1", "EF2"}),
    ServiceDescriptor("WS2", {"c"}, {"m", "k"}, {"P2"}, set()),
    ServiceDescriptor("WS3", {"w", "m"}, {"t"}, {"P3", "P4"}, {"EF3"}),
    ServiceDescriptor("WS4", {"k", "d", "i"}, {"p"}, {"P5"}, {"EF4"}),
    ServiceDescriptor("WS5", {"f"}, {"i", "g"}, {"P6"}, {"EF5"}),
    ServiceDescriptor("WS6", {"h", "g", "n"}, {"y", "q"}, {"P7"}, {"EF5"}),
    ServiceDescriptor("WS7", {"a"}, {"f"}, {"P8"}, {"EF"}),
    ServiceDescriptor("WS8", {"t"}, {"z", "g"}, {"P9"}, set()),
]
WS_VOCAB = {f"P{i}" for i in range(1, 10)} | {f"EF{i}" for i in range(1, 6)} | {"EF"}


@pytest.fixture
def ws_registry():
    return load_registry(WS_SERVICES, vocab=WS_VOCAB)


@pytest.fixture
def ws_request():
    return Request({"a", "b", "w"}, {"t", "p"})


_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion; printed at session end."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" ({detail})" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
