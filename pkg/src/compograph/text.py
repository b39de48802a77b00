"""Case-normalized string comparison: strict equality and edit-distance similarity."""

from __future__ import annotations

DEFAULT_APPROX_THRESHOLD = 0.8


def normalize(s: str) -> str:
    """Fold to upper case and trim surrounding whitespace."""
    return s.strip().upper()


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance (unit-cost insert, delete, substitute)."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def similarity_ratio(a: str, b: str) -> float:
    """1 - distance / longer length, on normalized forms.

    Two empty strings score 1.0; an empty string against a non-empty one
    scores 0.0.
    """
    a, b = normalize(a), normalize(b)
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - edit_distance(a, b) / longest


def syntactic_equal(a: str, b: str) -> bool:
    return normalize(a) == normalize(b)


def syntactic_approx(a: str, b: str, threshold: float = DEFAULT_APPROX_THRESHOLD) -> bool:
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold}")
    return similarity_ratio(a, b) >= threshold
