"""Shared test helpers: a cached algebra factory and the parameter grid."""

from __future__ import annotations

import functools

from ahsnormal import build_algebra

# Full parameter grid: every kind over its validity range, with the
# degenerate sl(2) = grassmannian(1, 1) included for structural checks.
GRID = (
    [("conformal", {"m": m}) for m in range(3, 7)]
    + [("grassmannian", {"p": p, "q": q}) for p in range(1, 5) for q in range(p, 5)]
    + [("projective", {"q": q}) for q in range(2, 5)]
    + [("lagrangian", {"m": m}) for m in range(3, 7)]
    + [("spinorial", {"m": m}) for m in range(3, 7)]
)

# One small representative per kind, for tests where the property is
# parameter-independent and the full grid would only add runtime.
SMALL = [
    ("conformal", {"m": 4}),
    ("grassmannian", {"p": 2, "q": 3}),
    ("projective", {"q": 3}),
    ("lagrangian", {"m": 3}),
    ("spinorial", {"m": 4}),
]


def grid_id(value) -> str:
    """Test-id fragment for one parametrize argument (kind or params)."""
    if isinstance(value, dict):
        return "-".join(str(value[k]) for k in sorted(value))
    return str(value)


@functools.lru_cache(maxsize=None)
def _cached(kind: str, items: tuple) -> object:
    return build_algebra(kind, **dict(items))


def algebra(kind: str, **params):
    """Cached algebra factory; tests must not mutate the returned object."""
    return _cached(kind, tuple(sorted(params.items())))
