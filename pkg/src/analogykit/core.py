"""Analogical proportion and dissimilarity on atomic domains.

Supported carriers: single bits, fixed-width binary feature vectors,
finite sets of opaque symbols, and real vectors under a p-norm.  All
functions are pure; vector inputs are any array-likes of matching length.

The four-way relation "u is to v as w is to x" is scored by an analogical
dissimilarity (AD): a non-negative value that is zero exactly when the
four objects are in analogical proportion.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import DimensionMismatch

__all__ = [
    "binary_ad",
    "vector_ad",
    "solve_binary_feature",
    "solve_bitvector_equation",
    "solve_set_equation",
    "real_ad",
    "solve_real_equation",
    "is_analogy",
    "REAL_ATOL",
]

#: Absolute tolerance for real-valued comparisons.
REAL_ATOL = 1e-9


def _as_bits(v, name: str = "operand") -> np.ndarray:
    a = np.asarray(v)
    if a.ndim == 0:
        a = a.reshape(1)
    if a.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    a = a.astype(np.int64)
    if not np.isin(a, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0/1 values")
    return a


def _as_reals(v, name: str = "operand") -> np.ndarray:
    a = np.asarray(v, dtype=np.float64)
    if a.ndim == 0:
        a = a.reshape(1)
    if a.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    return a


def _check_dims(*arrays: np.ndarray) -> None:
    dims = {a.shape[0] for a in arrays}
    if len(dims) > 1:
        raise DimensionMismatch(f"operand dimensions differ: {sorted(dims)}")


def binary_ad(u: int, v: int, w: int, x: int) -> int:
    """Analogical dissimilarity of four bits.

    Equals the minimal number of bit flips needed to turn (u, v, w, x)
    into a valid four-bit analogy; closed form ``|u + x - v - w|``.
    Takes values in {0, 1, 2}.
    """
    for b in (u, v, w, x):
        if b not in (0, 1):
            raise ValueError("bits must be 0 or 1")
    return abs(u + x - v - w)


def vector_ad(u, v, w, x) -> int:
    """Analogical dissimilarity of four equal-length binary vectors.

    Sum of the per-coordinate bit dissimilarities.
    """
    au, av, aw, ax = (_as_bits(t) for t in (u, v, w, x))
    _check_dims(au, av, aw, ax)
    return int(np.abs(au + ax - av - aw).sum())


def solve_binary_feature(a: int, b: int, c: int) -> Optional[int]:
    """Solve the one-bit equation a : b :: c : x.

    Returns the unique solution, or None for the two unsolvable
    patterns (0, 1, 1) and (1, 0, 0).
    """
    for bit in (a, b, c):
        if bit not in (0, 1):
            raise ValueError("bits must be 0 or 1")
    if a == b:
        return c
    if a == c:
        return b
    return None


def solve_bitvector_equation(a, b, c) -> Optional[np.ndarray]:
    """Solve a : b :: c : x coordinate-wise on binary vectors.

    Returns the solution vector, or None if any coordinate is
    unsolvable.
    """
    aa, ab, ac = (_as_bits(t) for t in (a, b, c))
    _check_dims(aa, ab, ac)
    eq_ab = aa == ab
    eq_ac = aa == ac
    if not (eq_ab | eq_ac).all():
        return None
    return np.where(eq_ab, ac, ab)


def solve_set_equation(a: Iterable, b: Iterable, c: Iterable):
    """Solve A : B :: C : X on finite sets.

    A solution exists iff A is contained in B | C and contains B & C;
    it is then unique: ((B | C) - A) | (B & C).  Returns None when the
    conditions fail.
    """
    sa, sb, sc = set(a), set(b), set(c)
    union = sb | sc
    inter = sb & sc
    if not (sa <= union and sa >= inter):
        return None
    return (union - sa) | inter


def _norm(diff: np.ndarray, p: Union[float, int]) -> float:
    if p == math.inf:
        return float(np.abs(diff).max()) if diff.size else 0.0
    if p < 1:
        raise ValueError("p-norm requires p >= 1")
    return float(np.linalg.norm(diff, ord=p))


def real_ad(u, v, w, x, p: Union[float, int] = 2) -> float:
    """Analogical dissimilarity of four real vectors.

    Distance, in the p-norm, between u + x and v + w; zero exactly on
    parallelograms.  ``p`` may be any real >= 1 or ``math.inf``.
    """
    au, av, aw, ax = (_as_reals(t) for t in (u, v, w, x))
    _check_dims(au, av, aw, ax)
    return _norm((au + ax) - (av + aw), p)


def solve_real_equation(a, b, c) -> np.ndarray:
    """Solve a : b :: c : x on real vectors: the unique solution b + c - a."""
    aa, ab, ac = (_as_reals(t) for t in (a, b, c))
    _check_dims(aa, ab, ac)
    return ab + ac - aa


def _looks_binary(arrays: Sequence[np.ndarray]) -> bool:
    return all(np.isin(a, (0, 1)).all() for a in arrays)


def is_analogy(u, v, w, x, p: Union[float, int] = 2,
               atol: float = REAL_ATOL) -> bool:
    """True iff the four same-domain values are in analogical proportion.

    Binary inputs (bits or 0/1 vectors) are decided exactly; real
    vectors are decided by the p-norm dissimilarity within ``atol``.
    """
    arrays = [np.asarray(t) for t in (u, v, w, x)]
    if all(a.dtype.kind in "iub" for a in arrays) and _looks_binary(arrays):
        return vector_ad(u, v, w, x) == 0
    return real_ad(u, v, w, x, p=p) <= atol
