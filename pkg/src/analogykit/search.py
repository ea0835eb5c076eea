"""Search for the k least-dissimilar triples against a query vector.

Given a store S of binary vectors and a query y, find the k triples
(u, v, w) from S minimizing the four-way dissimilarity AD(u, v, w, y).
Triples that coincide under exchange of the middle terms are
deduplicated by requiring index(v) <= index(w), leaving
m * m * (m + 1) / 2 canonical candidates.

Two strategies are provided: exhaustive enumeration, and a pivot-pruned
search in the spirit of AESA/LAESA.  The dissimilarity acts as a
pseudo-metric between couples, delta((x, y), (z, t)) = AD(z, t, x, y),
so precomputed couple-to-pivot distances yield lower bounds that
eliminate candidates without evaluating them.  On vector domains the
pruned search returns exactly the exhaustive result while evaluating
fewer dissimilarities on-line.
"""

from __future__ import annotations

import bisect
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from .errors import CacheError, DimensionMismatch, InvalidN, ValidationError

__all__ = [
    "ItemStore",
    "BasePrototypes",
    "CoupleIndex",
    "SearchResult",
    "brute_force_search",
    "select_base_prototypes",
    "build_index",
    "fadana_search",
    "save_pre_matrix",
    "load_pre_matrix",
]

Triple = Tuple[int, int, int]

_CACHE_MAGIC = b"FDNA"
_CACHE_VERSION = 1


@dataclass(frozen=True)
class ItemStore:
    """Immutable store of m binary feature vectors of shared width."""
    items: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(np.asarray(self.items, dtype=np.int64))
        if a.ndim != 2 or a.shape[0] < 1:
            raise ValidationError("store needs a non-empty 2-D item array")
        if not np.isin(a, (0, 1)).all():
            raise ValidationError("store items must be 0/1 vectors")
        object.__setattr__(self, "items", a)

    @property
    def size(self) -> int:
        return self.items.shape[0]

    @property
    def dim(self) -> int:
        return self.items.shape[1]


@dataclass(frozen=True)
class BasePrototypes:
    """Pivot couples selected for precomputation, in selection order."""
    pivots: Tuple[Tuple[int, int], ...]
    seed: int


@dataclass(frozen=True)
class CoupleIndex:
    """Precomputed distances from every pivot couple to every couple.

    ``pre[p, x * m + y]`` holds AD(z_p, t_p, x, y) for pivot couple
    (z_p, t_p).
    """
    store: ItemStore
    pivots: BasePrototypes
    pre: np.ndarray


@dataclass(frozen=True)
class SearchResult:
    """Triples sorted by ascending dissimilarity, ties by index order."""
    entries: Tuple[Tuple[Triple, float], ...]
    ad_evaluations: int


def _check_query(store: ItemStore, y) -> np.ndarray:
    q = np.asarray(y, dtype=np.int64).ravel()
    if q.shape[0] != store.dim:
        raise DimensionMismatch(
            f"query dim {q.shape[0]} != store dim {store.dim}")
    if not np.isin(q, (0, 1)).all():
        raise ValidationError("query must be a 0/1 vector")
    return q


def _pair_arrays(m: int) -> Tuple[np.ndarray, np.ndarray]:
    """Median pairs (v, w) with v <= w, in lexicographic order."""
    v, w = np.triu_indices(m)
    return v, w


def _canonical_ads(store: ItemStore, q: np.ndarray) -> Tuple[np.ndarray, ...]:
    """Dissimilarities of every canonical triple against the query.

    Returns flat arrays (u, v, w, ad) in lexicographic triple order.
    """
    a = store.items
    m = store.size
    pv, pw = _pair_arrays(m)
    pair_sum = a[pv] + a[pw]                      # P x d
    head = a + q[None, :]                         # m x d
    ads = np.abs(head[:, None, :] - pair_sum[None, :, :]).sum(axis=2)
    u = np.repeat(np.arange(m), len(pv))
    return u, np.tile(pv, m), np.tile(pw, m), ads.ravel().astype(np.float64)


def _take_k(u, v, w, ads, k: int, include_ties: bool,
            evaluations: int) -> SearchResult:
    order = np.lexsort((w, v, u, ads))
    if include_ties and k < len(order):
        kth = ads[order[k - 1]]
        limit = int(np.searchsorted(ads[order], kth, side="right"))
        order = order[:max(k, limit)]
    else:
        order = order[:k]
    entries = tuple(((int(u[i]), int(v[i]), int(w[i])), float(ads[i]))
                    for i in order)
    return SearchResult(entries=entries, ad_evaluations=evaluations)


def brute_force_search(store: ItemStore, y, k: int,
                       include_ties: bool = False) -> SearchResult:
    """Exact k-best triples by full enumeration of canonical triples."""
    if k < 1:
        raise ValidationError("k must be positive")
    q = _check_query(store, y)
    u, v, w, ads = _canonical_ads(store, q)
    return _take_k(u, v, w, ads, k, include_ties, evaluations=len(ads))


def _couple_distance_rows(store: ItemStore, z: int, t: int) -> np.ndarray:
    """AD(z, t, x, y) for all couples (x, y), flattened x * m + y."""
    a = store.items
    base = a[z] - a[t]
    diff = base[None, None, :] + (a[None, :, :] - a[:, None, :])
    return np.abs(diff).sum(axis=2).reshape(-1).astype(np.float64)


def select_base_prototypes(store: ItemStore, n: int,
                           seed: int) -> BasePrototypes:
    """Greedy max-min selection of pivot couples.

    The first pivot is drawn uniformly from the m^2 couples with the
    given seed; each next pivot maximizes its minimal couple distance
    to the pivots already chosen, breaking ties by lexicographic couple
    order.
    """
    m = store.size
    if not 1 <= n <= m * m:
        raise InvalidN(f"n must be in [1, {m * m}], got {n}")
    rng = np.random.default_rng(seed)
    first = int(rng.integers(m * m))
    chosen = [first]
    min_dist = _couple_distance_rows(store, first // m, first % m)
    while len(chosen) < n:
        min_dist[chosen] = -1.0
        nxt = int(np.argmax(min_dist))
        chosen.append(nxt)
        rows = _couple_distance_rows(store, nxt // m, nxt % m)
        np.minimum(min_dist, rows, out=min_dist)
    return BasePrototypes(
        pivots=tuple((c // m, c % m) for c in chosen), seed=seed)


def build_index(store: ItemStore, pivots: BasePrototypes) -> CoupleIndex:
    """Precompute the pivot-to-couple distance matrix (n_pivots x m^2)."""
    m = store.size
    pre = np.empty((len(pivots.pivots), m * m), dtype=np.float64)
    for p, (z, t) in enumerate(pivots.pivots):
        if not (0 <= z < m and 0 <= t < m):
            raise ValidationError(f"pivot ({z}, {t}) out of range")
        pre[p] = _couple_distance_rows(store, z, t)
    return CoupleIndex(store=store, pivots=pivots, pre=pre)


class _TripleMemo:
    """Exact triple dissimilarities computed so far, keyed canonically.

    Each distinct canonical triple is evaluated at most once; every new
    value feeds the running k-best pool, whose k-th entry is the
    pruning threshold ``delta``.
    """

    def __init__(self, store: ItemStore, q: np.ndarray, k: int):
        self.items = store.items
        self.q = q
        self.k = k
        self.values: dict = {}
        self.evaluations = 0
        self._best: List[float] = []
        self.delta = np.inf

    def get(self, u: int, v: int, w: int) -> float:
        if v > w:
            v, w = w, v
        key = (u, v, w)
        val = self.values.get(key)
        if val is None:
            a = self.items
            val = float(np.abs(a[u] + self.q - a[v] - a[w]).sum())
            self.values[key] = val
            self.evaluations += 1
            bisect.insort(self._best, val)
            if len(self._best) > self.k:
                self._best.pop()
            if len(self._best) == self.k:
                self.delta = self._best[-1]
        return val


def fadana_search(index: CoupleIndex, y, k: int,
                  include_ties: bool = False,
                  debug_check: bool = False) -> SearchResult:
    """Pivot-pruned exact search for the k least-dissimilar triples.

    For each store item x_i the canonical candidate couples (u, v) with
    v <= i are either eliminated by the pivot lower bound
    max_p |pre[p][(u, v)] - AD(z_p, t_p, x_i, y)| or evaluated exactly.
    The pruning threshold is the current k-th best value over the whole
    query and is never reset between items; elimination is strict, so
    ties at the threshold always survive.  On vector domains the result
    matches :func:`brute_force_search` entry for entry.

    ``debug_check`` re-derives every elimination decision against the
    exact dissimilarity (slow; for tests).
    """
    if k < 1:
        raise ValidationError("k must be positive")
    store = index.store
    q = _check_query(store, y)
    m = store.size
    n_pivots = len(index.pivots.pivots)
    if index.pre.shape != (n_pivots, m * m):
        raise ValidationError("index pre matrix has the wrong shape")

    memo = _TripleMemo(store, q, k)

    for i in range(m):
        # canonical candidates for x_i: couples (u, v), v <= i
        cand_u = np.repeat(np.arange(m), i + 1)
        cand_v = np.tile(np.arange(i + 1), m)
        flat = cand_u * m + cand_v
        bound = np.zeros(len(flat), dtype=np.float64)
        surrogate = np.zeros(len(flat), dtype=np.float64)
        alive = np.ones(len(flat), dtype=bool)

        def eliminate() -> None:
            if not np.isfinite(memo.delta):
                return
            cut = alive & (bound > memo.delta)
            if debug_check and cut.any():
                threshold = memo.delta
                for j in np.nonzero(cut)[0]:
                    exact = memo.get(int(cand_u[j]), int(cand_v[j]), i)
                    assert exact >= threshold - 1e-9, (
                        "eliminated a candidate better than the threshold")
            alive[cut] = False

        for p in range(n_pivots):
            if not alive.any():
                break
            z, t = index.pivots.pivots[p]
            dist_p = memo.get(z, t, i)
            gaps = np.abs(index.pre[p][flat] - dist_p)
            np.maximum(bound, gaps, out=bound)
            surrogate += gaps
            if t <= i:
                # the pivot couple is itself a candidate here, and its
                # exact value was just computed
                alive[z * (i + 1) + t] = False
            eliminate()

        while alive.any():
            live = np.nonzero(alive)[0]
            j = live[int(np.argmin(surrogate[live]))]
            memo.get(int(cand_u[j]), int(cand_v[j]), i)
            alive[j] = False
            eliminate()

    # assemble the exact result from everything evaluated
    tu, tv, tw, ta = [], [], [], []
    for (u, v, w), val in memo.values.items():
        tu.append(u)
        tv.append(v)
        tw.append(w)
        ta.append(val)
    return _take_k(np.array(tu), np.array(tv), np.array(tw),
                   np.array(ta, dtype=np.float64), k, include_ties,
                   evaluations=memo.evaluations)


# -- pre-matrix disk cache --------------------------------------------------

def save_pre_matrix(index: CoupleIndex, path: Union[str, Path]) -> None:
    """Write the pivot distance matrix with a header and checksum.

    Layout: magic "FDNA", version u32, n_pivots u64, m u64, dim u64,
    crc32-of-payload u64, then the row-major float64 little-endian
    matrix.
    """
    data = np.ascontiguousarray(index.pre, dtype="<f8").tobytes()
    header = _CACHE_MAGIC
    header += np.uint32(_CACHE_VERSION).tobytes()
    header += np.uint64(index.pre.shape[0]).tobytes()
    header += np.uint64(index.store.size).tobytes()
    header += np.uint64(index.store.dim).tobytes()
    header += np.uint64(zlib.crc32(data)).tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(data)


def load_pre_matrix(path: Union[str, Path]) -> Tuple[int, int, int, np.ndarray]:
    """Read a cached pivot distance matrix; returns (n, m, dim, pre)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 40 or blob[:4] != _CACHE_MAGIC:
        raise CacheError("not a pre-matrix cache file")
    version = int(np.frombuffer(blob, "<u4", count=1, offset=4)[0])
    if version != _CACHE_VERSION:
        raise CacheError(f"unsupported cache version {version}")
    n, m, dim, crc = (int(x) for x in np.frombuffer(blob, "<u8", count=4, offset=8))
    data = blob[40:]
    if len(data) != n * m * m * 8:
        raise CacheError("cache payload has the wrong size")
    if zlib.crc32(data) != crc:
        raise CacheError("cache checksum mismatch")
    pre = np.frombuffer(data, "<f8").reshape(n, m * m).copy()
    return n, m, dim, pre


def load_index(path: Union[str, Path], store: ItemStore,
               pivots: BasePrototypes) -> CoupleIndex:
    """Rebuild a :class:`CoupleIndex` from a cache written for the same
    store and pivot list."""
    n, m, dim, pre = load_pre_matrix(path)
    if (n, m, dim) != (len(pivots.pivots), store.size, store.dim):
        raise CacheError("cache shape does not match store and pivots")
    return CoupleIndex(store=store, pivots=pivots, pre=pre)
