"""Lazy classification by the k least-dissimilar triple rule.

A query x is labeled by ranking every class-solvable canonical triple
(a, b, c) of the training set by its dissimilarity to x, extending the
first k entries to cover all ties with the k-th value, solving each
triple's class equation, and taking the majority vote.

The weighted variant multiplies each attribute's contribution by a
learned weight that depends on the class of the triple's first element
and on the solved class.  Learned weights are rationals with
denominator 6 * m^4; ranking uses the exact integer numerators so that
ties are decided exactly and identically across implementations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from . import _clf
from .errors import (DimensionMismatch, UnknownClass, ValidationError)
from .search import ItemStore, build_index, fadana_search, select_base_prototypes

__all__ = [
    "LabeledDataset",
    "WeightMatrix",
    "DecisionConfig",
    "Decision",
    "EvaluationReport",
    "solve_class_equation",
    "learn_weight_matrix",
    "weighted_ad",
    "rank_triples",
    "decide",
    "evaluate",
]

ClassId = Hashable


def solve_class_equation(ci: ClassId, cj: ClassId,
                         ck: ClassId) -> Optional[ClassId]:
    """Solve ci : cj :: ck : x on nominal class labels.

    Returns ck when ci == cj, cj when ci == ck, and None otherwise
    (the two rules agree when all three coincide).
    """
    if ci == cj:
        return ck
    if ci == ck:
        return cj
    return None


@dataclass(frozen=True)
class LabeledDataset:
    """Binary-encoded items with class labels.

    ``labels`` holds integer codes into ``classes``; use
    :meth:`from_labels` to build from raw identifiers.
    """
    items: np.ndarray
    labels: np.ndarray
    classes: Tuple[ClassId, ...]

    def __post_init__(self):
        items = np.ascontiguousarray(np.asarray(self.items, dtype=np.int8))
        labels = np.asarray(self.labels, dtype=np.int64)
        if items.ndim != 2:
            raise ValidationError("items must be a 2-D array")
        if labels.shape != (items.shape[0],):
            raise ValidationError("need exactly one label per item")
        if not np.isin(items, (0, 1)).all():
            raise ValidationError("items must be 0/1 vectors")
        if len(set(self.classes)) != len(self.classes):
            raise ValidationError("duplicate class identifiers")
        if labels.size and (labels.min() < 0 or labels.max() >= len(self.classes)):
            raise ValidationError("label code out of range")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "classes", tuple(self.classes))

    @classmethod
    def from_labels(cls, items, raw_labels: Sequence[ClassId],
                    classes: Optional[Sequence[ClassId]] = None) -> "LabeledDataset":
        if classes is None:
            classes = sorted(set(raw_labels), key=str)
        classes = tuple(classes)
        code = {c: i for i, c in enumerate(classes)}
        try:
            labels = np.array([code[c] for c in raw_labels], dtype=np.int64)
        except KeyError as exc:
            raise UnknownClass(f"label {exc.args[0]!r} not in classes") from None
        return cls(items=np.asarray(items), labels=labels, classes=classes)

    @property
    def size(self) -> int:
        return self.items.shape[0]

    @property
    def dim(self) -> int:
        return self.items.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def class_code(self, identifier: ClassId) -> int:
        try:
            return self.classes.index(identifier)
        except ValueError:
            raise UnknownClass(f"unknown class {identifier!r}") from None


@dataclass(frozen=True)
class WeightMatrix:
    """Per-attribute, per-class-pair weights.

    ``w[k, i, j]`` weights attribute k in a triple whose first element
    has class code i and whose class equation solves to code j.  When
    learned from data the weights are exact rationals
    ``numerators / scale`` with scale 6 * m^4.
    """
    w: np.ndarray
    classes: Tuple[ClassId, ...]
    numerators: Optional[np.ndarray] = None
    scale: float = 1.0

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if w.ndim != 3 or w.shape[1] != w.shape[2]:
            raise ValidationError("weight matrix must have shape (d, C, C)")
        if (w < 0).any():
            raise ValidationError("weights must be non-negative")
        object.__setattr__(self, "w", w)

    @property
    def dim(self) -> int:
        return self.w.shape[0]

    @property
    def n_classes(self) -> int:
        return self.w.shape[1]


def learn_weight_matrix(ds: LabeledDataset) -> WeightMatrix:
    """Estimate attribute weights from per-class value counts.

    For attribute k and class pair (i, j), with n0/n1 counting items of
    a class holding bit value 0/1:

        w = ((n0i^2 + n1i^2)(n0j^2 + n1j^2) + 2 n0i n0j n1i n1j) / (6 m^4)
    """
    if ds.size < 1:
        raise ValidationError("cannot learn weights from an empty dataset")
    d, C, m = ds.dim, ds.n_classes, ds.size
    n1 = np.zeros((d, C), dtype=np.int64)
    counts = np.zeros(C, dtype=np.int64)
    for c in range(C):
        sub = ds.items[ds.labels == c]
        counts[c] = sub.shape[0]
        if sub.size:
            n1[:, c] = sub.sum(axis=0)
    n0 = counts[None, :] - n1
    sq = n0.astype(np.int64) ** 2 + n1.astype(np.int64) ** 2
    num = (sq[:, :, None] * sq[:, None, :]
           + 2 * (n0[:, :, None] * n0[:, None, :]
                  * n1[:, :, None] * n1[:, None, :]))
    scale = 6.0 * float(m) ** 4
    return WeightMatrix(w=num / scale, classes=ds.classes,
                        numerators=np.ascontiguousarray(
                            num.transpose(1, 2, 0)),
                        scale=scale)


def _class_pair_codes(w: WeightMatrix, ci: ClassId, cj: ClassId) -> Tuple[int, int]:
    def code(c):
        if c in w.classes:
            return w.classes.index(c)
        if isinstance(c, (int, np.integer)) and 0 <= c < w.n_classes:
            return int(c)
        raise UnknownClass(f"unknown class {c!r}")
    return code(ci), code(cj)


def weighted_ad(a, b, c, x, w: WeightMatrix, ci: ClassId, cj: ClassId) -> float:
    """Weighted dissimilarity sum_k w[k, ci, cj] * |a_k + x_k - b_k - c_k|."""
    arrays = [np.asarray(t, dtype=np.int64).ravel() for t in (a, b, c, x)]
    dims = {t.shape[0] for t in arrays}
    if len(dims) != 1:
        raise DimensionMismatch("operand dimensions differ")
    if arrays[0].shape[0] != w.dim:
        raise DimensionMismatch("weight matrix dimension mismatch")
    i, j = _class_pair_codes(w, ci, cj)
    bits = np.abs(arrays[0] + arrays[3] - arrays[1] - arrays[2])
    return float(bits @ w.w[:, i, j])


@dataclass(frozen=True)
class DecisionConfig:
    """Knobs of the decision rule."""
    k: int = 100
    weighted: bool = False
    search_mode: str = "exhaustive"        # or "fadana"
    base_fraction: float = 0.15            # pivot couples per store item
    tie_policy: str = "reject"             # or "fallback_min_ad"
    pivot_seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("k must be positive")
        if self.search_mode not in ("exhaustive", "fadana"):
            raise ValidationError(f"unknown search mode {self.search_mode!r}")
        if self.tie_policy not in ("reject", "fallback_min_ad"):
            raise ValidationError(f"unknown tie policy {self.tie_policy!r}")
        if self.search_mode == "fadana":
            if self.weighted:
                raise ValidationError(
                    "weighted ranking requires exhaustive search: per-class "
                    "weights break the shared metric that pruning relies on")
            if not 0 < self.base_fraction <= 1:
                raise ValidationError("base_fraction must be in (0, 1]")


@dataclass(frozen=True)
class Decision:
    """Outcome of classifying one query."""
    label: Optional[ClassId]               # None means rejected
    k_prime: int
    votes: Dict[ClassId, int]
    support: Tuple[Tuple[Tuple[int, int, int], float, ClassId], ...]

    @property
    def rejected(self) -> bool:
        return self.label is None


def _exact_ad_fn(ds: LabeledDataset, x: np.ndarray,
                 weights: Optional[WeightMatrix]):
    items = ds.items.astype(np.int64)
    labels = ds.labels
    if weights is None:
        def ad(u, v, w):
            return float(np.abs(items[u] + x - items[v] - items[w]).sum())
        return ad
    if weights.numerators is not None:
        nums = weights.numerators
        scale = weights.scale

        def ad(u, v, w):
            ci = labels[u]
            cj = labels[w] if labels[u] == labels[v] else labels[v]
            bits = np.abs(items[u] + x - items[v] - items[w])
            return float(bits @ nums[ci, cj]) / scale
        return ad
    wmat = weights.w

    def ad(u, v, w):
        ci = labels[u]
        cj = labels[w] if labels[u] == labels[v] else labels[v]
        bits = np.abs(items[u] + x - items[v] - items[w])
        return float(bits @ wmat[:, ci, cj])
    return ad


def rank_triples(ds: LabeledDataset, x, cfg: DecisionConfig,
                 weights: Optional[WeightMatrix] = None,
                 ad_fn: Optional[Callable[[int, int, int], float]] = None,
                 ) -> List[Tuple[Tuple[int, int, int], float, ClassId]]:
    """Solvable canonical triples sorted by ascending dissimilarity.

    Triples are deduplicated by requiring index(v) <= index(w) and kept
    only when their class equation has a solution.  Ties keep
    lexicographic triple order.  ``ad_fn`` overrides the dissimilarity
    (used to replay fixed tables in tests); otherwise the configured
    plain or weighted dissimilarity is evaluated.
    """
    q = np.asarray(x, dtype=np.int64).ravel()
    if q.shape[0] != ds.dim:
        raise DimensionMismatch(f"query dim {q.shape[0]} != dataset dim {ds.dim}")
    if cfg.weighted and weights is None and ad_fn is None:
        weights = learn_weight_matrix(ds)
    if cfg.search_mode == "fadana" and ad_fn is None:
        ranked, _ = _rank_via_fadana(ds, q, cfg)
        return ranked
    ad = ad_fn if ad_fn is not None else _exact_ad_fn(
        ds, q, weights if cfg.weighted else None)
    m = ds.size
    labels = ds.labels
    out = []
    for u in range(m):
        cu = labels[u]
        for v in range(m):
            for w in range(v, m):
                sol = solve_class_equation(cu, labels[v], labels[w])
                if sol is None:
                    continue
                out.append(((u, v, w), float(ad(u, v, w)),
                            ds.classes[sol]))
    out.sort(key=lambda e: (e[1], e[0]))
    return out


def _rank_via_fadana(ds: LabeledDataset, q: np.ndarray, cfg: DecisionConfig):
    """Top-of-the-ranking retrieval through the pivot-pruned search.

    Grows the requested depth until at least k solvable triples are
    present; ties with the deepest returned value are always included,
    so the caller sees every entry needed for its vote window.
    """
    store = ItemStore(ds.items)
    m = store.size
    n_pivots = max(1, round(cfg.base_fraction * m))
    pivots = select_base_prototypes(store, n_pivots, cfg.pivot_seed)
    index = build_index(store, pivots)
    labels = ds.labels
    canonical_total = m * m * (m + 1) // 2
    k_search = cfg.k
    while True:
        res = fadana_search(index, q, k_search, include_ties=True)
        out = []
        for (u, v, w), val in res.entries:
            sol = solve_class_equation(labels[u], labels[v], labels[w])
            if sol is None:
                continue
            out.append(((u, v, w), val, ds.classes[sol]))
        if len(out) >= cfg.k or len(res.entries) >= canonical_total:
            out.sort(key=lambda e: (e[1], e[0]))
            return out, res.ad_evaluations
        k_search = min(canonical_total, k_search * 2)


def decide(ranked: Sequence[Tuple[Tuple[int, int, int], float, ClassId]],
           k: int, tie_policy: str = "reject",
           class_order: Sequence[ClassId] = ()) -> Decision:
    """Majority vote over the tie-extended head of a ranking.

    The window covers the first k entries extended to every entry tied
    with the k-th value (all entries when fewer than k exist).  A tied
    vote yields a rejection under policy "reject", or falls back to the
    tied class with the smallest summed dissimilarity under
    "fallback_min_ad" (exact sum ties break by position in
    ``class_order``, by string order when none is given).
    """
    if k < 1:
        raise ValidationError("k must be positive")
    if tie_policy not in ("reject", "fallback_min_ad"):
        raise ValidationError(f"unknown tie policy {tie_policy!r}")
    if not ranked:
        return Decision(label=None, k_prime=0, votes={}, support=())
    kk = min(k, len(ranked))
    vk = ranked[kk - 1][1]
    k_prime = kk
    while k_prime < len(ranked) and ranked[k_prime][1] == vk:
        k_prime += 1
    window = ranked[:k_prime]
    votes: Dict[ClassId, int] = {}
    sums: Dict[ClassId, float] = {}
    for _, val, cls in window:
        votes[cls] = votes.get(cls, 0) + 1
        sums[cls] = sums.get(cls, 0.0) + val
    top = max(votes.values())
    winners = [c for c, n in votes.items() if n == top]
    if len(winners) == 1:
        label = winners[0]
    elif tie_policy == "reject":
        label = None
    else:
        order = list(class_order)

        def rank_of(c):
            return order.index(c) if c in order else len(order)

        label = min(winners, key=lambda c: (sums[c], rank_of(c), str(c)))
    return Decision(label=label, k_prime=k_prime, votes=votes,
                    support=tuple(window))


@dataclass
class EvaluationReport:
    """Aggregate outcome of classifying a test set."""
    total: int
    correct: int
    rejects: int
    accuracy: Optional[float]
    confusion: Dict[Tuple[ClassId, Optional[ClassId]], int]
    rows: List[Tuple[int, ClassId, Optional[ClassId], int, float]]
    mean_ad_evaluations: Optional[float] = None

    @property
    def undefined_accuracy(self) -> bool:
        return self.total == 0

    def per_class_recall(self) -> Dict[ClassId, Optional[float]]:
        seen: Dict[ClassId, int] = {}
        hit: Dict[ClassId, int] = {}
        for (true, pred), n in self.confusion.items():
            seen[true] = seen.get(true, 0) + n
            if pred == true:
                hit[true] = hit.get(true, 0) + n
        return {c: (hit.get(c, 0) / n if n else None)
                for c, n in seen.items()}


def evaluate(train: LabeledDataset, test: LabeledDataset,
             cfg: DecisionConfig) -> EvaluationReport:
    """Classify every test item against the training set.

    Rejections count as errors.  The exhaustive mode runs a compiled
    scan over all canonical solvable triples; the pruned mode ranks
    through the pivot search and also reports the mean number of
    on-line dissimilarity evaluations per query.
    """
    if train.dim != test.dim:
        raise DimensionMismatch("train and test dimensions differ")
    if train.classes != test.classes:
        raise ValidationError("train and test class sets differ")
    rows = []
    confusion: Dict[Tuple[ClassId, Optional[ClassId]], int] = {}
    correct = rejects = 0
    mean_evals = None

    if cfg.search_mode == "exhaustive":
        weights = learn_weight_matrix(train) if cfg.weighted else None
        preds, kprimes, topads = _clf.decide_block(
            train, test.items, cfg, weights)
        for idx in range(test.size):
            true_label = test.classes[test.labels[idx]]
            pred = preds[idx]
            label = train.classes[pred] if pred >= 0 else None
            rows.append((idx, true_label, label, int(kprimes[idx]),
                         float(topads[idx])))
            if label is None:
                rejects += 1
            if label == true_label:
                correct += 1
            confusion[(true_label, label)] = confusion.get(
                (true_label, label), 0) + 1
    else:
        evals = []
        for idx in range(test.size):
            ranked, n_evals = _rank_via_fadana(
                train, np.asarray(test.items[idx], dtype=np.int64), cfg)
            evals.append(n_evals)
            d = decide(ranked, cfg.k, cfg.tie_policy,
                       class_order=train.classes)
            true_label = test.classes[test.labels[idx]]
            top = ranked[0][1] if ranked else float("nan")
            rows.append((idx, true_label, d.label, d.k_prime, top))
            if d.label is None:
                rejects += 1
            if d.label == true_label:
                correct += 1
            confusion[(true_label, d.label)] = confusion.get(
                (true_label, d.label), 0) + 1
        mean_evals = float(np.mean(evals)) if evals else None

    total = test.size
    return EvaluationReport(
        total=total, correct=correct, rejects=rejects,
        accuracy=(correct / total) if total else None,
        confusion=confusion, rows=rows,
        mean_ad_evaluations=mean_evals)
