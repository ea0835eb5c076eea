"""Deterministic reconstruction of the rule-defined UCI benchmarks.

The MONK's problems and Balance-Scale are synthetic: their full
instance spaces and labeling rules are public, so the complete labeled
universes regenerate exactly.

* MONK attributes take (3, 3, 2, 3, 4, 2) values; the official test
  sets are the whole 432-row universe labeled by each problem's rule
  (problem 3's test set is noise-free).
* Balance-Scale is the full 625-row universe over four 5-valued
  attributes, labeled by comparing the two weight*distance products.

The official MONK *training* subsets were arbitrary draws by the
original distributors and are not redistributable here; this module
substitutes seeded stratified draws of the official sizes (124, 169,
122), with the documented 5% label noise applied to problem 3's
training half.
"""

from __future__ import annotations

import csv
from itertools import product
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from .classify import LabeledDataset
from .dataio import RawTable, build_encoding_map, encode, infer_schema

__all__ = [
    "MONK_SIZES",
    "MONK_TRAIN_SIZES",
    "monk_universe",
    "monk_split",
    "balance_scale_universe",
    "random_binary_table",
    "write_csv",
]

MONK_SIZES = (3, 3, 2, 3, 4, 2)
MONK_TRAIN_SIZES = {1: 124, 2: 169, 3: 122}
MONK_COLUMNS = ("class", "a1", "a2", "a3", "a4", "a5", "a6")


def _monk_label(problem: int, row: Sequence[int]) -> int:
    a1, a2, a3, a4, a5, a6 = row
    if problem == 1:
        return int(a1 == a2 or a5 == 1)
    if problem == 2:
        return int(sum(v == 1 for v in row) == 2)
    if problem == 3:
        return int((a5 == 3 and a4 == 1) or (a5 != 4 and a2 != 3))
    raise ValueError(f"no MONK problem {problem}")


def monk_universe(problem: int) -> RawTable:
    """All 432 instances of a MONK problem with rule labels."""
    rows = []
    for combo in product(*[range(1, s + 1) for s in MONK_SIZES]):
        label = _monk_label(problem, combo)
        rows.append((str(label),) + tuple(str(v) for v in combo))
    return RawTable(columns=MONK_COLUMNS, rows=tuple(rows), class_column=0)


def _stratified_rows(rows: Sequence[Tuple[str, ...]], class_idx: int,
                     n: int, rng: np.random.Generator) -> List[int]:
    labels = [r[class_idx] for r in rows]
    classes = sorted(set(labels))
    counts = np.array([labels.count(c) for c in classes], dtype=np.int64)
    exact = counts * (n / len(rows))
    base = np.floor(exact).astype(np.int64)
    order = np.argsort(-(exact - base), kind="stable")
    base[order[:n - int(base.sum())]] += 1
    picked: List[int] = []
    for c, cnt in zip(classes, base):
        pool = np.array([i for i, l in enumerate(labels) if l == c])
        picked.extend(int(i) for i in rng.permutation(pool)[:cnt])
    return sorted(picked)


def monk_split(problem: int, seed: int,
               noise: float = 0.05) -> Tuple[RawTable, RawTable]:
    """(train, test) tables for a MONK problem.

    Test is the full labeled universe; train is a seeded stratified
    subset of the official size.  Problem 3 additionally flips the
    labels of a seeded ``noise`` fraction of its training rows,
    mirroring the documented corruption of the official file.
    """
    universe = monk_universe(problem)
    rng = np.random.default_rng(seed)
    idx = _stratified_rows(universe.rows, 0, MONK_TRAIN_SIZES[problem], rng)
    train_rows = [list(universe.rows[i]) for i in idx]
    if problem == 3 and noise > 0:
        flips = rng.choice(len(train_rows),
                           int(round(noise * len(train_rows))),
                           replace=False)
        for f in flips:
            train_rows[f][0] = "1" if train_rows[f][0] == "0" else "0"
    train = RawTable(columns=universe.columns,
                     rows=tuple(tuple(r) for r in train_rows),
                     class_column=0)
    return train, universe


def balance_scale_universe() -> RawTable:
    """All 625 instances: class L/B/R from left vs right weight*distance."""
    rows = []
    for lw, ld, rw, rd in product(range(1, 6), repeat=4):
        torque = lw * ld - rw * rd
        cls = "B" if torque == 0 else ("L" if torque > 0 else "R")
        rows.append((cls, str(lw), str(ld), str(rw), str(rd)))
    return RawTable(
        columns=("class", "left_weight", "left_distance",
                 "right_weight", "right_distance"),
        rows=tuple(rows), class_column=0)


def random_binary_table(m: int, dim: int, n_classes: int,
                        seed: int) -> LabeledDataset:
    """Seeded random dataset of raw binary attributes (for benchmarks)."""
    rng = np.random.default_rng(seed)
    items = rng.integers(0, 2, size=(m, dim), dtype=np.int64)
    labels = rng.integers(0, n_classes, size=m)
    return LabeledDataset.from_labels(
        items, [f"c{int(l)}" for l in labels],
        classes=tuple(f"c{i}" for i in range(n_classes)))


def write_csv(table: RawTable, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(table.columns)
        writer.writerows(table.rows)


def encode_pair(train: RawTable, test: RawTable):
    """Encode train and test under one schema and bit layout.

    Attribute domains are collected across both tables: value lists are
    dataset definitions, not learned statistics, and a small training
    draw may miss rare values outright.
    """
    if train.columns != test.columns or train.class_column != test.class_column:
        raise ValueError("train and test tables must share their layout")
    union = RawTable(columns=train.columns, rows=train.rows + test.rows,
                     class_column=train.class_column)
    schema = infer_schema(union)
    mapping = build_encoding_map(schema)
    return encode(train, schema, mapping), encode(test, schema, mapping)
