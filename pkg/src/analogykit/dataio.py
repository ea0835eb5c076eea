"""Dataset ingestion: CSV parsing, schema inference, binary encoding.

Nominal attributes are binarized one-bit-per-value; two-valued
attributes take a single bit; a column that ever shows the missing
token gets one extra indicator bit (value bits all zero, indicator
set).  Encoding is deterministic: values map to bits in sorted order.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .classify import LabeledDataset
from .errors import (EmptyTable, InvalidSize, MissingClassColumn, RaggedRow,
                     UnknownValue, ValidationError)

__all__ = [
    "RawTable",
    "ColumnSchema",
    "FeatureSchema",
    "EncodingMap",
    "parse_csv",
    "infer_schema",
    "load_schema",
    "build_encoding_map",
    "encode",
    "encode_feature_row",
    "decode_row",
    "stratified_split",
]

DEFAULT_MISSING = "?"


@dataclass(frozen=True)
class RawTable:
    """Rectangular table of string cells with a designated class column."""
    columns: Tuple[str, ...]
    rows: Tuple[Tuple[str, ...], ...]
    class_column: int

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column_values(self, index: int) -> List[str]:
        return [r[index] for r in self.rows]


@dataclass(frozen=True)
class ColumnSchema:
    name: str
    kind: str                      # "binary" | "nominal" | "class"
    values: Tuple[str, ...] = ()
    has_missing: bool = False


@dataclass(frozen=True)
class FeatureSchema:
    columns: Tuple[ColumnSchema, ...]
    missing_token: str = DEFAULT_MISSING

    def __post_init__(self):
        kinds = [c.kind for c in self.columns]
        if kinds.count("class") != 1:
            raise ValidationError("schema needs exactly one class column")
        for col in self.columns:
            if col.kind == "nominal" and not col.values:
                raise ValidationError(
                    f"nominal column {col.name!r} has an empty value list")

    @property
    def class_index(self) -> int:
        return next(i for i, c in enumerate(self.columns) if c.kind == "class")


def parse_csv(path: Union[str, Path], *, header: bool = True,
              class_column: Union[str, int] = -1,
              delimiter: str = ",",
              missing_token: str = DEFAULT_MISSING) -> RawTable:
    """Read a CSV file into a :class:`RawTable`.

    Cells are stripped of surrounding whitespace; missing tokens are
    kept verbatim.  ``class_column`` selects by header name or by
    position (negative indices count from the right).
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        records = [[cell.strip() for cell in row]
                   for row in reader if row]
    if not records:
        raise EmptyTable(f"{path}: no rows")
    if header:
        columns = tuple(records[0])
        body = records[1:]
    else:
        columns = tuple(f"c{i}" for i in range(len(records[0])))
        body = records
    width = len(columns)
    for lineno, row in enumerate(body, start=2 if header else 1):
        if len(row) != width:
            raise RaggedRow(lineno, width, len(row))
    if isinstance(class_column, str):
        if class_column not in columns:
            raise MissingClassColumn(
                f"no column named {class_column!r} in {list(columns)}")
        class_index = columns.index(class_column)
    else:
        if not -width <= class_column < width:
            raise MissingClassColumn(
                f"class column index {class_column} out of range")
        class_index = class_column % width
    return RawTable(columns=columns,
                    rows=tuple(tuple(r) for r in body),
                    class_column=class_index)


def infer_schema(table: RawTable,
                 missing_token: str = DEFAULT_MISSING) -> FeatureSchema:
    """Derive column kinds from observed values.

    Exactly two distinct non-missing values make a column binary; any
    other count makes it nominal with a sorted value list.
    """
    if table.n_rows == 0:
        raise EmptyTable("cannot infer a schema from an empty table")
    cols = []
    for i, name in enumerate(table.columns):
        raw = table.column_values(i)
        observed = sorted(set(raw) - {missing_token})
        has_missing = any(v == missing_token for v in raw)
        if i == table.class_column:
            if not observed:
                raise ValidationError(f"class column {name!r} has no values")
            cols.append(ColumnSchema(name=name, kind="class",
                                     values=tuple(observed)))
            continue
        if not observed:
            raise ValidationError(
                f"column {name!r} holds only missing values")
        kind = "binary" if len(observed) == 2 else "nominal"
        cols.append(ColumnSchema(name=name, kind=kind,
                                 values=tuple(observed),
                                 has_missing=has_missing))
    return FeatureSchema(columns=tuple(cols), missing_token=missing_token)


def load_schema(path: Union[str, Path]) -> FeatureSchema:
    """Read an explicit schema sidecar.

    Shape: {"columns": [{"name":…, "kind":"binary"|"nominal",
    "values":[…], "missing": bool}…], "class": name,
    "missing_token": "?"}.
    """
    with open(path, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    try:
        class_name = spec["class"]
        raw_cols = spec["columns"]
    except KeyError as exc:
        raise ValidationError(f"schema is missing {exc.args[0]!r}") from None
    cols = []
    for rc in raw_cols:
        name = rc["name"]
        if name == class_name:
            cols.append(ColumnSchema(name=name, kind="class",
                                     values=tuple(rc.get("values", ()))))
        else:
            cols.append(ColumnSchema(
                name=name, kind=rc["kind"],
                values=tuple(rc.get("values", ())),
                has_missing=bool(rc.get("missing", False))))
    return FeatureSchema(columns=tuple(cols),
                         missing_token=spec.get("missing_token",
                                                DEFAULT_MISSING))


@dataclass(frozen=True)
class EncodingMap:
    """Deterministic (column, value) -> bit layout derived from a schema."""
    schema: FeatureSchema
    offsets: Tuple[int, ...]             # first bit of each feature column
    missing_bits: Tuple[Optional[int], ...]
    dim: int
    classes: Tuple[str, ...]

    def spans(self) -> List[Tuple[str, int, int]]:
        """(column name, first bit, width) for every feature column."""
        out = []
        cols = [c for c in self.schema.columns if c.kind != "class"]
        for col, off, miss in zip(cols, self.offsets, self.missing_bits):
            width = 1 if col.kind == "binary" else len(col.values)
            if miss is not None:
                width += 1
            out.append((col.name, off, width))
        return out


def build_encoding_map(schema: FeatureSchema) -> EncodingMap:
    offsets = []
    missing_bits: List[Optional[int]] = []
    dim = 0
    classes: Tuple[str, ...] = ()
    for col in schema.columns:
        if col.kind == "class":
            classes = col.values
            continue
        offsets.append(dim)
        if col.kind == "binary":
            dim += 1
        elif col.kind == "nominal":
            dim += len(col.values)
        else:
            raise ValidationError(f"unknown column kind {col.kind!r}")
        if col.has_missing:
            missing_bits.append(dim)
            dim += 1
        else:
            missing_bits.append(None)
    if not classes:
        raise ValidationError("schema class column has no values")
    return EncodingMap(schema=schema, offsets=tuple(offsets),
                       missing_bits=tuple(missing_bits), dim=dim,
                       classes=classes)


def encode_feature_row(schema: FeatureSchema, mapping: EncodingMap,
                       cells: Sequence[str], strict: bool = True) -> np.ndarray:
    """Binarize one row of feature cells (class column excluded).

    Cells follow the schema's feature-column order.  Unknown values
    raise :class:`UnknownValue` in strict mode; in lenient mode they
    fall back to the missing encoding (indicator bit if the column has
    one, otherwise all-zero value bits).
    """
    feature_cols = [c for c in schema.columns if c.kind != "class"]
    if len(cells) != len(feature_cols):
        raise ValidationError(
            f"expected {len(feature_cols)} feature cells, got {len(cells)}")
    bits = np.zeros(mapping.dim, dtype=np.int8)
    for col, cell, off, miss in zip(feature_cols, cells, mapping.offsets,
                                    mapping.missing_bits):
        cell = cell.strip()
        if cell == schema.missing_token:
            if miss is None:
                if strict:
                    raise UnknownValue(col.name, cell)
            else:
                bits[miss] = 1
            continue
        if cell not in col.values:
            if strict:
                raise UnknownValue(col.name, cell)
            if miss is not None:
                bits[miss] = 1
            continue
        if col.kind == "binary":
            bits[off] = col.values.index(cell)
        else:
            bits[off + col.values.index(cell)] = 1
    return bits


def encode(table: RawTable, schema: FeatureSchema,
           mapping: Optional[EncodingMap] = None,
           strict: bool = True) -> LabeledDataset:
    """Binarize a table under a schema.

    Pass the training table's ``mapping`` when encoding a test table so
    both share one bit layout.
    """
    if mapping is None:
        mapping = build_encoding_map(schema)
    if len(table.columns) != len(schema.columns):
        raise ValidationError("table and schema column counts differ")
    class_idx = schema.class_index
    feature_idx = [i for i in range(len(schema.columns)) if i != class_idx]
    items = np.zeros((table.n_rows, mapping.dim), dtype=np.int8)
    labels = []
    for r, row in enumerate(table.rows):
        label = row[class_idx]
        if label not in mapping.classes:
            raise UnknownValue(schema.columns[class_idx].name, label)
        labels.append(label)
        items[r] = encode_feature_row(
            schema, mapping, [row[i] for i in feature_idx], strict=strict)
    return LabeledDataset.from_labels(items, labels, classes=mapping.classes)


def decode_row(mapping: EncodingMap, bits: Sequence[int]) -> Dict[str, str]:
    """Invert :func:`encode` for one feature vector (values only).

    Missing cells come back as the schema's missing token.  Used by the
    round-trip tests.
    """
    bits = np.asarray(bits)
    out: Dict[str, str] = {}
    cols = [c for c in mapping.schema.columns if c.kind != "class"]
    for col, off, miss in zip(cols, mapping.offsets, mapping.missing_bits):
        if miss is not None and bits[miss]:
            out[col.name] = mapping.schema.missing_token
            continue
        if col.kind == "binary":
            out[col.name] = col.values[int(bits[off])]
        else:
            width = len(col.values)
            hot = np.nonzero(bits[off:off + width])[0]
            if len(hot) != 1:
                raise ValidationError(
                    f"column {col.name!r}: invalid one-per-value block")
            out[col.name] = col.values[int(hot[0])]
    return out


def stratified_split(ds: LabeledDataset, train_size: int,
                     seed: int) -> Tuple[LabeledDataset, LabeledDataset]:
    """Deterministic class-proportional train/test split.

    Per-class train counts follow largest-remainder rounding of the
    exact proportions, so every class lands within one item of its
    share.
    """
    m = ds.size
    if not 1 <= train_size <= m:
        raise InvalidSize(f"train_size must be in [1, {m}]")
    rng = np.random.default_rng(seed)
    counts = np.bincount(ds.labels, minlength=ds.n_classes)
    exact = counts * (train_size / m)
    base = np.floor(exact).astype(np.int64)
    shortfall = train_size - int(base.sum())
    order = np.argsort(-(exact - base), kind="stable")
    base[order[:shortfall]] += 1
    train_idx = []
    for c in range(ds.n_classes):
        pool = np.nonzero(ds.labels == c)[0]
        picked = rng.permutation(pool)[:base[c]]
        train_idx.extend(int(i) for i in picked)
    train_idx = np.sort(np.array(train_idx, dtype=np.int64))
    mask = np.zeros(m, dtype=bool)
    mask[train_idx] = True
    train = LabeledDataset(items=ds.items[mask], labels=ds.labels[mask],
                           classes=ds.classes)
    test = LabeledDataset(items=ds.items[~mask], labels=ds.labels[~mask],
                          classes=ds.classes)
    return train, test
