"""Alphabets for sequence analogies.

An :class:`Alphabet` carries a finite symbol set, a distinguished gap
symbol, and a 4-ary analogical dissimilarity over the gapped alphabet.
The dissimilarity is derived from per-symbol binary feature encodings
(sum of per-feature bit dissimilarities) unless an explicit override
entry applies.

Construction validates the constraints the sequence algorithms rely on:

* gap : gap :: a : a costs 0 for every symbol a;
* gap : a :: b : c costs strictly more than 0 for all symbols a, b, c;
* a column emitting a symbol against three gaps costs strictly more
  than 0 (so an optimal alignment never inserts free material);
* the table is invariant under swapping the two halves and under
  exchanging the middle terms, including every override image.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import UnknownSymbol, ValidationError

__all__ = ["Alphabet", "load_alphabet", "DEFAULT_GAP"]

DEFAULT_GAP = "-"

#: Index permutations under which a 4-ary AD must be invariant: the
#: closure of half-swap (u,v,w,x)->(w,x,u,v) and middle-exchange
#: (u,v,w,x)->(u,w,v,x).
_SYMMETRY_GROUP: Tuple[Tuple[int, int, int, int], ...] = ()


def _symmetry_group() -> Tuple[Tuple[int, int, int, int], ...]:
    global _SYMMETRY_GROUP
    if _SYMMETRY_GROUP:
        return _SYMMETRY_GROUP
    gens = [(2, 3, 0, 1), (0, 2, 1, 3)]
    seen = {(0, 1, 2, 3)}
    frontier = [(0, 1, 2, 3)]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = tuple(cur[i] for i in g)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    _SYMMETRY_GROUP = tuple(sorted(seen))
    return _SYMMETRY_GROUP


class Alphabet:
    """Symbol set plus gap with a validated 4-ary dissimilarity.

    Parameters
    ----------
    symbols:
        Ordered (name, features) pairs; names unique, features 0/1
        sequences of one shared length.
    gap_features:
        Feature vector of the gap symbol; all zeros by default.
    overrides:
        Optional ((s1, s2, s3, s4), cost) entries fixing the
        dissimilarity of specific 4-tuples (gap name allowed).  Each
        entry also fixes its seven symmetry images; conflicting
        assignments are rejected.
    gap:
        Display name of the gap symbol; must not be a symbol name.
    """

    def __init__(self,
                 symbols: Sequence[Tuple[str, Sequence[int]]],
                 gap_features: Optional[Sequence[int]] = None,
                 overrides: Optional[Iterable[Tuple[Sequence[str], float]]] = None,
                 gap: str = DEFAULT_GAP):
        if not symbols:
            raise ValidationError("alphabet needs at least one symbol")
        names = [name for name, _ in symbols]
        if len(set(names)) != len(names):
            raise ValidationError("symbol names must be unique")
        if gap in names:
            raise ValidationError(f"gap name {gap!r} collides with a symbol")
        dims = {len(feats) for _, feats in symbols}
        if len(dims) != 1:
            raise ValidationError("all symbol encodings must share one dimension")
        dim = dims.pop()
        if dim < 1:
            raise ValidationError("feature dimension must be at least 1")

        self.gap = gap
        self.symbols: Tuple[str, ...] = tuple(names)
        self.dim = dim
        self._id = {gap: 0}
        for i, name in enumerate(names, start=1):
            self._id[name] = i
        self._names = (gap,) + self.symbols

        enc = np.zeros((len(names) + 1, dim), dtype=np.int64)
        if gap_features is not None:
            if len(gap_features) != dim:
                raise ValidationError("gap encoding has the wrong dimension")
            enc[0] = gap_features
        for i, (_, feats) in enumerate(symbols, start=1):
            enc[i] = feats
        if not np.isin(enc, (0, 1)).all():
            raise ValidationError("encodings must contain only 0/1 values")
        self.encodings = enc

        self._ad4 = self._derive_table(enc)
        if overrides:
            self._apply_overrides(overrides)
        self._validate_table()
        self._solve_min = self._ad4.min(axis=3)
        self._solve_mask = self._ad4 == self._solve_min[..., None]

    # -- construction helpers ------------------------------------------

    @staticmethod
    def _derive_table(enc: np.ndarray) -> np.ndarray:
        e = enc.astype(np.float64)
        diff = (e[:, None, None, None, :] + e[None, None, None, :, :]
                - e[None, :, None, None, :] - e[None, None, :, None, :])
        return np.abs(diff).sum(axis=-1)

    def _apply_overrides(self, overrides) -> None:
        assigned: dict = {}
        for entry, cost in overrides:
            if cost < 0:
                raise ValidationError("override costs must be non-negative")
            ids = tuple(self.id_of(tok, allow_gap=True) for tok in entry)
            if len(ids) != 4:
                raise ValidationError("override entries must have four symbols")
            for perm in _symmetry_group():
                image = tuple(ids[i] for i in perm)
                prev = assigned.get(image)
                if prev is not None and abs(prev - cost) > 1e-9:
                    toks = tuple(self._names[i] for i in image)
                    raise ValidationError(
                        f"conflicting override costs {prev} and {cost} for {toks}")
                assigned[image] = cost
        for image, cost in assigned.items():
            self._ad4[image] = cost

    def _validate_table(self) -> None:
        a = self._ad4
        if (a < 0).any():
            raise ValidationError("dissimilarity table has negative entries")
        n = len(self.symbols)
        sym_ids = np.arange(1, n + 1)
        if not np.allclose(a[0, 0, sym_ids, sym_ids], 0.0):
            bad = self.symbols[int(np.argmax(a[0, 0, sym_ids, sym_ids] != 0))]
            raise ValidationError(
                f"gap : gap :: {bad} : {bad} must cost 0")
        block = a[0, 1:, 1:, 1:]
        if (block <= 0).any():
            i, j, k = np.argwhere(block <= 0)[0]
            raise ValidationError(
                "gap : %s :: %s : %s must cost more than 0" %
                (self.symbols[i], self.symbols[j], self.symbols[k]))
        emit = a[0, 0, 0, 1:]
        if (emit <= 0).any():
            bad = self.symbols[int(np.argmax(emit <= 0))]
            raise ValidationError(
                f"emitting {bad} against three gaps must cost more than 0")
        if not np.array_equal(a, a.transpose(2, 3, 0, 1)):
            raise ValidationError("table is not symmetric under half swap")
        if not np.array_equal(a, a.transpose(0, 2, 1, 3)):
            raise ValidationError("table is not symmetric under middle exchange")

    # -- lookups --------------------------------------------------------

    @property
    def size(self) -> int:
        """Number of proper symbols (gap excluded)."""
        return len(self.symbols)

    def id_of(self, token: str, allow_gap: bool = False) -> int:
        try:
            i = self._id[token]
        except KeyError:
            raise UnknownSymbol(f"symbol {token!r} is not in the alphabet") from None
        if i == 0 and not allow_gap:
            raise UnknownSymbol("gap symbol not allowed in a sequence")
        return i

    def token_of(self, symbol_id: int) -> str:
        return self._names[symbol_id]

    def to_ids(self, letters: Iterable[str]) -> np.ndarray:
        """Encode a gap-free sequence of symbol tokens as id array."""
        return np.array([self.id_of(t) for t in letters], dtype=np.int8)

    def ad(self, u: str, v: str, w: str, x: str) -> float:
        """Dissimilarity of a 4-tuple of tokens over the gapped alphabet."""
        ids = tuple(self.id_of(t, allow_gap=True) for t in (u, v, w, x))
        return float(self._ad4[ids])

    # -- text round trips -----------------------------------------------

    @property
    def single_char(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)

    def parse(self, text: str) -> Tuple[str, ...]:
        """Split CLI text into symbol tokens.

        Whitespace-separated tokens always work; contiguous characters
        are accepted when every symbol name is a single character.
        """
        text = text.strip()
        if not text:
            return ()
        if any(ch.isspace() for ch in text):
            return tuple(text.split())
        if text in self._id:
            return (text,)
        if self.single_char:
            return tuple(text)
        return (text,)

    def format(self, letters: Iterable[str]) -> str:
        toks = list(letters)
        if not toks:
            return ""
        if self.single_char and all(len(t) == 1 for t in toks):
            return "".join(toks)
        return " ".join(toks)


def load_alphabet(source: Union[str, Path, Mapping]) -> Alphabet:
    """Build an :class:`Alphabet` from a JSON file or an equivalent dict.

    Expected shape::

        {"features_dim": 5,
         "symbols": [{"name": "a", "features": [1,0,0,1,0]}, ...],
         "gap_features": [0,0,0,0,0],        # optional, default all-zero
         "gap_name": "-",                    # optional
         "overrides": [["a","b","A","B",0],  # optional
                       ...]}
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
    else:
        spec = source
    if not isinstance(spec, Mapping):
        raise ValidationError("alphabet spec must be a JSON object")
    try:
        dim = int(spec["features_dim"])
        raw_symbols = spec["symbols"]
    except KeyError as exc:
        raise ValidationError(f"alphabet spec is missing {exc.args[0]!r}") from None
    symbols = []
    for item in raw_symbols:
        try:
            name, feats = item["name"], item["features"]
        except (TypeError, KeyError):
            raise ValidationError(
                "each symbol needs 'name' and 'features'") from None
        if len(feats) != dim:
            raise ValidationError(
                f"symbol {name!r} has {len(feats)} features, expected {dim}")
        symbols.append((str(name), list(feats)))
    overrides = None
    if spec.get("overrides"):
        overrides = []
        for row in spec["overrides"]:
            if len(row) != 5:
                raise ValidationError(
                    "override rows are [s1, s2, s3, s4, cost]")
            overrides.append((tuple(str(t) for t in row[:4]), float(row[4])))
    return Alphabet(symbols,
                    gap_features=spec.get("gap_features"),
                    overrides=overrides,
                    gap=str(spec.get("gap_name", DEFAULT_GAP)))
