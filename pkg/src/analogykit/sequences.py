"""Analogical dissimilarity and equation solving on symbol sequences.

The dissimilarity of four sequences is the cost of their cheapest
4-way alignment, where each column is scored by the alphabet's 4-ary
dissimilarity.  Solving ``a : b :: c : x`` finds every output sequence
of minimal dissimilarity; the full solution set is returned as a DAG
whose source-to-sink paths spell the optimal outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

from . import _dp
from .alphabet import Alphabet
from .errors import UnknownSymbol, ValidationError

__all__ = [
    "Alignment4",
    "SolutionDag",
    "SolutionSet",
    "alignment_cost",
    "alignment_projection",
    "sequence_ad",
    "sequence_ad_cost",
    "bulk_sequence_ad",
    "is_sequence_analogy",
    "solve_sequence_equation",
    "enumerate_solutions",
    "export_dag",
    "COST_ATOL",
]

#: Column of a 4-way alignment: four tokens over the gapped alphabet.
Column = Tuple[str, str, str, str]
#: A 4-way alignment: the ordered list of its columns.
Alignment4 = List[Column]

COST_ATOL = 1e-9


class SolutionSet(NamedTuple):
    sequences: FrozenSet[Tuple[str, ...]]
    truncated: bool


@dataclass(frozen=True)
class SolutionDag:
    """All optimal solutions of a sequence equation, as a DAG.

    Nodes are prefix-consumption states (i, j, k); an edge advances a
    non-empty subset of the three inputs and emits one output symbol
    (possibly the gap).  Every source-to-sink path spells, after
    dropping gaps, an output sequence of cost exactly ``cost``.
    """
    shape: Tuple[int, int, int]
    cost: float
    nodes: Tuple[Tuple[int, int, int], ...]
    edges: Tuple[Tuple[Tuple[int, int, int], Tuple[int, int, int], str], ...]
    gap: str

    @property
    def source(self) -> Tuple[int, int, int]:
        return (0, 0, 0)

    @property
    def sink(self) -> Tuple[int, int, int]:
        return self.shape

    def successors(self) -> Dict[Tuple[int, int, int],
                                 List[Tuple[Tuple[int, int, int], str]]]:
        adj: Dict[Tuple[int, int, int], List[Tuple[Tuple[int, int, int], str]]] = {
            n: [] for n in self.nodes}
        for src, dst, sym in self.edges:
            adj[src].append((dst, sym))
        return adj


def _ids(alpha: Alphabet, seq: Iterable[str]) -> np.ndarray:
    return alpha.to_ids(tuple(seq))


def alignment_cost(alignment: Alignment4, alpha: Alphabet) -> float:
    """Sum of the column dissimilarities of a 4-way alignment."""
    total = 0.0
    for col in alignment:
        if len(col) != 4:
            raise ValidationError("alignment columns must have four symbols")
        total += alpha.ad(*col)
    return total


def alignment_projection(alignment: Alignment4, row: int,
                         gap: str) -> Tuple[str, ...]:
    """Row of an alignment with gaps dropped."""
    return tuple(col[row] for col in alignment if col[row] != gap)


def sequence_ad(u, v, w, x, alpha: Alphabet) -> Tuple[float, Alignment4]:
    """Dissimilarity of four sequences plus one witness alignment.

    Runs the 4-D alignment dynamic program; the witness attains the
    returned cost and projects back onto the inputs.
    """
    seqs = [tuple(s) for s in (u, v, w, x)]
    ids = [_ids(alpha, s) for s in seqs]
    table = _dp.sequana_table(ids[0], ids[1], ids[2], ids[3], alpha._ad4)
    cost = float(table[len(seqs[0]), len(seqs[1]), len(seqs[2]), len(seqs[3])])
    witness = _backtrace(table, seqs, alpha)
    return cost, witness


def sequence_ad_cost(u, v, w, x, alpha: Alphabet) -> float:
    """Dissimilarity of four sequences without the witness."""
    ids = [_ids(alpha, tuple(s)) for s in (u, v, w, x)]
    return float(_dp.sequana_cost(ids[0], ids[1], ids[2], ids[3], alpha._ad4))


def bulk_sequence_ad(seqs: Sequence[Sequence[str]], quads,
                     alpha: Alphabet) -> np.ndarray:
    """Dissimilarities for many 4-tuples drawn from a sequence pool.

    ``quads`` is an (n, 4) integer array of indices into ``seqs``.
    """
    quads = np.asarray(quads, dtype=np.int64)
    if quads.ndim != 2 or quads.shape[1] != 4:
        raise ValidationError("quads must be an (n, 4) index array")
    pool = [tuple(s) for s in seqs]
    max_len = max((len(s) for s in pool), default=0)
    store = np.zeros((len(pool), max(max_len, 1)), dtype=np.int8)
    lens = np.zeros(len(pool), dtype=np.int64)
    for i, s in enumerate(pool):
        lens[i] = len(s)
        if s:
            store[i, :len(s)] = _ids(alpha, s)
    out = np.empty(len(quads), dtype=np.float64)
    _dp.sequana_bulk(out, store, lens,
                     quads[:, 0].copy(), quads[:, 1].copy(),
                     quads[:, 2].copy(), quads[:, 3].copy(), alpha._ad4)
    return out


def is_sequence_analogy(u, v, w, x, alpha: Alphabet) -> bool:
    """True iff the four sequences align at zero dissimilarity."""
    return sequence_ad_cost(u, v, w, x, alpha) <= COST_ATOL


def _backtrace(table: np.ndarray, seqs, alpha: Alphabet) -> Alignment4:
    """One optimal alignment read off a filled cost table."""
    pos = [len(s) for s in seqs]
    cols: Alignment4 = []
    while any(pos):
        here = table[tuple(pos)]
        for move in range(1, 16):
            bits = [(move >> r) & 1 for r in range(4)]
            prev = [p - b for p, b in zip(pos, bits)]
            if min(prev) < 0:
                continue
            col_ids = tuple(
                alpha.id_of(seqs[r][prev[r]]) if bits[r] else 0
                for r in range(4))
            if abs(table[tuple(prev)] + alpha._ad4[col_ids] - here) <= COST_ATOL:
                cols.append(tuple(
                    seqs[r][prev[r]] if bits[r] else alpha.gap
                    for r in range(4)))
                pos = prev
                break
        else:  # pragma: no cover - table invariant violated
            raise AssertionError("no feasible predecessor during backtrace")
    cols.reverse()
    return cols


def solve_sequence_equation(a, b, c,
                            alpha: Alphabet) -> Tuple[float, SolutionDag]:
    """Best approximate solutions of ``a : b :: c : x`` on sequences.

    Returns the minimal achievable dissimilarity and the DAG of every
    optimal output.  Columns that would emit a symbol without consuming
    any input are never taken: alphabet validation guarantees they cost
    more than zero, so no optimal alignment contains one.
    """
    sa, sb, sc = tuple(a), tuple(b), tuple(c)
    ids = [_ids(alpha, s) for s in (sa, sb, sc)]
    M, opt = _dp.solvana_tables(ids[0], ids[1], ids[2], alpha._solve_min)
    shape = (len(sa), len(sb), len(sc))
    cost = float(M[shape])

    nodes = {shape}
    edges = []
    stack = [shape]
    seqs = (sa, sb, sc)
    while stack:
        node = stack.pop()
        i, j, k = node
        mask = int(opt[node])
        for move in range(1, 8):
            if not mask & (1 << (move - 1)):
                continue
            bits = (move & 1, (move >> 1) & 1, (move >> 2) & 1)
            prev = (i - bits[0], j - bits[1], k - bits[2])
            col = tuple(
                alpha.id_of(seqs[r][prev[r]]) if bits[r] else 0
                for r in range(3))
            for sym_id in np.nonzero(alpha._solve_mask[col])[0]:
                edges.append((prev, node, alpha.token_of(int(sym_id))))
            if prev not in nodes:
                nodes.add(prev)
                stack.append(prev)
    return cost, SolutionDag(
        shape=shape, cost=cost,
        nodes=tuple(sorted(nodes)),
        edges=tuple(sorted(edges)),
        gap=alpha.gap)


def enumerate_solutions(dag: SolutionDag, limit: int = 10000) -> SolutionSet:
    """Distinct output sequences spelled by the DAG's optimal paths.

    Distinct paths that spell the same sequence collapse to one entry.
    At most ``limit`` distinct sequences are kept; the ``truncated``
    flag reports whether anything was cut (in which case the returned
    set is the lexicographically smallest prefix at each node and may
    be incomplete).
    """
    if limit < 1:
        raise ValidationError("limit must be positive")
    adj = dag.successors()
    suffixes: Dict[Tuple[int, int, int], List[Tuple[str, ...]]] = {}
    truncated = False
    for node in sorted(dag.nodes, key=lambda n: -sum(n)):
        if node == dag.sink:
            suffixes[node] = [()]
            continue
        acc = set()
        for dst, sym in adj[node]:
            tail = suffixes[dst]
            if sym == dag.gap:
                acc.update(tail)
            else:
                acc.update((sym,) + t for t in tail)
        ordered = sorted(acc)
        if len(ordered) > limit:
            ordered = ordered[:limit]
            truncated = True
        suffixes[node] = ordered
    if dag.source not in suffixes:  # pragma: no cover - malformed dag
        raise ValidationError("dag has no source node")
    return SolutionSet(frozenset(suffixes[dag.source]), truncated)


def export_dag(dag: SolutionDag) -> str:
    """Render the solution DAG in DOT format.

    Nodes are labeled "(i,j,k)"; edge labels carry the emitted symbol,
    with the gap rendered as "-".
    """
    def name(node):
        return '"(%d,%d,%d)"' % node

    lines = ["digraph solutions {", "  rankdir=LR;"]
    for node in dag.nodes:
        lines.append(f"  {name(node)};")
    for src, dst, sym in dag.edges:
        label = "-" if sym == dag.gap else sym
        label = label.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  {name(src)} -> {name(dst)} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
