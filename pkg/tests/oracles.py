"""Independent reference implementations used to cross-check the library.

Nothing here shares code with analogykit's production paths: alignment
minima are found by an off-the-shelf shortest-path solver over an
explicit move graph, and triple search is a literal three-loop scan.
"""

from itertools import product

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra


class AlignmentGraph:
    """Shortest-path oracle for 4-way alignment costs.

    For a fixed tuple of sequence lengths, the lattice of prefix states
    and its 15 move-edges are built once; per query only the edge
    weights are refreshed (a table gather), then a generic Dijkstra run
    yields the optimal alignment cost.
    """

    def __init__(self, lengths):
        self.lengths = tuple(lengths)
        dims = tuple(l + 1 for l in self.lengths)
        self.n_nodes = int(np.prod(dims))

        def node_id(state):
            acc = 0
            for d, s in zip(dims, state):
                acc = acc * d + s
            return acc

        rows, cols, pos = [], [], []
        for state in product(*[range(d) for d in dims]):
            for move in range(1, 16):
                bits = [(move >> r) & 1 for r in range(4)]
                nxt = tuple(s + b for s, b in zip(state, bits))
                if any(n >= d for n, d in zip(nxt, dims)):
                    continue
                rows.append(node_id(state))
                cols.append(node_id(nxt))
                pos.append(tuple(nxt[r] - 1 if bits[r] else -1
                                 for r in range(4)))
        order = csr_matrix(
            (np.arange(len(rows), dtype=np.float64) + 1.0, (rows, cols)),
            shape=(self.n_nodes, self.n_nodes))
        self._perm = (order.data - 1.0).astype(np.int64)
        self._indices = order.indices
        self._indptr = order.indptr
        self._pos = np.array(pos, dtype=np.int64)

    def min_cost(self, id_seqs, ad4):
        """Cheapest alignment cost of four id sequences of the preset
        lengths."""
        size = ad4.shape[0]
        gathered = np.empty((len(self._pos), 4), dtype=np.int64)
        for r in range(4):
            p = self._pos[:, r]
            seq = np.asarray(id_seqs[r], dtype=np.int64)
            safe = np.clip(p, 0, max(len(seq) - 1, 0))
            vals = seq[safe] if len(seq) else np.zeros(len(p), dtype=np.int64)
            gathered[:, r] = np.where(p < 0, 0, vals)
        flat = ((gathered[:, 0] * size + gathered[:, 1]) * size
                + gathered[:, 2]) * size + gathered[:, 3]
        data = ad4.ravel()[flat][self._perm]
        graph = csr_matrix((data, self._indices, self._indptr),
                           shape=(self.n_nodes, self.n_nodes))
        dist = dijkstra(graph, indices=0)
        return float(dist[self.n_nodes - 1])


def alignment_cost_by_enumeration(seqs, alpha, max_cols=None):
    """Minimal alignment cost by literally enumerating every alignment.

    Exponential; only usable for very short sequences.  Recurses over
    the 15 column types without memoization, so each alignment is
    walked explicitly.
    """
    ids = [tuple(alpha.to_ids(s)) for s in seqs]
    table = alpha._ad4

    def rec(state):
        if all(s == 0 for s in state):
            return 0.0
        best = np.inf
        for move in range(1, 16):
            bits = [(move >> r) & 1 for r in range(4)]
            if any(b and s == 0 for b, s in zip(bits, state)):
                continue
            nxt = tuple(s - b for s, b in zip(state, bits))
            col = tuple(ids[r][state[r] - 1] if bits[r] else 0
                        for r in range(4))
            v = rec(nxt) + table[col]
            if v < best:
                best = v
        return best

    return rec(tuple(len(s) for s in ids))


def brute_force_triples(items, query):
    """All canonical triples with their dissimilarity, three plain loops."""
    m = len(items)
    out = []
    for u in range(m):
        for v in range(m):
            for w in range(v, m):
                ad = sum(abs(int(items[u][t]) + int(query[t])
                             - int(items[v][t]) - int(items[w][t]))
                         for t in range(len(query)))
                out.append(((u, v, w), float(ad)))
    return out


def all_sequences(symbols, max_len):
    """Every sequence over ``symbols`` up to ``max_len``, shortest first."""
    out = [()]
    for length in range(1, max_len + 1):
        out.extend(product(symbols, repeat=length))
    return out
