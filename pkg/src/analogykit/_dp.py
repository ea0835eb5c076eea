"""Numba kernels for the sequence dynamic programs.

Sequences enter as int8 id arrays (0 is the gap, proper symbols start
at 1); ``ad4`` is the alphabet's dense 4-ary dissimilarity table and
``solve_min`` its minimum over the fourth axis.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def sequana_table(s1, s2, s3, s4, ad4):
    """Fill the 4-D alignment cost table.

    Cell (i, j, k, l) holds the cheapest alignment cost of the four
    prefixes of lengths i, j, k, l.  Moves are the 15 non-empty subsets
    of "advance one position in each sequence"; a move reads the
    advanced letters and gaps elsewhere.
    """
    n1, n2, n3, n4 = len(s1), len(s2), len(s3), len(s4)
    C = np.empty((n1 + 1, n2 + 1, n3 + 1, n4 + 1), dtype=np.float64)
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            for k in range(n3 + 1):
                for l in range(n4 + 1):
                    if i == 0 and j == 0 and k == 0 and l == 0:
                        C[0, 0, 0, 0] = 0.0
                        continue
                    best = np.inf
                    for move in range(1, 16):
                        mi = move & 1
                        mj = (move >> 1) & 1
                        mk = (move >> 2) & 1
                        ml = (move >> 3) & 1
                        pi = i - mi
                        pj = j - mj
                        pk = k - mk
                        pl = l - ml
                        if pi < 0 or pj < 0 or pk < 0 or pl < 0:
                            continue
                        a = s1[pi] if mi else 0
                        b = s2[pj] if mj else 0
                        c = s3[pk] if mk else 0
                        d = s4[pl] if ml else 0
                        v = C[pi, pj, pk, pl] + ad4[a, b, c, d]
                        if v < best:
                            best = v
                    C[i, j, k, l] = best
    return C


@njit(cache=True)
def sequana_cost(s1, s2, s3, s4, ad4):
    C = sequana_table(s1, s2, s3, s4, ad4)
    return C[len(s1), len(s2), len(s3), len(s4)]


@njit(cache=True)
def sequana_bulk(out, store, lens, q1, q2, q3, q4, ad4):
    """Costs for many 4-tuples drawn from a padded sequence store.

    ``store`` is (n_seqs, max_len) int8, ``lens`` the true lengths, and
    q1..q4 index rows of the store.
    """
    for n in range(len(q1)):
        a = store[q1[n]][:lens[q1[n]]]
        b = store[q2[n]][:lens[q2[n]]]
        c = store[q3[n]][:lens[q3[n]]]
        d = store[q4[n]][:lens[q4[n]]]
        out[n] = sequana_cost(a, b, c, d, ad4)


@njit(cache=True)
def solvana_tables(s1, s2, s3, solve_min):
    """Fill the 3-D equation-solving table plus optimal-move bitmasks.

    Cell (i, j, k) holds the cheapest cost of aligning the three
    prefixes against a freely chosen output; a move advances a
    non-empty subset of the inputs (bit 0/1/2 of the move id) and pays
    the best achievable column cost ``solve_min[a, b, c]``.  Bit m-1 of
    ``opt[i, j, k]`` marks move m as optimal.
    """
    n1, n2, n3 = len(s1), len(s2), len(s3)
    M = np.empty((n1 + 1, n2 + 1, n3 + 1), dtype=np.float64)
    opt = np.zeros((n1 + 1, n2 + 1, n3 + 1), dtype=np.uint8)
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            for k in range(n3 + 1):
                if i == 0 and j == 0 and k == 0:
                    M[0, 0, 0] = 0.0
                    continue
                best = np.inf
                mask = 0
                for move in range(1, 8):
                    mi = move & 1
                    mj = (move >> 1) & 1
                    mk = (move >> 2) & 1
                    pi = i - mi
                    pj = j - mj
                    pk = k - mk
                    if pi < 0 or pj < 0 or pk < 0:
                        continue
                    a = s1[pi] if mi else 0
                    b = s2[pj] if mj else 0
                    c = s3[pk] if mk else 0
                    v = M[pi, pj, pk] + solve_min[a, b, c]
                    if v < best - 1e-9:
                        best = v
                        mask = 1 << (move - 1)
                    elif v <= best + 1e-9:
                        mask |= 1 << (move - 1)
                M[i, j, k] = best
                opt[i, j, k] = mask
    return M, opt
