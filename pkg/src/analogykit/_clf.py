"""Compiled exhaustive scan behind classify.evaluate.

One pass per test item over all canonical solvable triples, tracking
integer dissimilarity totals so that ties resolve exactly.  The
decision logic mirrors classify.decide entry for entry.
"""

import numpy as np
from numba import njit, prange

from .errors import ValidationError


@njit(cache=True)
def _decide_one(items, labels, nums, x, k, C, fallback):
    m, d = items.shape
    n = 0
    for u in range(m):
        cu = labels[u]
        for v in range(m):
            cv = labels[v]
            for w in range(v, m):
                if cu == cv or cu == labels[w]:
                    n += 1
    if n == 0:
        return -2, 0, np.nan
    vals = np.empty(n, dtype=np.int64)
    cls = np.empty(n, dtype=np.int64)
    pos = 0
    for u in range(m):
        au = items[u]
        cu = labels[u]
        for v in range(m):
            cv = labels[v]
            av = items[v]
            for w in range(v, m):
                cw = labels[w]
                if cu == cv:
                    sol = cw
                elif cu == cw:
                    sol = cv
                else:
                    continue
                weights = nums[cu, sol]
                total = 0
                for t in range(d):
                    diff = au[t] + x[t] - av[t] - items[w, t]
                    if diff < 0:
                        diff = -diff
                    total += weights[t] * diff
                vals[pos] = total
                cls[pos] = sol
                pos += 1
    kk = k if k < n else n
    ordered = np.partition(vals.copy(), kk - 1)
    vk = ordered[kk - 1]
    votes = np.zeros(C, dtype=np.int64)
    sums = np.zeros(C, dtype=np.int64)
    k_prime = 0
    top = vals[0]
    for t in range(n):
        if vals[t] < top:
            top = vals[t]
        if vals[t] <= vk:
            c = cls[t]
            votes[c] += 1
            sums[c] += vals[t]
            k_prime += 1
    best = -1
    bestv = -1
    tie = False
    for c in range(C):
        if votes[c] > bestv:
            bestv = votes[c]
            best = c
            tie = False
        elif votes[c] == bestv and votes[c] > 0:
            tie = True
    if tie:
        if not fallback:
            best = -1
        else:
            # smallest summed dissimilarity, then lowest class code
            chosen = -1
            for c in range(C):
                if votes[c] == bestv and (chosen < 0 or sums[c] < sums[chosen]):
                    chosen = c
            best = chosen
    return best, k_prime, float(top)


@njit(cache=True, parallel=True)
def _decide_block(items, labels, nums, X, k, C, fallback,
                  preds, kprimes, tops):
    for idx in prange(X.shape[0]):
        p, kp, top = _decide_one(items, labels, nums, X[idx], k, C, fallback)
        preds[idx] = p
        kprimes[idx] = kp
        tops[idx] = top


def decide_block(train, test_items, cfg, weights):
    """Vectorized decisions for a whole test matrix.

    Returns (predicted class codes with -1 for rejects and -2 for an
    empty ranking, window sizes, smallest dissimilarity per item).
    """
    C = train.n_classes
    if weights is not None:
        if weights.numerators is None:
            raise ValidationError(
                "fast evaluation needs integer-scaled learned weights")
        nums = np.ascontiguousarray(weights.numerators, dtype=np.int64)
        scale = float(weights.scale)
    else:
        nums = np.ones((C, C, train.dim), dtype=np.int64)
        scale = 1.0
    X = np.ascontiguousarray(np.asarray(test_items, dtype=np.int8))
    n = X.shape[0]
    preds = np.empty(n, dtype=np.int64)
    kprimes = np.empty(n, dtype=np.int64)
    tops = np.empty(n, dtype=np.float64)
    if n:
        _decide_block(train.items, train.labels, nums, X,
                      int(cfg.k), C, cfg.tie_policy == "fallback_min_ad",
                      preds, kprimes, tops)
    return preds, kprimes, tops / scale
