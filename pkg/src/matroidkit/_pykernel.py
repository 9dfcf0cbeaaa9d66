"""Pure-Python (numpy) implementations of the bitset kernels.

Ground sets have at most 16 elements, so every subset fits a machine word
and whole-powerset tables fit comfortably in memory.  The compiled kernel
in _fastkernel.pyx implements the same four functions; _kernel picks one
at import time.
"""

import numpy as np

BACKEND = "python"

_POP16 = None


def _popcounts(size):
    global _POP16
    if _POP16 is None:
        t = np.zeros(1 << 16, dtype=np.uint8)
        for b in range(16):
            t[1 << b : 2 << b] = t[: 1 << b] + 1
        _POP16 = t
    return _POP16[:size]


def independence_table(masks, n):
    """Boolean table over all 2^n subsets: True iff contained in some mask."""
    size = 1 << n
    ind = np.zeros(size, dtype=bool)
    ind[np.asarray(list(masks), dtype=np.int64)] = True
    idx = np.arange(size)
    for b in range(n):
        bit = 1 << b
        has = (idx & bit) != 0
        ind[idx[~has]] |= ind[idx[~has] | bit]
    return ind


def rank_table(masks, n):
    """uint8 table: rank of every subset, for the matroid with the given basis masks."""
    size = 1 << n
    ind = independence_table(masks, n)
    rk = np.where(ind, _popcounts(size), 0).astype(np.uint8)
    idx = np.arange(size)
    for b in range(n):
        bit = 1 << b
        has = idx[(idx & bit) != 0]
        np.maximum(rk[has], rk[has ^ bit], out=rk[has])
    return rk


def subset_rank(masks, sub):
    """Rank of one subset: max |sub & B| over basis masks, without a table."""
    best = 0
    for m in masks:
        v = bin(sub & m).count("1")
        if v > best:
            best = v
    return best


def exchange_violation(masks):
    """First failing triple (i, j, e_bit) of the basis exchange axiom, or None.

    For bases B1 = masks[i], B2 = masks[j] and e in B1 - B2 there must be
    f in B2 - B1 with (B1 - e) + f a basis.
    """
    mask_set = set(masks)
    for i, b1 in enumerate(masks):
        for j, b2 in enumerate(masks):
            if b1 == b2:
                continue
            only1 = b1 & ~b2
            only2 = b2 & ~b1
            e = only1
            while e:
                ebit = e & -e
                e ^= ebit
                base = b1 ^ ebit
                f = only2
                ok = False
                while f:
                    fbit = f & -f
                    f ^= fbit
                    if base | fbit in mask_set:
                        ok = True
                        break
                if not ok:
                    return (i, j, ebit)
    return None
