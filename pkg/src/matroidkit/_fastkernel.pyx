# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bitset kernels; same contract as _pykernel."""

import numpy as np

cdef extern from *:
    int __builtin_popcount(unsigned int) nogil

BACKEND = "compiled"


def independence_table(masks, int n):
    cdef int size = 1 << n
    ind_arr = np.zeros(size, dtype=np.uint8)
    cdef unsigned char[::1] ind = ind_arr
    cdef unsigned int m
    for m in masks:
        ind[m] = 1
    cdef int b, s, bit
    for b in range(n):
        bit = 1 << b
        for s in range(size):
            if not (s & bit) and ind[s | bit]:
                ind[s] = 1
    return ind_arr.view(bool)


def rank_table(masks, int n):
    cdef int size = 1 << n
    ind_arr = independence_table(masks, n)
    cdef unsigned char[::1] ind = ind_arr.view(np.uint8)
    rk_arr = np.zeros(size, dtype=np.uint8)
    cdef unsigned char[::1] rk = rk_arr
    cdef int s, b, bit
    cdef unsigned char v
    for s in range(size):
        if ind[s]:
            rk[s] = <unsigned char>__builtin_popcount(<unsigned int>s)
    for b in range(n):
        bit = 1 << b
        for s in range(size):
            if s & bit:
                v = rk[s ^ bit]
                if v > rk[s]:
                    rk[s] = v
    return rk_arr


def subset_rank(masks, unsigned int sub):
    cdef int best = 0, v
    cdef unsigned int m
    for m in masks:
        v = __builtin_popcount(sub & m)
        if v > best:
            best = v
    return best


def exchange_violation(masks):
    arr = np.asarray(sorted(masks), dtype=np.uint32)
    cdef unsigned int[::1] a = arr
    cdef Py_ssize_t nb = a.shape[0]
    cdef Py_ssize_t i, j
    cdef unsigned int b1, b2, only1, only2, e, ebit, base, f, fbit
    cdef Py_ssize_t lo, hi, mid
    cdef bint ok, found
    orig = list(masks)
    for i in range(nb):
        b1 = a[i]
        for j in range(nb):
            b2 = a[j]
            if b1 == b2:
                continue
            only1 = b1 & ~b2
            only2 = b2 & ~b1
            e = only1
            while e:
                ebit = e & (0 - e)
                e ^= ebit
                base = b1 ^ ebit
                f = only2
                ok = False
                while f:
                    fbit = f & (0 - f)
                    f ^= fbit
                    # binary search for base | fbit
                    lo = 0
                    hi = nb - 1
                    found = False
                    while lo <= hi:
                        mid = (lo + hi) // 2
                        if a[mid] == (base | fbit):
                            found = True
                            break
                        elif a[mid] < (base | fbit):
                            lo = mid + 1
                        else:
                            hi = mid - 1
                    if found:
                        ok = True
                        break
                if not ok:
                    return (orig.index(b1), orig.index(b2), int(ebit))
    return None
