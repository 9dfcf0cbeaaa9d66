"""Matroids as explicit basis families over small labeled ground sets.

The ground set is capped at 16 elements so subsets are machine-word bit
masks; rank queries go through a whole-powerset rank table built by the
bitset kernel on first use.  Matroids are immutable and hash/compare by
(ground set, basis family) with no dependence on label order.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernel

__all__ = [
    "Matroid",
    "ExchangeError",
    "from_bases",
    "canonical_form",
    "is_isomorphic",
    "has_minor",
    "uniform",
    "mk4",
    "fano",
    "nonfano",
    "wheel",
    "whirl",
    "graphic",
]

MAX_GROUND = 16


def label_key(x):
    """Total order on mixed int/str labels (ints first)."""
    if isinstance(x, int) and not isinstance(x, bool):
        return (0, x, "")
    return (1, 0, str(x))


class ExchangeError(ValueError):
    """Basis family violating the exchange axiom; carries a witness."""

    def __init__(self, b1, b2, element):
        self.b1 = frozenset(b1)
        self.b2 = frozenset(b2)
        self.element = element
        super().__init__(
            f"exchange fails: no replacement in {sorted(b2, key=label_key)} for "
            f"{element!r} in {sorted(b1, key=label_key)}"
        )


class Matroid:
    """Immutable matroid given by its bases."""

    __slots__ = ("ground", "_pos", "_masks", "_mask_set", "_rk", "_hash", "_basis_family")

    def __init__(self, ground: Sequence, masks: Iterable[int], _validated: bool = False):
        ground = tuple(ground)
        if len(ground) > MAX_GROUND:
            raise ValueError(f"ground set larger than {MAX_GROUND} elements")
        if len(set(ground)) != len(ground):
            raise ValueError("duplicate ground set labels")
        self.ground = ground
        self._pos = {e: i for i, e in enumerate(ground)}
        self._masks = tuple(sorted(set(masks)))
        if not self._masks:
            raise ValueError("a matroid needs at least one basis")
        self._mask_set = frozenset(self._masks)
        self._rk = None
        self._hash = None
        self._basis_family = None
        if not _validated:
            self._validate()

    # -- construction ------------------------------------------------------

    def _validate(self):
        sizes = {bin(m).count("1") for m in self._masks}
        if len(sizes) != 1:
            raise ValueError(f"bases of unequal sizes {sorted(sizes)}")
        bad = _kernel.exchange_violation(self._masks)
        if bad is not None:
            i, j, ebit = bad
            raise ExchangeError(
                self._labels(self._masks[i]), self._labels(self._masks[j]),
                self.ground[ebit.bit_length() - 1],
            )

    def _mask(self, X) -> int:
        m = 0
        for e in X:
            m |= 1 << self._pos[e]
        return m

    def _labels(self, mask: int) -> frozenset:
        return frozenset(self.ground[i] for i in range(len(self.ground)) if mask >> i & 1)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.ground)) - 1

    # -- basics ------------------------------------------------------------

    def size(self) -> int:
        return len(self.ground)

    def rank(self, X=None) -> int:
        if X is None:
            return bin(self._masks[0]).count("1")
        return int(self._table[self._mask(X)])

    @property
    def _table(self):
        if self._rk is None:
            self._rk = _kernel.rank_table(self._masks, len(self.ground))
        return self._rk

    def bases(self):
        if self._basis_family is None:
            self._basis_family = frozenset(self._labels(m) for m in self._masks)
        return self._basis_family

    def basis_masks(self):
        return self._masks

    def is_basis(self, X) -> bool:
        return self._mask(X) in self._mask_set

    def is_independent(self, X) -> bool:
        m = self._mask(X)
        return int(self._table[m]) == bin(m).count("1")

    def closure(self, X) -> frozenset:
        m = self._mask(X)
        r = self._table[m]
        out = m
        for i in range(len(self.ground)):
            if self._table[m | (1 << i)] == r:
                out |= 1 << i
        return self._labels(out)

    def coclosure(self, X) -> frozenset:
        return self.dual().closure(X)

    def loops(self) -> frozenset:
        all_union = 0
        for m in self._masks:
            all_union |= m
        return self._labels(self.full_mask & ~all_union)

    def coloops(self) -> frozenset:
        common = self.full_mask
        for m in self._masks:
            common &= m
        return self._labels(common)

    # -- duality and minors --------------------------------------------------

    def dual(self) -> "Matroid":
        full = self.full_mask
        return Matroid(self.ground, (full ^ m for m in self._masks), _validated=True)

    def delete(self, D) -> "Matroid":
        D = set(D)
        keep = [e for e in self.ground if e not in D]
        if not keep:
            raise ValueError("cannot delete the whole ground set")
        keepmask = self._mask(keep)
        r = max(bin(m & keepmask).count("1") for m in self._masks)
        masks = {m & keepmask for m in self._masks if bin(m & keepmask).count("1") == r}
        remap = _remap(self.ground, keep)
        return Matroid(keep, (remap(m) for m in masks), _validated=True)

    def contract(self, C) -> "Matroid":
        C = set(C)
        keep = [e for e in self.ground if e not in C]
        if not keep:
            raise ValueError("cannot contract the whole ground set")
        cmask = self._mask(C)
        keepmask = self.full_mask ^ cmask
        rC = int(self._table[cmask])
        masks = {m & keepmask for m in self._masks if bin(m & cmask).count("1") == rC}
        remap = _remap(self.ground, keep)
        return Matroid(keep, (remap(m) for m in masks), _validated=True)

    def minor(self, C, D) -> "Matroid":
        C, D = set(C), set(D)
        if C & D:
            raise ValueError("contraction and deletion sets must be disjoint")
        out = self
        if C:
            out = out.contract(C)
        if D:
            out = out.delete(D)
        return out

    def restrict(self, S) -> "Matroid":
        return self.delete(set(self.ground) - set(S))

    # -- circuits -----------------------------------------------------------

    def circuits(self):
        """All minimal dependent sets, sorted by (size, labels)."""
        n = len(self.ground)
        size = 1 << n
        ind = _kernel.independence_table(self._masks, n)
        idx = np.arange(size)
        minimal = ~ind
        for b in range(n):
            bit = 1 << b
            has = (idx & bit) != 0
            # dropping any element must leave an independent set
            minimal[has] &= ind[idx[has] ^ bit]
        out = [self._labels(int(m)) for m in idx[minimal]]
        return sorted(out, key=lambda c: (len(c), sorted(c, key=label_key)))

    def cocircuits(self):
        return self.dual().circuits()

    def triangles(self):
        return [c for c in self.circuits() if len(c) == 3]

    def triads(self):
        return [c for c in self.cocircuits() if len(c) == 3]

    # -- simplification -------------------------------------------------------

    def parallel_classes(self):
        """Partition of the non-loop elements by parallelism."""
        nonloops = [e for e in self.ground if e not in self.loops()]
        seen = set()
        classes = []
        for e in sorted(nonloops, key=label_key):
            if e in seen:
                continue
            cls = {f for f in nonloops if f == e or self.rank([e, f]) == 1}
            seen |= cls
            classes.append(frozenset(cls))
        return classes

    def series_classes(self):
        return self.dual().parallel_classes()

    def simplify(self) -> "Matroid":
        """Delete loops and all but the least-labeled element of each parallel class."""
        keep = {min(cls, key=label_key) for cls in self.parallel_classes()}
        drop = set(self.ground) - keep
        return self.delete(drop) if drop else self

    def cosimplify(self) -> "Matroid":
        return self.dual().simplify().dual()

    # -- equality ---------------------------------------------------------------

    def _identity(self):
        return (frozenset(self.ground), self.bases())

    def __eq__(self, other):
        if not isinstance(other, Matroid):
            return NotImplemented
        return self._identity() == other._identity()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._identity())
        return self._hash

    def relabel(self, mapping) -> "Matroid":
        """Apply a label bijection (labels missing from the mapping stay fixed)."""
        new_ground = [mapping.get(e, e) for e in self.ground]
        return Matroid(new_ground, self._masks, _validated=True)

    def __repr__(self):
        return f"Matroid(|E|={len(self.ground)}, r={self.rank()}, bases={len(self._masks)})"


def _remap(old_ground, keep):
    positions = [old_ground.index(e) for e in keep]

    def go(mask):
        out = 0
        for newbit, oldbit in enumerate(positions):
            if mask >> oldbit & 1:
                out |= 1 << newbit
        return out

    return go


def from_bases(ground, basis_family) -> Matroid:
    """Validated constructor; raises ExchangeError/ValueError on a bad family."""
    ground = list(ground)
    pos = {e: i for i, e in enumerate(ground)}
    masks = []
    for b in basis_family:
        m = 0
        for e in b:
            if e not in pos:
                raise ValueError(f"basis element {e!r} not in ground set")
            m |= 1 << pos[e]
        masks.append(m)
    return Matroid(ground, masks)


# -- isomorphism ---------------------------------------------------------------


def canonical_form(M: Matroid):
    """Canonical encoding: (n, rank, bit string) minimized over relabelings.

    The bit string lists, level by level as positions are assigned, which
    position subsets of basis size are bases.  Equal encodings are exactly
    isomorphism; `canonical_permutation` recovers a minimizing relabeling.
    """
    key, _ = _canonical(M)
    return key


def canonical_permutation(M: Matroid):
    """A label -> position map realizing canonical_form(M)."""
    _, perm = _canonical(M)
    return perm


@lru_cache(maxsize=65536)
def _canonical(M: Matroid):
    n = len(M.ground)
    r = M.rank()
    order = sorted(M.ground, key=label_key)
    if r == 0 or r == n:
        # unique matroid of this shape; bit string is forced
        return (n, r, ()), {e: i for i, e in enumerate(order)}

    mask_set = M._mask_set
    origbit = {e: 1 << M._pos[e] for e in M.ground}

    best: list = [None, None]  # bits, assignment

    def extension_bits(assigned_masks, v):
        vb = origbit[v]
        bits = []
        for combo in itertools.combinations(assigned_masks, r - 1):
            m = vb
            for c in combo:
                m |= c
            bits.append(1 if m in mask_set else 0)
        return tuple(bits)

    def dfs(assigned, assigned_masks, bits):
        if best[0] is not None and bits >= best[0][: len(bits)]:
            return
        if len(assigned) == n:
            best[0] = bits
            best[1] = list(assigned)
            return
        used = set(assigned)
        cands = []
        for v in order:
            if v not in used:
                cands.append((extension_bits(assigned_masks, v), label_key(v), v))
        cands.sort()
        for ext, _, v in cands:
            dfs(assigned + [v], assigned_masks + [origbit[v]], bits + ext)

    dfs([], [], ())
    perm = {e: i for i, e in enumerate(best[1])}
    return (n, r, best[0]), perm


def is_isomorphic(M1: Matroid, M2: Matroid) -> Optional[dict]:
    """A label bijection M1 -> M2 mapping bases onto bases, or None."""
    if len(M1.ground) != len(M2.ground) or M1.rank() != M2.rank():
        return None
    if len(M1.basis_masks()) != len(M2.basis_masks()):
        return None
    k1, p1 = _canonical(M1)
    k2, p2 = _canonical(M2)
    if k1 != k2:
        return None
    inv2 = {i: e for e, i in p2.items()}
    return {e: inv2[i] for e, i in p1.items()}


def _degree_profiles(M: Matroid):
    n = len(M.ground)
    deg = [0] * n
    pair = [[0] * n for _ in range(n)]
    for m in M.basis_masks():
        members = [i for i in range(n) if m >> i & 1]
        for i in members:
            deg[i] += 1
        for i, j in itertools.combinations(members, 2):
            pair[i][j] += 1
            pair[j][i] += 1
    prof = [(deg[i], tuple(sorted(pair[i]))) for i in range(n)]
    return deg, pair, prof


def _fast_isomorphic(M1: Matroid, M2: Matroid) -> bool:
    """Backtracking isomorphism test (no witness); cheaper than canonical forms."""
    if len(M1.ground) != len(M2.ground) or M1.rank() != M2.rank():
        return False
    if len(M1.basis_masks()) != len(M2.basis_masks()):
        return False
    deg1, pair1, prof1 = _degree_profiles(M1)
    deg2, pair2, prof2 = _degree_profiles(M2)
    if sorted(prof1) != sorted(prof2):
        return False
    n = len(M1.ground)
    # assign rarest profiles first
    rarity = {p: sum(1 for x in prof1 if x == p) for p in prof1}
    order = sorted(range(n), key=lambda i: (rarity[prof1[i]], prof1[i], i))
    cand = [[j for j in range(n) if prof2[j] == prof1[i]] for i in range(n)]
    used = [False] * n
    img = [-1] * n

    def place(k):
        if k == n:
            # verify the full basis family
            fam = set()
            for m in M1.basis_masks():
                out = 0
                for i in range(n):
                    if m >> i & 1:
                        out |= 1 << img[i]
                fam.add(out)
            return fam == set(M2.basis_masks())
        i = order[k]
        for j in cand[i]:
            if used[j]:
                continue
            ok = True
            for kk in range(k):
                ii = order[kk]
                if pair1[i][ii] != pair2[j][img[ii]]:
                    ok = False
                    break
            if ok:
                used[j] = True
                img[i] = j
                if place(k + 1):
                    return True
                used[j] = False
                img[i] = -1
        return False

    return place(0)


# -- minor search ----------------------------------------------------------------


def has_minor(M: Matroid, N: Matroid):
    """Lexicographically least (C, D) with M/C\\D isomorphic to N, or None."""
    return _has_minor_cached(M, N)


@lru_cache(maxsize=500000)
def _has_minor_cached(M: Matroid, N: Matroid):
    rdiff = M.rank() - N.rank()
    ddiff = len(M.ground) - len(N.ground) - rdiff
    if rdiff < 0 or ddiff < 0:
        return None
    rN = N.rank()
    ground_sorted = sorted(M.ground, key=label_key)
    for C in itertools.combinations(ground_sorted, rdiff):
        if not M.is_independent(C):
            continue
        Mc = M.contract(C) if C else M
        rest = [e for e in ground_sorted if e not in C]
        for D in itertools.combinations(rest, ddiff):
            if Mc.rank(set(rest) - set(D)) != rN:
                continue
            sub = Mc.delete(D) if D else Mc
            if _fast_isomorphic(sub, N):
                return (frozenset(C), frozenset(D))
    return None


# -- catalog -----------------------------------------------------------------------


def uniform(r: int, n: int) -> Matroid:
    """U_{r,n} on ground set 1..n."""
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    ground = list(range(1, n + 1))
    return from_bases(ground, itertools.combinations(ground, r))


def graphic(edges, labels=None) -> Matroid:
    """Cycle matroid of a multigraph given as (u, v) endpoint pairs."""
    edges = list(edges)
    if labels is None:
        labels = list(range(1, len(edges) + 1))
    verts = sorted({u for u, v in edges} | {v for u, v in edges})
    vn = len(verts)
    vidx = {v: i for i, v in enumerate(verts)}
    rank = 0

    def forest_rank(subset):
        parent = list(range(vn))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        cnt = 0
        for k in subset:
            u, v = edges[k]
            ru, rv = find(vidx[u]), find(vidx[v])
            if ru != rv:
                parent[ru] = rv
                cnt += 1
        return cnt

    rank = forest_rank(range(len(edges)))
    bases = []
    for combo in itertools.combinations(range(len(edges)), rank):
        if forest_rank(combo) == rank:
            bases.append([labels[k] for k in combo])
    return from_bases(labels, bases)


def mk4() -> Matroid:
    """Cycle matroid of K4 on labels 1..6 (edges 12,13,14,23,24,34)."""
    return graphic([(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])


_FANO_LINES = [
    frozenset({1, 2, 3}),
    frozenset({1, 4, 5}),
    frozenset({1, 6, 7}),
    frozenset({2, 4, 6}),
    frozenset({2, 5, 7}),
    frozenset({3, 4, 7}),
    frozenset({3, 5, 6}),
]


def fano() -> Matroid:
    """The 7-point projective plane over GF(2)."""
    ground = list(range(1, 8))
    bases = [b for b in itertools.combinations(ground, 3) if frozenset(b) not in _FANO_LINES]
    return from_bases(ground, bases)


def nonfano() -> Matroid:
    """Fano with the line {3,5,6} relaxed to a basis."""
    ground = list(range(1, 8))
    relaxed = frozenset({3, 5, 6})
    bases = [
        b
        for b in itertools.combinations(ground, 3)
        if frozenset(b) not in _FANO_LINES or frozenset(b) == relaxed
    ]
    return from_bases(ground, bases)


def wheel(r: int) -> Matroid:
    """Rank-r wheel: spokes 1..r, rim r+1..2r."""
    if r < 2:
        raise ValueError("wheel needs rank >= 2")
    hub = 0
    edges = [(hub, i) for i in range(1, r + 1)]
    edges += [(i, i % r + 1) for i in range(1, r + 1)]
    return graphic(edges, labels=list(range(1, 2 * r + 1)))


def whirl(r: int) -> Matroid:
    """Rank-r whirl: the wheel with its rim circuit relaxed."""
    w = wheel(r)
    rim = list(range(r + 1, 2 * r + 1))
    masks = set(w.basis_masks())
    masks.add(w._mask(rim))
    return Matroid(w.ground, masks)
