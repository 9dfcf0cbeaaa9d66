"""The connectivity function and separation machinery.

All sweeps run over bit masks against the matroid's cached rank table, so
exhaustive enumeration over the powerset stays cheap at <= 16 elements.
Separations are reported with the canonical side containing the least
ground set label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .matroid import Matroid, label_key

__all__ = [
    "connectivity",
    "Separation",
    "is_k_separating",
    "is_exactly_k_separating",
    "separations",
    "is_connected",
    "is_3connected",
    "is_3connected_up_to",
    "guts_contains",
    "coguts_contains",
    "vertical_3seps",
    "cyclic_3seps",
    "blocks",
    "fully_blocks",
    "is_path_of_kseps",
]


def connectivity(M: Matroid, X) -> int:
    """lambda(X) = r(X) + r(E - X) - r(M)."""
    m = M._mask(X)
    return int(M._table[m]) + int(M._table[M.full_mask ^ m]) - M.rank()


def _lam_mask(M: Matroid, m: int) -> int:
    return int(M._table[m]) + int(M._table[M.full_mask ^ m]) - M.rank()


def is_k_separating(M: Matroid, X, k: int) -> bool:
    return connectivity(M, X) < k


def is_exactly_k_separating(M: Matroid, X, k: int) -> bool:
    return connectivity(M, X) == k - 1


@dataclass(frozen=True)
class Separation:
    side: frozenset
    order: int
    exact: bool
    vertical: bool = False
    cyclic: bool = False
    guts_element: Optional[object] = None

    def sorted_side(self):
        return sorted(self.side, key=label_key)


def separations(M: Matroid, k: int, exact_only: bool = False):
    """All k-separations up to complementation.

    The reported side contains the least ground set label; vertical/cyclic
    flags are filled in for k = 3.
    """
    if k < 1:
        raise ValueError("separation order must be positive")
    n = len(M.ground)
    if n == 0:
        return []
    least = min(range(n), key=lambda i: label_key(M.ground[i]))
    anchor = 1 << least
    full = M.full_mask
    r = M.rank()
    rk = M._table
    dual_rk = None
    out = []
    for m in range(1 << n):
        if not (m & anchor):
            continue
        c = full ^ m
        if bin(m).count("1") < k or bin(c).count("1") < k:
            continue
        lam = int(rk[m]) + int(rk[c]) - r
        if lam >= k or (exact_only and lam != k - 1):
            continue
        vertical = cyclic = False
        if k == 3:
            vertical = min(int(rk[m]), int(rk[c])) >= 3
            if dual_rk is None:
                dual_rk = M.dual()._table
            cyclic = min(int(dual_rk[m]), int(dual_rk[c])) >= 3
        out.append(
            Separation(M._labels(m), k, exact=lam == k - 1, vertical=vertical, cyclic=cyclic)
        )
    out.sort(key=lambda s: (len(s.side), s.sorted_side()))
    return out


def is_connected(M: Matroid) -> bool:
    """No 1-separations; one-element matroids are connected unless a loop."""
    n = len(M.ground)
    if n <= 1:
        return n == 0 or not M.loops()
    return not separations(M, 1)


def is_3connected(M: Matroid) -> bool:
    return is_connected(M) and not separations(M, 2)


def _is_parallel_pair(M: Matroid, X) -> bool:
    X = set(X)
    return len(X) == 2 and not (X & M.loops()) and M.rank(X) == 1


def _is_parallel_class(M: Matroid, X) -> bool:
    return frozenset(X) in set(M.parallel_classes())


def is_3connected_up_to(M: Matroid, shapes=("series_pair",)) -> bool:
    """Connected, and every 2-separation has a side of one of the given shapes.

    Shapes: series_pair, series_class, parallel_pair, parallel_class.
    """
    if not is_connected(M):
        return False
    twos = separations(M, 2)
    if not twos:
        return True
    Md = M.dual()
    full = set(M.ground)

    def matches(side):
        for shape in shapes:
            dual_side = shape.startswith("series")
            mat = Md if dual_side else M
            if shape.endswith("pair") and _is_parallel_pair(mat, side):
                return True
            if shape.endswith("class") and _is_parallel_class(mat, side):
                return True
        return False

    for sep in twos:
        if not (matches(sep.side) or matches(full - sep.side)):
            return False
    return True


def guts_contains(M: Matroid, X, Y, Z) -> bool:
    """Z subset of cl(X - Z) intersect cl(Y - Z) for the partition (X, Y)."""
    X, Y, Z = set(X), set(Y), set(Z)
    if X & Y:
        raise ValueError("sides overlap")
    union = X | Y
    if union != set(M.ground) and union != set(M.ground) - Z:
        raise ValueError("(X, Y) must partition the ground set, possibly without Z")
    return Z <= (M.closure(X - Z) & M.closure(Y - Z))


def coguts_contains(M: Matroid, X, Y, Z) -> bool:
    return guts_contains(M.dual(), X, Y, Z)


def vertical_3seps(M: Matroid):
    """All (X, z, Y) with both "z moved" partitions vertical 3-separations
    and z in the guts; each triple reported once, X holding the least label."""
    n = len(M.ground)
    rk = M._table
    full = M.full_mask
    r = M.rank()
    out = []
    for zi in range(n):
        z = M.ground[zi]
        zbit = 1 << zi
        rest = full ^ zbit
        least = min((i for i in range(n) if i != zi), key=lambda i: label_key(M.ground[i]), default=None)
        if least is None:
            continue
        anchor = 1 << least
        # X runs over subsets of rest containing the anchor bit
        for m in range(1 << n):
            if m & zbit or not (m & anchor) or (m & ~rest):
                continue
            y = rest ^ m
            # (X u z, Y) and (X, Y u z) must both be vertical 3-separations
            mz = m | zbit
            yz = y | zbit
            if bin(mz).count("1") < 3 or bin(y).count("1") < 3:
                continue
            if bin(m).count("1") < 3 or bin(yz).count("1") < 3:
                continue
            lam1 = int(rk[mz]) + int(rk[y]) - r
            lam2 = int(rk[m]) + int(rk[yz]) - r
            if lam1 >= 3 or lam2 >= 3:
                continue
            if min(int(rk[mz]), int(rk[y])) < 3 or min(int(rk[m]), int(rk[yz])) < 3:
                continue
            # z in the guts: z in cl(X) and z in cl(Y)
            if rk[m | zbit] != rk[m] or rk[y | zbit] != rk[y]:
                continue
            out.append((M._labels(m), z, M._labels(y)))
    out.sort(key=lambda t: (label_key(t[1]), sorted(t[0], key=label_key)))
    return out


def cyclic_3seps(M: Matroid):
    return vertical_3seps(M.dual())


def blocks(M: Matroid, e, X) -> bool:
    """Whether adding e back raises the connectivity of X in M versus M \\ e."""
    X = set(X)
    if e in X:
        raise ValueError("e must avoid X")
    Md = M.delete([e])
    k = connectivity(Md, X)
    return connectivity(M, X) > k


def fully_blocks(M: Matroid, e, X, Y) -> bool:
    """Both sides blocked; cross-checked against the closure criterion."""
    X, Y = set(X), set(Y)
    if e in X or e in Y:
        raise ValueError("e must avoid both sides")
    if X & Y or X | Y != set(M.ground) - {e}:
        raise ValueError("(X, Y) must partition the ground set without e")
    Md = M.delete([e])
    k = connectivity(Md, X)
    by_lambda = connectivity(M, X) > k and connectivity(M, X | {e}) > k
    by_closure = e not in (M.closure(X) | M.closure(Y))
    if by_lambda != by_closure:
        raise RuntimeError("connectivity and closure criteria disagree (kernel bug)")
    return by_lambda


def is_path_of_kseps(M: Matroid, parts, k: int) -> bool:
    """Ordered partition whose prefixes are all exactly k-separating.

    Also enforces the end-cell sizes |X_1|, |X_m| >= 2.
    """
    parts = [set(p) for p in parts]
    if any(not p for p in parts):
        raise ValueError("empty cell in ordered partition")
    union = set()
    total = 0
    for p in parts:
        union |= p
        total += len(p)
    if union != set(M.ground) or total != len(M.ground):
        raise ValueError("cells must partition the ground set")
    if len(parts[0]) < 2 or len(parts[-1]) < 2:
        return False
    prefix = set()
    for p in parts[:-1]:
        prefix |= p
        if connectivity(M, prefix) != k - 1:
            return False
    return True
