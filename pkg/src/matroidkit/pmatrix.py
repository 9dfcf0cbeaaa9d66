"""Labeled matrices over a partial field.

A PMatrix carries disjoint row and column label sets; rows play the role
of a distinguished basis when the matrix is read as a representation.
The module covers the subdeterminant membership test, basis extraction,
pivoting, scaling equivalence, companion matrices and incrimination, and
brute-force representation enumeration over small Galois fields.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .matroid import Matroid, from_bases, label_key
from .pfield import PartialField, partial_field

__all__ = [
    "PMatrix",
    "NotPMatrixError",
    "IncriminationKind",
    "IncriminationWitness",
    "is_p_matrix",
    "matroid_from",
    "scaling_equivalent",
    "companion_check",
    "incriminates",
    "incrimination_status",
    "allowable_pivot",
    "enumerate_representations",
    "is_stabilized_by",
]

SIZE_LIMIT = 20


class NotPMatrixError(ValueError):
    """A subdeterminant fell outside the partial field; carries the subset."""

    def __init__(self, witness):
        self.witness = frozenset(witness)
        super().__init__(f"subdeterminant outside the partial field at {sorted(witness, key=label_key)}")


class PMatrix:
    """Immutable X x Y matrix with entries in a partial field's ring."""

    __slots__ = ("field", "rows", "cols", "entries", "_ri", "_ci")

    def __init__(self, field: PartialField, rows: Sequence, cols: Sequence, entries):
        self.field = field
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise ValueError("duplicate labels")
        if set(self.rows) & set(self.cols):
            raise ValueError("row and column labels must be disjoint")
        entries = tuple(tuple(r) for r in entries)
        if len(entries) != len(self.rows) or any(len(r) != len(self.cols) for r in entries):
            raise ValueError("entry array shape does not match labels")
        for r in entries:
            for v in r:
                field.validate(v)
        self.entries = entries
        self._ri = {x: i for i, x in enumerate(self.rows)}
        self._ci = {y: j for j, y in enumerate(self.cols)}

    def entry(self, x, y):
        return self.entries[self._ri[x]][self._ci[y]]

    def labels(self):
        return set(self.rows) | set(self.cols)

    def submatrix(self, Z) -> "PMatrix":
        """A[Z]: the submatrix induced by rows in Z and columns in Z."""
        Z = set(Z)
        rs = [x for x in self.rows if x in Z]
        cs = [y for y in self.cols if y in Z]
        return self._select(rs, cs)

    def drop(self, Z) -> "PMatrix":
        """A - Z: delete the rows and columns listed in Z."""
        Z = set(Z)
        rs = [x for x in self.rows if x not in Z]
        cs = [y for y in self.cols if y not in Z]
        return self._select(rs, cs)

    def _select(self, rs, cs) -> "PMatrix":
        ent = [[self.entry(x, y) for y in cs] for x in rs]
        return PMatrix(self.field, rs, cs, ent)

    def det(self):
        if len(self.rows) != len(self.cols):
            raise ValueError("determinant of a non-square matrix")
        return self.field.det(self.entries)

    def pivot(self, x, y) -> "PMatrix":
        """Exchange row label x and column label y by the pivot transformation."""
        f = self.field
        a = self.entry(x, y)
        if a == f.zero:
            raise ValueError(f"cannot pivot on zero entry ({x!r}, {y!r})")
        if not f.is_unit(a):
            raise ValueError(f"pivot entry {f.format(a)} is not a unit of {f.name}")
        ainv = f.inv(a)
        new_rows = tuple(y if r == x else r for r in self.rows)
        new_cols = tuple(x if c == y else c for c in self.cols)
        ent = []
        for u in new_rows:
            row = []
            for v in new_cols:
                if u == y and v == x:
                    w = ainv
                elif u == y:
                    w = f.mul(ainv, self.entry(x, v))
                elif v == x:
                    w = f.neg(f.mul(ainv, self.entry(u, y)))
                else:
                    w = f.sub(self.entry(u, v), f.mul(f.mul(ainv, self.entry(u, y)), self.entry(x, v)))
                row.append(w)
            ent.append(row)
        return PMatrix(f, new_rows, new_cols, ent)

    def __eq__(self, other):
        if not isinstance(other, PMatrix):
            return NotImplemented
        if self.field != other.field:
            return False
        if set(self.rows) != set(other.rows) or set(self.cols) != set(other.cols):
            return False
        return all(
            self.entry(x, y) == other.entry(x, y) for x in self.rows for y in self.cols
        )

    def __hash__(self):
        key = (self.field.name, frozenset(self.rows), frozenset(self.cols),
               frozenset(((x, y), self.entry(x, y)) for x in self.rows for y in self.cols))
        return hash(key)

    def to_dict(self):
        f = self.field
        return {
            "field": f.name,
            "rows": list(self.rows),
            "cols": list(self.cols),
            "entries": [[f.format(v) for v in row] for row in self.entries],
        }

    @classmethod
    def from_dict(cls, d) -> "PMatrix":
        f = partial_field(d["field"])
        ent = [[f.parse(s) for s in row] for row in d["entries"]]
        return cls(f, d["rows"], d["cols"], ent)

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(v) for v in row) for row in self.entries)
        return f"PMatrix({self.field.name}, {list(self.rows)}x{list(self.cols)}: {body})"


def _square_subsets(A: PMatrix):
    """All (rows S, cols T) index pairs with |S| = |T|, by size then label order."""
    X, Y = A.rows, A.cols
    for k in range(0, min(len(X), len(Y)) + 1):
        pairs = []
        for S in itertools.combinations(X, k):
            for T in itertools.combinations(Y, k):
                z = tuple(sorted(S + T, key=label_key))
                pairs.append((z, S, T))
        pairs.sort(key=lambda p: p[0])
        yield from pairs


def is_p_matrix(A: PMatrix, want_witness: bool = False):
    """Whether every subdeterminant lies in the partial field.

    Returns bool, or (bool, first failing subset ordered by size then labels)
    when want_witness is set.
    """
    if len(A.rows) + len(A.cols) > SIZE_LIMIT:
        raise ValueError(f"matrix larger than {SIZE_LIMIT} labels")
    f = A.field
    for z, S, T in _square_subsets(A):
        sub = [[A.entry(x, y) for y in T] for x in S]
        if not f.contains(f.det(sub)):
            return (False, frozenset(z)) if want_witness else False
    return (True, None) if want_witness else True


def matroid_from(A: PMatrix) -> Matroid:
    """The matroid on rows + cols whose bases come from nonzero subdeterminants.

    Requires A to be a P-matrix; the result is validated against the
    exchange axiom on construction.
    """
    if len(A.rows) + len(A.cols) > SIZE_LIMIT:
        raise ValueError(f"matrix larger than {SIZE_LIMIT} labels")
    f = A.field
    X = A.rows
    bases = []
    for z, S, T in _square_subsets(A):
        sub = [[A.entry(x, y) for y in T] for x in S]
        d = f.det(sub)
        if not f.contains(d):
            raise NotPMatrixError(z)
        if d != f.zero:
            bases.append((set(X) - set(S)) | set(T))
    return from_bases(list(X) + list(A.cols), bases)


def _ratio(f: PartialField, a, b):
    """a / b in the fraction field of the ring (b nonzero)."""
    if isinstance(a, tuple):
        return tuple(_ratio(c, x, y) for c, x, y in zip(f.components, a, b))
    if isinstance(a, Fraction):
        return a / b
    return f.mul(a, f.inv(b))


def _in_group(f: PartialField, v) -> bool:
    try:
        return v != f.zero and f.contains(v)
    except ValueError:
        return False


def scaling_equivalent(A1: PMatrix, A2: PMatrix) -> bool:
    """Whether row/column scalings by group elements carry A1 to A2.

    Anchors one scale per connected component of the nonzero support and
    propagates; the residual global scale per component is itself forced
    into the group, so propagation plus a membership sweep is complete.
    """
    if A1.field != A2.field:
        raise ValueError("scaling equivalence needs a common partial field")
    if set(A1.rows) != set(A2.rows) or set(A1.cols) != set(A2.cols):
        raise ValueError("label mismatch")
    f = A1.field
    zero = f.zero
    for x in A1.rows:
        for y in A1.cols:
            if (A1.entry(x, y) == zero) != (A2.entry(x, y) == zero):
                return False
    scale: dict = {}
    for start in list(A1.rows) + list(A1.cols):
        node = ("r", start) if start in A1._ri else ("c", start)
        if node in scale:
            continue
        scale[node] = f.one
        queue = [node]
        while queue:
            kind, lab = queue.pop()
            if kind == "r":
                for y in A1.cols:
                    if A1.entry(lab, y) == zero:
                        continue
                    rho = _ratio(f, A2.entry(lab, y), A1.entry(lab, y))
                    want = _ratio(f, rho, scale[("r", lab)])
                    if ("c", y) in scale:
                        if scale[("c", y)] != want:
                            return False
                    else:
                        scale[("c", y)] = want
                        queue.append(("c", y))
            else:
                for x in A1.rows:
                    if A1.entry(x, lab) == zero:
                        continue
                    rho = _ratio(f, A2.entry(x, lab), A1.entry(x, lab))
                    want = _ratio(f, rho, scale[("c", lab)])
                    if ("r", x) in scale:
                        if scale[("r", x)] != want:
                            return False
                    else:
                        scale[("r", x)] = want
                        queue.append(("r", x))
    return all(_in_group(f, v) for v in scale.values())


def companion_check(M: Matroid, A: PMatrix, a, b) -> bool:
    """Whether deleting column a (resp. b) from A represents M\\a (resp. M\\b)."""
    if a not in A.cols or b not in A.cols or a == b:
        raise ValueError("a and b must be distinct column labels")
    if set(M.ground) != A.labels():
        raise ValueError("ground set and matrix labels differ")
    for e in (a, b):
        Ae = A.drop({e})
        try:
            Me = matroid_from(Ae)
        except NotPMatrixError:
            return False
        if Me != M.delete([e]):
            return False
    return True


class IncriminationKind(Enum):
    NOT_IN_GROUP = "det_not_in_group"
    ZERO_BUT_BASIS = "det_zero_but_basis"
    NONZERO_BUT_DEPENDENT = "det_nonzero_but_dependent"


@dataclass(frozen=True)
class IncriminationWitness:
    elements: frozenset
    kind: IncriminationKind

    def sorted_elements(self):
        return sorted(self.elements, key=label_key)


def incriminates(M: Matroid, A: PMatrix, Z) -> Optional[IncriminationWitness]:
    """Check the three incrimination conditions for the square submatrix A[Z]."""
    Z = frozenset(Z)
    B = set(A.rows)
    if not M.is_basis(B):
        raise ValueError("matrix rows are not a basis of the matroid")
    S = [x for x in A.rows if x in Z]
    T = [y for y in A.cols if y in Z]
    if len(S) != len(T):
        raise ValueError("A[Z] is not square")
    f = A.field
    d = f.det([[A.entry(x, y) for y in T] for x in S])
    swapped = B ^ Z
    if not f.contains(d):
        return IncriminationWitness(Z, IncriminationKind.NOT_IN_GROUP)
    if d == f.zero and M.is_basis(swapped):
        return IncriminationWitness(Z, IncriminationKind.ZERO_BUT_BASIS)
    if d != f.zero and not M.is_independent(swapped):
        return IncriminationWitness(Z, IncriminationKind.NONZERO_BUT_DEPENDENT)
    return None


def incrimination_status(M: Matroid, A: PMatrix) -> Optional[IncriminationWitness]:
    """None when A is a P-matrix representing M exactly; else the least witness.

    The witness minimizes |Z| and then the sorted label tuple.
    """
    if len(M.ground) > 16:
        raise ValueError("ground set too large")
    if set(M.ground) != A.labels():
        raise ValueError("shape mismatch: labels differ from the ground set")
    if not M.is_basis(A.rows):
        raise ValueError("shape mismatch: matrix rows are not a basis")
    try:
        if matroid_from(A) == M:
            return None
    except NotPMatrixError:
        pass
    for z, S, T in _square_subsets(A):
        w = incriminates(M, A, frozenset(z))
        if w is not None:
            return w
    raise AssertionError("no incriminating set found for a non-representation")


def allowable_pivot(M: Matroid, A: PMatrix, quad, p, q) -> bool:
    """Whether pivoting on (p, q) carries the incriminating quad along.

    The quad must incriminate (M, A); the target quad is quad ^ {p,q} when
    the pivot meets it and quad itself otherwise.
    """
    quad = frozenset(quad)
    if incriminates(M, A, quad) is None:
        raise ValueError("the given quad does not incriminate the pair")
    if A.entry(p, q) == A.field.zero:
        raise ValueError("cannot pivot on a zero entry")
    Ap = A.pivot(p, q)
    target = quad ^ {p, q} if quad & {p, q} else quad
    return incriminates(M, Ap, target) is not None


def _support_forest(rows, cols, support):
    """Spanning forest edges of the bipartite support graph."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in rows:
        parent[("r", x)] = ("r", x)
    for y in cols:
        parent[("c", y)] = ("c", y)
    forest = set()
    for x, y in support:
        rx, ry = find(("r", x)), find(("c", y))
        if rx != ry:
            parent[rx] = ry
            forest.add((x, y))
    return forest


def enumerate_representations(M: Matroid, field: PartialField, basis=None,
                              max_size: int = 10) -> list:
    """All B x B* representations of M over a finite field, one per scaling class.

    The support is forced by the fundamental graph of the chosen basis, a
    spanning forest of it is normalized to 1, and the remaining entries
    range over the nonzero field elements.  Empty iff M has no such
    representation.
    """
    if len(M.ground) > max_size:
        raise ValueError(f"ground set larger than {max_size}")
    units = field.units()
    if len(units) > 8:
        raise ValueError(f"field too large for exhaustive enumeration: {field.name}")
    if basis is None:
        B = min(M.bases(), key=lambda b: sorted(b, key=label_key))
    else:
        B = frozenset(basis)
        if not M.is_basis(B):
            raise ValueError("not a basis of the matroid")
    rows = sorted(B, key=label_key)
    cols = sorted(set(M.ground) - B, key=label_key)
    support = [
        (x, y) for x in rows for y in cols if M.is_basis((B - {x}) | {y})
    ]
    forest = _support_forest(rows, cols, support)
    free = [e for e in support if e not in forest]
    found = []
    for combo in itertools.product(units, repeat=len(free)):
        vals = {e: field.one for e in forest}
        vals.update(dict(zip(free, combo)))
        ent = [[vals.get((x, y), field.zero) for y in cols] for x in rows]
        A = PMatrix(field, rows, cols, ent)
        try:
            if matroid_from(A) == M:
                found.append(A)
        except NotPMatrixError:
            continue
    # forest normalization already separates scaling classes; dedup defensively
    out = []
    for A in found:
        if not any(scaling_equivalent(A, Bm) for Bm in out):
            out.append(A)
    return out


def is_stabilized_by(M: Matroid, N: Matroid, field: PartialField, embedding: dict,
                     max_size: int = 10) -> bool:
    """Brute-force check that representations of M agreeing on the embedded copy
    of N up to scaling are themselves scaling equivalent."""
    img = {embedding[e] for e in N.ground}
    if len(img) != len(N.ground) or not img <= set(M.ground):
        raise ValueError("embedding is not injective into the ground set")
    Nm = N.relabel(embedding)
    if has_minor_on_labels(M, Nm) is None:
        raise ValueError("the embedded copy is not a minor in the stated position")
    for Xp in (sorted(b, key=label_key) for b in sorted(Nm.bases(), key=lambda b: sorted(b, key=label_key))):
        Yp = sorted(set(Nm.ground) - set(Xp), key=label_key)
        for Bfull in sorted(M.bases(), key=lambda b: sorted(b, key=label_key)):
            if not (set(Xp) <= Bfull and not (set(Yp) & Bfull)):
                continue
            reps = enumerate_representations(M, field, basis=Bfull, max_size=max_size)
            good = []
            for A in reps:
                sub = A._select(list(Xp), list(Yp))
                try:
                    if matroid_from(sub) == Nm:
                        good.append((A, sub))
                except NotPMatrixError:
                    continue
            for (A1, s1), (A2, s2) in itertools.combinations(good, 2):
                if scaling_equivalent(s1, s2) and not scaling_equivalent(A1, A2):
                    return False
    return True


def has_minor_on_labels(M: Matroid, N: Matroid):
    """Witness (C, D) with M/C\\D equal to N label-for-label, or None."""
    rdiff = M.rank() - N.rank()
    ddiff = len(M.ground) - len(N.ground) - rdiff
    if rdiff < 0 or ddiff < 0:
        return None
    rest = sorted(set(M.ground) - set(N.ground), key=label_key)
    if len(rest) != rdiff + ddiff:
        return None
    for C in itertools.combinations(rest, rdiff):
        D = [e for e in rest if e not in C]
        if M.minor(C, D) == N:
            return (frozenset(C), frozenset(D))
    return None
