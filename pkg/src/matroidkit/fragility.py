"""Minor-relative element classification, gadgets, and basis quality checks.

Everything here is evaluated exactly by exhaustive search.  Universal
quantifiers over bases and companion matrices run inside an explicit
budget and report UNDECIDED when it is exhausted, rather than silently
truncating.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dfield
from typing import Optional, Union

from .connectivity import is_3connected
from .matroid import Matroid, has_minor, label_key
from .pmatrix import (
    PMatrix,
    enumerate_representations,
    incriminates,
    matroid_from,
    NotPMatrixError,
)

__all__ = [
    "UNDECIDED",
    "ElementClassification",
    "classify_elements",
    "is_fragile",
    "robust_elements",
    "strong_elements",
    "confining_set_find",
    "Gadget",
    "GadgetContext",
    "GadgetOutcome",
    "gadget_classify",
    "gadget_blocking",
    "mega_gadget_check",
    "SearchOutcome",
    "companion_classes",
    "is_strengthened_basis",
    "is_bolstered_basis",
]

UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class ElementClassification:
    """Per-element deletable/contractible flags relative to a minor family."""

    flags: dict

    def deletable(self, e) -> bool:
        return self.flags[e][0]

    def contractible(self, e) -> bool:
        return self.flags[e][1]

    def essential(self, e) -> bool:
        return not self.flags[e][0] and not self.flags[e][1]

    def flexible(self, e) -> bool:
        return self.flags[e][0] and self.flags[e][1]

    def essentials(self) -> frozenset:
        return frozenset(e for e in self.flags if self.essential(e))

    def flexibles(self) -> frozenset:
        return frozenset(e for e in self.flags if self.flexible(e))


def _as_family(Ns):
    if isinstance(Ns, Matroid):
        return (Ns,)
    return tuple(Ns)


def _family_minor(M: Matroid, Ns) -> bool:
    return any(has_minor(M, N) is not None for N in Ns)


def classify_elements(M: Matroid, Ns) -> ElementClassification:
    """Deletable/contractible flags for every element, against the family Ns."""
    Ns = _as_family(Ns)
    if not _family_minor(M, Ns):
        raise ValueError("the matroid has no minor in the target family")
    flags = {}
    for e in M.ground:
        dele = _family_minor(M.delete([e]), Ns)
        cont = _family_minor(M.contract([e]), Ns)
        flags[e] = (dele, cont)
    return ElementClassification(flags)


def is_fragile(M: Matroid, Ns) -> bool:
    """Has a minor in the family, and no element is both deletable and contractible."""
    cls = classify_elements(M, Ns)
    return not cls.flexibles()


def robust_elements(M: Matroid, N: Matroid, B) -> frozenset:
    """Basis elements whose contraction, and cobasis elements whose deletion,
    keep an N-minor."""
    B = frozenset(B)
    if not M.is_basis(B):
        raise ValueError("B is not a basis")
    out = set()
    for e in M.ground:
        sub = M.contract([e]) if e in B else M.delete([e])
        if has_minor(sub, N) is not None:
            out.add(e)
    return frozenset(out)


def strong_elements(M: Matroid, N: Matroid, B) -> frozenset:
    """Like robust, but the simplified contraction / cosimplified deletion
    must additionally be 3-connected."""
    B = frozenset(B)
    if not M.is_basis(B):
        raise ValueError("B is not a basis")
    out = set()
    for e in M.ground:
        sub = M.contract([e]).simplify() if e in B else M.delete([e]).cosimplify()
        if is_3connected(sub) and has_minor(sub, N) is not None:
            out.add(e)
    return frozenset(out)


def confining_set_find(M: Matroid, N: Matroid, B1, x1=None, y1=None) -> Optional[frozenset]:
    """A 4-element cosegment, or a one-point union of two triads with a strong
    cobasis element, meeting B1 in exactly the incriminating pair.

    When x1/y1 are omitted the pair is unverified and any 2-element trace
    in B1 is accepted.  Returns the least candidate by (size, labels).
    """
    B1 = frozenset(B1)
    if not M.is_basis(B1):
        raise ValueError("B1 is not a basis")
    want_pair = None if x1 is None else frozenset({x1, y1})
    trids = [frozenset(t) for t in M.triads()]
    candidates = []
    from .structure import cosegments

    for coseg in cosegments(M):
        for G in itertools.combinations(sorted(coseg, key=label_key), 4):
            G = frozenset(G)
            trace = G & B1
            if want_pair is not None and trace != want_pair:
                continue
            if want_pair is None and len(trace) != 2:
                continue
            # re-verify the defining property
            if not all(frozenset(t) in set(trids) for t in itertools.combinations(G, 3)):
                raise RuntimeError("cosegment candidate fails the triad recheck")
            candidates.append(G)
    strong = None
    for T, T2 in itertools.combinations(trids, 2):
        if len(T & T2) != 1:
            continue
        G = T | T2
        trace = G & B1
        if want_pair is not None and trace != want_pair:
            continue
        if want_pair is None and len(trace) != 2:
            continue
        if strong is None:
            strong = strong_elements(M, N, B1)
        if (G - B1) & strong:
            candidates.append(G)
    if not candidates:
        return None
    return min(candidates, key=lambda g: (len(g), sorted(g, key=label_key)))


@dataclass(frozen=True)
class Gadget:
    gtype: str  # "I", "II", "III"
    x: object
    y: object
    u: object
    z: object = None
    w: object = None
    blocker: object = None
    fully_blocks: Optional[bool] = None

    def support(self) -> frozenset:
        s = {self.x, self.y, self.u}
        if self.gtype in ("II", "III"):
            s.add(self.z)
        if self.gtype == "III":
            s.add(self.w)
        return frozenset(s)

    def as_tuple(self):
        if self.gtype == "I":
            return (frozenset({self.x, self.y}), self.u)
        if self.gtype == "II":
            return (self.x, self.y, self.u, self.z)
        return (self.x, self.y, self.u, self.z, self.w)


@dataclass(frozen=True)
class GadgetContext:
    """The working record around a delete pair: matroid, target minor,
    companion matrix, basis, and the incriminating pair inside the basis."""

    M: Matroid
    N: Matroid
    a: object
    b: object
    B: frozenset
    A: PMatrix
    x: object
    y: object

    def __post_init__(self):
        object.__setattr__(self, "B", frozenset(self.B))
        if {self.x, self.y} - self.B:
            raise ValueError("x and y must lie in the basis B")
        if {self.a, self.b} & self.B:
            raise ValueError("a and b must avoid the basis B")
        if set(self.A.rows) != set(self.B):
            raise ValueError("matrix rows must be the basis B")
        if set(self.A.cols) != set(self.M.ground) - self.B:
            raise ValueError("matrix columns must be the cobasis")

    def quad(self) -> frozenset:
        return frozenset({self.x, self.y, self.a, self.b})

    def deleted(self) -> Matroid:
        return self.M.delete([self.a, self.b])


@dataclass
class GadgetOutcome:
    gadget: Optional[Gadget]
    status: str  # "ok", "fragile", "hypotheses_unmet"
    unmet: Optional[str] = None
    strong_candidates: tuple = ()
    flexibles: frozenset = dfield(default_factory=frozenset)


def _maximal_fan_sets(M: Matroid):
    from .structure import _fan_orderings

    orderings = _fan_orderings(M)
    by_set: dict = {}
    for o in orderings:
        by_set.setdefault(frozenset(o), []).append(o)
    sets = list(by_set)
    return {s: by_set[s] for s in sets if not any(s < t for t in sets)}


def gadget_classify(ctx: GadgetContext) -> GadgetOutcome:
    """Classify the obstruction around the incriminating pair.

    Returns a fragile outcome (no gadget) when the two-element deletion is
    fragile; otherwise locates the strong element u and assigns Type
    III/II/I, verifying the attached triad/cocircuit/triangle facts.
    Shape violations come back as hypotheses_unmet with the clause named.
    """
    M, N = ctx.M, ctx.N
    if incriminates(M, ctx.A, ctx.quad()) is None:
        raise ValueError("the quad {x,y,a,b} does not incriminate (M, A)")
    W = ctx.deleted()
    if not is_3connected(W):
        return GadgetOutcome(None, "hypotheses_unmet", "deleted pair is not 3-connected")
    if has_minor(W, N) is None:
        return GadgetOutcome(None, "hypotheses_unmet", "deleted pair has no target minor")
    cls = classify_elements(W, N)
    flex = cls.flexibles()
    if not flex:
        return GadgetOutcome(None, "fragile", flexibles=frozenset())
    Bw = ctx.B
    xy = {ctx.x, ctx.y}
    strong = strong_elements(W, N, Bw) - xy
    cand = sorted(strong & (set(W.ground) - Bw), key=label_key)
    if not cand:
        return GadgetOutcome(None, "hypotheses_unmet",
                             "no strong cobasis element outside the pair",
                             flexibles=flex)
    u = cand[0]
    robust = robust_elements(W, N, Bw)
    marked = flex | robust
    fan_sets = _maximal_fan_sets(W)

    def fan_matches(pattern):
        s = frozenset(pattern)
        if s not in fan_sets:
            return False
        for o in fan_sets[s]:
            if o == tuple(pattern) or o == tuple(reversed(pattern)):
                return True
        return False

    x, y = ctx.x, ctx.y
    type3 = None
    for z in sorted(Bw - xy, key=label_key):
        for w in sorted(set(W.ground) - Bw - {u}, key=label_key):
            if fan_matches((w, z, x, u, y)) and marked <= {u, x, y, z, w}:
                type3 = (z, w)
                break
        if type3:
            break
    type2 = None
    for z in sorted(Bw - xy, key=label_key):
        if fan_matches((z, u, x, y)) and marked <= {u, x, y, z}:
            type2 = z
            break
    type1_containment = marked <= {u, x, y}

    gadget = None
    if type3 and type3[1] in robust:
        z, w = type3
        gadget = Gadget("III", x, y, u, z, w)
    elif type2 is not None and type2 in robust:
        gadget = Gadget("II", x, y, u, type2)
    elif type3 and type3[0] in robust:
        gadget = Gadget("II", x, y, u, type3[0])
    elif type1_containment or type2 is not None or type3:
        gadget = Gadget("I", x, y, u)
    else:
        return GadgetOutcome(None, "hypotheses_unmet",
                             "flexible or robust elements escape every gadget shape",
                             tuple(cand), flex)

    # attached facts
    triads_u = [frozenset(t) for t in W.triads() if u in t]
    if triads_u != [frozenset({u, x, y})]:
        return GadgetOutcome(None, "hypotheses_unmet",
                             "the unique triad through u is not {u,x,y}",
                             tuple(cand), flex)
    if frozenset({x, y, u, ctx.a, ctx.b}) not in {frozenset(c) for c in M.cocircuits()}:
        return GadgetOutcome(None, "hypotheses_unmet",
                             "missing the five-element cocircuit {x,y,u,a,b}",
                             tuple(cand), flex)
    tris = {frozenset(t) for t in M.triangles()}
    if not any(frozenset({d, x, y}) in tris for d in (ctx.a, ctx.b)):
        return GadgetOutcome(None, "hypotheses_unmet",
                             "missing a triangle {d,x,y} with d in {a,b}",
                             tuple(cand), flex)
    blocker, fully = gadget_blocking(M, gadget, ctx.a, ctx.b)
    gadget = Gadget(gadget.gtype, x, y, u, gadget.z, gadget.w, blocker, fully)
    return GadgetOutcome(gadget, "ok", None, tuple(cand), flex)


def gadget_blocking(M: Matroid, g: Gadget, a, b):
    """Which of a, b blocks in the gadget, and whether it does so fully.

    a blocks when b falls in the closure of {x,y} and a in the coclosure of
    the gadget support plus b (symmetrically for b); the blocker blocks
    fully when it avoids the closure of the support.
    """
    sup = set(g.support())
    xy = [g.x, g.y]
    a_blocks = b in M.closure(xy) and a in M.coclosure(sup | {b})
    b_blocks = a in M.closure(xy) and b in M.coclosure(sup | {a})
    if a_blocks == b_blocks:
        raise ValueError(
            "blocking dichotomy violated: " +
            ("both" if a_blocks else "neither") + " of a, b qualifies"
        )
    blocker = a if a_blocks else b
    fully = blocker not in M.closure(sup)
    return blocker, fully


def mega_gadget_check(ctx_ab: GadgetContext, ctx_bb: GadgetContext,
                      u, u2, b2) -> tuple:
    """Chained two-pair configuration check; positional, clause by clause.

    ctx_ab certifies the gadget for the pair {a,b} with incriminating pair
    {x,y}; ctx_bb does the same for {b,b'}.  Returns (ok, clauses) where
    clauses is a list of (name, ok) in evaluation order.
    """
    M = ctx_ab.M
    if ctx_bb.M != M:
        raise ValueError("both contexts must concern the same matroid")
    a, b = ctx_ab.a, ctx_ab.b
    x, y = ctx_ab.x, ctx_ab.y
    if {ctx_bb.a, ctx_bb.b} != {b, b2}:
        raise ValueError("second context must delete {b, b'}")
    clauses = []

    def clause(name, ok):
        clauses.append((name, bool(ok)))
        return bool(ok)

    ok = True
    out_ab = gadget_classify(ctx_ab)
    g_ab = out_ab.gadget
    ok &= clause("gadget for {a,b} is Type I ({x,y},u)",
                 g_ab is not None and g_ab.gtype == "I"
                 and {g_ab.x, g_ab.y} == {x, y} and g_ab.u == u)
    ok &= clause("b lies in the closure of {x,y}", b in M.closure([x, y]))
    ok &= clause("a fully blocks in the gadget for {a,b}",
                 g_ab is not None and g_ab.blocker == a and g_ab.fully_blocks is True)
    out_bb = gadget_classify(ctx_bb)
    g_bb = out_bb.gadget
    shape_ok = False
    if g_bb is not None:
        if g_bb.gtype == "I":
            shape_ok = {g_bb.x, g_bb.y} == {u, y} and g_bb.u == u2
        elif g_bb.gtype == "II":
            shape_ok = (g_bb.x, g_bb.y, g_bb.u, g_bb.z) in ((u, y, u2, a), (y, u, u2, a))
    ok &= clause("gadget for {b,b'} is ({u,y},u') or (u,y,u',a)/(y,u,u',a)", shape_ok)
    ok &= clause("b' lies in the closure of {u,y}", b2 in M.closure([u, y]))
    ok &= clause("b fully blocks in the gadget for {b,b'}",
                 g_bb is not None and g_bb.blocker == b and g_bb.fully_blocks is True)
    return bool(ok), clauses


@dataclass
class SearchOutcome:
    value: Union[bool, str]  # True / False / UNDECIDED
    witness: Optional[dict] = None
    configs: int = 0

    def __bool__(self):
        return self.value is True


def companion_classes(M: Matroid, a, b, basis, field, max_size: int = 12):
    """All companion matrices of M for the pair {a,b} over the given basis,
    one per scaling class.

    Built by extending each representation of M minus the pair with one
    column for each of a and b, checked against the two single-deletions.
    """
    B = frozenset(basis)
    W = M.delete([a, b])
    if not W.is_basis(B) or not M.is_basis(B):
        raise ValueError("basis must work for both the matroid and the deletion")
    Ma, Mb = M.delete([a]), M.delete([b])
    rows = sorted(B, key=label_key)
    wcols = sorted(set(W.ground) - B, key=label_key)
    out = []
    for C in enumerate_representations(W, field, basis=B, max_size=max_size):
        cols_b = _extension_columns(C, Ma, b, field)
        cols_a = _extension_columns(C, Mb, a, field)
        for vb in cols_b:
            for va in cols_a:
                cols = wcols + [a, b]
                ent = []
                for x in rows:
                    row = [C.entry(x, ycol) for ycol in wcols]
                    row.append(va[x])
                    row.append(vb[x])
                    ent.append(row)
                out.append(PMatrix(field, rows, cols, ent))
    return out


def _extension_columns(C: PMatrix, Mplus: Matroid, newcol, field):
    """Columns v with [C | v] representing Mplus, one per scalar class."""
    rows = list(C.rows)
    B = frozenset(rows)
    support = [x for x in rows if Mplus.is_basis((B - {x}) | {newcol})]
    if not support:
        v = {x: field.zero for x in rows}
        A = PMatrix(field, rows, list(C.cols) + [newcol],
                    [list(C.entries[i]) + [field.zero] for i in range(len(rows))])
        try:
            if matroid_from(A) == Mplus:
                return [v]
        except NotPMatrixError:
            pass
        return []
    first = support[0]
    rest = support[1:]
    found = []
    for combo in itertools.product(field.units(), repeat=len(rest)):
        v = {x: field.zero for x in rows}
        v[first] = field.one
        v.update(dict(zip(rest, combo)))
        A = PMatrix(field, rows, list(C.cols) + [newcol],
                    [list(C.entries[i]) + [v[rows[i]]] for i in range(len(rows))])
        try:
            if matroid_from(A) == Mplus:
                found.append(v)
        except NotPMatrixError:
            continue
    return found


def _admissible_quads(M: Matroid, A: PMatrix, a, b, B):
    """Pairs {x', y'} in B whose quad with {a, b} incriminates (M, A)."""
    out = []
    for xp, yp in itertools.combinations(sorted(B, key=label_key), 2):
        if incriminates(M, A, frozenset({xp, yp, a, b})) is not None:
            out.append((xp, yp))
    return out


def is_strengthened_basis(ctx: GadgetContext, field=None, budget: int = 2000) -> SearchOutcome:
    """Either exactly one strong element outside the pair sitting in a triad
    with it, or no strong element outside the pair for any admissible
    basis/companion-matrix choice."""
    field = field or ctx.A.field
    W = ctx.deleted()
    xy = {ctx.x, ctx.y}
    strong = strong_elements(W, ctx.N, ctx.B) - xy
    if len(strong) == 1:
        u = next(iter(strong))
        if frozenset({u, ctx.x, ctx.y}) in {frozenset(t) for t in W.triads()}:
            return SearchOutcome(True, {"clause": "i", "u": u})
    if strong:
        return SearchOutcome(False, {"clause": "i", "extra_strong": sorted(strong, key=label_key)})
    configs = 0
    for Bp in sorted(W.bases(), key=lambda s: sorted(s, key=label_key)):
        for A1 in companion_classes(ctx.M, ctx.a, ctx.b, Bp, field):
            configs += 1
            if configs > budget:
                return SearchOutcome(UNDECIDED, {"configs": configs}, configs)
            for xp, yp in _admissible_quads(ctx.M, A1, ctx.a, ctx.b, Bp):
                extra = strong_elements(W, ctx.N, Bp) - {xp, yp}
                if extra:
                    return SearchOutcome(False, {
                        "clause": "ii", "basis": sorted(Bp, key=label_key),
                        "pair": (xp, yp), "strong": sorted(extra, key=label_key)},
                        configs)
    return SearchOutcome(True, {"clause": "ii"}, configs)


def is_bolstered_basis(ctx: GadgetContext, field=None, budget: int = 2000) -> SearchOutcome:
    """No admissible alternative choice shows more robust elements than B."""
    field = field or ctx.A.field
    strengthened = is_strengthened_basis(ctx, field, budget)
    if strengthened.value is not True:
        return SearchOutcome(strengthened.value, {"strengthened": strengthened.witness})
    W = ctx.deleted()
    xy = {ctx.x, ctx.y}
    strong = strong_elements(W, ctx.N, ctx.B) - xy
    configs = 0
    if not strong:
        base_count = len(robust_elements(W, ctx.N, ctx.B) - xy)
        for Bp in sorted(W.bases(), key=lambda s: sorted(s, key=label_key)):
            for A1 in companion_classes(ctx.M, ctx.a, ctx.b, Bp, field):
                configs += 1
                if configs > budget:
                    return SearchOutcome(UNDECIDED, {"configs": configs}, configs)
                for xp, yp in _admissible_quads(ctx.M, A1, ctx.a, ctx.b, Bp):
                    other = len(robust_elements(W, ctx.N, Bp) - {xp, yp})
                    if other > base_count:
                        return SearchOutcome(False, {
                            "basis": sorted(Bp, key=label_key), "pair": (xp, yp),
                            "robust": other, "baseline": base_count}, configs)
        return SearchOutcome(True, None, configs)
    u = next(iter(strong))
    base_count = len(robust_elements(W, ctx.N, ctx.B))
    for Bp in sorted(W.bases(), key=lambda s: sorted(s, key=label_key)):
        if not xy <= Bp or u in Bp:
            continue
        for A1 in companion_classes(ctx.M, ctx.a, ctx.b, Bp, field):
            configs += 1
            if configs > budget:
                return SearchOutcome(UNDECIDED, {"configs": configs}, configs)
            if incriminates(ctx.M, A1, ctx.quad()) is None:
                continue
            if strong_elements(W, ctx.N, Bp) != {u}:
                continue
            other = len(robust_elements(W, ctx.N, Bp))
            if other > base_count:
                return SearchOutcome(False, {
                    "basis": sorted(Bp, key=label_key), "robust": other,
                    "baseline": base_count}, configs)
    return SearchOutcome(True, None, configs)
