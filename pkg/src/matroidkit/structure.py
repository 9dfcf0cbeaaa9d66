"""Segments, cosegments, fans, and delta-wye exchange.

The delta-wye move is built from the generalized parallel connection with
a copy of M(K4) glued along a triangle; the connection itself is computed
from its flat description (a set is a flat iff both traces are flats) by
closing to a fixpoint, then reading bases off the induced closure operator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .matroid import Matroid, canonical_form, from_bases, label_key

__all__ = [
    "segments",
    "cosegments",
    "FanOrdering",
    "fans",
    "triangle_triads",
    "gen_parallel_connection_mk4",
    "delta_y",
    "wye_delta",
    "OrbitResult",
    "delta_star_orbit",
]


def segments(M: Matroid):
    """Inclusion-maximal sets (>= 3 elements) whose 3-subsets are all triangles.

    Such a set picks one representative from each parallel class of a
    rank-2 flat, so all selections over every line are enumerated.
    """
    loops = M.loops()
    nonloops = [e for e in M.ground if e not in loops]
    lines = set()
    for e, f in itertools.combinations(nonloops, 2):
        if M.rank([e, f]) == 2:
            lines.add(M.closure([e, f]) - loops)
    out = set()
    for L in lines:
        members = sorted(L, key=label_key)
        classes = []
        seen = set()
        for e in members:
            if e in seen:
                continue
            cls = [f for f in members if f == e or M.rank([e, f]) == 1]
            seen.update(cls)
            classes.append(cls)
        if len(classes) < 3:
            continue
        for pick in itertools.product(*classes):
            out.add(frozenset(pick))
    # selections from different lines cannot nest, but dedup keeps this honest
    maximal = [s for s in out if not any(s < t for t in out)]
    return sorted(maximal, key=lambda s: (len(s), sorted(s, key=label_key)))


def cosegments(M: Matroid):
    return segments(M.dual())


@dataclass(frozen=True)
class FanOrdering:
    elements: tuple
    start_kind: str  # "triangle" or "triad"
    maximal: bool = True

    def __len__(self):
        return len(self.elements)


def _fan_orderings(M: Matroid):
    """Every ordering satisfying the fan alternation conditions, length >= 3."""
    tris = {frozenset(t) for t in M.triangles()}
    trids = {frozenset(t) for t in M.triads()}
    if not tris and not trids:
        return []
    ground = sorted(M.ground, key=label_key)
    found = []

    def extend(order):
        if len(order) >= 3:
            found.append(tuple(order))
        for nxt in ground:
            if nxt in order:
                continue
            if len(order) >= 2:
                if len(order) == 2:
                    trip = frozenset(order + [nxt])
                    if trip not in tris and trip not in trids:
                        continue
                else:
                    prev = frozenset(order[-3:])
                    trip = frozenset(order[-2:] + [nxt])
                    if prev in tris and trip not in trids:
                        continue
                    if prev in trids and trip not in tris:
                        continue
                    if prev not in tris and prev not in trids:
                        continue
            order.append(nxt)
            extend(order)
            order.pop()

    extend([])
    return found


def fans(M: Matroid):
    """All maximal fans, one FanOrdering per fan set.

    The reported ordering is the lexicographically least among the valid
    orderings of that set and their reversals; a fan that is both a
    triangle and a triad reports start_kind "triangle".
    """
    orderings = _fan_orderings(M)
    by_set: dict = {}
    for o in orderings:
        by_set.setdefault(frozenset(o), []).append(o)
    sets = list(by_set)
    maximal = [s for s in sets if not any(s < t for t in sets)]
    tris = {frozenset(t) for t in M.triangles()}
    out = []
    for s in maximal:
        candidates = []
        for o in by_set[s]:
            candidates.append(min(o, tuple(reversed(o)), key=lambda t: [label_key(e) for e in t]))
        best = min(candidates, key=lambda t: [label_key(e) for e in t])
        kind = "triangle" if frozenset(best[:3]) in tris else "triad"
        out.append(FanOrdering(best, kind, True))
    return sorted(out, key=lambda f: (len(f.elements), [label_key(e) for e in f.elements]))


def triangle_triads(M: Matroid):
    """3-sets that are simultaneously circuits and cocircuits."""
    trids = {frozenset(t) for t in M.triads()}
    return [t for t in M.triangles() if frozenset(t) in trids]


def _mk4_copy(T, labeling):
    """M(K4) on T + its complementary triad, with the stated cross triangles."""
    a, b, c = sorted(T, key=label_key)
    ap, bp, cp = labeling[a], labeling[b], labeling[c]
    ground = [a, b, c, ap, bp, cp]
    lines = [frozenset({a, b, c}), frozenset({a, bp, cp}), frozenset({ap, b, cp}), frozenset({ap, bp, c})]
    bases = [s for s in itertools.combinations(ground, 3) if frozenset(s) not in lines]
    return from_bases(ground, bases)


def gen_parallel_connection_mk4(M: Matroid, T, labeling=None) -> Matroid:
    """Glue a copy of M(K4) to M along the triangle T.

    `labeling` maps each element of T to its fresh opposite label;
    defaults to derived string labels.  The result has rank r(M) + 1 and
    restricts to M and to the K4 copy on the respective label sets.
    """
    T = frozenset(T)
    if len(T) != 3 or frozenset(T) not in {frozenset(t) for t in M.triangles()}:
        raise ValueError("T must be a triangle of the matroid")
    if labeling is None:
        labeling = {t: f"{t}'" for t in T}
    fresh = [labeling[t] for t in sorted(T, key=label_key)]
    if len(set(fresh)) != 3 or set(fresh) & set(M.ground):
        raise ValueError("labeling must give three fresh labels")
    K = _mk4_copy(T, labeling)
    E1 = set(M.ground)
    E2 = set(K.ground)
    ground = list(M.ground) + fresh

    def close(S):
        S = set(S)
        while True:
            nxt = set(M.closure(S & E1)) | set(K.closure(S & E2))
            if nxt == S:
                return S
            S = nxt

    def independent(X):
        X = set(X)
        return all(e not in close(X - {e}) for e in X)

    r = M.rank() + 1
    bases = [X for X in itertools.combinations(ground, r) if independent(X)]
    return from_bases(ground, bases)


def delta_y(M: Matroid, T) -> Matroid:
    """Delta-wye exchange on a coindependent triangle, same ground labels."""
    T = frozenset(T)
    if frozenset(T) not in {frozenset(t) for t in M.triangles()}:
        raise ValueError("T must be a triangle")
    if M.rank(set(M.ground) - T) != M.rank():
        raise ValueError("T must be coindependent (its complement must span)")
    labeling = {t: ("dy", t) for t in T}
    P = gen_parallel_connection_mk4(M, T, labeling)
    out = P.delete(T)
    return out.relabel({("dy", t): t for t in T})


def wye_delta(M: Matroid, Tstar) -> Matroid:
    """Wye-delta exchange on an independent triad: the dual of delta_y on the dual."""
    Tstar = frozenset(Tstar)
    if frozenset(Tstar) not in {frozenset(t) for t in M.triads()}:
        raise ValueError("T* must be a triad")
    if not M.is_independent(Tstar):
        raise ValueError("T* must be independent")
    return delta_y(M.dual(), Tstar).dual()


@dataclass
class OrbitResult:
    members: list
    complete: bool

    def canonical_keys(self):
        return {canonical_form(m) for m in self.members}


def delta_star_orbit(M: Matroid, max_steps: int = 64) -> OrbitResult:
    """Closure of {M, M*} under delta-wye moves, up to isomorphism.

    BFS with canonical-form dedup; stops at the expansion budget and
    reports whether the fixpoint was reached.
    """
    if len(M.ground) > 12:
        raise ValueError("orbit generation capped at 12 elements")
    seen = {}
    queue = []
    for start in (M, M.dual()):
        key = canonical_form(start)
        if key not in seen:
            seen[key] = start
            queue.append(start)
    steps = 0
    complete = True
    while queue:
        if steps >= max_steps:
            complete = False
            break
        cur = queue.pop(0)
        steps += 1
        nxt = []
        for T in cur.triangles():
            if cur.rank(set(cur.ground) - set(T)) == cur.rank():
                nxt.append(delta_y(cur, T))
        for Ts in cur.triads():
            if cur.is_independent(Ts):
                nxt.append(wye_delta(cur, Ts))
        for child in nxt:
            key = canonical_form(child)
            if key not in seen:
                seen[key] = child
                queue.append(child)
    return OrbitResult(list(seen.values()), complete)
