"""Exact arithmetic for partial fields.

A partial field couples a commutative ring with a distinguished subgroup G
of its units, with -1 in G; a value "belongs" to the partial field when it
lies in G or is zero.  Supported kinds:

* ``gf2`` .. ``gf9``  -- prime-power Galois fields (q <= 9),
* ``regular``         -- integers with G = {1, -1},
* ``dyadic``          -- Z[1/2] with G = {+-2^k},
* ``product(a,b,..)`` -- finite direct products, values are tuples.

Galois-field values are ints 0..q-1 encoding polynomial coefficients in
base p; regular/dyadic values are exact Fractions.  All operations are
pure and fields are immutable, so instances can be shared freely.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = ["PartialField", "GaloisField", "Regular", "Dyadic", "Product", "partial_field"]

_GF_MODULI = {
    4: (2, 2, (1, 1, 1)),  # x^2 + x + 1 over GF(2)
    8: (2, 3, (1, 1, 0, 1)),  # x^3 + x + 1 over GF(2)
    9: (3, 2, (1, 0, 1)),  # x^2 + 1 over GF(3)
}


class PartialField:
    """Base interface; concrete kinds override the arithmetic."""

    name: str

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def validate(self, v) -> None:
        """Raise ValueError if v is not a well-formed ring value for this kind."""
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_unit(self, v) -> bool:
        """True iff v is invertible in the ambient ring."""
        raise NotImplementedError

    def inv(self, v):
        raise NotImplementedError

    def contains(self, v) -> bool:
        """Membership in G union {0}."""
        raise NotImplementedError

    def units(self, bound: int = 6) -> list:
        """The group G, truncated by an exponent bound for infinite kinds."""
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def format(self, v) -> str:
        raise NotImplementedError

    def det(self, rows: Sequence[Sequence]):
        """Exact determinant of a square array of ring values (1 for the 0x0 array)."""
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise ValueError("determinant of a non-square array")
        m = [list(r) for r in rows]
        for r in m:
            for v in r:
                self.validate(v)
        return self._det(m)

    def _det(self, m):
        # Cofactor expansion: sizes here stay small and it needs no division.
        n = len(m)
        if n == 0:
            return self.one
        if n == 1:
            return m[0][0]
        if n == 2:
            return self.sub(self.mul(m[0][0], m[1][1]), self.mul(m[0][1], m[1][0]))
        total = self.zero
        sign = self.one
        for j in range(n):
            if m[0][j] != self.zero:
                sub = [row[:j] + row[j + 1 :] for row in m[1:]]
                total = self.add(total, self.mul(self.mul(sign, m[0][j]), self._det(sub)))
            sign = self.neg(sign)
        return total

    def det_member(self, rows):
        """(determinant, membership in G union {0})."""
        d = self.det(rows)
        return d, self.contains(d)

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"

    def __eq__(self, other):
        return isinstance(other, PartialField) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


class GaloisField(PartialField):
    """GF(q) for prime powers q <= 9; every ring value is in G union {0}."""

    def __init__(self, q: int):
        if q in (2, 3, 5, 7):
            p, k, modulus = q, 1, None
        elif q in _GF_MODULI:
            p, k, modulus = _GF_MODULI[q]
        else:
            raise ValueError(f"unsupported field order {q}")
        self.q = q
        self.p = p
        self.k = k
        self.name = f"gf{q}"
        if k == 1:
            self._mul_table = None
        else:
            self._log, self._exp = self._build_tables(p, k, modulus)

    def _digits(self, v):
        return [(v // self.p**i) % self.p for i in range(self.k)]

    def _undigits(self, ds):
        return sum(d * self.p**i for i, d in enumerate(ds))

    def _build_tables(self, p, k, modulus):
        q = p**k

        def polymul(a, b):
            da, db = self._digits(a), self._digits(b)
            prod = [0] * (2 * k)
            for i, x in enumerate(da):
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
            # reduce modulo the defining polynomial (monic, degree k)
            for i in range(2 * k - 1, k - 1, -1):
                c = prod[i]
                if c:
                    prod[i] = 0
                    for j in range(k):
                        prod[i - k + j] = (prod[i - k + j] - c * modulus[j]) % p
            return self._undigits(prod[:k])

        for g in range(2, q):
            seen = []
            v = 1
            for _ in range(q - 1):
                v = polymul(v, g)
                seen.append(v)
            if len(set(seen)) == q - 1:
                exp = [0] * (q - 1)
                log = [0] * q
                v = 1
                for i in range(q - 1):
                    exp[i] = v
                    log[v] = i
                    v = polymul(v, g)
                return log, exp
        raise AssertionError("no primitive element found")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def validate(self, v):
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < self.q:
            raise ValueError(f"not a {self.name} value: {v!r}")

    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.q
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a):
        if self.k == 1:
            return (-a) % self.q
        return self._undigits([(-x) % self.p for x in self._digits(a)])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return (a * b) % self.q
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def is_unit(self, v):
        return v != 0

    def inv(self, v):
        if v == 0:
            raise ZeroDivisionError(f"0 is not invertible in {self.name}")
        if self.k == 1:
            return pow(v, self.q - 2, self.q)
        return self._exp[(-self._log[v]) % (self.q - 1)]

    def contains(self, v):
        self.validate(v)
        return True

    def units(self, bound: int = 6):
        return list(range(1, self.q))

    def elements(self):
        return list(range(self.q))

    def parse(self, s):
        v = int(s)
        self.validate(v)
        return v

    def format(self, v):
        return str(v)

    def _det(self, m):
        # Gaussian elimination over the field.
        n = len(m)
        det = self.one
        m = [row[:] for row in m]
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = self.neg(det)
            det = self.mul(det, m[c][c])
            ic = self.inv(m[c][c])
            for r in range(c + 1, n):
                if m[r][c] != 0:
                    f = self.mul(m[r][c], ic)
                    for j in range(c, n):
                        m[r][j] = self.sub(m[r][j], self.mul(f, m[c][j]))
        return det


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


class _FractionField(PartialField):
    """Shared arithmetic for the integer-based kinds (values are Fractions)."""

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, v):
        if not self.is_unit(v):
            raise ZeroDivisionError(f"{v} is not a unit of {self.name}")
        return 1 / v

    def parse(self, s):
        v = Fraction(s)
        self.validate(v)
        return v

    def format(self, v):
        return str(v)

    def _det(self, m):
        # Fraction-valued Gaussian elimination; exact over Q.
        n = len(m)
        det = Fraction(1)
        m = [row[:] for row in m]
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det *= m[c][c]
            for r in range(c + 1, n):
                if m[r][c] != 0:
                    f = m[r][c] / m[c][c]
                    for j in range(c, n):
                        m[r][j] -= f * m[c][j]
        return det


class Regular(_FractionField):
    """Integers with unit group {1, -1}; the totally-unimodular regime."""

    name = "regular"

    def validate(self, v):
        if not isinstance(v, Fraction) or v.denominator != 1:
            raise ValueError(f"not a regular value (need an integer Fraction): {v!r}")

    def is_unit(self, v):
        return v == 1 or v == -1

    def contains(self, v):
        self.validate(v)
        return v in (0, 1, -1)

    def units(self, bound: int = 6):
        return [Fraction(1), Fraction(-1)]


class Dyadic(_FractionField):
    """Z[1/2] with unit group {+-2^k}."""

    name = "dyadic"

    def validate(self, v):
        if not isinstance(v, Fraction) or not _is_pow2(v.denominator):
            raise ValueError(f"not a dyadic value (denominator must be a power of 2): {v!r}")

    def is_unit(self, v):
        return v != 0 and _is_pow2(abs(v.numerator)) and _is_pow2(v.denominator)

    def contains(self, v):
        self.validate(v)
        return v == 0 or self.is_unit(v)

    def units(self, bound: int = 6):
        out = []
        for k in range(-bound, bound + 1):
            out.append(Fraction(2) ** k)
            out.append(-(Fraction(2) ** k))
        return out


class Product(PartialField):
    """Finite direct product; values are tuples, membership is componentwise."""

    def __init__(self, components: Iterable[PartialField]):
        self.components = tuple(components)
        if not self.components:
            raise ValueError("empty product")
        self.name = "product(" + ",".join(c.name for c in self.components) + ")"

    @property
    def zero(self):
        return tuple(c.zero for c in self.components)

    @property
    def one(self):
        return tuple(c.one for c in self.components)

    def validate(self, v):
        if not isinstance(v, tuple) or len(v) != len(self.components):
            raise ValueError(f"not a {self.name} value: {v!r}")
        for c, x in zip(self.components, v):
            c.validate(x)

    def add(self, a, b):
        return tuple(c.add(x, y) for c, x, y in zip(self.components, a, b))

    def neg(self, a):
        return tuple(c.neg(x) for c, x in zip(self.components, a))

    def mul(self, a, b):
        return tuple(c.mul(x, y) for c, x, y in zip(self.components, a, b))

    def is_unit(self, v):
        return all(c.is_unit(x) for c, x in zip(self.components, v))

    def inv(self, v):
        if not self.is_unit(v):
            raise ZeroDivisionError(f"{v} is not a unit of {self.name}")
        return tuple(c.inv(x) for c, x in zip(self.components, v))

    def contains(self, v):
        self.validate(v)
        return all(c.contains(x) for c, x in zip(self.components, v))

    def units(self, bound: int = 6):
        outs = [[]]
        for c in self.components:
            outs = [prefix + [u] for prefix in outs for u in c.units(bound)]
        return [tuple(o) for o in outs]

    def _det(self, m):
        per = []
        for i, c in enumerate(self.components):
            per.append(c._det([[v[i] for v in row] for row in m]))
        return tuple(per)

    def parse(self, s):
        s = s.strip()
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError(f"bad product value: {s!r}")
        parts = s[1:-1].split(",")
        if len(parts) != len(self.components):
            raise ValueError(f"bad product arity: {s!r}")
        return tuple(c.parse(p) for c, p in zip(self.components, parts))

    def format(self, v):
        return "(" + ",".join(c.format(x) for c, x in zip(self.components, v)) + ")"


@lru_cache(maxsize=None)
def partial_field(name: str) -> PartialField:
    """Resolve a field name: gf2..gf9, regular, dyadic, product(a,b,...)."""
    name = name.strip().lower()
    if name.startswith("gf"):
        return GaloisField(int(name[2:]))
    if name == "regular":
        return Regular()
    if name == "dyadic":
        return Dyadic()
    if name.startswith("product(") and name.endswith(")"):
        inner = name[len("product(") : -1]
        parts = []
        depth = 0
        cur = ""
        for ch in inner:
            if ch == "(" :
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "," and depth == 0:
                parts.append(cur)
                cur = ""
            else:
                cur += ch
        parts.append(cur)
        return Product(partial_field(p) for p in parts)
    raise ValueError(f"unknown partial field {name!r}")
