"""Exact arithmetic in towers of simple field extensions over Q or F_p.

An element of a tower with levels K_0 ⊂ K_1 ⊂ ... ⊂ K_m is stored as a nested
tuple: a level-j element is a tuple of ``deg_j`` level-(j-1) elements, and a
level-0 element is an ``mpq`` (over Q) or an ``int`` in ``range(p)``.  Tuples
always have full length, so equality of canonical forms is tuple equality.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from gmpy2 import is_square as _int_is_square, isqrt, mpq


class FieldError(Exception):
    pass


class ReduciblePolynomial(FieldError):
    pass


class NonMonic(FieldError):
    pass


class CharacteristicDividesN(FieldError):
    pass


class TowerMismatch(FieldError):
    pass


class NotAnAutomorphism(FieldError):
    pass


class ClosureTooLarge(FieldError):
    pass


class MissingRootOfUnity(FieldError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


def parse_rational(s) -> mpq:
    if isinstance(s, str):
        f = Fraction(s.strip())
        return mpq(f.numerator, f.denominator)
    if isinstance(s, Fraction):
        return mpq(s.numerator, s.denominator)
    return mpq(s)


def rational_sqrt(q):
    """Square root of a rational number, or None if it is not a square."""
    q = mpq(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    if _int_is_square(n) and _int_is_square(d):
        return mpq(isqrt(n), isqrt(d))
    return None


def cyclotomic_coeffs(n: int) -> list[int]:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial."""
    # t^n - 1 = prod_{d | n} Phi_d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _int_poly_divexact(num, cyclotomic_coeffs(d))
    return num


def _int_poly_divexact(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = a[k + len(b) - 1] // b[-1]
        out[k] = c
        for i, bi in enumerate(b):
            a[k + i] -= c * bi
    assert not any(a), "inexact division"
    return out


def multiplicative_order(a: int, n: int) -> int:
    if math.gcd(a, n) != 1:
        raise ValueError("not a unit")
    k, x = 1, a % n
    while x != 1 % n:
        x = x * a % n
        k += 1
    return k


class Level:
    __slots__ = ("name", "minpoly", "degree", "root_order")

    def __init__(self, name, minpoly, root_order=None):
        self.name = name
        self.minpoly = tuple(minpoly)  # raw coefficients at the previous level, low to high, monic
        self.degree = len(minpoly) - 1
        self.root_order = root_order

    def key(self):
        return (self.name, self.minpoly, self.root_order)


class FieldTower:
    """A tower K_0(a_1)(a_2)... with K_0 = Q (p = 0) or F_p."""

    def __init__(self, p: int = 0, levels=()):
        self.p = p
        self.levels = tuple(levels)
        self._zero = [mpq(0) if p == 0 else 0]
        self._one = [mpq(1) if p == 0 else 1]
        for lv in self.levels:
            self._zero.append((self._zero[-1],) * lv.degree)
            self._one.append((self._one[-1],) + (self._zero[-2],) * (lv.degree - 1))
        self._key = (p, tuple(lv.key() for lv in self.levels))
        self._hash = hash(self._key)

    # -- construction -------------------------------------------------

    @classmethod
    def rationals(cls) -> FieldTower:
        return cls(0)

    @classmethod
    def prime_field(cls, p: int) -> FieldTower:
        if p < 2 or any(p % q == 0 for q in range(2, isqrt(p) + 1)):
            raise ValueError(f"{p} is not prime")
        return cls(p)

    def __eq__(self, other):
        return isinstance(other, FieldTower) and (self is other or self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        base = "Q" if self.p == 0 else f"F{self.p}"
        if not self.levels:
            return base
        return base + "(" + ", ".join(lv.name for lv in self.levels) + ")"

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def degree(self) -> int:
        return math.prod(lv.degree for lv in self.levels)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_finite(self) -> bool:
        return self.p > 0

    @property
    def size(self) -> int:
        if not self.p:
            raise ValueError("infinite field")
        return self.p ** self.degree

    def sub_tower(self, m: int) -> FieldTower:
        return FieldTower(self.p, self.levels[:m])

    def degree_over(self, m: int) -> int:
        return math.prod(lv.degree for lv in self.levels[m:])

    def level_index(self, name) -> int:
        for j, lv in enumerate(self.levels):
            if lv.name == name:
                return j + 1
        raise KeyError(name)

    # -- elements -------------------------------------------------------

    def zero(self) -> FieldElement:
        return FieldElement(self, self._zero[-1])

    def one(self) -> FieldElement:
        return FieldElement(self, self._one[-1])

    def gen(self, which) -> FieldElement:
        j = which if isinstance(which, int) else self.level_index(which)
        lv = self.levels[j - 1]
        raw = (self._zero[j - 1], self._one[j - 1]) + (self._zero[j - 1],) * (lv.degree - 2)
        return FieldElement(self, self.embed_raw(raw, j))

    def gens(self) -> list[FieldElement]:
        return [self.gen(j) for j in range(1, self.depth + 1)]

    def base_scalar(self, x):
        if self.p == 0:
            return parse_rational(x)
        if isinstance(x, str):
            f = Fraction(x)
        elif isinstance(x, Fraction) or type(x).__name__ == "mpq":
            f = Fraction(int(x.numerator), int(x.denominator))
        else:
            return int(x) % self.p
        if f.denominator % self.p == 0:
            raise DivisionByZero(f"{x} has denominator divisible by {self.p}")
        return f.numerator * pow(f.denominator, -1, self.p) % self.p

    def __call__(self, x) -> FieldElement:
        return self.coerce(x)

    def coerce(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.tower == self:
                return x if x.tower is self else FieldElement(self, x.raw)
            if x.tower.p == self.p and _levels_prefix(x.tower, self):
                return FieldElement(self, self.embed_raw(x.raw, x.tower.depth))
            raise TowerMismatch(f"{x.tower!r} is not a sub-tower of {self!r}")
        return FieldElement(self, self.embed_raw(self.base_scalar(x), 0))

    def embed_raw(self, raw, lvl: int, target: int | None = None):
        """Embed a level-``lvl`` raw element into level ``target`` (default top)."""
        target = self.depth if target is None else target
        for j in range(lvl, target):
            raw = (raw,) + (self._zero[j],) * (self.levels[j].degree - 1)
        return raw

    def from_vector(self, vec) -> FieldElement:
        """Inverse of FieldElement.to_vector: base coordinates in the power basis."""
        vec = list(vec)

        def build(lvl, chunk):
            if lvl == 0:
                return chunk[0]
            d = self.levels[lvl - 1].degree
            step = len(chunk) // d
            return tuple(build(lvl - 1, chunk[i * step:(i + 1) * step]) for i in range(d))

        return FieldElement(self, build(self.depth, [self.base_scalar(v) for v in vec]))

    def elements(self):
        """Iterate over all elements of a finite tower in a canonical order."""
        if not self.p:
            raise ValueError("infinite field")
        for vec in itertools.product(range(self.p), repeat=self.degree):
            yield self.from_vector(vec)

    # -- raw arithmetic ---------------------------------------------------

    def _add(self, a, b, lvl):
        if lvl == 0:
            return (a + b) % self.p if self.p else a + b
        add = self._add
        return tuple(add(x, y, lvl - 1) for x, y in zip(a, b))

    def _sub(self, a, b, lvl):
        if lvl == 0:
            return (a - b) % self.p if self.p else a - b
        sub = self._sub
        return tuple(sub(x, y, lvl - 1) for x, y in zip(a, b))

    def _neg(self, a, lvl):
        if lvl == 0:
            return (-a) % self.p if self.p else -a
        neg = self._neg
        return tuple(neg(x, lvl - 1) for x in a)

    def _mul(self, a, b, lvl):
        if lvl == 0:
            return a * b % self.p if self.p else a * b
        z = self._zero[lvl - 1]
        m = self.levels[lvl - 1].degree
        mul, add = self._mul, self._add
        prod = [z] * (2 * m - 1)
        for i, x in enumerate(a):
            if x == z:
                continue
            for j, y in enumerate(b):
                if y == z:
                    continue
                prod[i + j] = add(prod[i + j], mul(x, y, lvl - 1), lvl - 1)
        return self._reduce(prod, lvl)

    def _scale(self, c, a, lvl):
        """Multiply a level-``lvl`` element by a level-``lvl-1`` scalar."""
        mul = self._mul
        return tuple(mul(c, x, lvl - 1) for x in a)

    def _reduce(self, prod, lvl):
        m = self.levels[lvl - 1].degree
        z = self._zero[lvl - 1]
        mp = self.levels[lvl - 1].minpoly
        sub, mul = self._sub, self._mul
        prod = list(prod)
        for k in range(len(prod) - 1, m - 1, -1):
            c = prod[k]
            if c == z:
                continue
            for i in range(m):
                if mp[i] != z:
                    prod[k - m + i] = sub(prod[k - m + i], mul(c, mp[i], lvl - 1), lvl - 1)
        out = prod[:m]
        out += [z] * (m - len(out))
        return tuple(out)

    def _inv(self, a, lvl):
        if a == self._zero[lvl]:
            raise DivisionByZero("inverse of zero")
        if lvl == 0:
            return pow(a, -1, self.p) if self.p else 1 / a
        # extended Euclid in K_{lvl-1}[t] against the minimal polynomial
        P = _PolyOps(self, lvl - 1)
        g, s, _ = P.xgcd(P.trim(list(a)), list(self.levels[lvl - 1].minpoly))
        assert len(g) == 1, "minimal polynomial is not irreducible"
        ginv = self._inv(g[0], lvl - 1)
        s = [self._mul(ginv, c, lvl - 1) for c in s]
        m = self.levels[lvl - 1].degree
        s += [self._zero[lvl - 1]] * (m - len(s))
        return tuple(s[:m])

    def _pow(self, a, e, lvl):
        if e < 0:
            a, e = self._inv(a, lvl), -e
        result = self._one[lvl]
        while e:
            if e & 1:
                result = self._mul(result, a, lvl)
            e >>= 1
            if e:
                a = self._mul(a, a, lvl)
        return result

    def _is_zero(self, a, lvl=None):
        return a == self._zero[self.depth if lvl is None else lvl]

    # -- string / json ------------------------------------------------------

    def raw_to_str(self, raw, lvl=None) -> str:
        lvl = self.depth if lvl is None else lvl
        if lvl == 0:
            return str(raw)
        name = self.levels[lvl - 1].name
        z = self._zero[lvl - 1]
        one = self._one[lvl - 1]
        terms = []
        for k, c in enumerate(raw):
            if c == z:
                continue
            mono = "" if k == 0 else (name if k == 1 else f"{name}^{k}")
            cs = self.raw_to_str(c, lvl - 1)
            if not mono:
                terms.append(cs)
            elif c == one:
                terms.append(mono)
            elif c == self._neg(one, lvl - 1):
                terms.append("-" + mono)
            elif _is_compound(cs):
                terms.append(f"({cs})*{mono}")
            else:
                terms.append(f"{cs}*{mono}")
        if not terms:
            return "0"
        s = " + ".join(terms)
        return s.replace("+ -", "- ")

    def raw_to_json(self, raw, lvl=None):
        lvl = self.depth if lvl is None else lvl
        if lvl == 0:
            return str(raw)
        return [self.raw_to_json(c, lvl - 1) for c in raw]

    def raw_from_json(self, data, lvl=None):
        lvl = self.depth if lvl is None else lvl
        if lvl == 0:
            return self.base_scalar(data)
        d = self.levels[lvl - 1].degree
        if not isinstance(data, list) or len(data) != d:
            raise ValueError(f"expected a list of length {d} at level {lvl}")
        return tuple(self.raw_from_json(c, lvl - 1) for c in data)

    def to_json(self) -> dict:
        return {
            "base": "Q" if self.p == 0 else "Fp",
            "p": self.p,
            "levels": [
                {
                    "name": lv.name,
                    "minpoly": [self.raw_to_json(c, j) for c in lv.minpoly],
                    **({"root_order": lv.root_order} if lv.root_order else {}),
                }
                for j, lv in enumerate(self.levels)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> FieldTower:
        p = int(data.get("p", 0)) if data["base"] == "Fp" else 0
        tower = cls(p)
        for spec in data["levels"]:
            coeffs = [FieldElement(tower, tower.raw_from_json(c)) for c in spec["minpoly"]]
            tower = adjoin(tower, spec["name"], coeffs, root_order=spec.get("root_order"))
        return tower


def _levels_prefix(small: FieldTower, big: FieldTower) -> bool:
    return small.depth <= big.depth and all(
        a.key() == b.key() for a, b in zip(small.levels, big.levels)
    )


def _is_compound(s: str) -> bool:
    return " + " in s or " - " in s


class _PolyOps:
    """Dense univariate polynomials (low to high) over level ``lvl`` of a tower."""

    def __init__(self, tower: FieldTower, lvl: int):
        self.T = tower
        self.lvl = lvl
        self.z = tower._zero[lvl]
        self.one = tower._one[lvl]

    def trim(self, a):
        a = list(a)
        while a and a[-1] == self.z:
            a.pop()
        return a

    def sub(self, a, b):
        n = max(len(a), len(b))
        a = a + [self.z] * (n - len(a))
        b = b + [self.z] * (n - len(b))
        return self.trim([self.T._sub(x, y, self.lvl) for x, y in zip(a, b)])

    def mul(self, a, b):
        if not a or not b:
            return []
        out = [self.z] * (len(a) + len(b) - 1)
        T, lvl = self.T, self.lvl
        for i, x in enumerate(a):
            if x == self.z:
                continue
            for j, y in enumerate(b):
                out[i + j] = T._add(out[i + j], T._mul(x, y, lvl), lvl)
        return self.trim(out)

    def divmod(self, a, b):
        T, lvl = self.T, self.lvl
        a = self.trim(a)
        b = self.trim(b)
        if not b:
            raise DivisionByZero("polynomial division by zero")
        inv_lead = T._inv(b[-1], lvl)
        q = [self.z] * max(len(a) - len(b) + 1, 0)
        a = list(a)
        while len(a) >= len(b) and a:
            c = T._mul(a[-1], inv_lead, lvl)
            k = len(a) - len(b)
            q[k] = c
            for i, bi in enumerate(b):
                a[k + i] = T._sub(a[k + i], T._mul(c, bi, lvl), lvl)
            a = self.trim(a[:-1]) if a[-1] == self.z else self.trim(a)
        return self.trim(q), a

    def xgcd(self, a, b):
        r0, r1 = self.trim(a), self.trim(b)
        s0, s1 = [self.one], []
        t0, t1 = [], [self.one]
        while r1:
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(q, s1))
            t0, t1 = t1, self.sub(t0, self.mul(q, t1))
        return r0, s0, t0

    def gcd(self, a, b):
        g = self.xgcd(a, b)[0]
        if g:
            inv = self.T._inv(g[-1], self.lvl)
            g = [self.T._mul(inv, c, self.lvl) for c in g]
        return g

    def derivative(self, a):
        T, lvl = self.T, self.lvl
        out = []
        for k in range(1, len(a)):
            out.append(T._mul(T.embed_raw(T.base_scalar(k), 0, lvl), a[k], lvl))
        return self.trim(out)

    def powmod(self, base, e, mod):
        result = [self.one]
        base = self.divmod(base, mod)[1]
        while e:
            if e & 1:
                result = self.divmod(self.mul(result, base), mod)[1]
            e >>= 1
            if e:
                base = self.divmod(self.mul(base, base), mod)[1]
        return result

    def evaluate(self, a, x):
        acc = self.z
        for c in reversed(a):
            acc = self.T._add(self.T._mul(acc, x, self.lvl), c, self.lvl)
        return acc


class FieldElement:
    """An element of a FieldTower in canonical nested form."""

    __slots__ = ("tower", "raw")

    def __init__(self, tower: FieldTower, raw):
        self.tower = tower
        self.raw = raw

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.tower is self.tower or other.tower == self.tower:
                return other.raw
            raise TowerMismatch(f"{self.tower!r} vs {other.tower!r}")
        return self.tower.coerce(other).raw

    def __add__(self, other):
        T = self.tower
        return FieldElement(T, T._add(self.raw, self._other(other), T.depth))

    __radd__ = __add__

    def __sub__(self, other):
        T = self.tower
        return FieldElement(T, T._sub(self.raw, self._other(other), T.depth))

    def __rsub__(self, other):
        T = self.tower
        return FieldElement(T, T._sub(self._other(other), self.raw, T.depth))

    def __neg__(self):
        T = self.tower
        return FieldElement(T, T._neg(self.raw, T.depth))

    def __mul__(self, other):
        T = self.tower
        return FieldElement(T, T._mul(self.raw, self._other(other), T.depth))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        T = self.tower
        return FieldElement(T, T._inv(self.raw, T.depth))

    def __truediv__(self, other):
        T = self.tower
        return FieldElement(T, T._mul(self.raw, T._inv(self._other(other), T.depth), T.depth))

    def __rtruediv__(self, other):
        return self.tower.coerce(other) / self

    def __pow__(self, e: int):
        T = self.tower
        return FieldElement(T, T._pow(self.raw, int(e), T.depth))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.tower == other.tower and self.raw == other.raw
        try:
            return self.raw == self.tower.coerce(other).raw
        except (TypeError, ValueError, FieldError):
            return NotImplemented

    def __hash__(self):
        return hash(self.raw)

    def __bool__(self):
        return not self.tower._is_zero(self.raw)

    def is_zero(self) -> bool:
        return self.tower._is_zero(self.raw)

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        return self.tower.raw_to_str(self.raw)

    def to_json(self) -> dict:
        return {**self.tower.to_json(), "coeffs": self.tower.raw_to_json(self.raw)}

    @classmethod
    def from_json(cls, data: dict) -> FieldElement:
        tower = FieldTower.from_json(data)
        return cls(tower, tower.raw_from_json(data["coeffs"]))

    def to_vector(self) -> list:
        """Coordinates over the base field in the nested power basis."""
        out = []

        def walk(raw, lvl):
            if lvl == 0:
                out.append(raw)
            else:
                for c in raw:
                    walk(c, lvl - 1)

        walk(self.raw, self.tower.depth)
        return out

    def level(self) -> int:
        """Smallest m such that the element lies in the sub-tower of the first m levels."""
        T = self.tower
        raw, lvl = self.raw, T.depth
        while lvl > 0 and all(c == T._zero[lvl - 1] for c in raw[1:]):
            raw, lvl = raw[0], lvl - 1
        return lvl

    def descend(self, m: int = 0):
        """Raw element of the first ``m`` levels, or ValueError if not there."""
        T = self.tower
        raw = self.raw
        for lvl in range(T.depth, m, -1):
            if any(c != T._zero[lvl - 1] for c in raw[1:]):
                raise ValueError(f"{self} does not lie in the first {m} levels")
            raw = raw[0]
        return raw

    def to_base(self):
        """The element as an mpq (over Q) or int (over F_p); ValueError if not a base scalar."""
        return self.descend(0)

    def in_base(self, m: int = 0) -> bool:
        return self.level() <= m

    def multiplicative_order(self, bound: int = 10**6) -> int:
        if self.is_zero():
            raise DivisionByZero("zero has no multiplicative order")
        one = self.tower.one()
        x, k = self, 1
        while x != one:
            x = x * self
            k += 1
            if k > bound:
                raise ValueError("order exceeds bound")
        return k


# ---------------------------------------------------------------------------
# adjunction and irreducibility


def _coerce_poly(tower: FieldTower, coeffs) -> list:
    return [tower.coerce(c).raw for c in coeffs]


def _is_irreducible(tower: FieldTower, poly: list) -> bool:
    """Irreducibility of a monic raw polynomial over the top level of ``tower``."""
    lvl = tower.depth
    P = _PolyOps(tower, lvl)
    n = len(poly) - 1
    if n == 1:
        return True
    if P.gcd(poly, P.derivative(poly)) != [P.one]:
        return False  # not separable (or repeated factor)
    if tower.p:
        q = tower.size
        t = [P.z, P.one]
        h = t
        for _ in range(1, n // 2 + 1):
            h = P.powmod(h, q, poly)
            if P.gcd(poly, P.sub(h, t)) != [P.one]:
                return False
        return True
    if lvl == 0:
        if n <= 3:
            return not _rational_roots(poly)
        return _q_irreducible([mpq(c) for c in poly])
    # relative extension of a number field: find a primitive element of the
    # algebra K[t]/(poly) and test its absolute minimal polynomial over Q
    trial = FieldTower(tower.p, tower.levels + (Level("_t", poly),))
    total = trial.degree
    t_gen = trial.gen(trial.depth)
    lower = trial.gens()[:-1]
    for c in range(0, 6):
        x = t_gen + sum((g * (c + i) for i, g in enumerate(lower)), trial.zero()) if c else t_gen
        mp = minimal_polynomial(x)
        if len(mp) - 1 == total:
            return _q_irreducible(mp)
    raise FieldError("could not find a primitive element for the irreducibility test")


def _rational_roots(poly) -> list:
    """Rational roots of a polynomial with rational coefficients."""
    coeffs = [mpq(c) for c in poly]
    den = math.lcm(*[int(c.denominator) for c in coeffs])
    ints = [int(c * den) for c in coeffs]
    if ints[0] == 0:
        return sorted({mpq(0), *_rational_roots(coeffs[1:])}) if len(coeffs) > 2 else [mpq(0)]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(m):
        return [d for d in range(1, m + 1) if m % d == 0]

    roots = set()
    for num in divisors(a0):
        for den_ in divisors(an):
            for r in (mpq(num, den_), mpq(-num, den_)):
                acc = mpq(0)
                for c in reversed(coeffs):
                    acc = acc * r + c
                if acc == 0:
                    roots.add(r)
    return sorted(roots)


def _q_irreducible(coeffs) -> bool:
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * t**k for k, c in enumerate(coeffs))
    return sympy.Poly(expr, t, domain=sympy.QQ).is_irreducible


def minimal_polynomial(x: FieldElement) -> list:
    """Minimal polynomial of ``x`` over the base prime field, as base scalars (low to high)."""
    T = x.tower
    n = T.degree
    rows = []
    power = T.one()
    for _ in range(n + 1):
        rows.append(power.to_vector())
        power = power * x
        # find the first linear dependency among 1, x, ..., x^k
        kern = _kernel_base([list(col) for col in zip(*rows)], T.p)
        if kern:
            v = kern[0]
            lead = v[-1]
            if T.p:
                inv = pow(lead, -1, T.p)
                return [c * inv % T.p for c in v]
            return [c / lead for c in v]
    raise AssertionError("unreachable")


def _kernel_base(matrix, p):
    """Right kernel of a matrix of base scalars (list of rows)."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    M = [list(r) for r in matrix]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p) if p else 1 / M[r][c]
        M[r] = [(v * inv) % p if p else v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [((a - f * b) % p if p else a - f * b) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    zero = 0 if p else mpq(0)
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = 1 if p else mpq(1)
        for i, pc in enumerate(pivots):
            v[pc] = (-M[i][f]) % p if p else -M[i][f]
        basis.append(v)
    return basis


def adjoin(tower: FieldTower, name: str, coeffs, root_order=None, check: bool = True) -> FieldTower:
    """Adjoin a root of the monic polynomial with the given coefficients (low to high)."""
    poly = _coerce_poly(tower, coeffs)
    if len(poly) < 3:
        raise ValueError("minimal polynomial must have degree >= 2")
    if poly[-1] != tower._one[-1]:
        raise NonMonic("minimal polynomial must be monic")
    if any(lv.name == name for lv in tower.levels):
        raise ValueError(f"generator name {name!r} already used")
    if check and not _is_irreducible(tower, poly):
        raise ReduciblePolynomial(f"polynomial is reducible over {tower!r}")
    return FieldTower(tower.p, tower.levels + (Level(name, poly, root_order),))


def find_root_of_unity(tower: FieldTower, n: int) -> FieldElement | None:
    """A primitive n-th root of unity in the tower, located by exhaustive search."""
    if n == 1:
        return tower.one()
    if tower.p and n % tower.p == 0:
        raise CharacteristicDividesN(f"characteristic {tower.p} divides {n}")
    if tower.p:
        q = tower.size
        if (q - 1) % n:
            return None
        for x in tower.elements():
            if x.is_zero():
                continue
            z = x ** ((q - 1) // n)
            if _has_exact_order(z, n):
                return z
        return None
    known = [(-tower.one(), 2)]
    for j, lv in enumerate(tower.levels):
        if lv.root_order:
            known.append((tower.gen(j + 1), lv.root_order))
    orders = [o for _, o in known]
    for exps in itertools.product(*[range(o) for o in orders]):
        z = tower.one()
        for (g, _), e in zip(known, exps):
            if e:
                z = z * g**e
        if _has_exact_order(z, n):
            return z
    return None


def _has_exact_order(z: FieldElement, n: int) -> bool:
    one = z.tower.one()
    if z**n != one:
        return False
    return all(z ** (n // q) != one for q in _prime_factors(n))


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def adjoin_cyclotomic(tower: FieldTower, n: int, name: str | None = None):
    """Return (tower', zeta) with zeta a primitive n-th root of unity in tower'."""
    if tower.p and n % tower.p == 0:
        raise CharacteristicDividesN(f"characteristic {tower.p} divides {n}")
    found = find_root_of_unity(tower, n)
    if found is not None:
        return tower, found
    name = name or f"zeta{n}"
    phi = cyclotomic_coeffs(n)
    if not tower.p:
        new = adjoin(tower, name, phi, root_order=n)
        return new, new.gen(new.depth)
    # over a finite field adjoin one irreducible factor of Phi_n of degree ord_n(q)
    e = multiplicative_order(tower.size, n)
    P = _PolyOps(tower, tower.depth)
    phi_raw = _coerce_poly(tower, phi)
    elems = [x.raw for x in tower.elements()]
    for tail in itertools.product(elems, repeat=e):
        cand = list(tail) + [P.one]
        if P.divmod(phi_raw, cand)[1] == []:
            coeffs = [FieldElement(tower, c) for c in cand]
            new = adjoin(tower, name, coeffs, root_order=n)
            return new, new.gen(new.depth)
    raise AssertionError("no factor of the cyclotomic polynomial found")


def polynomial_roots(tower: FieldTower, coeffs) -> list[FieldElement]:
    """Roots in a finite tower, by exhaustive evaluation."""
    poly = _coerce_poly(tower, coeffs)
    P = _PolyOps(tower, tower.depth)
    return [x for x in tower.elements() if P.evaluate(poly, x.raw) == P.z]


def evaluate_poly(coeffs, x: FieldElement) -> FieldElement:
    acc = x.tower.zero()
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def is_square(x: FieldElement) -> bool | None:
    """Square test for base scalars over Q or any element of a finite tower."""
    T = x.tower
    if x.is_zero():
        return True
    if T.p:
        if T.p == 2:
            return True
        return x ** ((T.size - 1) // 2) == T.one()
    if x.in_base():
        return rational_sqrt(x.to_base()) is not None
    return None


def sqrt(x: FieldElement) -> FieldElement | None:
    """A square root in the tower (finite towers and rational scalars)."""
    T = x.tower
    if T.p:
        for y in T.elements():
            if y * y == x:
                return y
        return None
    if x.in_base():
        r = rational_sqrt(x.to_base())
        return None if r is None else T.coerce(r)
    raise NotImplementedError("square roots of non-rational elements over Q")


# ---------------------------------------------------------------------------
# automorphisms


class Automorphism:
    """A field automorphism given by the images of the level generators."""

    __slots__ = ("tower", "images", "_key")

    def __init__(self, tower: FieldTower, images, check: bool = True):
        self.tower = tower
        self.images = tuple(tower.coerce(im) for im in images)
        if len(self.images) != tower.depth:
            raise ValueError("need one image per level")
        self._key = tuple(im.raw for im in self.images)
        if check:
            self._validate()

    @classmethod
    def identity(cls, tower: FieldTower) -> Automorphism:
        return cls(tower, tower.gens(), check=False)

    @classmethod
    def from_partial(cls, tower: FieldTower, mapping: dict) -> Automorphism:
        """Images given by generator name; unnamed generators are fixed."""
        images = [tower.coerce(mapping.get(lv.name, tower.gen(j + 1))) for j, lv in enumerate(tower.levels)]
        return cls(tower, images)

    def _apply_raw(self, raw, lvl):
        T = self.tower
        top = T.depth
        if lvl == 0:
            return T.embed_raw(raw, 0)
        img = self.images[lvl - 1].raw
        acc = T._zero[top]
        for c in reversed(raw):
            acc = T._add(T._mul(acc, img, top), self._apply_raw(c, lvl - 1), top)
        return acc

    def __call__(self, x: FieldElement) -> FieldElement:
        T = self.tower
        raw = x.raw if isinstance(x, FieldElement) and x.tower == T else T.coerce(x).raw
        return FieldElement(T, self._apply_raw(raw, T.depth))

    def _validate(self):
        T = self.tower
        for j, lv in enumerate(T.levels):
            img = self.images[j].raw
            acc = T._zero[-1]
            for c in reversed(lv.minpoly):
                acc = T._add(T._mul(acc, img, T.depth), self._apply_raw(c, j), T.depth)
            if acc != T._zero[-1]:
                raise NotAnAutomorphism(f"image of {lv.name} is not a root of its conjugated minimal polynomial")

    def compose(self, other: Automorphism) -> Automorphism:
        """self ∘ other."""
        return Automorphism(self.tower, [self(im) for im in other.images], check=False)

    def __mul__(self, other):
        return self.compose(other)

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def fixes_levels(self) -> int:
        """Number of initial levels whose generators are fixed."""
        m = 0
        for j in range(self.tower.depth):
            if self.images[j] != self.tower.gen(j + 1):
                break
            m += 1
        return m

    def __repr__(self):
        parts = [f"{lv.name}->{im}" for lv, im in zip(self.tower.levels, self.images)]
        return "Automorphism(" + ", ".join(parts) + ")"


class GaloisGroup:
    """A finite group of automorphisms of a tower, with its composition table."""

    def __init__(self, tower: FieldTower, elements, table, fixed_levels: int = 0):
        self.tower = tower
        self.elements = list(elements)
        self.table = table
        self.fixed_levels = fixed_levels
        self._index = {a: i for i, a in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, a: Automorphism) -> int:
        return self._index[a]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def fixed_space_dimension(self) -> int:
        """Dimension over the base prime field of the common fixed subfield."""
        T = self.tower
        n = T.degree
        basis = [T.from_vector([1 if i == k else 0 for i in range(n)]) for k in range(n)]
        rows = []
        for a in self.elements:
            cols = [(a(b) - b).to_vector() for b in basis]
            rows.extend([list(r) for r in zip(*cols)])
        return len(_kernel_base(rows, T.p))

    def inverse_index(self, i: int) -> int:
        # the identity is always stored first
        return next(j for j in range(self.order) if self.table[i][j] == 0)


def automorphism_group(tower: FieldTower, generators, fixed_levels: int = 0) -> GaloisGroup:
    """Close the given automorphisms (or image lists) under composition."""
    gens = [g if isinstance(g, Automorphism) else Automorphism(tower, g) for g in generators]
    for g in gens:
        if g.fixes_levels() < fixed_levels:
            raise NotAnAutomorphism("generator moves the base field")
    bound = tower.degree_over(fixed_levels)
    ident = Automorphism.identity(tower)
    elements = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = g.compose(a)
                if b not in index:
                    index[b] = len(elements)
                    elements.append(b)
                    nxt.append(b)
                    if len(elements) > bound:
                        raise ClosureTooLarge(f"closure exceeds the degree {bound}")
        frontier = nxt
    table = [[index[a.compose(b)] for b in elements] for a in elements]
    return GaloisGroup(tower, elements, table, fixed_levels)


def frobenius(tower: FieldTower) -> Automorphism:
    """x -> x^p on a finite tower."""
    if not tower.p:
        raise ValueError("Frobenius needs positive characteristic")
    return Automorphism(tower, [g**tower.p for g in tower.gens()])
