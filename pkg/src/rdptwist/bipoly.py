"""Sparse polynomials in (x, y) and (X, Y, Z) over a FieldTower.

Coefficients are stored as raw tower elements (see ``fieldtower``) keyed by
exponent tuples; zero coefficients are never stored.
"""

from __future__ import annotations

from .fieldtower import (
    Automorphism,
    DivisionByZero,
    FieldElement,
    FieldError,
    FieldTower,
    TowerMismatch,
    _is_compound,
    _levels_prefix,
)

MAX_DEGREE = 256


class DegreeGuard(FieldError):
    pass


class OrderNotInvertible(FieldError):
    pass


def _common_tower(*objs) -> FieldTower:
    towers = [o.tower for o in objs]
    for t in towers[1:]:
        if t != towers[0]:
            raise TowerMismatch(f"{towers[0]!r} vs {t!r}")
    return towers[0]


class Mat2:
    """A 2x2 matrix [[a, b], [c, d]] over a tower."""

    __slots__ = ("tower", "a", "b", "c", "d", "_key")

    def __init__(self, a, b, c, d, tower: FieldTower | None = None):
        if tower is None:
            tower = next(e.tower for e in (a, b, c, d) if isinstance(e, FieldElement))
        self.tower = tower
        self.a, self.b, self.c, self.d = (tower.coerce(e) for e in (a, b, c, d))
        self._key = (self.a.raw, self.b.raw, self.c.raw, self.d.raw)

    @classmethod
    def identity(cls, tower: FieldTower) -> Mat2:
        return cls(1, 0, 0, 1, tower)

    @classmethod
    def diag(cls, a, d, tower=None) -> Mat2:
        tower = tower or a.tower
        return cls(a, 0, 0, d, tower)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    def trace(self) -> FieldElement:
        return self.a + self.d

    def __mul__(self, other: Mat2) -> Mat2:
        if isinstance(other, Mat2):
            a, b, c, d = self.entries()
            e, f, g, h = other.entries()
            return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.tower)
        return Mat2(*(x * other for x in self.entries()), tower=self.tower)

    __rmul__ = lambda self, s: Mat2(*(s * x for x in self.entries()), tower=self.tower)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d, self.tower)

    def inverse(self) -> Mat2:
        det = self.det()
        if det.is_zero():
            raise DivisionByZero("singular matrix")
        inv = det.inverse()
        return Mat2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv, self.tower)

    def __pow__(self, e: int) -> Mat2:
        base = self if e >= 0 else self.inverse()
        result = Mat2.identity(self.tower)
        for _ in range(abs(e)):
            result = result * base
        return result

    def apply_automorphism(self, phi: Automorphism) -> Mat2:
        return Mat2(*(phi(x) for x in self.entries()), tower=self.tower)

    def to_tower(self, tower: FieldTower) -> Mat2:
        return Mat2(*(tower.coerce(x) for x in self.entries()), tower=tower)

    def __eq__(self, other):
        return isinstance(other, Mat2) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def is_identity(self) -> bool:
        return self == Mat2.identity(self.tower)

    def order(self, bound: int = 1000) -> int:
        one = Mat2.identity(self.tower)
        x, k = self, 1
        while x != one:
            x, k = x * self, k + 1
            if k > bound:
                raise ValueError("order exceeds bound")
        return k

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"

    def to_json(self):
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]


class _SparsePoly:
    """Shared machinery for sparse polynomials with a fixed number of variables."""

    nvars = 0
    names: tuple = ()

    __slots__ = ("tower", "terms")

    def __init__(self, tower: FieldTower, terms=None):
        self.tower = tower
        self.terms = {}
        if terms:
            z = tower._zero[-1]
            for exp, c in terms.items():
                raw = c.raw if isinstance(c, FieldElement) and c.tower == tower else tower.coerce(c).raw
                if raw != z:
                    self.terms[tuple(exp)] = raw

    @classmethod
    def _from_raw(cls, tower, terms):
        obj = cls.__new__(cls)
        obj.tower = tower
        obj.terms = terms
        obj._post_init()
        return obj

    def _post_init(self):
        pass

    def _like(self, terms):
        return type(self)._from_raw(self.tower, terms)

    @classmethod
    def constant(cls, tower, c):
        return cls(tower, {(0,) * cls.nvars: c})

    @classmethod
    def variable(cls, tower, k):
        exp = [0] * cls.nvars
        exp[k] = 1
        return cls(tower, {tuple(exp): 1})

    @classmethod
    def monomial(cls, tower, exp, c=1):
        return cls(tower, {tuple(exp): c})

    def _coerce_other(self, other):
        if isinstance(other, _SparsePoly):
            if other.tower != self.tower:
                raise TowerMismatch(f"{self.tower!r} vs {other.tower!r}")
            return other
        return type(self).constant(self.tower, other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._coerce_other(other)
        T, top = self.tower, self.tower.depth
        z = T._zero[top]
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = T._add(out[e], c, top)
                if s == z:
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        T, top = self.tower, self.tower.depth
        return self._like({e: T._neg(c, top) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce_other(other))

    def __rsub__(self, other):
        return self._coerce_other(other) - self

    def __mul__(self, other):
        if not isinstance(other, _SparsePoly):
            return self.scale(other)
        other = self._coerce_other(other)
        T, top = self.tower, self.tower.depth
        z = T._zero[top]
        mul, add = T._mul, T._add
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = mul(c1, c2, top)
                if e in out:
                    out[e] = add(out[e], p, top)
                else:
                    out[e] = p
        out = {e: c for e, c in out.items() if c != z}
        res = self._like(out)
        if res.terms and res.total_degree() > MAX_DEGREE:
            raise DegreeGuard(f"degree exceeds {MAX_DEGREE}")
        return res

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        T, top = self.tower, self.tower.depth
        raw = T.coerce(c).raw
        if raw == T._zero[top]:
            return self._like({})
        return self._like({e: T._mul(raw, v, top) for e, v in self.terms.items()})

    def __truediv__(self, c):
        return self.scale(self.tower.coerce(c).inverse())

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = type(self).constant(self.tower, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, _SparsePoly):
            return type(self) is type(other) and self.tower == other.tower and self.terms == other.terms
        try:
            return self.terms == type(self).constant(self.tower, other).terms
        except (TypeError, ValueError, FieldError):
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, exp) -> FieldElement:
        T = self.tower
        return FieldElement(T, self.terms.get(tuple(exp), T._zero[T.depth]))

    def coefficients(self) -> dict:
        return {e: FieldElement(self.tower, c) for e, c in self.terms.items()}

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def map_coefficients(self, fn) -> _SparsePoly:
        """Apply a map FieldElement -> FieldElement (e.g. an Automorphism) to each coefficient."""
        T = self.tower
        out = {}
        for e, c in self.terms.items():
            v = fn(FieldElement(T, c))
            if not v.is_zero():
                out[e] = v.raw
        return self._like(out)

    def to_tower(self, tower: FieldTower) -> _SparsePoly:
        """Embed into a tower having this polynomial's tower as its first levels."""
        if tower == self.tower:
            return self
        if tower.p != self.tower.p or not _levels_prefix(self.tower, tower):
            raise TowerMismatch(f"{self.tower!r} does not embed into {tower!r}")
        lvl = self.tower.depth
        return type(self)._from_raw(tower, {e: tower.embed_raw(c, lvl) for e, c in self.terms.items()})

    def descend_to(self, tower: FieldTower) -> _SparsePoly:
        """Inverse of to_tower; ValueError if a coefficient is not in ``tower``."""
        m = tower.depth
        if not _levels_prefix(tower, self.tower):
            raise TowerMismatch(f"{tower!r} is not a sub-tower of {self.tower!r}")
        return type(self)._from_raw(
            tower, {e: FieldElement(self.tower, c).descend(m) for e, c in self.terms.items()}
        )

    def coefficients_in(self, m: int) -> bool:
        """True if every coefficient lies in the first ``m`` levels of the tower."""
        T = self.tower
        return all(FieldElement(T, c).level() <= m for c in self.terms.values())

    def sort_key(self, exp):
        return (-sum(exp),) + tuple(-a for a in exp)

    def sorted_exponents(self):
        return sorted(self.terms, key=self.sort_key)

    def leading(self):
        exps = self.sorted_exponents()
        if not exps:
            return None, self.tower.zero()
        return exps[0], FieldElement(self.tower, self.terms[exps[0]])

    def monic(self):
        _, lc = self.leading()
        return self / lc

    def _mono_str(self, exp):
        parts = []
        for name, k in zip(self.names, exp):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts) if self._star else "".join(parts)

    _star = False

    def __str__(self):
        if not self.terms:
            return "0"
        T = self.tower
        one, mone = T._one[-1], T._neg(T._one[-1], T.depth)
        out = []
        for exp in self.sorted_exponents():
            c = self.terms[exp]
            mono = self._mono_str(exp)
            cs = T.raw_to_str(c)
            if not mono:
                term = cs
            elif c == one:
                term = mono
            elif c == mone:
                term = "-" + mono
            elif _is_compound(cs):
                term = f"({cs})*{mono}" if self._star else f"({cs}){mono}"
            else:
                term = f"{cs}*{mono}" if self._star else f"{cs}{mono}"
            out.append(term)
        s = out[0]
        for t in out[1:]:
            s += " - " + t[1:] if t.startswith("-") else " + " + t
        return s

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def to_json(self):
        return {
            "terms": [
                {"exp": list(e), "coeff": self.tower.raw_to_str(self.terms[e])}
                for e in self.sorted_exponents()
            ]
        }


class BivariatePoly(_SparsePoly):
    """Polynomial in x, y; exponent keys are (i, j) for x^i y^j."""

    nvars = 2
    names = ("x", "y")
    __slots__ = ()

    @classmethod
    def x(cls, tower):
        return cls.variable(tower, 0)

    @classmethod
    def y(cls, tower):
        return cls.variable(tower, 1)

    @classmethod
    def gens(cls, tower):
        return cls.x(tower), cls.y(tower)

    def derivative(self, var: int) -> BivariatePoly:
        T, top = self.tower, self.tower.depth
        out = {}
        for e, c in self.terms.items():
            k = e[var]
            if k == 0:
                continue
            kr = T.coerce(k).raw
            v = T._mul(kr, c, top)
            if v != T._zero[top]:
                ne = list(e)
                ne[var] -= 1
                out[tuple(ne)] = v
        return self._like(out)

    def dx(self):
        return self.derivative(0)

    def dy(self):
        return self.derivative(1)

    def homogeneous_part(self, d: int) -> BivariatePoly:
        return self._like({e: c for e, c in self.terms.items() if sum(e) == d})

    @classmethod
    def from_json(cls, tower, data):
        return cls(tower, {tuple(t["exp"]): _parse_coeff(tower, t["coeff"]) for t in data["terms"]})


class TrivariatePoly(_SparsePoly):
    """Polynomial in X, Y, Z with an optional weight vector used for ordering."""

    nvars = 3
    names = ("X", "Y", "Z")
    __slots__ = ("weights",)

    def __init__(self, tower, terms=None, weights=(1, 1, 1)):
        super().__init__(tower, terms)
        self.weights = tuple(weights)

    def _post_init(self):
        if not hasattr(self, "weights") or self.weights is None:
            self.weights = (1, 1, 1)

    def _like(self, terms):
        obj = TrivariatePoly.__new__(TrivariatePoly)
        obj.tower = self.tower
        obj.terms = terms
        obj.weights = self.weights
        return obj

    @classmethod
    def _from_raw(cls, tower, terms, weights=(1, 1, 1)):
        obj = cls.__new__(cls)
        obj.tower = tower
        obj.terms = terms
        obj.weights = tuple(weights)
        return obj

    def to_tower(self, tower):
        res = super().to_tower(tower)
        res.weights = self.weights
        return res

    def descend_to(self, tower):
        res = super().descend_to(tower)
        res.weights = self.weights
        return res

    @classmethod
    def constant(cls, tower, c, weights=(1, 1, 1)):
        return cls(tower, {(0, 0, 0): c}, weights)

    @classmethod
    def gens(cls, tower, weights=(1, 1, 1)):
        return tuple(cls(tower, {e: 1}, weights) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def with_weights(self, weights) -> TrivariatePoly:
        return TrivariatePoly._from_raw(self.tower, dict(self.terms), weights)

    def _coerce_other(self, other):
        if isinstance(other, _SparsePoly):
            return super()._coerce_other(other)
        return TrivariatePoly.constant(self.tower, other, self.weights)

    def __pow__(self, k):
        result = TrivariatePoly.constant(self.tower, 1, self.weights)
        for _ in range(k):
            result = result * self
        return result

    def weighted_degree(self, exp) -> int:
        return sum(w * e for w, e in zip(self.weights, exp))

    def is_weighted_homogeneous(self) -> bool:
        return len({self.weighted_degree(e) for e in self.terms}) <= 1

    def sort_key(self, exp):
        return (-self.weighted_degree(exp),) + tuple(-a for a in exp)

    def __eq__(self, other):
        if isinstance(other, TrivariatePoly):
            return self.tower == other.tower and self.terms == other.terms
        return super().__eq__(other)

    __hash__ = _SparsePoly.__hash__

    def proportional_to(self, other: TrivariatePoly):
        """The scalar c with self == c * other, or None."""
        if set(self.terms) != set(other.terms):
            return None
        if not self.terms:
            return self.tower.one()
        e0 = next(iter(self.terms))
        c = self.coefficient(e0) / other.coefficient(e0)
        return c if self == other.scale(c) else None

    def substitute_scaled(self, sx, sy, sz) -> TrivariatePoly:
        """F(sx*X, sy*Y, sz*Z)."""
        T = self.tower
        sx, sy, sz = (T.coerce(s) for s in (sx, sy, sz))
        out = {}
        for e, c in self.terms.items():
            v = FieldElement(T, c) * sx ** e[0] * sy ** e[1] * sz ** e[2]
            if not v.is_zero():
                out[e] = v.raw
        return self._like(out)

    def permute(self, perm) -> TrivariatePoly:
        """Rename variables: variable k becomes variable perm[k]."""
        out = {}
        for e, c in self.terms.items():
            ne = [0, 0, 0]
            for k in range(3):
                ne[perm[k]] = e[k]
            out[tuple(ne)] = c
        w = [0, 0, 0]
        for k in range(3):
            w[perm[k]] = self.weights[k]
        return TrivariatePoly._from_raw(self.tower, out, w)

    @classmethod
    def from_json(cls, tower, data, weights=(1, 1, 1)):
        return cls(tower, {tuple(t["exp"]): _parse_coeff(tower, t["coeff"]) for t in data["terms"]}, weights)


def _parse_coeff(tower, s):
    if tower.depth == 0:
        return tower.base_scalar(s)
    raise ValueError("string coefficients are only parsed over the base field")


# ---------------------------------------------------------------------------
# the substitution action


def linear_form_powers(tower, p, q, dmax):
    """Powers 0..dmax of p*x + q*y as dense coefficient lists (index = power of y)."""
    T, top = tower, tower.depth
    p, q = T.coerce(p).raw, T.coerce(q).raw
    z = T._zero[top]
    powers = [[T._one[top]]]
    for _ in range(dmax):
        prev = powers[-1]
        nxt = [z] * (len(prev) + 1)
        for k, c in enumerate(prev):
            if c == z:
                continue
            nxt[k] = T._add(nxt[k], T._mul(c, p, top), top)
            nxt[k + 1] = T._add(nxt[k + 1], T._mul(c, q, top), top)
        powers.append(nxt)
    return powers


def act(g: Mat2, f: BivariatePoly) -> BivariatePoly:
    """f((x, y) g): substitute x -> a x + c y and y -> b x + d y."""
    _common_tower(g, f)
    if not f.terms:
        return f
    dmax = f.total_degree()
    P1 = linear_form_powers(f.tower, g.a, g.c, dmax)
    P2 = linear_form_powers(f.tower, g.b, g.d, dmax)
    return _act_with_powers(f, P1, P2)


def _act_with_powers(f, P1, P2):
    T, top = f.tower, f.tower.depth
    z = T._zero[top]
    mul, add = T._mul, T._add
    out = {}
    for (i, j), c in f.terms.items():
        A, B = P1[i], P2[j]
        d = i + j
        for s, ca in enumerate(A):
            if ca == z:
                continue
            cca = mul(c, ca, top)
            for t, cb in enumerate(B):
                if cb == z:
                    continue
                ky = s + t
                e = (d - ky, ky)
                v = mul(cca, cb, top)
                out[e] = add(out[e], v, top) if e in out else v
    return BivariatePoly._from_raw(T, {e: c for e, c in out.items() if c != z})


def _group_elements(G):
    return G.elements


def _check_order(G):
    p = G.tower.p
    if p and G.order % p == 0:
        raise OrderNotInvertible(f"characteristic {p} divides the group order {G.order}")


def reynolds(G, f: BivariatePoly) -> BivariatePoly:
    """Average of act(g, f) over the group (canonical element order)."""
    if hasattr(G, "weight_reynolds"):
        return G.weight_reynolds(f)
    _check_order(G)
    return reynolds_many(G, [f])[0]


def reynolds_many(G, polys):
    """Reynolds images of several polynomials, sharing the linear-form powers per element."""
    if hasattr(G, "weight_reynolds"):
        return [G.weight_reynolds(f) for f in polys]
    _check_order(G)
    T = G.tower
    polys = [p.to_tower(T) if p.tower != T else p for p in polys]
    dmax = max((p.total_degree() for p in polys), default=0)
    dmax = max(dmax, 0)
    sums = [BivariatePoly(T) for _ in polys]
    for g in _group_elements(G):
        P1 = linear_form_powers(T, g.a, g.c, dmax)
        P2 = linear_form_powers(T, g.b, g.d, dmax)
        for k, p in enumerate(polys):
            if p.terms:
                sums[k] = sums[k] + _act_with_powers(p, P1, P2)
    inv = T.coerce(G.order).inverse()
    return [s.scale(inv) for s in sums]


def monomials(d: int) -> list[tuple[int, int]]:
    """Exponents of degree d in graded-lex order with x > y."""
    return [(d - j, j) for j in range(d + 1)]


def invariant_space(G, d: int) -> list[BivariatePoly]:
    """Row-reduced basis of the degree-d invariants."""
    T = G.tower
    mons = monomials(d)
    images = reynolds_many(G, [BivariatePoly(T, {m: 1}) for m in mons])
    rows = [[img.coefficient(m) for m in mons] for img in images]
    basis = row_reduce(rows)
    return [BivariatePoly(T, {m: c for m, c in zip(mons, row)}) for row in basis]


def is_invariant(G, f: BivariatePoly) -> bool:
    if hasattr(G, "weight_invariant"):
        return G.weight_invariant(f)
    return all(act(g, f) == f for g in _group_elements(G))


# ---------------------------------------------------------------------------
# exact linear algebra


def _as_raw_matrix(matrix):
    tower = None
    for row in matrix:
        for e in row:
            if isinstance(e, FieldElement):
                if tower is None:
                    tower = e.tower
                elif e.tower != tower:
                    raise TowerMismatch(f"{tower!r} vs {e.tower!r}")
    if tower is None:
        tower = FieldTower.rationals()
    return tower, [[tower.coerce(e).raw for e in row] for row in matrix]


def _rref_raw(T, M):
    top = T.depth
    z = T._zero[top]
    M = [list(r) for r in M]
    ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != z), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = T._inv(M[r][c], top)
        M[r] = [T._mul(v, inv, top) if v != z else z for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != z:
                f = M[i][c]
                M[i] = [T._sub(a, T._mul(f, b, top), top) if b != z else a for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def row_reduce(matrix) -> list[list[FieldElement]]:
    """Nonzero rows of the reduced row echelon form."""
    if not matrix:
        return []
    T, M = _as_raw_matrix(matrix)
    R, _ = _rref_raw(T, M)
    return [[FieldElement(T, v) for v in row] for row in R]


def rank(matrix) -> int:
    return len(row_reduce(matrix))


def kernel(matrix, ncols: int | None = None) -> list[list[FieldElement]]:
    """Basis of the right kernel, one vector per free column, in reduced echelon form."""
    if not matrix:
        if ncols is None:
            return []
        T = FieldTower.rationals()
        return [[T.coerce(1 if i == j else 0) for i in range(ncols)] for j in range(ncols)]
    T, M = _as_raw_matrix(matrix)
    ncols = len(M[0])
    R, pivots = _rref_raw(T, M)
    top = T.depth
    z, one = T._zero[top], T._one[top]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [z] * ncols
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = T._neg(R[i][f], top)
        basis.append([FieldElement(T, x) for x in v])
    return basis


def determinant2(a, b, c, d):
    return a * d - b * c


def hessian(f: BivariatePoly) -> BivariatePoly:
    fxx = f.dx().dx()
    fyy = f.dy().dy()
    fxy = f.dx().dy()
    return fxx * fyy - fxy * fxy


def jacobian(f: BivariatePoly, g: BivariatePoly) -> BivariatePoly:
    return f.dx() * g.dy() - f.dy() * g.dx()


# ---------------------------------------------------------------------------
# substitution into a trivariate polynomial


def substitute(F: TrivariatePoly, A: BivariatePoly, B: BivariatePoly, C: BivariatePoly) -> BivariatePoly:
    """F(A, B, C) expanded exactly."""
    T = _common_tower(F, A, B, C)
    if not F.terms:
        return BivariatePoly(T)
    caches = []
    for k, P in enumerate((A, B, C)):
        m = max(e[k] for e in F.terms)
        pw = [BivariatePoly.constant(T, 1)]
        for _ in range(m):
            pw.append(pw[-1] * P)
        caches.append(pw)
    total = BivariatePoly(T)
    for e, c in F.terms.items():
        term = caches[0][e[0]] * caches[1][e[1]] * caches[2][e[2]]
        total = total + term.scale(FieldElement(T, c))
    return total


# ---------------------------------------------------------------------------
# Molien series oracle


def molien_coefficients(G, dmax: int) -> list:
    """Coefficients of (1/|G|) sum_g 1/det(1 - t g) up to t^dmax, as base scalars.

    For g in SL2, det(1 - t g) = 1 - tr(g) t + t^2, whose inverse has
    coefficients c_k = tr(g) c_{k-1} - c_{k-2}.
    """
    T = G.tower
    acc = [T.zero() for _ in range(dmax + 1)]
    for g in _group_elements(G):
        tr = g.trace()
        prev, cur = T.zero(), T.one()
        for k in range(dmax + 1):
            acc[k] = acc[k] + cur
            prev, cur = cur, tr * cur - prev
    inv = T.coerce(G.order).inverse()
    return [(a * inv).to_base() for a in acc]
