"""Fundamental invariants, Galois descent of invariant generators, syzygy
search and identity checks.

A triple (A, B, C) of invariants lives in a common tower.  Descent works on
coefficient vectors with respect to a basis of invariants whose coefficients
are rational: a Galois element acts on the vector by applying the field
automorphism to the entries and then the (rational) matrix describing the
paired linear substitution on the basis.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .bipoly import (
    BivariatePoly,
    Mat2,
    TrivariatePoly,
    act,
    hessian,
    invariant_space,
    is_invariant,
    jacobian,
    kernel,
    substitute,
)
from .fieldtower import (
    Automorphism,
    FieldElement,
    FieldError,
    FieldTower,
    GaloisGroup,
    TowerMismatch,
    _levels_prefix,
    automorphism_group,
)


class InvariantError(FieldError):
    pass


class MissingConstant(InvariantError):
    pass


class WrongCharacteristic(InvariantError):
    pass


class ActionNotClosed(InvariantError):
    pass


class NotRational(InvariantError):
    pass


class NoRelationFound(InvariantError):
    pass


class RelationNotUnique(InvariantError):
    pass


# ---------------------------------------------------------------------------
# triples


@dataclass
class InvariantTriple:
    polys: tuple
    names: tuple = ("A", "B", "C")
    label: str = ""
    # coefficient vectors with respect to ``basis`` when produced by descent
    vectors: list | None = None
    basis: tuple | None = None

    def __post_init__(self):
        self.polys = tuple(self.polys)
        T = self.polys[0].tower
        if any(p.tower != T for p in self.polys):
            raise TowerMismatch("generators live in different towers")

    @property
    def tower(self) -> FieldTower:
        return self.polys[0].tower

    @property
    def degrees(self) -> tuple:
        return tuple(p.total_degree() for p in self.polys)

    @property
    def weights(self) -> tuple:
        return self.degrees

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def to_tower(self, tower: FieldTower) -> InvariantTriple:
        return InvariantTriple(tuple(p.to_tower(tower) for p in self.polys), self.names, self.label)

    def is_invariant_under(self, G) -> bool:
        if G.tower != self.tower and not hasattr(G, "weight_invariant"):
            polys = [p.to_tower(G.tower) for p in self.polys]
        else:
            polys = self.polys
        return all(is_invariant(G, p) for p in polys)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "generators": {n: str(p) for n, p in zip(self.names, self.polys)},
            "degrees": list(self.degrees),
            "field": repr(self.tower),
        }


@dataclass
class SyzygyRelation:
    poly: TrivariatePoly
    weighted_degree: int
    kernel_dimension: int = 1
    names: tuple = ("X", "Y", "Z")

    def __str__(self):
        return str(self.poly)

    def to_json(self) -> dict:
        return {"relation": str(self.poly), "weighted_degree": self.weighted_degree, "weights": list(self.poly.weights)}


def rational_poly_to(poly: BivariatePoly, tower: FieldTower) -> BivariatePoly:
    """Map a polynomial with rational coefficients into any tower (reducing mod p if needed)."""
    if poly.tower == tower:
        return poly
    if poly.tower.depth:
        if _levels_prefix(poly.tower, tower) and poly.tower.p == tower.p:
            return poly.to_tower(tower)
        poly = poly.descend_to(poly.tower.sub_tower(0))
    return BivariatePoly(tower, dict(poly.terms))


# ---------------------------------------------------------------------------
# fundamental invariants


def _xy(tower):
    return BivariatePoly.gens(tower)


def bd_star_invariants(n: int, tower: FieldTower | None = None):
    """u = x^(2n)+y^(2n), v = (xy)^2, w = xy(x^(2n)-y^(2n))."""
    x, y = _xy(tower or FieldTower.rationals())
    u = x ** (2 * n) + y ** (2 * n)
    v = (x * y) ** 2
    w = x * y * (x ** (2 * n) - y ** (2 * n))
    return u, v, w


def bt_star_invariants(tower: FieldTower | None = None):
    """A = 2u(u^2-36v^2), B = u^2+12v^2, C = w for the BD2 invariants u, v, w."""
    u, v, w = bd_star_invariants(2, tower)
    return 2 * u * (u * u - 36 * v * v), u * u + 12 * v * v, w


def bo_invariants(tower: FieldTower | None = None):
    """R = C^2, T = C*D, E from the octahedral forms C, D, E."""
    x, y = _xy(tower or FieldTower.rationals())
    x4, y4 = x**4, y**4
    c = x * y * (x4 - y4)
    d = x**12 + y**12 - 33 * x4 * y4 * (x4 + y4)
    e = x**8 + 14 * x4 * y4 + y**8
    return c * c, c * d, e


@functools.lru_cache(maxsize=None)
def _bi_rational():
    from .groupmodels import build_bi

    G = build_bi()
    basis = invariant_space(G, 12)
    if len(basis) != 1:
        raise InvariantError(f"expected a single degree-12 invariant, found {len(basis)}")
    f = basis[0].monic()
    Q = FieldTower.rationals()
    f = f.descend_to(Q)
    H = hessian(f) / 121
    T = jacobian(f, H) / 20
    return f, H, T


def bi_invariants(tower: FieldTower | None = None):
    """f from the degree-12 Reynolds image, H = Hessian(f)/121, T = Jacobian(f, H)/20."""
    tower = tower or FieldTower.rationals()
    return tuple(rational_poly_to(p, tower) for p in _bi_rational())


_BAD_PRIMES = {"mu": (), "bd-star": (2,), "bd2": (2,), "bt-star": (2, 3), "bo": (2, 3), "bi": (2, 3, 5)}


def fundamental_invariants(kind: str, n: int | None = None, tower: FieldTower | None = None) -> InvariantTriple:
    """The three generators of the invariant ring of the (split) group of the given kind."""
    tower = tower or FieldTower.rationals()
    kind = kind.lower().replace("*", "-star")
    if kind == "bd2":
        kind, n = "bd-star", 2
    if kind not in _BAD_PRIMES:
        raise ValueError(f"unknown group kind {kind!r}")
    if tower.p in _BAD_PRIMES[kind]:
        raise WrongCharacteristic(f"{kind} is not treated in characteristic {tower.p}")
    if kind == "mu":
        if not n or n < 1:
            raise ValueError("mu needs n >= 1")
        x, y = _xy(tower)
        return InvariantTriple((x**n, y**n, x * y), ("X", "Y", "Z"), f"mu{n}")
    if kind == "bd-star":
        if not n or n < 2:
            raise ValueError("bd-star needs n >= 2")
        return InvariantTriple(bd_star_invariants(n, tower), ("u", "v", "w"), f"BD{n}*")
    if kind == "bt-star":
        return InvariantTriple(bt_star_invariants(tower), ("A", "B", "C"), "BT*")
    if kind == "bo":
        return InvariantTriple(bo_invariants(tower), ("R", "T", "E"), "BO")
    return InvariantTriple(bi_invariants(tower), ("f", "H", "T"), "BI")


# ---------------------------------------------------------------------------
# identities and syzygies


def verify_identity(F: TrivariatePoly, triple) -> tuple[bool, BivariatePoly]:
    """(True, 0) iff F(A, B, C) vanishes identically; otherwise the residual."""
    polys = tuple(triple)
    T = polys[0].tower
    if F.tower != T:
        if F.tower.p == T.p and _levels_prefix(F.tower, T):
            F = F.to_tower(T)
        else:
            raise TowerMismatch(f"relation over {F.tower!r}, generators over {T!r}")
    res = substitute(F, *polys)
    return res.is_zero(), res


def weighted_monomials(weights, degree: int) -> list[tuple]:
    """Exponents (a, b, c) with a*w0 + b*w1 + c*w2 == degree, in descending lex order."""
    w0, w1, w2 = weights
    out = []
    for a in range(degree // w0, -1, -1):
        r0 = degree - a * w0
        for b in range(r0 // w1, -1, -1):
            r1 = r0 - b * w1
            if r1 % w2 == 0:
                out.append((a, b, r1 // w2))
    return out


class _PowerCache:
    def __init__(self, polys):
        self.polys = polys
        self.cache = [[BivariatePoly.constant(p.tower, 1)] for p in polys]

    def power(self, k, e):
        c = self.cache[k]
        while len(c) <= e:
            c.append(c[-1] * self.polys[k])
        return c[e]

    def monomial(self, exp):
        out = self.power(0, exp[0])
        for k in (1, 2):
            if exp[k]:
                out = out * self.power(k, exp[k])
        return out


def _relations_at(cache, weights, degree):
    mons = weighted_monomials(weights, degree)
    if not mons:
        return mons, []
    T = cache.polys[0].tower
    evals = [cache.monomial(m) for m in mons]
    rows_keys = sorted({e for p in evals for e in p.terms})
    matrix = [[p.coefficient(e) for p in evals] for e in rows_keys]
    if not matrix:
        return mons, [[T.one() if i == j else T.zero() for i in range(len(mons))] for j in range(len(mons))]
    return mons, kernel(matrix)


def syzygy_search(triple, bound: int | None = None, start: int = 1) -> SyzygyRelation:
    """The unique relation of minimal weighted degree among the three generators."""
    polys = tuple(triple)
    weights = tuple(p.total_degree() for p in polys)
    if min(weights) <= 0:
        raise ValueError("generators must be non-constant")
    T = polys[0].tower
    bound = bound or 2 * sum(weights)
    step = math.gcd(*weights)
    cache = _PowerCache(polys)
    d = max(start, step)
    d += (-d) % step
    while d <= bound:
        mons, ker = _relations_at(cache, weights, d)
        if ker:
            if len(ker) > 1:
                raise RelationNotUnique(f"{len(ker)} independent relations in weighted degree {d}")
            F = TrivariatePoly(T, {m: c for m, c in zip(mons, ker[0]) if not c.is_zero()}, weights)
            return SyzygyRelation(F.monic(), d, 1)
        d += step
    raise NoRelationFound(f"no relation up to weighted degree {bound}")


def relation_is_principal_at(triple, relation: SyzygyRelation, extra: int) -> bool:
    """At weighted degree deg(F) + extra the relations are exactly the multiples of F."""
    polys = tuple(triple)
    weights = relation.poly.weights
    _, ker = _relations_at(_PowerCache(polys), weights, relation.weighted_degree + extra)
    return len(ker) == len(weighted_monomials(weights, extra)) if extra else len(ker) == 1


# ---------------------------------------------------------------------------
# semilinear Galois action on a span of invariants


def express_in_span(poly: BivariatePoly, basis) -> list | None:
    """Coefficients c with poly == sum c_i basis_i, or None if poly is outside the span."""
    T = poly.tower
    basis = [b.to_tower(T) if b.tower != T else b for b in basis]
    keys = sorted({e for b in basis for e in b.terms} | set(poly.terms))
    # augmented system; solve through the kernel of [basis | -poly]
    cols = [[b.coefficient(e) for e in keys] for b in basis] + [[-poly.coefficient(e) for e in keys]]
    matrix = [[col[r] for col in cols] for r in range(len(keys))]
    for vec in kernel(matrix, len(cols)):
        last = vec[-1]
        if not last.is_zero():
            return [c / last for c in vec[:-1]]
    return None


def linear_action_matrix(basis, g: Mat2) -> list[list]:
    """Rows: the image of each basis polynomial under g, in basis coordinates (rational)."""
    T = g.tower
    lifted = [rational_poly_to(b, T) for b in basis]
    rows = []
    for b in lifted:
        coeffs = express_in_span(act(g, b), lifted)
        if coeffs is None:
            raise ActionNotClosed("the substitution does not preserve the span of the generators")
        if not all(c.in_base(0) for c in coeffs):
            raise NotRational("linear action with irrational coefficients")
        rows.append([c.to_base() for c in coeffs])
    return rows


def _mat_mul(A, B):
    zero = A[0][0].tower.zero()
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), zero) for j in range(len(B[0]))] for i in range(len(A))]


class SemilinearAction:
    """Galois generators of L/k paired with rational matrices on a basis of invariants.

    Vector c (coefficients in L) maps under (s, M) to s(c) * M.
    """

    def __init__(self, tower: FieldTower, base_level: int, generators, matrices, basis):
        self.tower = tower
        self.base_level = base_level
        self.generators = list(generators)
        self.matrices = [[[tower.coerce(c) for c in row] for row in M] for M in matrices]
        self.basis = tuple(rational_poly_to(b, tower) for b in basis)
        self._group = None

    @classmethod
    def from_matrices(cls, tower, base_level, generators, substitutions, basis):
        """Build the rational matrices from 2x2 substitutions (possibly over another tower)."""
        mats = [linear_action_matrix(basis, g) for g in substitutions]
        return cls(tower, base_level, generators, mats, basis)

    @classmethod
    def trivial(cls, tower, basis):
        return cls(tower, tower.depth, [], [], basis)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def galois(self) -> GaloisGroup:
        if self._group is None:
            self._group = automorphism_group(self.tower, self.generators, self.base_level)
        return self._group

    def apply(self, k: int, vec):
        s, M = self.generators[k], self.matrices[k]
        sv = [s(c) for c in vec]
        n = len(M[0])
        return [sum((sv[i] * M[i][j] for i in range(len(sv))), self.tower.zero()) for j in range(n)]

    def is_fixed(self, vec) -> bool:
        vec = [self.tower.coerce(c) for c in vec]
        return all(self.apply(k, vec) == vec for k in range(len(self.generators)))

    def verify_cocycle(self) -> None:
        """The linear parts must form an action of the Galois group on the span.

        A word s_1 ... s_r acts with linear part M_r ... M_1 (vectors are rows); two
        words giving the same automorphism must give the same matrix.
        """
        T = self.tower
        n = self.dimension
        ident = Automorphism.identity(T)
        eye = [[T.one() if i == j else T.zero() for j in range(n)] for i in range(n)]
        seen = {ident: eye}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for s, M in zip(self.generators, self.matrices):
                    b = s.compose(a)
                    mat = _mat_mul(seen[a], M)
                    if b in seen:
                        if seen[b] != mat:
                            raise ActionNotClosed("linear parts do not form a Galois action on the span")
                    else:
                        seen[b] = mat
                        nxt.append(b)
            frontier = nxt

    def find_antiinvariant(self, k: int = 0):
        """An element s of L with gen_k(s) = -s, taken from the tower generators."""
        T = self.tower
        g = self.generators[k]
        for j in range(self.base_level + 1, T.depth + 1):
            z = T.gen(j)
            if g(z) == -z:
                return z
        raise MissingConstant("no generator of the tower is negated by the Galois element")

    def polys(self, vectors):
        out = []
        for vec in vectors:
            p = BivariatePoly(self.tower)
            for c, b in zip(vec, self.basis):
                if not c.is_zero():
                    p = p + b.scale(c)
            out.append(p)
        return out


# ---------------------------------------------------------------------------
# descent recipes


def _eigenvectors(M, sign, T):
    """Row vectors c with c M = sign * c, one per free column, first entry normalized."""
    n = len(M)
    system = [[M[j][i] - (sign if i == j else 0) for j in range(n)] for i in range(n)]
    system = [[T.coerce(c) for c in row] for row in system]
    vecs = kernel(system, n)
    out = []
    for v in vecs:
        lead = next(c for c in v if not c.is_zero())
        out.append([c / lead for c in v])
    return out


def _slot(vec) -> int:
    return next(i for i, c in enumerate(vec) if not c.is_zero())


def eigen_split(action: SemilinearAction, s: FieldElement | None = None) -> list:
    """Order-two descent: fixed vectors as they are, anti-fixed vectors times s."""
    if len(action.generators) != 1:
        raise ValueError("eigen splitting needs a single Galois generator")
    T = action.tower
    if T.p == 2:
        raise WrongCharacteristic("eigen splitting needs characteristic != 2")
    s = action.find_antiinvariant() if s is None else T.coerce(s)
    M = action.matrices[0]
    plus = [(_slot(v), 0, v) for v in _eigenvectors(M, 1, T)]
    minus = [(_slot(v), 1, [c * s for c in v]) for v in _eigenvectors(M, -1, T)]
    if len(plus) + len(minus) != action.dimension:
        raise ActionNotClosed("the Galois matrix is not diagonalizable with eigenvalues +-1")
    return [v for _, _, v in sorted(plus + minus, key=lambda t: (t[0], t[1]))]


def trace_split(action: SemilinearAction) -> list:
    """Galois traces of lambda * b_i over a basis lambda of L/k, greedily independent."""
    T = action.tower
    m = action.base_level
    gal = action.galois
    n = action.dimension
    # power basis of L over k: products of level generators above the base
    lam = [T.one()]
    for j in range(m + 1, T.depth + 1):
        g = T.gen(j)
        lam = [a * g**e for e in range(T.levels[j - 1].degree) for a in lam]
    mats = _group_matrices(action)
    out, rows = [], []
    for i in range(n):
        for a in lam:
            vec = [a if j == i else T.zero() for j in range(n)]
            tr = [T.zero()] * n
            for sigma in gal.elements:
                M = mats[sigma]
                sv = [sigma(c) for c in vec]
                img = [sum((sv[r] * M[r][c] for r in range(n)), T.zero()) for c in range(n)]
                tr = [x + y for x, y in zip(tr, img)]
            if all(c.is_zero() for c in tr):
                continue
            if _independent(rows + [tr]):
                rows.append(tr)
                out.append(tr)
        if len(out) == n:
            break
    return out


def _independent(vectors) -> bool:
    from .bipoly import rank

    return rank(vectors) == len(vectors)


def _group_matrices(action: SemilinearAction) -> dict:
    T = action.tower
    n = action.dimension
    ident = Automorphism.identity(T)
    seen = {ident: [[T.one() if i == j else T.zero() for j in range(n)] for i in range(n)]}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for s, M in zip(action.generators, action.matrices):
                b = s.compose(a)
                if b not in seen:
                    seen[b] = _mat_mul(seen[a], M)
                    nxt.append(b)
        frontier = nxt
    return seen


def lagrange_resolvent(values, zeta3, sign: int):
    """sum_i zeta3^(-sign*i) * values[i] for i = 0, 1, 2."""
    z = zeta3 ** ((-sign) % 3)
    out = values[0]
    for i in (1, 2):
        out = out + values[i] * z**i
    return out


def _vec_scale(c, v):
    return [c * a for a in v]


def _vec_add(*vs):
    return [sum(cs[1:], cs[0]) for cs in zip(*vs)]


def resolvent_vectors(f_vectors, w_vector, thetas, zeta3, sqrt_delta, sqrt_m3delta):
    """A = eta- g+ + eta+ g-, B = sqrt(-3 Delta)(eta- g+ - eta+ g-), C = sqrt(Delta) w."""
    T = zeta3.tower
    fv = [[T.coerce(c) for c in v] for v in f_vectors]
    g_plus = _vec_add(*[_vec_scale(zeta3 ** ((-i) % 3), fv[i]) for i in range(3)])
    g_minus = _vec_add(*[_vec_scale(zeta3 ** (i % 3), fv[i]) for i in range(3)])
    eta_plus = lagrange_resolvent(thetas, zeta3, 1)
    eta_minus = lagrange_resolvent(thetas, zeta3, -1)
    p = _vec_scale(eta_minus, g_plus)
    q = _vec_scale(eta_plus, g_minus)
    A = _vec_add(p, q)
    B = _vec_scale(sqrt_m3delta, _vec_add(p, _vec_scale(-T.one(), q)))
    C = _vec_scale(sqrt_delta, [T.coerce(c) for c in w_vector])
    return [A, B, C], (eta_plus, eta_minus)


def kummer_vectors(f_vectors, w_vector, beta, zeta3):
    """beta^-1 g+, beta g-, w for sigma(beta) = zeta3 * beta."""
    T = zeta3.tower
    fv = [[T.coerce(c) for c in v] for v in f_vectors]
    g_plus = _vec_add(*[_vec_scale(zeta3 ** ((-i) % 3), fv[i]) for i in range(3)])
    g_minus = _vec_add(*[_vec_scale(zeta3 ** (i % 3), fv[i]) for i in range(3)])
    return [_vec_scale(beta.inverse(), g_plus), _vec_scale(beta, g_minus), [T.coerce(c) for c in w_vector]]


def descend(triple, action: SemilinearAction, recipe: str = "auto", vectors=None, s=None) -> InvariantTriple:
    """Base-field generators of the twisted invariant ring.

    ``triple`` gives the names; ``action.basis`` must span the same generators.
    Recipes: 'trivial', 'eigen' (order two, char != 2), 'trace' (any order,
    used for Artin-Schreier twists) or 'vectors' (caller-supplied coefficient
    vectors, e.g. from ``resolvent_vectors``).  Every output vector is checked
    to be fixed by each Galois generator.
    """
    T = action.tower
    n = action.dimension
    names = tuple(getattr(triple, "names", ("A", "B", "C")))
    label = getattr(triple, "label", "")
    if recipe == "auto":
        if not action.generators:
            recipe = "trivial"
        elif len(action.generators) == 1 and T.p != 2 and action.galois.order == 2:
            recipe = "eigen"
        else:
            recipe = "trace"
    if recipe == "trivial":
        vecs = [[T.one() if i == j else T.zero() for j in range(n)] for i in range(n)]
    elif recipe == "eigen":
        vecs = eigen_split(action, s)
    elif recipe == "trace":
        vecs = trace_split(action)
    elif recipe == "vectors":
        if vectors is None:
            raise ValueError("recipe 'vectors' needs explicit vectors")
        vecs = [[T.coerce(c) for c in v] for v in vectors]
    else:
        raise ValueError(f"unknown recipe {recipe!r}")
    action.verify_cocycle()
    for v in vecs:
        if not action.is_fixed(v):
            raise NotRational("a descended generator is not fixed by the Galois action")
    polys = action.polys(vecs)
    if any(p.is_zero() for p in polys):
        raise NotRational("a descended generator vanishes")
    return InvariantTriple(tuple(polys), names, label, vecs, action.basis)


def relation_over_base(relation: SyzygyRelation, base: FieldTower) -> TrivariatePoly:
    """The relation's coefficients must lie in the base field; NotRational otherwise."""
    F = relation.poly
    if not F.coefficients_in(base.depth):
        raise NotRational("the relation has coefficients outside the base field")
    return F.descend_to(base)


# ---------------------------------------------------------------------------
# the split verification suite


def _rel(tower, terms, weights):
    return TrivariatePoly(tower, terms, weights)


def split_identity_cases(mu_range=range(2, 9), bd_range=range(2, 7), tower: FieldTower | None = None):
    """(name, relation, triple) for the split identities checked by the suite."""
    T = tower or FieldTower.rationals()
    cases = []
    for n in mu_range:
        tr = fundamental_invariants("mu", n, T)
        cases.append((f"A{n - 1} (mu{n})", _rel(T, {(1, 1, 0): 1, (0, 0, n): -1}, tr.weights), tr))
    for n in bd_range:
        tr = fundamental_invariants("bd-star", n, T)
        # w^2 - (u^2 - 4 v^n) v
        F = _rel(T, {(0, 0, 2): 1, (2, 1, 0): -1, (0, n + 1, 0): 4}, tr.weights)
        cases.append((f"D{n + 2} (BD{n}*)", F, tr))
    if T.p not in (2, 3):
        tr = fundamental_invariants("bt-star", tower=T)
        # (A/2)^2 + 108 C^4 - B^3
        F = _rel(T, {(2, 0, 0): FieldElement(T, T.base_scalar("1/4")), (0, 0, 4): 108, (0, 3, 0): -1}, tr.weights)
        cases.append(("E6 (BT*)", F, tr))
        tr = fundamental_invariants("bo", tower=T)
        # T^2 + 108 R^3 - R E^3
        F = _rel(T, {(0, 2, 0): 1, (3, 0, 0): 108, (1, 0, 3): -1}, tr.weights)
        cases.append(("E7 (BO)", F, tr))
    if T.p not in (2, 3, 5):
        tr = fundamental_invariants("bi", tower=T)
        # T^2 + H^3 + 1728 f^5
        F = _rel(T, {(0, 0, 2): 1, (0, 3, 0): 1, (5, 0, 0): 1728}, tr.weights)
        cases.append(("E8 (BI)", F, tr))
    return cases


def identity_report(name, F, triple) -> dict:
    ok, res = verify_identity(F, triple)
    out = {
        "case": name,
        "field": repr(triple.tower),
        "generators": [str(p) for p in triple],
        "relation": str(F),
        "verified": ok,
    }
    if not ok:
        out["residual"] = str(res)
    return out
