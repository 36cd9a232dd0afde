"""The classification table as data, twist enumeration, and per-case
builders producing each twisted equation over the base field.

Every builder follows the same path: build the splitting tower, pair each
Galois generator with a substitution, descend the split generators, find the
relation among the descended generators, check that it has base-field
coefficients, and match it to the table template through an explicit
substitution X = s*G_i, Y = t*G_j, Z = r*G_k that is stored in the transcript.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import invariantring as inv
from .bipoly import BivariatePoly, Mat2, TrivariatePoly
from .fieldtower import (
    Automorphism,
    FieldElement,
    FieldError,
    FieldTower,
    ReduciblePolynomial,
    _rational_roots,
    adjoin,
    adjoin_cyclotomic,
    automorphism_group,
    find_root_of_unity,
    is_square,
    polynomial_roots,
    rational_sqrt,
    sqrt,
)
from .groupmodels import bo_generators
from .mckay import DynkinLabel, beta, compose, fold


class TwistError(FieldError):
    pass


class DegenerateCubic(TwistError):
    pass


class UnsupportedCharacteristic(TwistError):
    pass


class UnsupportedCase(TwistError):
    pass


class SplitParameter(TwistError):
    """The extension parameter is trivial (e.g. d is a square): no twist."""


class MatchFailure(TwistError):
    def __init__(self, msg, relation=None, template=None):
        super().__init__(msg)
        self.relation = relation
        self.template = template


class LabelMismatch(TwistError):
    pass


# ---------------------------------------------------------------------------
# the table


@dataclass
class SingularityEquation:
    label: DynkinLabel
    poly: TrivariatePoly | None
    params: dict
    splitting_field: str
    char_constraints: str
    printed: str = ""
    transcript: dict = field(default_factory=dict)

    @property
    def equation(self) -> str:
        return str(self.poly) if self.poly is not None else self.printed

    def to_json(self) -> dict:
        return {
            "label": str(self.label),
            "rank": self.label.rank,
            "equation": self.equation,
            "table_form": self.printed,
            "params": {k: str(v) for k, v in self.params.items()},
            "splitting_field": self.splitting_field,
            "char_constraints": self.char_constraints,
            "transcript": self.transcript,
        }


# (key, family, rank rule, printed row, characteristic side-condition, split?, form used for matching)
_ROWS = [
    ("A", "A", "n-1", "XY = Z^n", "any p", True, "XY - Z^n"),
    ("D", "D", "n+2", "Y^2 - X^2Z = Z^(n+1)", "p != 2", True, "Y^2 - X^2Z + Z^(n+1)"),
    ("E6", "E", "6", "X^2 - 4Y^4 = Z^3", "p != 2, 3", True, "X^2 - 4Y^4 - Z^3"),
    ("E7", "E", "7", "X^2 + 4Y^3 = YZ^3", "p != 2, 3", True, "X^2 + 4Y^3 - YZ^3"),
    ("E8", "E", "8", "X^2 + Y^3 + Z^5 = 0", "p != 2, 3, 5", True, "X^2 + Y^3 + Z^5"),
    ("B", "B", "beta(n)", "dX^2 - Y^2 = 4dZ^n", "p != 2", False, "dX^2 - Y^2 - 4dZ^n"),
    ("B2", "B", "beta(n)", "dX^2 + XY + Y^2 = Z^n", "p = 2", False, "dX^2 + XY + Y^2 - Z^n"),
    ("C", "C", "n+1", "Y^2 - X^2Z = 4dZ^(n+1)", "p != 2", False, "Y^2 - X^2Z + 4dZ^(n+1)"),
    ("F4", "F", "4", "X^2 - 4dY^4 = Z^3", "p != 2, 3", False, "X^2 - 4dY^4 - Z^3"),
    ("C3", "C", "3", "Y^2 - X^2Z = 4dZ^3", "p != 2", False, "Y^2 - X^2Z + 4dZ^3"),
    (
        "G2",
        "G",
        "2",
        "2aZ^2 = bX(DX^2 - 9Y^2) + Y(DX^2 - Y^2)",
        "p != 2, 3",
        False,
        "2aZ^2 - bX(DX^2 - 9Y^2) - Y(DX^2 - Y^2), D = -4a^3 - 27b^2",
    ),
    ("G2-3", "G", "2", "Z^2 = bX^3 + aX^2Y + Y^3", "p = 3", False, "Z^2 - bX^3 - aX^2Y - Y^3"),
]

_SPLITS = {
    "A": "k",
    "D": "k",
    "E6": "k",
    "E7": "k",
    "E8": "k",
    "B": "k(sqrt d)",
    "B2": "k(alpha), alpha^2 - alpha = d",
    "C": "k(sqrt d)",
    "F4": "k(sqrt d)",
    "C3": "k(sqrt d)",
    "G2": "splitting field of t^3 + at + b",
    "G2-3": "splitting field of t^3 + at + b",
}


def _excluded_primes(cond: str) -> tuple:
    if cond.startswith("p != "):
        return tuple(int(x) for x in cond[5:].split(","))
    return ()


def _allowed(cond: str, p: int) -> bool:
    if cond == "any p":
        return True
    if cond.startswith("p = "):
        return p == int(cond[4:])
    return p not in _excluded_primes(cond)


def classification_table(char: int | None = None) -> list[SingularityEquation]:
    """All rows, optionally restricted to those valid in characteristic ``char``."""
    out = []
    for key, fam, rank, printed, cond, split, used in _ROWS:
        if char is not None and not _allowed(cond, char):
            continue
        label = DynkinLabel(fam, int(rank)) if rank.isdigit() else DynkinLabel(fam, 0)
        eq = SingularityEquation(
            label,
            None,
            {"rank": rank},
            _SPLITS[key],
            cond,
            printed,
            {"key": key, "split": split, "matching_form": used},
        )
        out.append(eq)
    return out


# ---------------------------------------------------------------------------
# templates as polynomials


def _T(tower, terms, weights):
    return TrivariatePoly(tower, terms, weights)


def template(key: str, tower: FieldTower, weights, **p) -> TrivariatePoly:
    """The matching form of a table row with its parameters substituted."""
    c = tower.coerce
    if key == "A":
        n = p["n"]
        return _T(tower, {(1, 1, 0): 1, (0, 0, n): -1}, weights)
    if key == "D":
        n = p["n"]
        return _T(tower, {(0, 2, 0): 1, (2, 0, 1): -1, (0, 0, n + 1): 1}, weights)
    if key == "E6":
        return _T(tower, {(2, 0, 0): 1, (0, 4, 0): -4, (0, 0, 3): -1}, weights)
    if key == "E7":
        return _T(tower, {(2, 0, 0): 1, (0, 3, 0): 4, (0, 1, 3): -1}, weights)
    if key == "E8":
        return _T(tower, {(2, 0, 0): 1, (0, 3, 0): 1, (0, 0, 5): 1}, weights)
    if key == "B":
        d, n = c(p["d"]), p["n"]
        return _T(tower, {(2, 0, 0): d, (0, 2, 0): -1, (0, 0, n): -4 * d}, weights)
    if key == "B2":
        d, n = c(p["d"]), p["n"]
        return _T(tower, {(2, 0, 0): d, (1, 1, 0): 1, (0, 2, 0): 1, (0, 0, n): -1}, weights)
    if key == "C":
        d, n = c(p["d"]), p["n"]
        return _T(tower, {(0, 2, 0): 1, (2, 0, 1): -1, (0, 0, n + 1): 4 * d}, weights)
    if key == "F4":
        d = c(p["d"])
        return _T(tower, {(2, 0, 0): 1, (0, 4, 0): -4 * d, (0, 0, 3): -1}, weights)
    if key == "C3":
        d = c(p["d"])
        return _T(tower, {(0, 2, 0): 1, (2, 0, 1): -1, (0, 0, 3): 4 * d}, weights)
    if key == "G2":
        a, b = c(p["a"]), c(p["b"])
        D = -4 * a**3 - 27 * b**2
        # 2a Z^2 - b X (D X^2 - 9 Y^2) - Y (D X^2 - Y^2)
        terms = {(0, 0, 2): 2 * a, (3, 0, 0): -b * D, (1, 2, 0): 9 * b, (2, 1, 0): -D, (0, 3, 0): c(1)}
        return _T(tower, terms, weights)
    if key == "G2-3":
        a, b = c(p["a"]), c(p["b"])
        return _T(tower, {(0, 0, 2): 1, (3, 0, 0): -b, (2, 1, 0): -a, (0, 3, 0): -1}, weights)
    if key == "G2-kummer":
        b = c(p["b"])
        return _T(tower, {(0, 0, 2): 1, (3, 0, 0): -b, (0, 3, 0): -b.inverse()}, weights)
    raise KeyError(key)


# ---------------------------------------------------------------------------
# matching


@dataclass
class Substitution:
    """X = scalars[0]*G[index[0]], Y = scalars[1]*G[index[1]], Z = scalars[2]*G[index[2]]."""

    index: tuple
    scalars: tuple

    def apply(self, triple):
        T = triple.tower
        return tuple(triple[i].scale(T.coerce(s)) for i, s in zip(self.index, self.scalars))

    def weights(self, triple) -> tuple:
        return tuple(triple.degrees[i] for i in self.index)

    def pullback(self, F: TrivariatePoly, gen_weights) -> TrivariatePoly:
        """F(X, Y, Z) rewritten in the generator variables."""
        T = F.tower
        s = [T.coerce(x) for x in self.scalars]
        out = {}
        for e, c in F.terms.items():
            ne = [0, 0, 0]
            coeff = F.coefficient(e)
            for k in range(3):
                ne[self.index[k]] += e[k]
                coeff = coeff * s[k] ** e[k]
            out[tuple(ne)] = coeff
        return TrivariatePoly(T, out, gen_weights)

    def describe(self, names) -> list[str]:
        return [f"{v} = {_scalar_str(s)}{names[i]}" for v, i, s in zip("XYZ", self.index, self.scalars)]


def _scalar_str(s) -> str:
    t = str(s)
    if t == "1":
        return ""
    if t == "-1":
        return "-"
    if any(ch in t for ch in " +") or (t.startswith("-") and any(ch in t[1:] for ch in "+-")):
        return f"({t})*"
    return t + "*"


def match_template(triple, key, base: FieldTower, subst: Substitution, **params) -> dict:
    """Verify the template on the substituted generators and compare with the found relation."""
    L = triple.tower
    weights = subst.weights(triple)
    F = template(key, base, weights, **params)
    ok_t, res_t = inv.verify_identity(F.to_tower(L), subst.apply(triple))
    rel = inv.syzygy_search(triple)
    ok_r, res_r = inv.verify_identity(rel.poly, triple)
    rel_k = inv.relation_over_base(rel, base)
    pulled = subst.pullback(F.to_tower(L), triple.degrees)
    ratio = pulled.proportional_to(rel.poly)
    transcript = {
        "generators": {n: str(p) for n, p in zip(triple.names, triple)},
        "relation": str(rel_k),
        "relation_weights": list(rel.poly.weights),
        "relation_residual": "0" if ok_r else str(res_r),
        "template": str(F),
        "substitution": subst.describe(triple.names),
        "template_residual": "0" if ok_t else str(res_t),
        "proportionality": None if ratio is None else str(ratio),
        "verified": bool(ok_t and ok_r and ratio is not None),
    }
    if not transcript["verified"]:
        raise MatchFailure(f"template {key} does not match the relation", str(rel_k), str(F))
    return {"poly": F, "transcript": transcript, "relation": rel_k}


# ---------------------------------------------------------------------------
# field helpers


def _fixing(L: FieldTower, m: int, new_images) -> Automorphism:
    """Automorphism fixing the first m levels with the given images of the rest."""
    return Automorphism(L, [L.gen(j) for j in range(1, m + 1)] + [L.coerce(x) for x in new_images])


def _square_root_in(k: FieldTower, x) -> FieldElement | None:
    """A square root of x in k, or None.  Supports Q, finite towers and Q(zeta3)."""
    x = k.coerce(x)
    if k.p:
        return sqrt(x)
    if k.depth == 0:
        return sqrt(x)
    if x.in_base():
        q = x.to_base()
        r = rational_sqrt(q)
        if r is not None:
            return k.coerce(r)
        z3 = find_root_of_unity(k, 3)
        if z3 is not None:
            r = rational_sqrt(-3 * q)
            if r is not None:
                return k.coerce(r) / (2 * z3 + 1)
        return None
    raise UnsupportedCase("square roots of irrational elements are not supported")


def _prime(k: FieldTower) -> FieldTower:
    return FieldTower(k.p) if k.p else FieldTower.rationals()


def _matrix_tower(k: FieldTower, m: int):
    return adjoin_cyclotomic(_prime(k), m)


def _check_char(k: FieldTower, bad):
    if k.p in bad:
        raise UnsupportedCharacteristic(f"characteristic {k.p} is excluded for this case")


def quadratic_extension(k: FieldTower, d, name: str = "sqrtd"):
    d = k.coerce(d)
    if d.is_zero():
        raise ValueError("d must be nonzero")
    if _square_root_in(k, d) is not None:
        raise SplitParameter(f"{d} is a square in {k!r}")
    L = adjoin(k, name, [-d, 0, 1])
    return L, L.gen(L.depth)


def _ident_vectors(L, n):
    return [[L.one() if i == j else L.zero() for j in range(n)] for i in range(n)]


def _named(triple, names, label=""):
    return inv.InvariantTriple(triple.polys, names, label, triple.vectors, triple.basis)


# ---------------------------------------------------------------------------
# split builders


def build_split(key: str, n: int | None = None, k: FieldTower | None = None) -> SingularityEquation:
    k = k or FieldTower.rationals()
    if key == "A":
        tr = inv.fundamental_invariants("mu", n, k)
        tr = inv.InvariantTriple(tr.polys, ("x^n", "y^n", "xy"), tr.label)
        sub = Substitution((0, 1, 2), (1, 1, 1))
        label, params = DynkinLabel("A", n - 1), {"n": n}
    elif key == "D":
        _check_char(k, (2,))
        tr = inv.fundamental_invariants("bd-star", n, k)
        sub = Substitution((0, 2, 1), (2 ** (n - 1), 2**n, 4))
        label, params = DynkinLabel("D", n + 2), {"n": n}
    elif key == "E6":
        eq = build_f4(1, k)
        return eq
    elif key == "E7":
        _check_char(k, (2, 3))
        tr = inv.fundamental_invariants("bo", tower=k)
        sub = Substitution((1, 0, 2), (27, 27, 3))
        label, params = DynkinLabel("E", 7), {}
    elif key == "E8":
        _check_char(k, (2, 3, 5))
        tr = inv.fundamental_invariants("bi", tower=k)
        sub = Substitution((2, 1, 0), (144**3, 144**2, 1728))
        label, params = DynkinLabel("E", 8), {}
    else:
        raise KeyError(key)
    m = match_template(tr, key, k, sub, **params)
    printed = next(r[3] for r in _ROWS if r[0] == key)
    cond = next(r[4] for r in _ROWS if r[0] == key)
    return SingularityEquation(label, m["poly"], params, repr(k), cond, printed, m["transcript"])


# ---------------------------------------------------------------------------
# A -> B


def _swap():
    Q = FieldTower.rationals()
    return Mat2(0, 1, 1, 0, Q)


def build_b(n: int, d, k: FieldTower | None = None) -> SingularityEquation:
    """Quadratic twist of mu_n (char != 2) or Artin-Schreier twist (char 2)."""
    k = k or FieldTower.rationals()
    if n < 2:
        raise ValueError("n must be at least 2")
    if k.p == 2:
        return build_b_char2(n, d, k)
    L, s = quadratic_extension(k, d)
    sigma = _fixing(L, k.depth, [-s])
    basis = inv.fundamental_invariants("mu", n).polys
    # the swap x <-> y has determinant -1; it normalizes mu_n and squares to 1
    action = inv.SemilinearAction.from_matrices(L, k.depth, [sigma], [_swap().to_tower(FieldTower.rationals())], basis)
    split = inv.InvariantTriple(action.polys(_ident_vectors(L, 3)), ("x^n", "y^n", "xy"))
    tr = _named(inv.descend(split, action, "eigen", s=s), ("A", "B", "C"))
    m = match_template(tr, "B", k, Substitution((0, 1, 2), (1, 1, 1)), d=d, n=n)
    m["transcript"]["recipe"] = "eigen splitting, sigma paired with the swap x <-> y"
    return SingularityEquation(
        DynkinLabel("B", beta(n)),
        m["poly"],
        {"n": n, "d": k.coerce(d)},
        f"{k!r}(sqrt({d}))",
        "p != 2",
        "dX^2 - Y^2 = 4dZ^n",
        m["transcript"],
    )


def artin_schreier_extension(k: FieldTower, d, name: str = "alpha"):
    d = k.coerce(d)
    try:
        L = adjoin(k, name, [-d, -1, 1])
    except ReduciblePolynomial as exc:
        raise SplitParameter(f"{d} lies in the image of x^2 - x") from exc
    return L, L.gen(L.depth)


def build_b_char2(n: int, d, k: FieldTower) -> SingularityEquation:
    L, alpha = artin_schreier_extension(k, d)
    sigma = _fixing(L, k.depth, [alpha + 1])
    basis = inv.fundamental_invariants("mu", n).polys
    action = inv.SemilinearAction.from_matrices(L, k.depth, [sigma], [_swap()], basis)
    split = inv.InvariantTriple(action.polys(_ident_vectors(L, 3)), ("x^n", "y^n", "xy"))
    tr = _named(inv.descend(split, action, "trace"), ("A", "B", "C"))
    m = match_template(tr, "B2", k, Substitution((0, 1, 2), (1, 1, 1)), d=d, n=n)
    m["transcript"]["recipe"] = "Galois traces, sigma paired with the swap x <-> y"
    return SingularityEquation(
        DynkinLabel("B", beta(n)),
        m["poly"],
        {"n": n, "d": k.coerce(d)},
        f"{k!r}(alpha), alpha^2 - alpha = {d}",
        "p = 2",
        "dX^2 + XY + Y^2 = Z^n",
        m["transcript"],
    )


# ---------------------------------------------------------------------------
# D -> C


def build_c(n: int, d, k: FieldTower | None = None) -> SingularityEquation:
    k = k or FieldTower.rationals()
    _check_char(k, (2,))
    if n < 3:
        raise ValueError("the C-type twist needs n >= 3; use build_c3 for D4")
    L, s = quadratic_extension(k, d)
    sigma = _fixing(L, k.depth, [-s])
    M, z = _matrix_tower(k, 4 * n)
    basis = inv.bd_star_invariants(n)
    action = inv.SemilinearAction.from_matrices(L, k.depth, [sigma], [Mat2.diag(z, z.inverse())], basis)
    split = inv.InvariantTriple(action.polys(_ident_vectors(L, 3)), ("u", "v", "w"))
    tr = _named(inv.descend(split, action, "eigen", s=s), ("U", "V", "W"))
    m = match_template(tr, "C", k, Substitution((0, 2, 1), (1, 1, 1)), d=d, n=n)
    m["transcript"]["recipe"] = "eigen splitting, sigma paired with diag(zeta, zeta^-1), zeta of order 4n"
    m["transcript"]["table_parameter"] = str(-k.coerce(d))
    return SingularityEquation(
        DynkinLabel("C", n + 1),
        m["poly"],
        {"n": n, "d": k.coerce(d)},
        f"{k!r}(sqrt({d}))",
        "p != 2",
        "Y^2 - X^2Z = 4dZ^(n+1)",
        m["transcript"],
    )


# ---------------------------------------------------------------------------
# E6 -> F4


def build_f4(d, k: FieldTower | None = None) -> SingularityEquation:
    """F4 with parameter d, realized as the twist of BT* by sqrt(-3d)."""
    k = k or FieldTower.rationals()
    _check_char(k, (2, 3))
    d = k.coerce(d)
    dstar = -3 * d
    basis = inv.bt_star_invariants()
    s = _square_root_in(k, dstar)
    if s is None:
        L, s = quadratic_extension(k, dstar, "sqrt3d")
        sigma = _fixing(L, k.depth, [-s])
        M, z8 = _matrix_tower(k, 8)
        action = inv.SemilinearAction.from_matrices(L, k.depth, [sigma], [Mat2.diag(z8, z8.inverse())], basis)
        split = inv.InvariantTriple(action.polys(_ident_vectors(L, 3)), ("A", "B", "C"))
        tr = inv.descend(split, action, "eigen", s=s)
        recipe = "eigen splitting, sigma paired with diag(zeta8, zeta8^-1)"
    else:
        L = k
        action = inv.SemilinearAction.trivial(L, basis)
        vecs = [[s, L.zero(), L.zero()], [L.zero(), L.one(), L.zero()], [L.zero(), L.zero(), s]]
        tr = inv.descend(inv.InvariantTriple(action.polys(_ident_vectors(L, 3))), action, "vectors", vectors=vecs)
        recipe = "-3d is a square: no extension needed"
    tr = _named(tr, ("A~", "B", "C~"))
    r = _square_root_in(k, d)
    split_form = r is not None
    if split_form:
        # d = r^2: X -> r^3 X, Y -> r Y, Z -> r^2 Z turns the F4 form into r^6 times the E6 form
        sub = Substitution((0, 2, 1), (dstar / (2 * r**3), 3 / r, dstar / r**2))
    else:
        sub = Substitution((0, 2, 1), (dstar / 2, 3, dstar))
    key = "E6" if split_form else "F4"
    params = {} if split_form else {"d": d}
    m = match_template(tr, key, k, sub, **params)
    m["transcript"]["recipe"] = recipe
    if split_form:
        return SingularityEquation(DynkinLabel("E", 6), m["poly"], {}, repr(k), "p != 2, 3", "X^2 - 4Y^4 = Z^3", m["transcript"])
    return SingularityEquation(
        DynkinLabel("F", 4),
        m["poly"],
        {"d": d},
        f"{k!r}(sqrt({d}))",
        "p != 2, 3",
        "X^2 - 4dY^4 = Z^3",
        m["transcript"],
    )


# ---------------------------------------------------------------------------
# D4 -> C3 and G2


_F_VECTORS = [(0, -4, 0), (1, 2, 0), (-1, 2, 0)]  # f0 = -4v, f1 = u + 2v, f2 = -u + 2v
_W_VECTOR = (0, 0, 1)


def _bd2_matrices(k: FieldTower):
    M, z8 = _matrix_tower(k, 8)
    sigma = bo_generators(M)[3]
    tau = Mat2.diag(z8, z8.inverse())
    return M, sigma, tau


def _transposition_fixing(j: int, k: FieldTower):
    """A substitution fixing f_j and swapping the other two, with its linear action."""
    M, sigma, tau = _bd2_matrices(k)
    basis = inv.bd_star_invariants(2)
    fpolys = [sum((basis[i] * c for i, c in enumerate(v) if c), BivariatePoly(basis[0].tower)) for v in _F_VECTORS]
    P = _prime(k)
    target = [P.coerce(c) for c in _F_VECTORS[j]]
    for cand in (tau, sigma * tau * sigma.inverse(), sigma.inverse() * tau * sigma):
        lin = inv.linear_action_matrix(basis, cand)
        img = [sum((P.coerce(lin[i][col]) * _F_VECTORS[j][i] for i in range(3)), P.zero()) for col in range(3)]
        if img == target:
            return cand, fpolys
    raise UnsupportedCase("no transposition found")


def build_c3(d, k: FieldTower | None = None, fixed: int = 0) -> SingularityEquation:
    """Quadratic twist of BD2 through a transposition of the three f_i."""
    k = k or FieldTower.rationals()
    _check_char(k, (2,))
    L, s = quadratic_extension(k, d)
    sigma = _fixing(L, k.depth, [-s])
    mat, fpolys = _transposition_fixing(fixed, k)
    e = [fixed, (fixed + 1) % 3, (fixed + 2) % 3]
    w = inv.bd_star_invariants(2)[2]
    basis = (fpolys[e[0]], fpolys[e[1]] - fpolys[e[2]], w)
    action = inv.SemilinearAction.from_matrices(L, k.depth, [sigma], [mat], basis)
    split = inv.InvariantTriple(action.polys(_ident_vectors(L, 3)), ("f_e0", "f_e1 - f_e2", "w"))
    g = inv.descend(split, action, "eigen", s=s)
    # A = f_e0, B = sqrt(d)(f_e1 - f_e2), C = 2 sqrt(d) w
    tr = inv.InvariantTriple((g[0], g[1], g[2].scale(L.coerce(2))), ("A", "B", "C"))
    four = inv._rel(k, {(0, 0, 2): 4, (3, 0, 0): -k.coerce(d), (1, 2, 0): 1}, tr.degrees)
    ok, _ = inv.verify_identity(four.to_tower(L), tr)
    m = match_template(tr, "C3", k, Substitution((1, 2, 0), (2, 4, -1)), d=d)
    m["transcript"]["recipe"] = f"eigen splitting on (f_{e[0]}, f_{e[1]} - f_{e[2]}, w)"
    m["transcript"]["identity 4C^2 = A(dA^2 - B^2)"] = bool(ok)
    m["transcript"]["table_parameter"] = str(-k.coerce(d))
    if not ok:
        raise MatchFailure("4C^2 = A(dA^2 - B^2) fails")
    return SingularityEquation(
        DynkinLabel("C", 3),
        m["poly"],
        {"d": k.coerce(d)},
        f"{k!r}(sqrt({d}))",
        "p != 2",
        "Y^2 - X^2Z = 4dZ^3",
        m["transcript"],
    )


def cubic_discriminant(a, b):
    return -4 * a**3 - 27 * b**2


def _cubic_has_root(k: FieldTower, a, b) -> bool:
    coeffs = [k.coerce(b), k.coerce(a), k.zero(), k.one()]
    if k.p:
        return bool(polynomial_roots(k, coeffs))
    if k.depth == 0:
        return bool(_rational_roots([c.to_base() for c in coeffs]))
    try:
        adjoin(k, "_probe", coeffs)
    except ReduciblePolynomial:
        return True
    return False


def cubic_galois_order(k: FieldTower, a, b) -> int:
    """3 or 6 for an irreducible separable cubic t^3 + at + b."""
    if _cubic_has_root(k, a, b):
        raise DegenerateCubic("the cubic has a root in the base field")
    D = cubic_discriminant(k.coerce(a), k.coerce(b))
    if k.p == 3:
        if k.coerce(a).is_zero():
            raise DegenerateCubic("a = 0 gives an inseparable cubic in characteristic 3")
        return 3 if _square_root_in(k, -k.coerce(a)) is not None else 6
    if D.is_zero():
        raise DegenerateCubic("zero discriminant")
    return 3 if _square_root_in(k, D) is not None else 6


def build_g2(a, b, k: FieldTower | None = None) -> SingularityEquation:
    k = k or FieldTower.rationals()
    _check_char(k, (2,))
    if k.p == 3:
        return build_g2_char3(a, b, k)
    a, b = k.coerce(a), k.coerce(b)
    order = cubic_galois_order(k, a, b)
    if a.is_zero():
        return build_g2_kummer(b, k)
    D = cubic_discriminant(a, b)
    m0 = k.depth
    # tower k(sqrt D)(theta)(zeta3), skipping levels already present
    sD = _square_root_in(k, D)
    T = k
    if sD is None:
        T = adjoin(T, "sD", [-D, 0, 1])
        sD = T.gen(T.depth)
    T = adjoin(T, "theta", [b, a, 0, 1])
    z3 = find_root_of_unity(T, 3)
    if z3 is None:
        T, z3 = adjoin_cyclotomic(T, 3, "zeta3")
    L = T
    sD, z3, a_, b_ = L.coerce(sD), L.coerce(z3), L.coerce(a), L.coerce(b)
    th = L.gen("theta")
    fp = 3 * th**2 + a_
    th1 = (-th + sD / fp) / 2
    th2 = (-th - sD / fp) / 2
    names = [lv.name for lv in L.levels[m0:]]

    def images(**kw):
        base = {"sD": L.gen("sD") if "sD" in names else None, "theta": th, "zeta3": L.gen("zeta3") if "zeta3" in names else None}
        base.update(kw)
        return [base[nm] for nm in names]

    Mt, smat, tmat = _bd2_matrices(k)
    gens, mats = [_fixing(L, m0, images(theta=th1))], [smat]
    if "sD" in names:
        gens.append(_fixing(L, m0, images(sD=-L.gen("sD"))))
        mats.append(tmat)
    if "zeta3" in names:
        gens.append(_fixing(L, m0, images(zeta3=L.gen("zeta3") ** 2)))
        mats.append(Mat2.identity(Mt))
    if gens[0](th1) != th2:
        raise TwistError("the chosen automorphism does not cycle the roots")
    basis = inv.bd_star_invariants(2)
    action = inv.SemilinearAction.from_matrices(L, m0, gens, mats, basis)
    gal = action.galois
    if gal.order != L.degree_over(m0):
        raise TwistError("Galois group of the tower has the wrong order")
    sm3D = sD * (2 * z3 + 1)
    vecs, (ep, em) = inv.resolvent_vectors(_F_VECTORS, _W_VECTOR, [th, th1, th2], z3, sD, sm3D)
    split = inv.InvariantTriple(action.polys(_ident_vectors(L, 3)), ("u", "v", "w"))
    tr = _named(inv.descend(split, action, "vectors", vectors=vecs), ("A", "B", "C"))
    diff = (ep**3 - em**3) / (3 * sm3D)
    sign = 1 if diff == 1 else -1
    tried = []
    m = None
    for eps in (1, -1):
        sub = Substitution((0, 1, 2), (3, eps, 108 * a))
        try:
            m = match_template(tr, "G2", k, sub, a=a, b=b)
            break
        except MatchFailure:
            tried.append(eps)
    if m is None:
        raise MatchFailure("neither sign variant matched")
    m["transcript"].update(
        {
            "recipe": "Lagrange resolvents g+-, eta+- in the tower " + repr(L),
            "galois_order": gal.order,
            "cubic_galois": "Z/3" if order == 3 else "S3",
            "eta+ eta-": str(ep * em),
            "(eta+)^3 - (eta-)^3 = s*3*sqrt(-3D), s": str(sign),
            "sign_variant": "Y = B" if eps == 1 else "Y = -B",
            "rejected_variants": ["Y = B" if e == 1 else "Y = -B" for e in tried],
            "D": str(D),
        }
    )
    return SingularityEquation(
        DynkinLabel("G", 2),
        m["poly"],
        {"a": a, "b": b, "D": D},
        f"splitting field of t^3 + ({a})t + ({b}) over {k!r}",
        "p != 2, 3",
        "2aZ^2 = bX(DX^2 - 9Y^2) + Y(DX^2 - Y^2)",
        m["transcript"],
    )


def build_g2_kummer(b, k: FieldTower) -> SingularityEquation:
    """Pure cubic t^3 + b over a field containing zeta3."""
    z3 = find_root_of_unity(k, 3)
    if z3 is None:
        raise UnsupportedCase("the pure-cubic branch needs zeta3 in the base field")
    b = k.coerce(b)
    L = adjoin(k, "beta", [b, 0, 0, 1])
    be = L.gen(L.depth)
    z3 = L.coerce(z3)
    sigma = _fixing(L, k.depth, [z3 * be])
    Mt, smat, _ = _bd2_matrices(k)
    basis = inv.bd_star_invariants(2)
    action = inv.SemilinearAction.from_matrices(L, k.depth, [sigma], [smat], basis)
    vecs = inv.kummer_vectors(_F_VECTORS, _W_VECTOR, be, z3)
    split = inv.InvariantTriple(action.polys(_ident_vectors(L, 3)), ("u", "v", "w"))
    tr = _named(inv.descend(split, action, "vectors", vectors=vecs), ("A", "B", "C"))
    # 108 w^2 = -bA^3 - b^-1 B^3, so Z = 6 sqrt(-3) w
    s3 = 6 * (2 * L.coerce(z3) + 1)
    m = match_template(tr, "G2-kummer", k, Substitution((0, 1, 2), (1, 1, FieldElement(k, s3.descend(k.depth)))), b=b)
    m["transcript"]["recipe"] = "Kummer generators beta^-1 g+, beta g-, w"
    return SingularityEquation(
        DynkinLabel("G", 2),
        m["poly"],
        {"a": k.zero(), "b": b},
        f"{k!r}(beta), beta^3 = {-b}",
        "p != 2, 3",
        "Z^2 = bX^3 + b^-1 Y^3",
        m["transcript"],
    )


def build_g2_char3(a, b, k: FieldTower) -> SingularityEquation:
    """Characteristic 3: Artin-Schreier generator beta with sigma(beta) = beta + 1."""
    a, b = k.coerce(a), k.coerce(b)
    order = cubic_galois_order(k, a, b)
    if order != 3:
        raise UnsupportedCase("an S3 cubic cannot occur over a finite field")
    r = _square_root_in(k, -a)
    c = b / (a * r)
    L = adjoin(k, "beta", [-c, -1, 0, 1])
    be = L.gen(L.depth)
    sigma = _fixing(L, k.depth, [be + 1])
    Mt, smat, _ = _bd2_matrices(k)
    basis = inv.bd_star_invariants(2)
    action = inv.SemilinearAction.from_matrices(L, k.depth, [sigma], [smat], basis)
    vecs = [[L.one(), L.zero(), L.zero()], [be, L.one(), L.zero()], [L.zero(), L.zero(), L.one()]]
    split = inv.InvariantTriple(action.polys(_ident_vectors(L, 3)), ("u", "v", "w"))
    tr = _named(inv.descend(split, action, "vectors", vectors=vecs), ("U", "V", "W"))
    m = match_template(tr, "G2-3", k, Substitution((0, 1, 2), (-r.inverse(), -1, 1)), a=a, b=b)
    m["transcript"]["recipe"] = "U = u, V = v + beta u, W = w with beta^3 - beta = b/(a sqrt(-a))"
    return SingularityEquation(
        DynkinLabel("G", 2),
        m["poly"],
        {"a": a, "b": b},
        f"{k!r}(beta), beta^3 - beta = {c}",
        "p = 3",
        "Z^2 = bX^3 + aX^2Y + Y^3",
        m["transcript"],
    )


# ---------------------------------------------------------------------------
# base change back to the split form


def _linear_combo(L, triple, coeffs):
    out = BivariatePoly(L)
    for c, p in zip(coeffs, triple):
        c = L.coerce(c)
        if not c.is_zero():
            out = out + p.scale(c)
    return out


def base_change_check(eq: SingularityEquation) -> dict:
    """Over the splitting field the nonsplit equation becomes the split template."""
    fam = eq.label.family
    if fam == "B" and "d" in eq.params and eq.printed.startswith("dX^2 - Y^2"):
        n, d = eq.params["n"], eq.params["d"]
        k = d.tower
        L, s = quadratic_extension(k, d)
        A, B, C = inv.fundamental_invariants("mu", n, L).polys
        # descended generators, then the inverse change of variables
        Ad, Bd = A + B, (A - B).scale(s)
        Xp = (Ad.scale(s) - Bd).scale((4 * L.coerce(d)).inverse())
        Yp = Ad.scale(s) + Bd
        tr = inv.InvariantTriple((Xp, Yp, C))
        rel = inv.syzygy_search(tr)
        F = template("A", L, tr.degrees, n=n)
        return {"split_label": f"A{n - 1}", "relation": str(rel), "matches": rel.poly.proportional_to(F) is not None}
    if fam == "C" and eq.label.rank > 3:
        n, d = eq.params["n"], eq.params["d"]
        k = d.tower
        L, s = quadratic_extension(k, d)
        u, v, w = inv.bd_star_invariants(n, L)
        U, V, W = u.scale(s), v, w.scale(s)
        si = s.inverse()
        tr = inv.InvariantTriple((U.scale(si * 2 ** (n - 1)), W.scale(si * 2**n), V.scale(L.coerce(4))))
        rel = inv.syzygy_search(tr)
        F = template("D", L, tr.degrees, n=n)
        return {"split_label": f"D{n + 2}", "relation": str(rel), "matches": rel.poly.proportional_to(F) is not None}
    if fam == "F":
        d = eq.params["d"]
        k = d.tower
        L, s = quadratic_extension(k, d)
        dd = L.coerce(d)
        F = eq.poly.to_tower(L).substitute_scaled(s / dd**2, dd.inverse(), dd.inverse())
        E6 = template("E6", L, eq.poly.weights)
        return {"split_label": "E6", "relation": str(F), "matches": F.proportional_to(E6) is not None}
    raise UnsupportedCase(f"no base-change check for {eq.label}")


# ---------------------------------------------------------------------------
# twist enumeration


@dataclass
class PermGroup:
    """A finite group given by permutation generators."""

    generators: list
    name: str = ""
    elements: list = field(default_factory=list)

    def __post_init__(self):
        self.generators = [tuple(g) for g in self.generators]
        if not self.elements:
            self.elements = _closure(self.generators, self.degree)

    @property
    def degree(self) -> int:
        return len(self.generators[0]) if self.generators else 1

    @property
    def order(self) -> int:
        return len(self.elements)

    @classmethod
    def trivial(cls):
        return cls([(0,)], "1")

    @classmethod
    def cyclic(cls, n: int):
        if n == 1:
            return cls.trivial()
        return cls([tuple((i + 1) % n for i in range(n))], f"Z/{n}")

    @classmethod
    def symmetric3(cls):
        return cls([(1, 2, 0), (0, 2, 1)], "S3")


def _closure(gens, n):
    ident = tuple(range(n))
    seen = [ident]
    index = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = compose(g, a)
                if b not in index:
                    index.add(b)
                    seen.append(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def _inverse_perm(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def homomorphisms(source: PermGroup, target: list) -> list[dict]:
    """All homomorphisms, as dicts source element -> target element."""
    target = [tuple(t) for t in target]
    tn = len(target[0]) if target else 1
    t_ident = tuple(range(tn))
    s_ident = tuple(range(source.degree))
    out = []
    for imgs in itertools.product(target, repeat=len(source.generators)):
        phi = {s_ident: t_ident}
        frontier = [s_ident]
        ok = True
        while frontier and ok:
            nxt = []
            for a in frontier:
                for g, tg in zip(source.generators, imgs):
                    b = compose(g, a)
                    val = compose(tg, phi[a])
                    if b in phi:
                        if phi[b] != val:
                            ok = False
                            break
                    else:
                        phi[b] = val
                        nxt.append(b)
                if not ok:
                    break
            frontier = nxt
        if not ok:
            continue
        if all(phi[compose(x, y)] == compose(phi[x], phi[y]) for x in source.elements for y in source.elements):
            out.append(phi)
    return out


@dataclass
class TwistDescriptor:
    group: str
    params: dict
    extension: dict
    galois: PermGroup
    images: tuple
    injective: bool
    image_order: int
    split_label: DynkinLabel
    folded_label: DynkinLabel | None

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "params": {k: str(v) for k, v in self.params.items()},
            "extension": {k: str(v) for k, v in self.extension.items()},
            "galois": self.galois.name,
            "images": [list(p) for p in self.images],
            "injective": self.injective,
            "image_order": self.image_order,
            "split_label": str(self.split_label),
            "folded_label": None if self.folded_label is None else str(self.folded_label),
        }


def enumerate_homomorphism_classes(source: PermGroup, target: list) -> list[dict]:
    """Homomorphisms up to conjugation in the target, each with injectivity and image size."""
    target = [tuple(t) for t in target]
    classes = {}
    order = sorted(source.elements)
    for phi in homomorphisms(source, target):
        key = min(tuple(compose(compose(c, phi[x]), _inverse_perm(c)) for x in order) for c in target)
        if key in classes:
            continue
        image = set(phi.values())
        classes[key] = {
            "hom": phi,
            "images": tuple(phi[g] for g in source.generators),
            "injective": len(image) == source.order,
            "image_order": len(image),
        }
    return [classes[k] for k in sorted(classes)]


def split_label_of(group: str, n: int | None = None) -> DynkinLabel:
    g = group.lower()
    if g == "mu":
        return DynkinLabel("A", n - 1)
    if g in ("bd-star", "bd2"):
        return DynkinLabel("D", (n or 2) + 2)
    if g in ("bt", "bt-star"):
        return DynkinLabel("E", 6)
    if g == "bo":
        return DynkinLabel("E", 7)
    if g == "bi":
        return DynkinLabel("E", 8)
    raise ValueError(group)


def reduced_graph_automorphisms(group: str, n: int | None = None) -> list:
    """Aut of the McKay graph with the trivial vertex removed."""
    from .groupmodels import build_group
    from .mckay import graph_automorphisms, mckay_graph

    g = group.lower()
    kind = "bt-star" if g == "bt" else g
    G = build_group(kind, n)
    graph = mckay_graph(G)
    return graph_automorphisms(graph.remove_vertex(graph.trivial))


def enumerate_twists(group: str, galois: PermGroup, n: int | None = None, extension: dict | None = None, target=None):
    """Twisted forms of the split quotient classified by Hom(Gal, Aut) up to conjugacy."""
    target = target if target is not None else reduced_graph_automorphisms(group, n)
    split = split_label_of(group, n)
    out = []
    for cls in enumerate_homomorphism_classes(galois, target):
        try:
            folded = fold(split, cls["image_order"])
        except Exception:
            folded = None
        out.append(
            TwistDescriptor(
                group,
                {"n": n} if n is not None else {},
                extension or {},
                galois,
                cls["images"],
                cls["injective"],
                cls["image_order"],
                split,
                folded,
            )
        )
    return out


def galois_of_extension(extension: dict, k: FieldTower | None = None) -> PermGroup:
    k = k or FieldTower.rationals()
    kind = extension["kind"]
    if kind in ("quadratic", "artin-schreier"):
        return PermGroup.cyclic(2)
    if kind == "cubic":
        return PermGroup.cyclic(3) if cubic_galois_order(k, extension["a"], extension["b"]) == 3 else PermGroup.symmetric3()
    raise ValueError(kind)


def build_twisted_equation(desc: TwistDescriptor, k: FieldTower | None = None) -> SingularityEquation:
    """Dispatch a descriptor to the matching builder."""
    k = k or FieldTower.rationals()
    g = desc.group.lower()
    ext = desc.extension
    n = desc.params.get("n")
    if desc.image_order == 1:
        key = {"A": "A", "D": "D", "E": f"E{desc.split_label.rank}"}[desc.split_label.family]
        if key == "D":
            return build_split("D", desc.split_label.rank - 2, k)
        return build_split(key, n, k)
    if g == "mu":
        return build_b(n, ext["d"], k)
    if g == "bd-star" and (n or 2) >= 3:
        return build_c(n, ext["d"], k)
    if g == "bt":
        return build_f4(ext["d"], k)
    if g in ("bd2", "bd-star"):
        if ext.get("kind") == "quadratic":
            return build_c3(ext["d"], k)
        if ext.get("kind") == "cubic":
            if desc.injective:
                return build_g2(ext["a"], ext["b"], k)
            # factors through Gal(k(sqrt D)/k): a C3 twist by the discriminant
            return build_c3(cubic_discriminant(k.coerce(ext["a"]), k.coerce(ext["b"])), k)
    raise UnsupportedCase(f"no builder for {desc.group} with {ext}")


# ---------------------------------------------------------------------------
# parameters


def equivalence_of_parameters(label: str, d1, d2, k: FieldTower | None = None):
    """True / False when decidable, None for the cubic case."""
    k = k or FieldTower.rationals()
    lab = label.upper()
    if lab.startswith("G"):
        return None
    if lab not in ("B", "C", "F4", "C3", "B2"):
        raise LabelMismatch(f"no parameter for {label}")
    d1, d2 = k.coerce(d1), k.coerce(d2)
    if lab == "B2" or (lab == "B" and k.p == 2):
        # d - d' in the image of x^2 - x
        diff = d1 - d2
        if not k.p:
            raise LabelMismatch("Artin-Schreier parameters need characteristic 2")
        return any(x * x - x == diff for x in k.elements())
    if d1.is_zero() or d2.is_zero():
        raise ValueError("parameters must be nonzero")
    q = d1 / d2
    if k.p:
        return bool(is_square(q))
    return _square_root_in(k, q) is not None
