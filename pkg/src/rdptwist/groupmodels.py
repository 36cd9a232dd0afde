"""Explicit models of the finite linearly reductive subgroups of SL2.

mu_n is kept symbolic (weights on monomials).  The other groups are finite
sets of determinant-one matrices over a splitting tower, built by closure
from generators, optionally carrying a Galois twist datum.
"""

from __future__ import annotations

import math
from collections import deque

from .bipoly import BivariatePoly, Mat2, act, monomials
from .fieldtower import (
    Automorphism,
    FieldError,
    FieldTower,
    GaloisGroup,
    MissingRootOfUnity,
    adjoin_cyclotomic,
    automorphism_group,
    find_root_of_unity,
)


class GroupModelError(FieldError):
    pass


class ClosureExceedsBound(GroupModelError):
    pass


class DeterminantNotOne(GroupModelError):
    pass


class PresentationFailure(GroupModelError):
    pass


class NotAHomomorphism(GroupModelError):
    pass


class NotGaloisEquivariant(GroupModelError):
    pass


class NotASubgroup(GroupModelError):
    pass


class MuGroup:
    """mu_n acting on x^i y^j through the weight i - j mod n."""

    def __init__(self, n: int, tower: FieldTower | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.tower = tower or FieldTower.rationals()
        self.name = f"mu{n}"

    @property
    def order(self) -> int:
        return self.n

    def weight(self, exp) -> int:
        return (exp[0] - exp[1]) % self.n

    def weight_invariant(self, f: BivariatePoly) -> bool:
        return all(self.weight(e) == 0 for e in f.terms)

    def weight_reynolds(self, f: BivariatePoly) -> BivariatePoly:
        return BivariatePoly._from_raw(f.tower, {e: c for e, c in f.terms.items() if self.weight(e) == 0})

    def invariant_monomials(self, d: int):
        return [m for m in monomials(d) if self.weight(m) == 0]

    def normalizes(self, g: Mat2, degrees=range(0, 9)) -> bool:
        """True if substitution by g maps invariants of each degree to invariants."""
        for d in degrees:
            for m in self.invariant_monomials(d):
                if not self.weight_invariant(act(g, BivariatePoly(g.tower, {m: 1}))):
                    return False
        return True

    def __repr__(self):
        return f"MuGroup({self.n})"


class EtaleGroupModel:
    """A finite group of 2x2 determinant-one matrices over a tower."""

    def __init__(self, tower: FieldTower, elements, name: str = "custom", twist=None):
        self.tower = tower
        self.elements = list(elements)
        self.name = name
        self.twist = twist
        self._index = {g: i for i, g in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise GroupModelError("duplicate elements")
        self._table = None
        self._classes = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._index

    def index(self, g: Mat2) -> int:
        return self._index[g]

    @property
    def identity_index(self) -> int:
        return self._index[Mat2.identity(self.tower)]

    @property
    def table(self) -> list[list[int]]:
        if self._table is None:
            idx = self._index
            els = self.elements
            try:
                self._table = [[idx[g * h] for h in els] for g in els]
            except KeyError as exc:
                raise GroupModelError("element set is not closed under multiplication") from exc
        return self._table

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        e = self.identity_index
        row = self.table[i]
        return next(j for j in range(self.order) if row[j] == e)

    def power(self, i: int, k: int) -> int:
        r = self.identity_index
        if k < 0:
            i, k = self.inv(i), -k
        for _ in range(k):
            r = self.table[r][i]
        return r

    def element_order(self, i: int) -> int:
        e = self.identity_index
        k, r = 1, i
        while r != e:
            r = self.table[r][i]
            k += 1
        return k

    def exponent(self) -> int:
        return math.lcm(*(self.element_order(i) for i in range(self.order)))

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[i][j] == t[j][i] for i in range(self.order) for j in range(i))

    def center(self) -> list[int]:
        t = self.table
        return [i for i in range(self.order) if all(t[i][j] == t[j][i] for j in range(self.order))]

    def conjugacy_classes(self) -> list[list[int]]:
        """Classes as sorted index lists, ordered by smallest member."""
        if self._classes is None:
            seen = set()
            classes = []
            inv = [self.inv(i) for i in range(self.order)]
            t = self.table
            for i in range(self.order):
                if i in seen:
                    continue
                cls = sorted({t[t[g][i]][inv[g]] for g in range(self.order)})
                seen.update(cls)
                classes.append(cls)
            self._classes = classes
        return self._classes

    def verify(self) -> None:
        """Identity, determinant one, closure and inverses."""
        one = Mat2.identity(self.tower)
        if one not in self._index:
            raise GroupModelError("identity missing")
        for g in self.elements:
            if g.det() != self.tower.one():
                raise DeterminantNotOne(repr(g))
        _ = self.table  # raises if not closed
        for i in range(self.order):
            self.inv(i)

    def subgroup(self, indices, name="subgroup") -> EtaleGroupModel:
        sub = EtaleGroupModel(self.tower, [self.elements[i] for i in sorted(indices)], name)
        _ = sub.table
        return sub

    def subgroup_indices(self, other: EtaleGroupModel) -> list[int]:
        try:
            return [self._index[g] for g in other.elements]
        except KeyError as exc:
            raise NotASubgroup("element not in the ambient group") from exc

    def base_change(self, tower: FieldTower) -> EtaleGroupModel:
        return EtaleGroupModel(tower, [g.to_tower(tower) for g in self.elements], self.name, None)

    def apply_automorphism(self, phi: Automorphism) -> list[int]:
        """Permutation of indices induced by the entrywise field automorphism."""
        return [self._index[g.apply_automorphism(phi)] for g in self.elements]

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "order": self.order,
            "tower": self.tower.to_json(),
            "elements": [g.to_json() for g in self.elements],
            "table": self.table,
        }
        if self.twist is not None:
            out["twist"] = self.twist.to_json()
        return out

    def __repr__(self):
        return f"EtaleGroupModel({self.name}, order={self.order})"


def group_closure(generators, bound: int = 1000, name: str = "custom", tower=None) -> EtaleGroupModel:
    """Smallest multiplicatively closed set containing the generators and the identity."""
    gens = list(generators)
    if tower is None:
        tower = gens[0].tower
    gens = [g.to_tower(tower) if g.tower != tower else g for g in gens]
    for g in gens:
        if g.det() != tower.one():
            raise DeterminantNotOne(repr(g))
    one = Mat2.identity(tower)
    elements = [one]
    seen = {one}
    queue = deque([one])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g * s
            if h not in seen:
                seen.add(h)
                elements.append(h)
                queue.append(h)
                if len(elements) > bound:
                    raise ClosureExceedsBound(f"closure exceeds {bound} elements")
    return EtaleGroupModel(tower, elements, name)


# ---------------------------------------------------------------------------
# twist data


class TwistDatum:
    """Semilinear Galois action g -> c_s * s(g) * c_s^{-1} for each Galois generator s."""

    def __init__(self, galois: GaloisGroup, generators, matrices):
        self.galois = galois
        self.generators = list(generators)
        self.matrices = list(matrices)

    def act(self, k: int, g: Mat2) -> Mat2:
        s, c = self.generators[k], self.matrices[k]
        return c * g.apply_automorphism(s) * c.inverse()

    def matrix_for(self, sigma: Automorphism) -> Mat2:
        """Conjugating matrix for an arbitrary Galois element, via words in the generators."""
        tower = self.galois.tower
        best = {Automorphism.identity(tower): Mat2.identity(tower)}
        queue = deque(best)
        while queue and sigma not in best:
            tau = queue.popleft()
            for s, c in zip(self.generators, self.matrices):
                st = s.compose(tau)
                if st not in best:
                    best[st] = c * best[tau].apply_automorphism(s)
                    queue.append(st)
        return best[sigma]

    def permutation(self, model: EtaleGroupModel, k: int) -> list[int]:
        return [model.index(self.act(k, g)) for g in model.elements]

    def verify(self, model: EtaleGroupModel) -> None:
        """Each generator must permute the elements and respect multiplication."""
        t = model.table
        for k in range(len(self.generators)):
            try:
                perm = self.permutation(model, k)
            except KeyError as exc:
                raise GroupModelError("semilinear action does not preserve the group") from exc
            if sorted(perm) != list(range(model.order)):
                raise GroupModelError("semilinear action is not a bijection")
            for i in range(model.order):
                for j in range(model.order):
                    if perm[t[i][j]] != t[perm[i]][perm[j]]:
                        raise GroupModelError("semilinear action does not respect multiplication")

    def to_json(self) -> dict:
        return {
            "galois_order": self.galois.order,
            "generators": [[str(im) for im in s.images] for s in self.generators],
            "matrices": [c.to_json() for c in self.matrices],
        }


# ---------------------------------------------------------------------------
# constructors


def _cyclotomic_tower(n: int, p: int = 0):
    tower = FieldTower(p) if p else FieldTower.rationals()
    return adjoin_cyclotomic(tower, n)


def _root(tower: FieldTower, n: int):
    z = find_root_of_unity(tower, n)
    if z is None:
        raise MissingRootOfUnity(f"no primitive {n}-th root of unity in {tower!r}")
    return z


def _i_in(tower):
    return _root(tower, 4)


def bd_point_matrix(a, b, n: int) -> Mat2:
    """The embedding (a, b) -> [[a, b], [-b^(2n-1), a^(2n-1)]]."""
    return Mat2(a, b, -(b ** (2 * n - 1)), a ** (2 * n - 1), a.tower)


def bd_star_tower(n: int, p: int = 0, with_i: bool = False) -> FieldTower:
    m = math.lcm(2 * n, 4) if with_i else 2 * n
    if m <= 2:
        return FieldTower(p) if p else FieldTower.rationals()
    return _cyclotomic_tower(m, p)[0]


def build_bd_star(n: int, tower: FieldTower | None = None) -> EtaleGroupModel:
    """BD_n^*: 4n points (a, 0) with a^(2n) = 1 and (0, b) with b^(2n) = 1."""
    if n < 1:
        raise ValueError("n must be positive")
    tower = tower or bd_star_tower(n)
    if tower.p == 2:
        raise GroupModelError("binary dihedral models need characteristic != 2")
    z = _root(tower, 2 * n)
    zero = tower.zero()
    roots = [z**k for k in range(2 * n)]
    elements = [bd_point_matrix(a, zero, n) for a in roots] + [bd_point_matrix(zero, b, n) for b in roots]
    model = EtaleGroupModel(tower, elements, f"BD{n}*")
    gens = [bd_point_matrix(z, zero, n), bd_point_matrix(zero, tower.one(), n)]
    closed = group_closure(gens, bound=4 * n, tower=tower)
    if set(closed.elements) != set(elements):
        raise GroupModelError("binary dihedral points are not closed")
    return model


def bd_twist_galois(tower: FieldTower):
    """Galois group of a cyclotomic tower over Q (or F_p) with twist matrices for diag(i, -i)."""
    i = _i_in(tower)
    gal = full_galois_group(tower)
    c = Mat2.diag(i, -i)
    mats = [c if s(i) == -i else Mat2.identity(tower) for s in gal.elements]
    return gal, mats


def full_galois_group(tower: FieldTower) -> GaloisGroup:
    """All automorphisms of a tower over its prime field, found by root search.

    Works for towers whose levels are cyclotomic (root_order recorded) or
    finite; generators are chosen so the closure stays within the degree.
    """
    if tower.p:
        from .fieldtower import frobenius

        return automorphism_group(tower, [frobenius(tower)])
    images_per_level = []
    for j, lv in enumerate(tower.levels):
        if not lv.root_order:
            raise GroupModelError("full Galois group only for cyclotomic towers over Q")
        g = tower.gen(j + 1)
        n = lv.root_order
        images_per_level.append([g**k for k in range(1, n) if math.gcd(k, n) == 1])
    autos = []
    import itertools

    for imgs in itertools.product(*images_per_level):
        try:
            autos.append(Automorphism(tower, imgs))
        except FieldError:
            continue
    return automorphism_group(tower, autos)


def build_bd_twisted(n: int, tower: FieldTower | None = None):
    """BD_n as the twist of BD_n^* over k(i) by conjugation with diag(i, -i).

    Returns the model (points of BD_n^* over a tower containing i and a
    primitive 2n-th root of unity) together with its TwistDatum.
    """
    tower = tower or bd_star_tower(n, with_i=True)
    model = build_bd_star(n, tower)
    gal = full_galois_group(tower)
    i = _i_in(tower)
    c = Mat2.diag(i, -i)
    gens, mats = [], []
    for s in _galois_generators(gal):
        gens.append(s)
        mats.append(c if s(i) == -i else Mat2.identity(tower))
    twist = TwistDatum(gal, gens, mats)
    twist.verify(model)
    model.twist = twist
    model.name = f"BD{n}"
    return model, twist


def _galois_generators(gal: GaloisGroup) -> list[Automorphism]:
    """A small generating set, chosen greedily in element order."""
    gens = []
    reached = {gal.index(Automorphism.identity(gal.tower))}
    for a in gal.elements[1:]:
        if gal.index(a) in reached:
            continue
        gens.append(a)
        reached = _closure_indices(gal, [gal.index(g) for g in gens])
        if len(reached) == gal.order:
            break
    return gens


def _closure_indices(gal, gen_idx):
    reached = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gen_idx:
                b = gal.table[g][a]
                if b not in reached:
                    reached.add(b)
                    nxt.append(b)
        frontier = nxt
    return reached


def twisted_coordinates(model: EtaleGroupModel, n: int):
    """Coordinates (a, i*b) of the twisted dihedral points (a, b = top row)."""
    i = _i_in(model.tower)
    return [(g.a, i * g.b) for g in model.elements]


def bo_generators(tower: FieldTower):
    z8 = _root(tower, 8)
    i = z8**2
    sqrt2 = z8 + z8**-1
    zero, one = tower.zero(), tower.one()
    return [
        Mat2(i, zero, zero, -i, tower),
        Mat2(zero, one, -one, zero, tower),
        Mat2.diag(z8, z8**-1),
        Mat2(z8, z8, -(z8**-1), z8**-1, tower) * sqrt2.inverse(),
    ]


def build_bd2(tower: FieldTower | None = None) -> EtaleGroupModel:
    tower = tower or bd_star_tower(2)
    model = build_bd_star(2, tower)
    model.name = "BD2"
    return model


def build_bo(tower: FieldTower | None = None) -> EtaleGroupModel:
    """Binary octahedral group of order 48, by closure over a tower with zeta8."""
    tower = tower or _cyclotomic_tower(8)[0]
    model = group_closure(bo_generators(tower), bound=48, name="BO", tower=tower)
    if model.order != 48:
        raise GroupModelError(f"binary octahedral closure has order {model.order}")
    return model


# characters of BD2 used for the sign map
PSI_NAMES = ("psi+", "psi-", "psi0")


def _bd2_characters(h: Mat2):
    one = h.tower.one()
    if h.b.is_zero():
        alpha, beta = h.a, h.tower.zero()
    else:
        alpha, beta = h.tower.zero(), h.b
    a2, b2 = alpha * alpha, beta * beta
    vals = (a2 + b2, a2 - b2, a2 * a2 - b2 * b2)
    assert all(v == one or v == -one for v in vals)
    return vals


def bd2_inside(model: EtaleGroupModel) -> list[int]:
    """Indices of the BD2 points (diagonal or antidiagonal with fourth-root entries)."""
    one = model.tower.one()
    out = []
    for k, g in enumerate(model.elements):
        if g.b.is_zero() and g.a**4 == one:
            out.append(k)
        elif g.a.is_zero() and g.b**4 == one:
            out.append(k)
    return out


def sign_map(bo: EtaleGroupModel):
    """For each element g, the permutation psi -> psi o conj_g of (psi+, psi-, psi0).

    Returned as a list of tuples perm with psi_k o conj_g = psi_{perm[k]},
    where conj_g(h) = g h g^{-1}.  Composition satisfies
    perm(gh) = perm(h) o perm(g) as maps of indices, which is checked.
    """
    bd2 = [bo.elements[k] for k in bd2_inside(bo)]
    if len(bd2) != 8:
        raise GroupModelError("BD2 not found inside the model")
    table = [_bd2_characters(h) for h in bd2]
    columns = [tuple(row[k] for row in table) for k in range(3)]
    perms = []
    for g in bo.elements:
        ginv = g.inverse()
        conj_vals = [_bd2_characters(g * h * ginv) for h in bd2]
        perm = []
        for k in range(3):
            col = tuple(row[k] for row in conj_vals)
            perm.append(columns.index(col))
        perms.append(tuple(perm))
    t = bo.table
    for i in range(bo.order):
        for j in range(bo.order):
            pi, pj = perms[i], perms[j]
            if perms[t[i][j]] != tuple(pj[pi[k]] for k in range(3)):
                raise NotAHomomorphism("sign map is not compatible with multiplication")
    return perms


def permutation_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def bo_case(g: Mat2):
    """Classify a BO element by the trichotomy of its entries.

    Returns ("diagonal", None), ("antidiagonal", None) or ("generic", (eps, eta))
    with a^4 = b^4 = eps/4, (ab)^2 = eta/4 and (ac)^2 = (bd)^2 = eta*eps/4.
    Since bc = -1/2 forces (bc)^2 = 1/4, the last square is taken on bd.
    """
    T = g.tower
    one = T.one()
    a, b, c, d = g.entries()
    if (a * d == one and b.is_zero() and c.is_zero() and a**8 == one):
        return "diagonal", None
    if (b * c == -one and a.is_zero() and d.is_zero() and b**8 == one):
        return "antidiagonal", None
    half = T.coerce("1/2")
    quarter = T.coerce("1/4")
    if a * d == half and b * c == -half and a**4 == b**4:
        eps = a**4 / quarter
        eta = (a * b) ** 2 / quarter
        if eps in (one, -one) and eta in (one, -one):
            if (a * c) ** 2 == eta * eps * quarter and (b * d) ** 2 == eta * eps * quarter:
                return "generic", (int(eps.to_base()), int(eta.to_base()))
    raise GroupModelError(f"element {g!r} fits none of the three cases")


def expected_sign_permutation(g: Mat2, in_bd2: bool):
    """Predicted images of (psi+, psi-, psi0) as index tuples."""
    kind, data = bo_case(g)
    idx = {1: 0, -1: 1}  # psi^{+1} -> psi+, psi^{-1} -> psi-
    if kind != "generic":
        return (0, 1, 2) if in_bd2 else (1, 0, 2)
    eps, eta = data
    if eta == 1:
        return (idx[eps], 2, idx[-eps])
    return (2, idx[-eps], idx[eps])


def build_bt_star(tower: FieldTower | None = None, bo: EtaleGroupModel | None = None) -> EtaleGroupModel:
    """Kernel of BO -> S3 -> Z/2, order 24."""
    bo = bo or build_bo(tower)
    perms = sign_map(bo)
    kernel = [k for k, p in enumerate(perms) if permutation_sign(p) == 1]
    model = bo.subgroup(kernel, "BT*")
    if model.order != 24:
        raise GroupModelError(f"kernel of the sign map has order {model.order}")
    return model


def build_bt(tower: FieldTower | None = None):
    """BT* over a tower with zeta24 plus the twist by [[0, z8], [-z8^-1, 0]].

    Galois elements moving zeta3 act through that matrix, the others act
    entrywise; each generator is checked to permute the points.
    """
    tower = tower or _cyclotomic_tower(24)[0]
    bt = build_bt_star(tower)
    z8 = _root(tower, 8)
    z3 = _root(tower, 3)
    gal = full_galois_group(tower)
    B = Mat2(tower.zero(), z8, -(z8**-1), tower.zero(), tower)
    gens, mats = [], []
    for s in _galois_generators(gal):
        gens.append(s)
        mats.append(B if s(z3) != z3 else Mat2.identity(tower))
    twist = TwistDatum(gal, gens, mats)
    twist.verify(bt)
    bt.twist = twist
    bt.name = "BT"
    return bt, twist


def bi_generators(tower: FieldTower):
    """The images of t and r in SL2 over a tower with zeta5."""
    z = _root(tower, 5)
    zi = z**-1
    sqrt5 = 1 + 2 * (z + z**4)
    t = Mat2.diag(-z, -zi)
    r = Mat2(zi**2 - z**2, -zi + z, -zi + z, -(zi**2) + z**2, tower) * sqrt5.inverse()
    if r.det() != tower.one():
        r = Mat2(zi**2 - z**2, -zi + z, -zi + z, -(zi**2) + z**2, tower) * (-sqrt5).inverse()
    return t, r


def build_bi(tower: FieldTower | None = None) -> EtaleGroupModel:
    """Binary icosahedral group of order 120 over a tower with zeta5."""
    tower = tower or _cyclotomic_tower(5)[0]
    t, r = bi_generators(tower)
    check_bi_presentation(t, r)
    model = group_closure([t, r], bound=120, name="BI", tower=tower)
    if model.order != 120:
        raise GroupModelError(f"binary icosahedral closure has order {model.order}")
    return model


def check_bi_presentation(t: Mat2, r: Mat2) -> dict:
    minus_one = -Mat2.identity(t.tower)
    r2 = r * r
    t5 = t**5
    rt3 = (r * t.inverse()) ** 3
    report = {
        "r^2 = -1": r2 == minus_one,
        "t^5 = -1": t5 == minus_one,
        "(r t^-1)^3 = -1": rt3 == minus_one,
        "(r^2)^2 = 1": (r2 * r2).is_identity(),
    }
    if not all(report.values()):
        raise PresentationFailure(str(report))
    return report


def build_group(kind: str, n: int | None = None, tower: FieldTower | None = None):
    """Dispatch on the CLI name tags."""
    kind = kind.lower()
    if kind == "mu":
        return MuGroup(n or 2, tower)
    if kind in ("bd-star", "bdstar", "bd*"):
        return build_bd_star(n or 2, tower)
    if kind == "bd":
        return build_bd_twisted(n or 2, tower)[0]
    if kind == "bd2":
        return build_bd2(tower)
    if kind == "bo":
        return build_bo(tower)
    if kind in ("bt-star", "btstar", "bt*"):
        return build_bt_star(tower)
    if kind == "bt":
        return build_bt(tower)[0]
    if kind == "bi":
        return build_bi(tower)
    raise ValueError(f"unknown group kind {kind!r}")


# ---------------------------------------------------------------------------
# normalizers


def normalizer_in(ambient: EtaleGroupModel, subgroup) -> EtaleGroupModel:
    """Elements of the ambient group normalizing the given subgroup."""
    sub_elems = subgroup.elements if isinstance(subgroup, EtaleGroupModel) else list(subgroup)
    sub_idx = set()
    for g in sub_elems:
        if g not in ambient:
            raise NotASubgroup("subgroup element outside the ambient group")
        sub_idx.add(ambient.index(g))
    t = ambient.table
    keep = []
    for n in range(ambient.order):
        ninv = ambient.inv(n)
        if all(t[t[n][s]][ninv] in sub_idx for s in sub_idx):
            keep.append(n)
    return ambient.subgroup(keep, f"N({getattr(subgroup, 'name', 'H')})")


def cyclic_subgroup(model: EtaleGroupModel, g: Mat2) -> EtaleGroupModel:
    i = model.index(g)
    idx = {model.power(i, k) for k in range(model.element_order(i))}
    return model.subgroup(idx, "cyclic")


def sample_mu_normalizer(tower: FieldTower, count: int = 6):
    """Diagonal and antidiagonal determinant-one matrices with assorted entries."""
    out = []
    for k in range(1, count + 1):
        lam = tower.coerce(k) + (tower.gen(tower.depth) if tower.depth else 0)
        if lam.is_zero():
            continue
        out.append(Mat2.diag(lam, lam.inverse()))
        out.append(Mat2(tower.zero(), lam, -lam.inverse(), tower.zero(), tower))
    return out


# ---------------------------------------------------------------------------
# descended representations of BD_n


def bd_multiply(p, q, n: int):
    """(a,b)(c,d) = (ac - b d^(2n-1), ad + b c^(2n-1))."""
    a, b = p
    c, d = q
    return (a * c - b * d ** (2 * n - 1), a * d + b * c ** (2 * n - 1))


def _rep_catalog(n: int, i):
    """The maps on BD_n^* points recorded as (name, kind, fn)."""
    reps = [("a^2n - b^2n", "scalar", lambda a, b: a ** (2 * n) - b ** (2 * n))]
    if n % 2 == 0:
        reps.append(("a^n + b^n", "scalar", lambda a, b: a**n + b**n))
        reps.append(("a^n - b^n", "scalar", lambda a, b: a**n - b**n))
    else:
        reps.append(("a^n + (ib)^n", "scalar", lambda a, b: a**n + (i * b) ** n))
    for j in range(1, n + 1, 2):
        reps.append((f"eta_{j}", "point", (lambda j: lambda a, b: (a**j, b**j))(j)))
    for j in range(1, n):
        reps.append(
            (
                f"[[a^{2*j}, b^{2*j}], [b^{2*n-2*j}, a^{2*n-2*j}]]",
                "matrix",
                (lambda j: lambda a, b: Mat2(a ** (2 * j), b ** (2 * j), b ** (2 * n - 2 * j), a ** (2 * n - 2 * j), a.tower))(j),
            )
        )
    return reps


def verify_descended_reps(n: int, tower: FieldTower | None = None) -> list[dict]:
    """Check multiplicativity and Galois equivariance of each listed map of BD_n.

    Galois elements s act on points by (a, b) -> (s a, -s b) when s(i) = -i
    and entrywise otherwise.
    """
    model, twist = build_bd_twisted(n, tower)
    T = model.tower
    i = _i_in(T)
    points = [(g.a, g.b) for g in model.elements]
    point_set = set((p[0].raw, p[1].raw) for p in points)

    def galois_point(s, p):
        a, b = s(p[0]), s(p[1])
        return (a, -b) if s(i) == -i else (a, b)

    report = []
    for name, kind, fn in _rep_catalog(n, i):
        vals = {}
        for p in points:
            vals[(p[0].raw, p[1].raw)] = fn(*p)
        mult_ok = True
        for p in points:
            for q in points:
                pq = bd_multiply(p, q, n)
                if (pq[0].raw, pq[1].raw) not in point_set:
                    raise NotAHomomorphism("point product left the group")
                lhs = vals[(pq[0].raw, pq[1].raw)]
                fp, fq = vals[(p[0].raw, p[1].raw)], vals[(q[0].raw, q[1].raw)]
                if kind == "scalar":
                    rhs = fp * fq
                elif kind == "point":
                    rhs = bd_multiply(fp, fq, n)
                else:
                    rhs = fp * fq
                if (lhs != rhs) if kind != "point" else (lhs[0] != rhs[0] or lhs[1] != rhs[1]):
                    mult_ok = False
                    break
            if not mult_ok:
                break
        if not mult_ok:
            raise NotAHomomorphism(name)
        equi_ok = True
        for s in twist.galois.elements:
            for p in points:
                lhs = fn(*galois_point(s, p))
                fp = fn(*p)
                if kind == "scalar":
                    rhs = s(fp)
                elif kind == "point":
                    rhs = galois_point(s, fp)
                else:
                    rhs = fp.apply_automorphism(s)
                same = (lhs[0] == rhs[0] and lhs[1] == rhs[1]) if kind == "point" else lhs == rhs
                if not same:
                    equi_ok = False
                    break
            if not equi_ok:
                break
        if not equi_ok:
            raise NotGaloisEquivariant(name)
        if kind == "scalar":
            character = [str(fn(*p)) for p in points]
        elif kind == "point":
            character = [str(bd_point_matrix(*fn(*p), n).trace()) for p in points]
        else:
            character = [str(fn(*p).trace()) for p in points]
        report.append({"map": name, "kind": kind, "multiplicative": True, "equivariant": True, "character": character})
    return report
