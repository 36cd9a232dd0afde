"""The verification matrix behind ``rdptwist verify`` and the acceptance tests.

Each criterion is a function returning a list of ``Check`` records.  A criterion
passes when every check passes and nothing raised.
"""

from __future__ import annotations

import time
import traceback
from dataclasses import dataclass, field

from . import groupmodels as gm
from . import invariantring as inv
from . import mckay as mk
from . import twistcatalog as tc
from .bipoly import invariant_space, molien_coefficients
from .fieldtower import FieldTower, adjoin_cyclotomic


@dataclass
class Check:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list
    error: str | None = None
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.error is None and bool(self.checks) and all(c.ok for c in self.checks)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        failed = [c.name for c in self.checks if not c.ok]
        extra = f" ({len(self.checks)} checks)"
        if failed:
            extra += " failed: " + ", ".join(failed)
        if self.error:
            extra += " error: " + self.error.strip().splitlines()[-1]
        return f"criterion {self.number:2d} {status}: {self.title}{extra}"

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "criterion": self.number,
            "title": self.title,
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
        }
        if self.error:
            out["error"] = self.error
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


Q = FieldTower.rationals()


# ---------------------------------------------------------------------------
# 1. split identities


def criterion_split(tower: FieldTower | None = None) -> list[Check]:
    out = []
    for name, F, triple in inv.split_identity_cases(tower=tower):
        ok, res = inv.verify_identity(F, triple)
        detail = {"relation": str(F)}
        if not ok:
            detail["residual"] = str(res)
        out.append(Check(name, ok, detail))
    T = tower or Q
    # the found syzygy must agree with the stated one up to a constant
    if T.p not in (2, 3, 5):
        tr = inv.fundamental_invariants("bi", tower=T)
        rel = inv.syzygy_search(tr)
        F = inv._rel(T, {(0, 0, 2): 1, (0, 3, 0): 1, (5, 0, 0): 1728}, tr.weights)
        out.append(Check("E8 syzygy search", rel.poly.proportional_to(F) is not None, {"found": str(rel)}))
    return out


def split_equations(tower: FieldTower | None = None) -> list[Check]:
    """The five split table rows matched against their generators."""
    T = tower or Q
    out = []
    for key, n in (("A", 3), ("D", 3), ("E6", None), ("E7", None), ("E8", None)):
        eq = tc.build_split(key, n, T)
        out.append(Check(f"{key} template", eq.transcript["verified"], {"equation": eq.equation}))
    return out


# ---------------------------------------------------------------------------
# 2. twisted identities


def _twist_cases():
    K3, _ = adjoin_cyclotomic(Q, 3)
    F2, F3 = FieldTower.prime_field(2), FieldTower.prime_field(3)
    cases = []
    for d in (2, 3, 5):
        cases.append((f"B n=3 d={d} over Q", lambda d=d: tc.build_b(3, d), "B1"))
    cases.append(("B n=4 d=2 over Q", lambda: tc.build_b(4, 2), "B2"))
    cases.append(("B n=3 d=1 over F2", lambda: tc.build_b(3, 1, F2), "B1"))
    for n in (3, 4):
        cases.append((f"C n={n} d=2 over Q", lambda n=n: tc.build_c(n, 2), f"C{n + 1}"))
    for d in (2, -1):
        cases.append((f"F4 d={d} over Q", lambda d=d: tc.build_f4(d), "F4"))
    cases.append(("C3 d=2 over Q", lambda: tc.build_c3(2), "C3"))
    cases.append(("G2 t^3 - t - 1 over Q", lambda: tc.build_g2(-1, -1), "G2"))
    cases.append(("G2 t^3 - 2 over Q(zeta3)", lambda: tc.build_g2(0, -2, K3), "G2"))
    for b in (1, -1):
        cases.append((f"G2 t^3 - t + {b} over F3", lambda b=b: tc.build_g2(-1, b, F3), "G2"))
    return cases


def criterion_twisted() -> list[Check]:
    out = []
    for name, build, label in _twist_cases():
        eq = build()
        t = eq.transcript
        ok = t["verified"] and t["template_residual"] == "0" and t["relation_residual"] == "0" and str(eq.label) == label
        out.append(Check(name, ok, {"equation": eq.equation, "label": str(eq.label), "substitution": t["substitution"]}))
    for name, build in (("B -> A", lambda: tc.build_b(3, 2)), ("C -> D", lambda: tc.build_c(3, 2)), ("F4 -> E6", lambda: tc.build_f4(2))):
        res = tc.base_change_check(build())
        out.append(Check(f"base change {name}", res["matches"], res))
    return out


# ---------------------------------------------------------------------------
# 3. group orders and the BI presentation


def criterion_orders() -> list[Check]:
    out = []
    for n in range(2, 7):
        G = gm.build_bd_star(n)
        out.append(Check(f"|BD{n}*| = {4 * n}", G.order == 4 * n, {"order": G.order}))
    for kind, expected in (("bo", 48), ("bt-star", 24), ("bi", 120)):
        G = gm.build_group(kind)
        out.append(Check(f"|{G.name}| = {expected}", G.order == expected, {"order": G.order}))
    T, _ = adjoin_cyclotomic(Q, 5)
    t, r = gm.bi_generators(T)
    rep = gm.check_bi_presentation(t, r)
    out.append(Check("BI presentation", all(rep.values()), {k: bool(v) for k, v in rep.items()}))
    return out


# ---------------------------------------------------------------------------
# 4. trichotomy and the sign map


def criterion_trichotomy() -> list[Check]:
    bo = gm.build_bo()
    inside = set(gm.bd2_inside(bo))
    perms = gm.sign_map(bo)
    seen = {}
    bad = []
    for k, g in enumerate(bo.elements):
        try:
            kind, data = gm.bo_case(g)
        except gm.GroupModelError:
            bad.append(k)
            continue
        expected = gm.expected_sign_permutation(g, k in inside)
        key = kind if kind != "generic" else f"generic eta={data[1]}"
        seen.setdefault(key, []).append(perms[k] == expected)
    out = [Check("all 48 elements classified", not bad, {"unclassified": bad})]
    for key in sorted(seen):
        out.append(Check(f"permutation table: {key}", all(seen[key]), {"elements": len(seen[key])}))
    out.append(Check("four cases present", len(seen) == 4, {"cases": sorted(seen)}))
    ident = (0, 1, 2)
    kernel = {k for k, p in enumerate(perms) if p == ident}
    out.append(Check("kernel of the sign map is BD2", kernel == inside, {"kernel_size": len(kernel)}))
    image = set(perms)
    out.append(Check("image of the sign map is S3", len(image) == 6, {"image_size": len(image)}))
    return out


# ---------------------------------------------------------------------------
# 5. McKay graphs


def criterion_mckay() -> list[Check]:
    out = []
    cases = [(f"mu{n}", gm.MuGroup(n), f"A{n - 1}~") for n in range(2, 10)]
    cases += [(f"BD{n}*", gm.build_bd_star(n), f"D{n + 2}~") for n in range(2, 6)]
    cases += [("BT*", gm.build_bt_star(), "E6~"), ("BO", gm.build_bo(), "E7~"), ("BI", gm.build_bi(), "E8~")]
    for name, G, expected in cases:
        graph = mk.mckay_graph(G)
        label = mk.classify_dynkin(graph)
        sq = sum(d * d for d in graph.dims)
        ok = str(label) == expected and graph.null_vector_holds() and sq == G.order
        out.append(Check(f"{name} -> {expected}", ok, {"label": str(label), "sum_dim_squared": sq, "order": G.order}))
    return out


# ---------------------------------------------------------------------------
# 6. normalizer quotients acting on the graph


def _bd_pair(n):
    big = gm.build_bd_star(2 * n)
    small = gm.build_bd_star(n, big.tower)
    return big, small


def criterion_normalizer_action() -> list[Check]:
    out = []
    pairs = []
    for n in (3, 4, 5):
        big, small = _bd_pair(n)
        pairs.append((f"BD{2 * n}* / BD{n}*", big, small, "Z/2"))
    bo = gm.build_bo()
    pairs.append(("BO / BD2", bo, gm.build_bd2(bo.tower), "S3"))
    pairs.append(("BO / BT*", bo, gm.build_bt_star(bo=bo), "Z/2"))
    pairs.append(("BO / BO", bo, bo, "trivial"))
    bi = gm.build_bi()
    pairs.append(("BI / BI", bi, bi, "trivial"))
    for name, N, G, expected in pairs:
        act = mk.normalizer_action_on_graph(N, G)
        ok = act.bijective and act.quotient_name == expected
        out.append(Check(name, ok, {"quotient": act.quotient_name, "automorphisms": len(act.automorphisms)}))
    return out


# ---------------------------------------------------------------------------
# 7. normalizers inside an ambient group


def criterion_normalizers() -> list[Check]:
    out = []
    bo = gm.build_bo()
    for name, sub in (("BD2", gm.build_bd2(bo.tower)), ("BT*", gm.build_bt_star(bo=bo))):
        N = gm.normalizer_in(bo, sub)
        out.append(Check(f"N_BO({name}) = BO", N.order == bo.order, {"order": N.order}))
    for n in (3, 4):
        big, small = _bd_pair(n)
        N = gm.normalizer_in(big, small)
        out.append(Check(f"N_BD{2 * n}*(BD{n}*) = BD{2 * n}*", N.order == big.order, {"order": N.order}))
    for n in (3, 4, 5):
        T, _ = adjoin_cyclotomic(Q, n)
        mu = gm.MuGroup(n, T)
        mats = gm.sample_mu_normalizer(T)
        ok = all(mu.normalizes(g) for g in mats)
        out.append(Check(f"monomial matrices normalize mu{n}", ok, {"samples": len(mats)}))
    return out


# ---------------------------------------------------------------------------
# 8. twist enumeration


def criterion_enumeration() -> list[Check]:
    out = []
    s3 = tc.reduced_graph_automorphisms("bd2")
    Z2, Z3, S3 = tc.PermGroup.cyclic(2), tc.PermGroup.cyclic(3), tc.PermGroup.symmetric3()
    one = tc.PermGroup.trivial()
    counts = {}
    for G in (one, Z2, Z3, S3):
        ts = tc.enumerate_twists("bd2", G, target=s3)
        counts[G.name] = ts
    out.append(Check("Aut(reduced D4) has order 6", len(s3) == 6, {}))
    out.append(Check("Hom(1, S3)/conj = 1", len(counts["1"]) == 1, {}))
    out.append(Check("Hom(Z/2, S3)/conj = 2", len(counts["Z/2"]) == 2, {}))
    out.append(Check("Hom(Z/3, S3)/conj = 2", len(counts["Z/3"]) == 2, {}))
    inj = [t for t in counts["S3"] if t.injective]
    out.append(Check("Hom(S3, S3)/conj has an injective class", len(inj) == 1, {"classes": len(counts["S3"])}))
    # smaller targets
    z2 = tc.reduced_graph_automorphisms("mu", 4)
    for G, expected in ((one, 1), (Z2, 2), (Z3, 1), (S3, 2)):
        n = len(tc.enumerate_twists("mu", G, 4, target=z2))
        out.append(Check(f"Hom({G.name}, Z/2)/conj = {expected}", n == expected, {"found": n}))
    triv = [(0,)]
    for G in (one, Z2, Z3, S3):
        n = len(tc.homomorphisms(G, triv))
        out.append(Check(f"Hom({G.name}, 1) = 1", n == 1, {"found": n}))
    # folding of every injective class against the built equation
    folds = [
        ("mu", 4, Z2, {"kind": "quadratic", "d": 2}),
        ("mu", 5, Z2, {"kind": "quadratic", "d": 3}),
        ("bd-star", 3, Z2, {"kind": "quadratic", "d": 2}),
        ("bt", None, Z2, {"kind": "quadratic", "d": 2}),
        ("bd2", None, Z2, {"kind": "quadratic", "d": 2}),
        ("bd2", None, Z3, {"kind": "cubic", "a": -3, "b": 1}),
        ("bd2", None, S3, {"kind": "cubic", "a": -1, "b": -1}),
    ]
    for group, n, G, ext in folds:
        target = s3 if group == "bd2" else None
        for t in tc.enumerate_twists(group, G, n, ext, target=target):
            if not t.injective or t.image_order == 1:
                continue
            eq = tc.build_twisted_equation(t)
            ok = t.folded_label == eq.label
            out.append(
                Check(f"fold {t.split_label} by {G.name} = {eq.label}", ok, {"folded": str(t.folded_label), "equation": eq.equation})
            )
    return out


# ---------------------------------------------------------------------------
# 9. descended representations


def criterion_reps() -> list[Check]:
    out = []
    for n in (2, 3, 4):
        rep = gm.verify_descended_reps(n)
        ok = all(r["multiplicative"] and r["equivariant"] for r in rep)
        out.append(Check(f"BD{n} descended maps", ok, {"maps": [r["map"] for r in rep]}))
    return out


# ---------------------------------------------------------------------------
# 10. Molien oracle


def _series_from_degrees(num_degrees, den_degrees, dmax):
    """Coefficients of (sum t^a) / prod(1 - t^b) up to t^dmax."""
    coeffs = [0] * (dmax + 1)
    for a in num_degrees:
        if a <= dmax:
            coeffs[a] += 1
    for b in den_degrees:
        for k in range(b, dmax + 1):
            coeffs[k] += coeffs[k - b]
    return coeffs


def criterion_molien(dmax: int = 12) -> list[Check]:
    out = []
    bt = gm.build_bt_star()
    cases = [
        ("BD2", gm.build_bd2(), ((0, 6), (4, 4))),
        ("BD3*", gm.build_bd_star(3), ((0, 8), (4, 6))),
        ("BT*", bt, ((0, 12), (6, 8))),
    ]
    for name, G, (num, den) in cases:
        molien = [int(c) for c in molien_coefficients(G, dmax)]
        dims = [len(invariant_space(G, d)) for d in range(dmax + 1)]
        closed = _series_from_degrees(num, den, dmax)
        ok = molien == dims == closed
        out.append(Check(f"{name} Molien up to degree {dmax}", ok, {"molien": molien, "invariant_space": dims, "degrees": closed}))
    return out


# ---------------------------------------------------------------------------
# registry


CRITERIA = {
    1: ("split identities", lambda: criterion_split() + split_equations()),
    2: ("twisted identities", criterion_twisted),
    3: ("group orders and BI presentation", criterion_orders),
    4: ("BO trichotomy and sign map", criterion_trichotomy),
    5: ("McKay graphs", criterion_mckay),
    6: ("normalizer quotients on McKay graphs", criterion_normalizer_action),
    7: ("normalizers in ambient groups", criterion_normalizers),
    8: ("twist enumeration and folding", criterion_enumeration),
    9: ("descended representations of BD_n", criterion_reps),
    10: ("Molien oracle", criterion_molien),
}

SUITES = {
    "split": (1, 10),
    "twists": (2, 8),
    "mckay": (5,),
    "normalizers": (4, 6, 7),
    "reps": (3, 9),
    "all": tuple(sorted(CRITERIA)),
}


def run_criterion(number: int, char: int | None = None) -> CriterionResult:
    """``char`` moves the split identities to F_p; the other criteria are field-specific already."""
    title, fn = CRITERIA[number]
    if char and number == 1:
        tower = FieldTower.prime_field(char)
        title = f"{title} over F_{char}"
        fn = lambda: criterion_split(tower)  # noqa: E731
    t0 = time.perf_counter()
    try:
        checks = fn()
        err = None
    except Exception:
        checks, err = [], traceback.format_exc()
    return CriterionResult(number, title, checks, err, time.perf_counter() - t0)


def run_suite(name: str, jobs: int = 1, char: int | None = None) -> list[CriterionResult]:
    """Run a suite; the result order is by criterion number whatever ``jobs`` is."""
    numbers = SUITES[name]
    if jobs <= 1 or len(numbers) == 1:
        return [run_criterion(k, char) for k in numbers]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_criterion, numbers, [char] * len(numbers)))
