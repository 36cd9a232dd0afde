"""Command-line front end.

    rdptwist table [--char p] [--format text|json]
    rdptwist equation --type F4 --d 2 [--field Q|Fp:p]
    rdptwist invariants --group bd-star --n 4 [--char p]
    rdptwist mckay --group bo --format dot
    rdptwist twists --group bd2 --field Q --ext-cubic "t^3-t-1"
    rdptwist verify --suite all [--char p] [--jobs N]

Exit codes: 0 success, 1 computation failure or failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .fieldtower import FieldError, FieldTower, parse_rational


class UsageError(Exception):
    pass


def parse_field(spec: str | None, char: int | None = None) -> FieldTower:
    if char:
        return FieldTower.prime_field(char)
    if spec is None or spec.upper() == "Q":
        return FieldTower.rationals()
    if spec.lower().startswith("fp:"):
        try:
            p = int(spec[3:])
        except ValueError as exc:
            raise UsageError(f"bad prime in {spec!r}") from exc
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise UsageError(f"{p} is not prime")
        return FieldTower.prime_field(p)
    raise UsageError(f"field must be Q or Fp:<p>, got {spec!r}")


def parse_cubic(text: str):
    """(a, b) for a monic cubic in t, depressed if needed (char != 3 for the shift)."""
    import sympy

    t = sympy.Symbol("t")
    try:
        poly = sympy.Poly(sympy.sympify(text.replace("^", "**")), t)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise UsageError(f"cannot parse cubic {text!r}") from exc
    if poly.degree() != 3 or poly.LC() != 1:
        raise UsageError("the cubic must be monic of degree 3 in t")
    c = [sympy.Rational(x) for x in poly.all_coeffs()]  # t^3 + c2 t^2 + c1 t + c0
    _, c2, c1, c0 = c
    if c2:
        shifted = sympy.Poly(poly.as_expr().subs(t, t - c2 / 3), t)
        _, _, c1, c0 = [sympy.Rational(x) for x in shifted.all_coeffs()]
    return str(c1), str(c0)


def _rational(s: str):
    try:
        return parse_rational(s)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"not a rational number: {s!r}") from exc


def _emit(data, fmt: str, text_fn):
    if fmt == "json":
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        sys.stdout.write(text_fn(data))


# ---------------------------------------------------------------------------
# commands


def cmd_table(args) -> int:
    from .twistcatalog import classification_table

    rows = classification_table(args.char)
    data = [r.to_json() for r in rows]

    def text(rows_json):
        out = []
        for r in rows_json:
            out.append(f"{r['label']:<4} {r['params']['rank']:<8} {r['table_form']:<44} {r['char_constraints']:<14} {r['splitting_field']}")
        return "\n".join(out) + "\n"

    for r, eq in zip(data, rows):
        r["label"] = eq.label.family + (str(eq.label.rank) if eq.label.rank else "")
        r["rank"] = eq.params["rank"]
    _emit(data, args.format, text)
    return 0


def build_equation(args):
    from . import twistcatalog as tc

    k = parse_field(args.field, args.char)
    kind = args.type.upper()
    n = args.n
    needs_n = {"A", "D", "B", "C"}
    if kind in needs_n and n is None:
        raise UsageError(f"--n is required for type {kind}")
    if kind in ("B", "C", "F4", "C3") and args.d is None:
        raise UsageError(f"--d is required for type {kind}")
    d = _rational(args.d) if args.d is not None else None
    if kind in ("A", "D", "E6", "E7", "E8"):
        return tc.build_split(kind, n, k)
    if kind == "B":
        return tc.build_b(n, d, k)
    if kind == "C":
        return tc.build_c(n, d, k)
    if kind == "F4":
        return tc.build_f4(d, k)
    if kind == "C3":
        return tc.build_c3(d, k)
    if kind == "G2":
        if args.ext_cubic is None:
            raise UsageError("--ext-cubic is required for type G2")
        if args.zeta3:
            from .fieldtower import adjoin_cyclotomic

            k, _ = adjoin_cyclotomic(k, 3)
        a, b = parse_cubic(args.ext_cubic)
        return tc.build_g2(_rational(a), _rational(b), k)
    raise UsageError(f"unknown type {args.type!r}")


def cmd_equation(args) -> int:
    eq = build_equation(args)
    data = eq.to_json()

    def text(d):
        lines = [f"{d['label']}: {d['equation']} = 0", f"  table form: {d['table_form']}", f"  splitting field: {d['splitting_field']}"]
        t = d["transcript"]
        if "relation" in t:
            lines.append(f"  relation: {t['relation']}")
            lines.append(f"  substitution: {', '.join(t['substitution'])}")
            lines.append(f"  verified: {t['verified']}")
        return "\n".join(lines) + "\n"

    _emit(data, args.format, text)
    return 0


def cmd_invariants(args) -> int:
    from . import invariantring as inv

    k = parse_field(args.field, args.char)
    tr = inv.fundamental_invariants(args.group, args.n, k)
    rel = inv.syzygy_search(tr)
    data = {**tr.to_json(), "relation": str(rel), "relation_degree": rel.weighted_degree}

    def text(d):
        lines = [f"{d['label']} over {d['field']}"]
        for name, p in d["generators"].items():
            lines.append(f"  {name} = {p}")
        lines.append(f"  relation: {d['relation']} = 0")
        return "\n".join(lines) + "\n"

    _emit(data, args.format, text)
    return 0


_ROOTS = {"bo": 8, "bt-star": 8, "bt": 24, "bd2": 8, "bi": 5}


def _group_tower(kind: str, n, char):
    if not char:
        return None
    from .groupmodels import _cyclotomic_tower

    if kind == "mu":
        return _cyclotomic_tower(n or 2, char)[0]
    if kind in ("bd-star", "bd"):
        return _cyclotomic_tower(4 * (n or 2), char)[0]
    return _cyclotomic_tower(_ROOTS[kind], char)[0]


def cmd_mckay(args) -> int:
    from .groupmodels import build_group
    from .mckay import classify_dynkin, mckay_graph

    kind = args.group.lower()
    G = build_group(kind, args.n, _group_tower(kind, args.n, args.char))
    graph = mckay_graph(G)
    label = classify_dynkin(graph)
    if args.format == "dot":
        sys.stdout.write(graph.to_dot())
        return 0
    data = {"group": G.name if hasattr(G, "name") else kind, "order": G.order, "label": str(label), **graph.to_json()}

    def text(d):
        lines = [f"{d['group']} (order {d['order']}): {d['label']}", f"  dims: {d['dims']}"]
        for i, row in enumerate(d["adjacency"]):
            lines.append("  " + " ".join(str(x) for x in row))
        return "\n".join(lines) + "\n"

    _emit(data, args.format, text)
    return 0


def cmd_twists(args) -> int:
    from . import twistcatalog as tc

    k = parse_field(args.field, args.char)
    if args.ext_cubic:
        a, b = parse_cubic(args.ext_cubic)
        ext = {"kind": "cubic", "a": _rational(a), "b": _rational(b)}
    elif args.d is not None:
        ext = {"kind": "artin-schreier" if k.p == 2 else "quadratic", "d": _rational(args.d)}
    else:
        raise UsageError("give --d or --ext-cubic")
    galois = tc.galois_of_extension(ext, k)
    group = args.group.lower()
    descs = tc.enumerate_twists(group, galois, args.n, ext)
    out = []
    failed = False
    for desc in descs:
        entry = desc.to_json()
        try:
            eq = tc.build_twisted_equation(desc, k)
            entry["equation"] = eq.to_json()
        except tc.UnsupportedCase as exc:
            entry["equation"] = None
            entry["unsupported"] = str(exc)
        except FieldError as exc:
            entry["equation"] = None
            entry["error"] = f"{type(exc).__name__}: {exc}"
            failed = True
        out.append(entry)
    data = {"group": group, "galois": galois.name, "extension": {k_: str(v) for k_, v in ext.items()}, "twists": out}

    def text(d):
        lines = [f"{d['group']} twisted by Gal = {d['galois']}: {len(d['twists'])} classes"]
        for t in d["twists"]:
            eq = t["equation"]
            desc = eq["equation"] + " = 0" if eq else t.get("unsupported", t.get("error", ""))
            lines.append(f"  image order {t['image_order']}: {t['folded_label']}  {desc}")
        return "\n".join(lines) + "\n"

    _emit(data, args.format, text)
    return 1 if failed else 0


def cmd_verify(args) -> int:
    from .suites import run_suite

    results = run_suite(args.suite, args.jobs, args.char)
    ok = all(r.ok for r in results)
    if args.format == "json":
        data = {"suite": args.suite, "ok": ok, "criteria": [r.to_json() for r in results]}
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        for r in results:
            sys.stdout.write(r.line() + "\n")
        total = sum(len(r.checks) for r in results)
        sys.stdout.write(f"{'OK' if ok else 'FAILED'}: {len(results)} criteria, {total} checks\n")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rdptwist", description="Twisted rational double points from finite subgroup schemes of SL2.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("text", "json")):
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--char", type=int, default=None, help="work over the prime field F_p")

    sp = sub.add_parser("table", help="the classification table")
    common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("equation", help="build and verify one equation")
    common(sp, ("json", "text"))
    sp.add_argument("--type", required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--d")
    sp.add_argument("--ext-cubic", dest="ext_cubic")
    sp.add_argument("--field", default="Q")
    sp.add_argument("--zeta3", action="store_true", help="adjoin a primitive cube root of unity to the base field")
    sp.set_defaults(func=cmd_equation)

    sp = sub.add_parser("invariants", help="generators and relation of an invariant ring")
    common(sp)
    sp.add_argument("--group", required=True, choices=["mu", "bd-star", "bd2", "bt-star", "bo", "bi"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--field", default="Q")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("mckay", help="McKay graph of a group")
    common(sp, ("text", "json", "dot"))
    sp.add_argument("--group", required=True, choices=["mu", "bd-star", "bd", "bd2", "bt-star", "bt", "bo", "bi"])
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=cmd_mckay)

    sp = sub.add_parser("twists", help="enumerate twisted forms for an extension")
    common(sp)
    sp.add_argument("--group", required=True, choices=["mu", "bd-star", "bd2", "bt", "bo", "bi"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--field", default="Q")
    sp.add_argument("--d")
    sp.add_argument("--ext-cubic", dest="ext_cubic")
    sp.set_defaults(func=cmd_twists)

    sp = sub.add_parser("verify", help="run the verification suite")
    common(sp)
    sp.add_argument("--suite", default="all", choices=["all", "split", "twists", "mckay", "normalizers", "reps"])
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_verify)
    return p


_NEEDS_N = {"mu", "bd-star", "bd"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    group = getattr(args, "group", None)
    if group in _NEEDS_N and args.n is None:
        parser.error(f"--n is required for group {group}")
    if getattr(args, "n", None) is not None and args.n < 1:
        parser.error("--n must be positive")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"rdptwist: error: {exc}\n")
        return 2
    except (FieldError, ValueError, KeyError, NotImplementedError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
