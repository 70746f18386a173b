"""Command line front end: tables, bases, structure constants, verification.

Output is deterministic for fixed arguments: bases and product entries are
emitted in a canonical sort order and scalars are integers in [0, p); the
scalar 1/2 appears as (p+1)/2.

Exit codes: 0 success, 2 invalid arguments, 3 internal check failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .exactlin import is_odd_prime

COEFFS = ("omega", "theta", "theta-sigma", "omega-dual", "omega-ep-omega")


def _emit(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["name", "a", "b", "i", "j", "k", "h", "idempotent"])
    for row in doc.get("basis", []):
        writer.writerow([row.get(c, "") for c in
                         ("name", "a", "b", "i", "j", "k", "h", "idempotent")])
    return out.getvalue().rstrip("\n")


def _basis_row(name: str, a, b, i, j, k, h, x) -> dict:
    return {"name": name, "a": a, "b": b, "i": i, "j": j, "k": k, "h": h, "idempotent": x}


def cmd_hh(p: int, coefficient: str, fmt: str) -> tuple[str, int]:
    from .clubsuit import NaturalMaps
    from .koszulhh import build_model, cup, format_name, homology_named

    nm = NaturalMaps(p)
    mods = {"omega": nm.reg, "theta": nm.theta, "theta-sigma": nm.theta_sigma,
            "omega-dual": nm.dual, "omega-ep-omega": nm.ideal}
    x_mod = mods[coefficient]
    model = build_model(nm.c, x_mod)
    hh = homology_named(model, coefficient)
    chi_model = build_model(nm.c, nm.reg)
    chi = homology_named(chi_model, "omega")
    pairing = nm.pairings["mult" if coefficient == "omega" else {
        "theta": "act_l:Theta", "theta-sigma": "act_l:ThetaSigma",
        "omega-dual": "act_l:OmegaDual", "omega-ep-omega": "mult_into_ideal_l",
    }[coefficient]]

    basis = []
    for cl in sorted(hh.classes, key=lambda c: (c.h, c.k, c.j, c.name)):
        x = "1" if cl.name[0] in ("z", "kz", "mu", "nu") else f"e_{cl.name[1]}"
        basis.append(_basis_row(format_name(cl.name), 0, 0, 0, cl.j, cl.k, cl.h, x))
    products = []
    for u in chi.classes:
        for v in hh.classes:
            w = cup(chi_model, u.rep, model, v.rep, pairing, model)
            res = hh.project(w)
            if res:
                products.append({
                    "left": format_name(u.name), "right": format_name(v.name),
                    "result": [{"name": format_name(n), "coeff": int(c)}
                               for n, c in sorted(res.items())],
                })
    products.sort(key=lambda e: (e["left"], e["right"]))
    doc = {"p": p, "object": f"HH(Omega, {coefficient})", "version": __version__,
           "command": f"hh --p {p} --coefficient {coefficient}",
           "basis": basis, "products": products, "checks": []}
    return _emit(doc, fmt), 0


def cmd_spadesuit(p: int, a_min: int, a_max: int, fmt: str,
                  check_associativity: bool = False,
                  run_first_principles: bool = False) -> tuple[str, int]:
    from .koszulhh import format_name
    from .spadesuit import OUT_OF_WINDOW, build_spade, verify_first_principles

    alg = build_spade(p, a_min, a_max)
    basis = []
    for m in sorted(alg.basis, key=lambda m: (m.a, m.b, m.k, m.j, str(m.name))):
        basis.append(_basis_row(m.display(), m.a, m.b, m.i, m.j, m.k,
                                None, m.x))
    checks = []
    status = 0
    products = []
    for m1 in alg.basis:
        for m2 in alg.basis:
            r = alg.product(m1, m2)
            if r is OUT_OF_WINDOW or not r:
                continue
            products.append({
                "left": m1.display(), "right": m2.display(),
                "result": [{"name": el.display(), "coeff": int(c)}
                           for el, c in sorted(r.items(), key=lambda t: t[0].display())],
            })
    products.sort(key=lambda e: (e["left"], e["right"]))

    if check_associativity:
        n_checked, n_failed = _spade_associativity(alg)
        checks.append({"name": f"associativity ({n_checked} triples)",
                       "status": "PASS" if n_failed == 0 else "FAIL"})
        if n_failed:
            status = 3
    if run_first_principles:
        rep = verify_first_principles(p, a_min, a_max)
        ok = not rep.mismatches
        checks.append({"name": f"first-principles ({len(rep.cells)} cells)",
                       "status": "PASS" if ok else "FAIL"})
        if not ok:
            status = 3
    doc = {"p": p, "object": "spadesuit", "version": __version__,
           "command": f"spadesuit --p {p} --a-min {a_min} --a-max {a_max}",
           "basis": basis, "products": products, "checks": checks}
    return _emit(doc, fmt), status


def _spade_associativity(alg) -> tuple[int, int]:
    """Full triple scan with integer-indexed product rows (None = truncated)."""
    from .spadesuit import OUT_OF_WINDOW
    basis = alg.basis
    n = len(basis)
    p = alg.p
    idx = {m: i for i, m in enumerate(basis)}
    rows: list[list] = [[None] * n for _ in range(n)]
    for i, m1 in enumerate(basis):
        for j, m2 in enumerate(basis):
            r = alg.product(m1, m2)
            if r is OUT_OF_WINDOW:
                rows[i][j] = None
            else:
                rows[i][j] = tuple((idx[el], c) for el, c in r.items())
    checked = failed = 0
    for i in range(n):
        row_i = rows[i]
        for j in range(n):
            r12 = row_i[j]
            if r12 is None:
                continue
            row_j = rows[j]
            for k in range(n):
                r23 = row_j[k]
                if r23 is None:
                    continue
                if not r12 and not r23:
                    checked += 1
                    continue
                ok = True
                acc: dict = {}
                for el, c in r12:
                    r = rows[el][k]
                    if r is None:
                        ok = False
                        break
                    for el2, c2 in r:
                        acc[el2] = (acc.get(el2, 0) + c * c2) % p
                if not ok:
                    continue
                for el, c in r23:
                    r = row_i[el]
                    if r is None:
                        ok = False
                        break
                    for el2, c2 in r:
                        acc[el2] = (acc.get(el2, 0) - c * c2) % p
                if not ok:
                    continue
                checked += 1
                if any(acc.values()):
                    failed += 1
    return checked, failed


def cmd_hhl(p: int, level: int, k_max: int | None, fmt: str) -> tuple[str, int]:
    from .operators import build_hhl
    from .spadesuit import build_spade

    spade = build_spade(p, -3, 4)
    alg = build_hhl(p, level, spade, k_max=k_max)
    basis = []
    for el in sorted(alg.basis, key=lambda e: (e.k, e.j, e.display())):
        basis.append(_basis_row(el.display(), None, None, 0, el.j, el.k, None, ""))
    doc = {"p": p, "object": f"hh_{level}", "version": __version__,
           "command": f"hhl --p {p} --l {level}" + (f" --k-max {k_max}" if k_max is not None else ""),
           "basis": basis, "products": [],
           "checks": [], "hilbert": {str(k): v for k, v in alg.hilbert_series("k").items()}}
    return _emit(doc, fmt), 0


def run_verify(p: int) -> list[tuple[str, bool, str]]:
    """Every invariant of the build at this prime; (name, passed, detail)."""
    import numpy as np

    from . import quiver
    from .clubsuit import ClubWindow, NaturalMaps
    from .exactlin import rank
    from .koszulhh import bar_oracle, build_model, cup, homology_named
    from .operators import build_hhl, project
    from .spadesuit import (OUT_OF_WINDOW, build_spade, chi_mul,
                            duality_form_checks, verify_first_principles)

    results: list[tuple[str, bool, str]] = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        results.append((name, bool(ok), detail))

    nm = NaturalMaps(p)
    try:
        nm.check_maps()
        check("natural maps intertwine with stated ranks", True)
    except AssertionError as exc:
        check("natural maps intertwine with stated ranks", False, str(exc))

    mods = {"omega": nm.reg, "theta": nm.theta, "theta-sigma": nm.theta_sigma,
            "omega-dual": nm.dual, "omega-ep-omega": nm.ideal}
    models = {kind: build_model(nm.c, mod) for kind, mod in mods.items()}
    hhs = {kind: homology_named(models[kind], kind) for kind in mods}
    expect = {"omega": 3 * p - 2, "theta": 2 * (p - 1), "theta-sigma": 2 * (p - 1),
              "omega-dual": p, "omega-ep-omega": p}
    for kind in COEFFS:
        n = len(hhs[kind].classes)
        check(f"dim HH(Omega, {kind}) = {expect[kind]}", n == expect[kind], f"got {n}")

    h_max = 4 if p == 3 else 3
    if p <= 5:
        for kind in COEFFS:
            oracle = bar_oracle(nm.omega, mods[kind], h_max)
            model_dims = hhs[kind].dims_by_h(h_max)
            check(f"bar oracle h<={h_max} agrees ({kind})", oracle == model_dims,
                  f"oracle {oracle} vs model {model_dims}")

    # chi presentation: computed cup table equals the presented table exactly
    chi = hhs["omega"]
    table_ok = True
    for u in chi.classes:
        for v in chi.classes:
            w = cup(models["omega"], u.rep, models["omega"], v.rep,
                    nm.pairings["mult"], models["omega"])
            res = chi.project(w)
            if res != {n: c for n, c in chi_mul(p, u.name, v.name).items() if c % p}:
                table_ok = False
    check("chi cup table matches presentation exactly", table_ok)

    perfect, assoc = duality_form_checks(p)
    check("duality pairing perfect", perfect)
    check("duality pairing associative", assoc)

    if p == 3:
        win = ClubWindow(p, -3, 4)
        n_checked, n_bad = _club_associativity(win)
        check(f"club window associativity ({n_checked} triples)", n_bad == 0)
        forms_ok = True
        for i in range(0, 2):
            for (_sA, _sB), (mat, d1, d2) in win.symmetry_form(i).items():
                arr = np.zeros((d1, d2), dtype=np.int64)
                for (u, v), c in mat.items():
                    arr[u, v] = c
                if rank(arr, p) != d1 or d1 != d2:
                    forms_ok = False
        check("symmetry form nondegenerate per component pair", forms_ok)

    if p <= 5:
        rep = verify_first_principles(p)
        check(f"spade table vs cup ({len(rep.cells)} cells)", not rep.mismatches,
              rep.summary())

    a_lo, a_hi = (-3, 4) if p <= 5 else (-2, 3)
    spade = build_spade(p, a_lo, a_hi)
    n_checked, n_bad = _spade_associativity(spade)
    check(f"spade associativity ({n_checked} triples)", n_bad == 0)

    sc_bad = 0
    for m1 in spade.basis:
        for m2 in spade.basis:
            r12 = spade.product(m1, m2)
            r21 = spade.product(m2, m1)
            if r12 is OUT_OF_WINDOW or r21 is OUT_OF_WINDOW:
                continue
            sign = -1 if (m1.k * m2.k) % 2 else 1
            ex = {el: (sign * c) % p for el, c in r21.items()}
            if r12 != {el: c for el, c in ex.items() if c}:
                sc_bad += 1
    check("spade supercommutative on window", sc_bad == 0, f"{sc_bad} failures")

    hh0 = build_hhl(p, 0, spade)
    hh1 = build_hhl(p, 1, spade)
    check("hh_0 = F", hh0.dim == 1)
    chi_ok = hh1.dim == 3 * p - 2
    for e1 in hh1.basis:
        for e2 in hh1.basis:
            prod = hh1.product(e1, e2)
            want = {n: c for n, c in chi_mul(p, e1.factors[0].name, e2.factors[0].name).items()}
            got = {el.factors[0].name: c for el, c in prod.items()}
            if got != want:
                chi_ok = False
    check("hh_1 isomorphic to chi as graded algebra", chi_ok)

    if p == 3:
        hh2_ = build_hhl(p, 2, spade, k_max=12)
        images = set()
        for el in hh2_.basis:
            images.update(project(hh2_, el, hh1))
        check("hh_2 -> hh_1 surjective", all(el in images for el in hh1.basis))
        mult_ok = True
        sc2_bad = 0
        for e1 in hh2_.basis:
            for e2 in hh2_.basis:
                pr = hh2_.product(e1, e2)
                r21 = hh2_.product(e2, e1)
                if pr is not OUT_OF_WINDOW and r21 is not OUT_OF_WINDOW:
                    sign = -1 if (e1.k * e2.k) % 2 else 1
                    ex = {el: (sign * c) % p for el, c in r21.items()}
                    if pr != {el: c for el, c in ex.items() if c}:
                        sc2_bad += 1
                if pr is OUT_OF_WINDOW:
                    continue
                lhs: dict = {}
                for el, c in pr.items():
                    for im, ci in project(hh2_, el, hh1).items():
                        lhs[im] = (lhs.get(im, 0) + c * ci) % p
                rhs: dict = {}
                for i1, c1 in project(hh2_, e1, hh1).items():
                    for i2, c2 in project(hh2_, e2, hh1).items():
                        r = hh1.product(i1, i2)
                        if r is OUT_OF_WINDOW:
                            continue
                        for el, c in r.items():
                            rhs[el] = (rhs.get(el, 0) + c1 * c2 * c) % p
                if {a: b for a, b in lhs.items() if b} != {a: b for a, b in rhs.items() if b}:
                    mult_ok = False
        check("projection hh_2 -> hh_1 multiplicative", mult_ok)
        check("hh_2 supercommutative in window", sc2_bad == 0)
    return results


def _club_associativity(win) -> tuple[int, int]:
    from .clubsuit import CLUB_OUT
    elems = win.basis()
    p = win.p
    prods = {}
    for i, (c1, m1) in enumerate(elems):
        for j, (c2, m2) in enumerate(elems):
            prods[(i, j)] = win.product(c1, m1, c2, m2)
    idx_of = {}
    for i, (c, m) in enumerate(elems):
        idx_of[((c.a, c.b), m)] = i
    n = len(elems)
    checked = bad = 0
    for i in range(n):
        for j in range(n):
            t12, r12 = prods[(i, j)]
            if t12 is CLUB_OUT:
                continue
            for k in range(n):
                t23, r23 = prods[(j, k)]
                if t23 is CLUB_OUT:
                    continue
                ok = True
                lhs: dict = {}
                if t12 is not None and r12:
                    for m, c in r12.items():
                        t, r = prods[(idx_of[((t12.a, t12.b), m)], k)]
                        if t is CLUB_OUT:
                            ok = False
                            break
                        if t is not None:
                            for m2, c2 in r.items():
                                key = ((t.a, t.b), m2)
                                lhs[key] = (lhs.get(key, 0) + c * c2) % p
                if not ok:
                    continue
                rhs: dict = {}
                if t23 is not None and r23:
                    for m, c in r23.items():
                        t, r = prods[(i, idx_of[((t23.a, t23.b), m)])]
                        if t is CLUB_OUT:
                            ok = False
                            break
                        if t is not None:
                            for m2, c2 in r.items():
                                key = ((t.a, t.b), m2)
                                rhs[key] = (rhs.get(key, 0) + c * c2) % p
                if not ok:
                    continue
                checked += 1
                if {a: b for a, b in lhs.items() if b} != {a: b for a, b in rhs.items() if b}:
                    bad += 1
    return checked, bad


def cmd_verify(p: int, fmt: str) -> tuple[str, int]:
    results = run_verify(p)
    checks = [{"name": name, "status": "PASS" if ok else "FAIL"} for name, ok, _ in results]
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail and not ok else "")
             for name, ok, detail in results]
    ok_all = all(ok for _, ok, _ in results)
    if fmt == "json":
        doc = {"p": p, "object": "verify", "version": __version__,
               "command": f"verify --p {p}", "basis": [], "products": [], "checks": checks}
        return _emit(doc, "json"), 0 if ok_all else 3
    return "\n".join(lines), 0 if ok_all else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hh2", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int, required=True, help="odd prime >= 3")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("hh", help="named classes of one coefficient case")
    common(sp)
    sp.add_argument("--coefficient", choices=COEFFS, required=True)

    sp = sub.add_parser("spadesuit", help="grid algebra basis and products")
    common(sp)
    sp.add_argument("--a-min", type=int, default=-3)
    sp.add_argument("--a-max", type=int, default=4)
    sp.add_argument("--check-associativity", action="store_true")
    sp.add_argument("--verify-first-principles", action="store_true")

    sp = sub.add_parser("hhl", help="tower approximant basis")
    common(sp)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--k-max", type=int, default=None)

    sp = sub.add_parser("verify", help="run the full invariant suite")
    common(sp)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if not is_odd_prime(args.p):
        print(f"error: --p must be an odd prime >= 3, got {args.p}", file=sys.stderr)
        return 2
    if args.command == "hhl" and args.l < 0:
        print("error: --l must be >= 0", file=sys.stderr)
        return 2
    try:
        if args.command == "hh":
            out, status = cmd_hh(args.p, args.coefficient, args.format)
        elif args.command == "spadesuit":
            out, status = cmd_spadesuit(args.p, args.a_min, args.a_max, args.format,
                                        args.check_associativity,
                                        args.verify_first_principles)
        elif args.command == "hhl":
            out, status = cmd_hhl(args.p, args.l, args.k_max, args.format)
        elif args.command == "verify":
            out, status = cmd_verify(args.p, args.format)
        else:  # pragma: no cover
            return 2
    except Exception as exc:  # internal check failure
        print(f"internal check failure: {exc}", file=sys.stderr)
        return 3
    print(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
