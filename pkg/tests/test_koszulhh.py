import pytest

from hh2.koszulhh import (NotACocycle, PairingDegreeMismatch, TooLarge,
                          UnrecognizedSignature, bar_oracle, build_model, cup,
                          homology_named)
from hh2.quiver import zero_bimodule


def test_zero_coefficients_give_empty_model(maps3):
    model = build_model(maps3.c, zero_bimodule(maps3.omega))
    assert model.dim == 0


def test_model_graded_components_p3(maps3):
    # for X = Omega the nonzero bigraded pieces are exactly the loop column,
    # the three columns of each z-power slice, in (c-length, path-length) form
    model = build_model(maps3.c, maps3.reg)
    p = 3
    keys = set()
    for n, (ci, xi) in enumerate(model.pairs):
        cb = maps3.c.basis[ci]
        xb = maps3.reg.basis[xi]
        keys.add((-cb.j, xb.k))  # c-length as negative, coefficient length
    expected = {(-2, 0)}
    for ell in range(p):
        expected.add((0, 2 * ell))
        if ell < p - 1:
            expected.add((-1, 2 * ell + 1))
        if ell < p - 2:
            expected.add((-2, 2 * ell + 2))
    assert keys == expected


def test_model_total_dimension(maps5):
    model = build_model(maps5.c, maps5.reg)
    c, x_mod = maps5.c, maps5.reg
    total = 0
    for s in range(1, 6):
        for t in range(1, 6):
            dim_c = sum(1 for b in c.basis if (b.left, b.right) == (s, t))
            dim_x = sum(1 for b in x_mod.basis if (b.left, b.right) == (t, s))
            total += dim_c * dim_x
    assert model.dim == total


@pytest.mark.parametrize("p,expect", [
    (3, {"omega": 7, "theta": 4, "theta-sigma": 4, "omega-dual": 3, "omega-ep-omega": 3}),
    (5, {"omega": 13, "theta": 8, "theta-sigma": 8, "omega-dual": 5, "omega-ep-omega": 5}),
])
def test_class_counts(p, expect, named3, named5):
    _models, hhs = named3 if p == 3 else named5
    for kind, n in expect.items():
        assert len(hhs[kind].classes) == n


def test_degree_tables_p5(named5):
    _models, hhs = named5
    degs = sorted((cl.j, cl.k) for cl in hhs["omega"].classes)
    assert degs == sorted([(2, 0)] * 4 + [(0, 0), (0, 1), (-2, 2), (-2, 3),
                                          (-4, 4), (-4, 5), (-6, 6), (-6, 7), (-8, 8)])
    degs = sorted((cl.j, cl.k) for cl in hhs["theta"].classes)
    assert degs == sorted([(2, 0)] * 4 + [(0, 0), (0, 1), (-2, 2), (-2, 3)])
    degs = sorted((cl.j, cl.k) for cl in hhs["theta-sigma"].classes)
    assert degs == sorted([(1, 0), (1, 1), (-1, 2), (-1, 3)] + [(-3, 3)] * 4)
    degs = sorted((cl.j, cl.k) for cl in hhs["omega-dual"].classes)
    assert degs == [(0, 0)] * 5
    assert all(cl.h == 0 for cl in hhs["omega-dual"].classes)
    degs = sorted((cl.j, cl.k) for cl in hhs["omega-ep-omega"].classes)
    assert degs == sorted([(-4, 4), (-4, 5), (-6, 6), (-6, 7), (-8, 8)])


def test_auto_names_without_kind(maps3):
    model = build_model(maps3.c, maps3.reg)
    hh = homology_named(model, None)
    assert len(hh.classes) == 7
    assert all(cl.name[0] == "auto" for cl in hh.classes)


def test_homology_named_rejects_wrong_kind(maps3):
    model = build_model(maps3.c, maps3.reg)
    with pytest.raises(UnrecognizedSignature):
        homology_named(model, "theta-sigma")  # dual-type names cannot span HH(Omega)


def test_bar_oracle_examples(maps3):
    assert bar_oracle(maps3.omega, maps3.reg, 4) == [3, 2, 2, 0, 0]
    assert bar_oracle(maps3.omega, maps3.dual, 2) == [3, 0, 0]
    assert bar_oracle(maps3.omega, zero_bimodule(maps3.omega), 3) == [0, 0, 0, 0]


def test_bar_oracle_cap(maps3):
    with pytest.raises(TooLarge):
        bar_oracle(maps3.omega, maps3.reg, 4, cell_cap=10)


@pytest.mark.parametrize("kind", ["omega", "theta", "theta-sigma",
                                  "omega-dual", "omega-ep-omega"])
def test_bar_oracle_matches_model_p3(kind, maps3, named3):
    _models, hhs = named3
    mods = {"omega": maps3.reg, "theta": maps3.theta, "theta-sigma": maps3.theta_sigma,
            "omega-dual": maps3.dual, "omega-ep-omega": maps3.ideal}
    assert bar_oracle(maps3.omega, mods[kind], 4) == hhs[kind].dims_by_h(4)


def test_cup_unit_law(maps3, named3):
    models, hhs = named3
    chi = hhs["omega"]
    one = chi.by_name[("z", 0)].rep
    for kind in ("theta", "theta-sigma", "omega-dual"):
        pairing = maps3.pairings[{"theta": "act_l:Theta",
                                  "theta-sigma": "act_l:ThetaSigma",
                                  "omega-dual": "act_l:OmegaDual"}[kind]]
        for cl in hhs[kind].classes:
            w = cup(models["omega"], one, models[kind], cl.rep, pairing, models[kind])
            assert hhs[kind].project(w) == {cl.name: 1}


def test_cup_z_chain(maps5, named5):
    models, hhs = named5
    chi = hhs["omega"]
    mult = maps5.pairings["mult"]
    z = chi.by_name[("z", 1)].rep
    for ell in range(4):
        zl = chi.by_name[("z", ell)].rep
        w = cup(models["omega"], z, models["omega"], zl, mult, models["omega"])
        assert chi.project(w) == {("z", ell + 1): 1}
    # z . z^{p-1} = 0
    w = cup(models["omega"], z, models["omega"], chi.by_name[("z", 4)].rep,
            mult, models["omega"])
    assert chi.project(w) == {}


def test_cup_kappa_mu(maps5, named5):
    # kappa . mu_l lands on nu_l with the coefficient 1/2 forced by the
    # normalization nu_l = v_h - v_{h+1}; see the decisions ledger
    models, hhs = named5
    chi, sig = hhs["omega"], hhs["theta-sigma"]
    pairing = maps5.pairings["act_l:ThetaSigma"]
    kappa = chi.by_name[("kz", 0)].rep
    half = (5 + 1) // 2
    for ell in (1, 2):
        w = cup(models["omega"], kappa, models["theta-sigma"],
                sig.by_name[("mu", ell)].rep, pairing, models["theta-sigma"])
        assert sig.project(w) == {("nu", ell): half}
        # z . mu_l = mu_{l-1}, z . nu_l = nu_{l-1}
        z = chi.by_name[("z", 1)].rep
        w = cup(models["omega"], z, models["theta-sigma"],
                sig.by_name[("mu", ell)].rep, pairing, models["theta-sigma"])
        assert sig.project(w) == ({("mu", ell - 1): 1} if ell > 1 else {})


def test_cup_rejects_non_cocycle(maps3, named3):
    models, hhs = named3
    model = models["omega"]
    chain = {0: 1}  # e_1 (x) x-type monomial: not a cocycle
    for n, (ci, xi) in enumerate(model.pairs):
        if maps3.c.basis[ci].j == 0 and maps3.reg.basis[xi].k == 1:
            chain = {n: 1}
            break
    with pytest.raises(NotACocycle):
        cup(model, chain, model, hhs["omega"].by_name[("z", 0)].rep,
            maps3.pairings["mult"], model)


def test_cup_rejects_odd_pairing_without_factor(maps3, named3):
    models, hhs = named3
    with pytest.raises(PairingDegreeMismatch):
        cup(models["theta"], hhs["theta"].by_name[("z", 0)].rep,
            models["theta-sigma"], hhs["theta-sigma"].by_name[("soc", 1)].rep,
            maps3.pairings["nu_l"], models["omega-dual"])


def test_cup_associativity_on_action_pairings(maps3, named3):
    # (u . v) . w = u . (v . w) for u, v central classes and w a theta class,
    # where the three pairings form the commuting square of action maps
    models, hhs = named3
    chi, thb = hhs["omega"], hhs["theta"]
    mult = maps3.pairings["mult"]
    act = maps3.pairings["act_l:Theta"]
    for u in chi.classes:
        for v in chi.classes:
            uv = cup(models["omega"], u.rep, models["omega"], v.rep, mult, models["omega"])
            for w in thb.classes:
                vw = cup(models["omega"], v.rep, models["theta"], w.rep, act, models["theta"])
                lhs = cup(models["omega"], uv, models["theta"], w.rep, act, models["theta"])
                rhs = cup(models["omega"], u.rep, models["theta"], vw, act, models["theta"])
                assert thb.project(lhs) == thb.project(rhs)


def test_chi_supercommutative(maps5, named5):
    models, hhs = named5
    chi = hhs["omega"]
    mult = maps5.pairings["mult"]
    for u in chi.classes:
        for v in chi.classes:
            uv = chi.project(cup(models["omega"], u.rep, models["omega"], v.rep,
                                 mult, models["omega"]))
            vu = chi.project(cup(models["omega"], v.rep, models["omega"], u.rep,
                                 mult, models["omega"]))
            sign = -1 if (u.k * v.k) % 2 else 1
            assert uv == {n: (sign * c) % 5 for n, c in vu.items() if (sign * c) % 5}


def test_chi_presentation_relations(maps5, named5):
    models, hhs = named5
    chi = hhs["omega"]
    mult = maps5.pairings["mult"]

    def mul(a, b):
        return chi.project(cup(models["omega"], chi.by_name[a].rep,
                               models["omega"], chi.by_name[b].rep,
                               mult, models["omega"]))

    p = 5
    assert mul(("kz", 0), ("kz", 0)) == {}                       # kappa^2 = 0
    assert mul(("z", p - 2), ("z", 1)) == {("z", p - 1): 1}      # z^{p-1} != 0
    assert mul(("z", p - 1), ("z", 1)) == {}                     # z^p = 0
    assert mul(("z", p - 1), ("kz", 0)) == {}                    # z^{p-1} kappa = 0
    assert mul(("z", p - 2), ("kz", 0)) == {("kz", p - 2): 1}    # z^{p-2} kappa != 0
    for s in (1, 2):
        assert mul(("c2", s), ("z", 1)) == {}                    # c2 . z = 0
        assert mul(("c2", s), ("kz", 0)) == {}                   # c2 . kappa = 0
        assert mul(("c2", s), ("c2", s)) == {}                   # c2 . c2 = 0


def test_exactness_of_coefficient_sequence(named5):
    # the ideal, algebra and quotient columns balance in every (j,k) bidegree
    _models, hhs = named5
    by_deg = {}
    for kind, sign in (("omega-ep-omega", 1), ("omega", -1), ("theta", 1)):
        for cl in hhs[kind].classes:
            key = (cl.j, cl.k)
            by_deg[key] = by_deg.get(key, 0) + sign
    assert all(v == 0 for v in by_deg.values())
    # and the ideal classes are precisely the kernel of the truncation
    ideal_names = {cl.name for cl in hhs["omega-ep-omega"].classes}
    chi_names = {cl.name for cl in hhs["omega"].classes}
    bar_names = {cl.name for cl in hhs["theta"].classes}
    assert ideal_names == chi_names - bar_names


def test_cup_associativity_on_sigma_action(maps3, named3):
    models, hhs = named3
    chi, sig = hhs["omega"], hhs["theta-sigma"]
    mult = maps3.pairings["mult"]
    act = maps3.pairings["act_l:ThetaSigma"]
    for u in chi.classes:
        for v in chi.classes:
            uv = cup(models["omega"], u.rep, models["omega"], v.rep, mult, models["omega"])
            for w in sig.classes:
                vw = cup(models["omega"], v.rep, models["theta-sigma"], w.rep,
                         act, models["theta-sigma"])
                lhs = cup(models["omega"], uv, models["theta-sigma"], w.rep,
                          act, models["theta-sigma"])
                rhs = cup(models["omega"], u.rep, models["theta-sigma"], vw,
                          act, models["theta-sigma"])
                assert sig.project(lhs) == sig.project(rhs)


def test_model_rejects_mismatched_inputs(maps3, maps5):
    from hh2.koszulhh import MismatchedP
    with pytest.raises(MismatchedP):
        build_model(maps3.c, maps5.reg)


def test_bar_oracle_p7_low_degrees_and_guard():
    from hh2.clubsuit import NaturalMaps
    nm = NaturalMaps(7)
    assert bar_oracle(nm.omega, nm.reg, 2) == [7, 6, 6]
    with pytest.raises(TooLarge):
        bar_oracle(nm.omega, nm.reg, 3)  # exceeds the default cell cap
