import pytest

from hh2 import quiver
from hh2.exactlin import NotOddPrime, rank, zeros
from hh2.quiver import IncompatibleAlgebras


def test_zigzag_dimensions():
    for p, dim in ((3, 9), (5, 17), (7, 25)):
        c = quiver.build_zigzag_c(p)
        assert c.dim == dim == 4 * p - 3


def test_zigzag_rejects_non_prime():
    with pytest.raises(NotOddPrime):
        quiver.build_zigzag_c(4)


def test_zigzag_structure():
    for p in (3, 5):
        c = quiver.build_zigzag_c(p)
        c.check_associativity()
        c.check_unit_and_idempotents()
        c.check_degrees()
        # the up-down loop at the top vertex vanishes
        top = c.mul_basis(c.eta[p - 1], c.xi[p - 1])
        assert top == {}
        # the two loops at an inner vertex agree up to sign
        for s in range(1, p - 1):
            down_up = c.mul_basis(c.eta[s], c.xi[s])
            assert down_up == {c.loop[s + 1]: p - 1}
        # all length-3 words vanish
        gens = [c.xi[m] for m in c.xi] + [c.eta[m] for m in c.eta]
        for g1 in gens:
            for g2 in gens:
                prod = c.mul_basis(g1, g2)
                for idx in prod:
                    for g3 in gens:
                        assert c.mul(prod, {g3: 1}) == {}
                        assert c.mul({g3: 1}, prod) == {}


def _free_walks(p, length):
    """All vertex walks of the given length on the path graph 1..p."""
    walks = [(v,) for v in range(1, p + 1)]
    for _ in range(length):
        walks = [w + (v,) for w in walks for v in (w[-1] - 1, w[-1] + 1)
                 if 1 <= v <= p]
    return walks


def _quotient_dims_by_length(p, max_len):
    """Independent oracle for the quadratic dual: free paths modulo the ideal
    generated by the stated relations, computed degreewise by linear algebra.

    Walks are vertex sequences; a relation is a linear combination of length-2
    walks. This uses no rewriting at all.
    """
    relations = [({(1, 2, 1): 1}, 1)]  # up-down loop at the bottom vanishes
    for v in range(2, p):
        relations.append(({(v, v + 1, v): 1, (v, v - 1, v): -1}, v))
    dims = []
    for n in range(max_len + 1):
        walks = _free_walks(p, n)
        index = {w: i for i, w in enumerate(walks)}
        rows = []
        if n >= 2:
            for rel, _v in relations:
                for i in range(n - 1):
                    # walks with a relation spliced at positions i..i+2
                    for w in walks:
                        row = {}
                        fits = False
                        for seg, coeff in rel.items():
                            if w[i:i + 3] == seg:
                                fits = True
                        if not fits:
                            continue
                        base = None
                        for seg, coeff in rel.items():
                            if w[i:i + 3] == seg:
                                base = w
                                break
                        for seg, coeff in rel.items():
                            spliced = base[:i] + seg + base[i + 3:]
                            row[index[spliced]] = (row.get(index[spliced], 0) + coeff) % p
                        rows.append(row)
        mat = zeros(len(rows), len(walks))
        for r, row in enumerate(rows):
            for c, coeff in row.items():
                mat[r, c] = coeff
        dims.append(len(walks) - rank(mat, p))
    return dims


@pytest.mark.parametrize("p", [3, 5])
def test_omega_dimension_against_free_quotient(p):
    om = quiver.build_omega(p)
    by_len = {}
    for b in om.basis:
        by_len[b.k] = by_len.get(b.k, 0) + 1
    oracle = _quotient_dims_by_length(p, 2 * (p - 1) + 1)
    for n, d in enumerate(oracle):
        assert by_len.get(n, 0) == d, (n, by_len.get(n, 0), d)
    assert oracle[-1] == 0  # nothing above the socle degree
    assert om.dim == sum(oracle)


def test_omega_relations_and_center():
    for p in (3, 5):
        om = quiver.build_omega(p)
        om.check_unit_and_idempotents()
        om.check_degrees()
        if p == 3:
            om.check_associativity()
        # x1 y1 = 0
        y1 = om.key[(1, 0, 1)]
        x1 = om.key[(2, 1, 0)]
        assert om.mul_basis(x1, y1) == {}
        # commutation at inner vertices: up-down = down-up
        for v in range(2, p):
            up_down = om.mul_basis(om.key[(v + 1, 1, 0)], om.key[(v, 0, 1)])
            down_up = om.mul_basis(om.key[(v - 1, 0, 1)], om.key[(v, 1, 0)])
            assert up_down == down_up == {om.key[(v, 1, 1)]: 1}
        # center F[z]/z^p
        center = om.center_basis()
        assert len(center) == p
        z = center[1]
        acc = dict(z)
        for ell in range(2, p):
            acc = om.mul(acc, z)
            assert acc == center[ell]
        assert om.mul(acc, z) == {}
        # z^l e_s nonzero exactly for s >= l+1
        for ell in range(p):
            support = sorted({om.basis[i].right for i in center[ell]})
            assert support == list(range(ell + 1, p + 1))


def test_omega_p3_socle_examples():
    om = quiver.build_omega(3)
    assert (3, 2, 2) in om.key          # z^2 e_3 survives
    assert (2, 2, 2) not in om.key      # z^2 e_2 = 0
    assert (1, 2, 2) not in om.key


def test_theta_dimensions_and_vanishing():
    for p, dim in ((3, 4), (5, 20), (7, 56)):
        om = quiver.build_omega(p)
        th = quiver.build_theta(p, om)
        assert th.dim == dim == (p ** 3 - p) // 6
        assert all(b.left != p and b.right != p for b in th.basis)
    # z^{(p-1)/2} dies in the quotient, z^{(p-3)/2} e_{(p-1)/2} survives
    for p in (3, 5, 7):
        om = quiver.build_omega(p)
        th_bim = quiver.quotient_theta(om)
        h = (p - 1) // 2
        names = {b.name for b in th_bim.basis}
        surviving = quiver.monomial_name((p - 1) // 2, h - 1, h - 1)
        assert surviving in names
        for s in range(1, p + 1):
            assert quiver.monomial_name(s, h, h) not in names


def test_theta_bimodule_axioms(maps3, maps5):
    for nm in (maps3, maps5):
        nm.theta.check_bimodule()
        nm.theta.check_degrees()
        nm.theta_sigma.check_bimodule()
        nm.theta_sigma.check_degrees()
        nm.ideal.check_bimodule()
        nm.dual.check_bimodule()
        nm.dual.check_degrees()


def test_twist_sigma_involution(maps5):
    th = maps5.theta
    ths = quiver.twist_sigma(th)
    back = quiver.twist_sigma(ths)
    assert [b.right for b in back.basis] == [b.right for b in th.basis]
    assert back.right == th.right and back.left == th.left


def test_twist_sigma_rejects_modules_seeing_top_vertex(maps3):
    with pytest.raises(IncompatibleAlgebras):
        quiver.twist_sigma(maps3.reg)


def test_dual_is_involutive_on_degrees(maps3):
    dd = quiver.dual(quiver.dual(maps3.theta))
    assert [(b.left, b.right, b.j, b.k) for b in dd.basis] == \
        [(b.left, b.right, b.j, b.k) for b in maps3.theta.basis]


def test_tensor_products(maps3, maps5):
    for nm in (maps3, maps5):
        tp = quiver.tensor_over(nm.ideal, nm.ideal)
        assert tp.dim == nm.omega.dim  # matches the dual of the algebra
        tp.check_bimodule()
        assert quiver.tensor_over(nm.theta, nm.ideal).dim == 0
        assert quiver.tensor_over(nm.ideal, nm.theta).dim == 0


def test_tensor_rejects_mismatched_base(maps3, maps5):
    with pytest.raises(IncompatibleAlgebras):
        quiver.tensor_over(maps3.theta, maps5.theta)


def test_theta_form_sigma_symmetry(maps5):
    # <a, a'> = <a', sigma(a)> for the degree-complement pairing
    from hh2.clubsuit import theta_partner
    om = maps5.omega
    th = maps5.theta
    pairs = {}
    for m in range(th.dim):
        m_omega = th.parent_index[m]
        pairs[m_omega] = theta_partner(om, m_omega)
    for a in list(pairs):
        # partner of the partner is the sigma image
        src, down, up = om.data(a)
        sigma_a = om.key[(om.p - src, up, down)]
        assert pairs[pairs[a]] == sigma_a


def test_documents_are_schema_shaped(maps3):
    import json
    doc = maps3.omega.to_document()
    assert set(doc) == {"p", "object", "basis", "products", "checks"}
    assert {r["name"] for r in doc["basis"]} == {b.name for b in maps3.omega.basis}
    json.dumps(doc)  # serializable
    doc = maps3.theta.to_document()
    assert len(doc["basis"]) == maps3.theta.dim
    json.dumps(doc)


def test_presentations_hold_in_built_algebras():
    for p in (3, 5, 7):
        c = quiver.build_zigzag_c(p)
        for value in c.presentation.evaluate(c):
            assert value == {}
        om = quiver.build_omega(p)
        for value in om.presentation.evaluate(om, om.arrow_images):
            assert value == {}
        # every relation is a sum of paths sharing one (source, target)
        for pres, alg, images in ((c.presentation, c, {}),
                                  (om.presentation, om, om.arrow_images)):
            arrows = {a.name: a for a in pres.arrows}
            for rel in pres.relations:
                slots = set()
                for word, _coeff in rel:
                    src = arrows[word[-1]].source
                    tgt = arrows[word[0]].target
                    slots.add((src, tgt))
                assert len(slots) == 1
