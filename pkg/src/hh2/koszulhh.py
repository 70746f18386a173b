"""The small cochain model for Hochschild cohomology with bimodule coefficients.

For an Omega-bimodule X the model is D = sum over (s,t) of
e_s c e_t (x) e_t X e_s, where c is the degree-(1,0) double-quiver algebra.
The differential is the super-commutator with the canonical degree-1 element
iota = sum_rho rho (x) rho* (rho runs over the arrows of c, with duals
xi_m* = y_m, eta_m* = x_m):

    d(alpha (x) x) = sum_rho alpha.rho (x) rho*.x
                     - (-1)^{k(x)} sum_rho rho.alpha (x) x.rho*

This squares to zero and is a superderivation for the product

    (alpha (x) x) . (beta (x) y) = (-1)^{k(x) k(y)} (beta o alpha) (x) pair(x, y)

where pair is an Omega-balanced coefficient pairing X x Y -> Z.  The c-parts
compose in the opposite order, as in the diagonal of c^op (x) coefficients.

Hochschild degree h of a class is the c-length of its representative (0, 1
or 2); the model is graded by total (j, k) and d has degree (0, 1).
"""

from __future__ import annotations

import os

import numpy as np

from .exactlin import Homology, matmul, zeros
from .quiver import BasedAlgebra, BasedBimodule, Combo, OmegaAlgebra, combo_add

Name = tuple  # ("z", l) | ("kz", l) | ("c2", s) | ("soc", s) | ("mu", l) | ("nu", l) | ("e", s)
NameCombo = dict[Name, int]


class MismatchedP(Exception):
    pass


class NonMatchingIdempotents(Exception):
    pass


class NotACocycle(Exception):
    pass


class PairingDegreeMismatch(Exception):
    pass


class UnrecognizedSignature(Exception):
    pass


class TooLarge(Exception):
    pass


DEFAULT_MAX_CELLS = 2_000_000


def max_cells() -> int:
    return int(os.environ.get("HH2_MAX_CELLS", DEFAULT_MAX_CELLS))


class Pairing:
    """Omega-balanced bilinear map X x Y -> Z given on basis pairs.

    A pairing whose k-degree shift is odd does not induce a chain map of
    models directly; such pairings carry a ``factor`` (inner even pairing,
    odd bimodule map) and cup routes through the factorization.
    """

    def __init__(self, x_mod: BasedBimodule, y_mod: BasedBimodule, z_mod: BasedBimodule,
                 table: dict[tuple[int, int], Combo], name: str = "", factor=None):
        self.x_mod = x_mod
        self.y_mod = y_mod
        self.z_mod = z_mod
        self.table = table
        self.name = name
        self.p = x_mod.p
        self.factor = factor

    def apply(self, x: int, y: int) -> Combo:
        return self.table.get((x, y), {})

    def apply_combo(self, xc: Combo, yc: Combo) -> Combo:
        out: Combo = {}
        for x, cx in xc.items():
            for y, cy in yc.items():
                prod = self.apply(x, y)
                if prod:
                    combo_add(out, prod, cx * cy, self.p)
        return out

    def check(self) -> None:
        """Balancedness and one-sided equivariance over the full algebra basis."""
        omega = self.x_mod.over
        p = self.p
        for x in range(self.x_mod.dim):
            for a in range(omega.dim):
                xa = self.x_mod.right.get((x, a), {})
                for y in range(self.y_mod.dim):
                    ay = self.y_mod.left.get((a, y), {})
                    lhs: Combo = {}
                    for t, c in xa.items():
                        combo_add(lhs, self.apply(t, y), c, p)
                    rhs: Combo = {}
                    for t, c in ay.items():
                        combo_add(rhs, self.apply(x, t), c, p)
                    if lhs != rhs:
                        raise AssertionError(f"{self.name}: not balanced")
        for a in range(omega.dim):
            for x in range(self.x_mod.dim):
                ax = self.x_mod.left.get((a, x), {})
                for y in range(self.y_mod.dim):
                    lhs = self.z_mod.act_left({a: 1}, self.apply(x, y))
                    rhs: Combo = {}
                    for t, c in ax.items():
                        combo_add(rhs, self.apply(t, y), c, p)
                    if lhs != rhs:
                        raise AssertionError(f"{self.name}: not left equivariant")
        for y in range(self.y_mod.dim):
            for a in range(omega.dim):
                ya = self.y_mod.right.get((y, a), {})
                for x in range(self.x_mod.dim):
                    lhs = self.z_mod.act_right(self.apply(x, y), {a: 1})
                    rhs = {}
                    for t, c in ya.items():
                        combo_add(rhs, self.apply(x, t), c, p)
                    if lhs != rhs:
                        raise AssertionError(f"{self.name}: not right equivariant")


# model cochains are dicts {(c_index, x_index): coeff}
Cochain = dict[tuple[int, int], int]


class CochainModel:
    def __init__(self, c: BasedAlgebra, x_mod: BasedBimodule):
        if c.p != x_mod.p:
            raise MismatchedP("algebra and coefficients have different p")
        omega = x_mod.over
        if not isinstance(omega, OmegaAlgebra):
            raise NonMatchingIdempotents("coefficients must be a module over the quadratic dual")
        if set(c.idem) != set(omega.idem):
            raise NonMatchingIdempotents("vertex sets disagree")
        self.c = c
        self.x_mod = x_mod
        self.omega = omega
        self.p = c.p

        self.pairs: list[tuple[int, int]] = []
        for ci, cb in enumerate(c.basis):
            for xi, xb in enumerate(x_mod.basis):
                if cb.right == xb.left and cb.left == xb.right:
                    self.pairs.append((ci, xi))
        self.pair_index = {pr: n for n, pr in enumerate(self.pairs)}

        # bucket by total (j, k); d maps bucket (j,k) -> (j,k+1)
        self.bucket_of: dict[tuple[int, int], list[int]] = {}
        for n, (ci, xi) in enumerate(self.pairs):
            cb, xb = c.basis[ci], x_mod.basis[xi]
            self.bucket_of.setdefault((cb.j + xb.j, cb.k + xb.k), []).append(n)
        self.pos_in_bucket = {}
        for key, members in self.bucket_of.items():
            for pos, n in enumerate(members):
                self.pos_in_bucket[n] = (key, pos)

        self._diff_images = [self._differential_of(n) for n in range(len(self.pairs))]
        self.d_mats: dict[tuple[int, int], np.ndarray] = {}
        for key, members in self.bucket_of.items():
            tgt_key = (key[0], key[1] + 1)
            tgt = self.bucket_of.get(tgt_key, [])
            mat = zeros(len(tgt), len(members))
            for col, n in enumerate(members):
                for m, coeff in self._diff_images[n].items():
                    tk, pos = self.pos_in_bucket[m]
                    assert tk == tgt_key, "differential not of degree (0,1)"
                    mat[pos, col] = coeff
            self.d_mats[key] = mat
        self._check_d_squared()
        self._homology: dict[tuple[int, int], Homology] = {}

    def _arrows(self):
        c = self.c
        for m in range(1, self.p):
            yield c.xi[m], self.omega.key[(m, 0, 1)]      # xi_m paired with y_m
            yield c.eta[m], self.omega.key[(m + 1, 1, 0)]  # eta_m paired with x_m

    def _differential_of(self, n: int) -> Cochain:
        ci, xi = self.pairs[n]
        c, x_mod, p = self.c, self.x_mod, self.p
        sign = -1 if x_mod.basis[xi].k % 2 else 1
        out: Cochain = {}

        def add(cc: Combo, xc: Combo, coeff: int) -> None:
            for c_idx, c1 in cc.items():
                for x_idx, c2 in xc.items():
                    pr = (c_idx, x_idx)
                    if pr in self.pair_index:
                        m = self.pair_index[pr]
                        v = (out.get(m, 0) + coeff * c1 * c2) % p
                        if v:
                            out[m] = v
                        else:
                            out.pop(m, None)
                    elif (c1 * c2) % p:
                        raise AssertionError("differential left the diagonal")

        for rho, rho_star in self._arrows():
            add(c.mul_basis(ci, rho), x_mod.left.get((rho_star, xi), {}), 1)
            add(c.mul_basis(rho, ci), x_mod.right.get((xi, rho_star), {}), -sign)
        return out

    def _check_d_squared(self) -> None:
        for key, mat in self.d_mats.items():
            nxt = self.d_mats.get((key[0], key[1] + 1))
            if nxt is not None and mat.size and nxt.size:
                if np.any(matmul(nxt, mat, self.p)):
                    raise AssertionError("d^2 != 0")

    @property
    def dim(self) -> int:
        return len(self.pairs)

    def homology_at(self, key: tuple[int, int]) -> Homology:
        if key not in self._homology:
            members = self.bucket_of.get(key, [])
            below = (key[0], key[1] - 1)
            d_in = self.d_mats.get(below)
            if d_in is None or not self.bucket_of.get(below):
                d_in = zeros(len(members), 0)
            d_out = self.d_mats.get(key)
            if d_out is None:
                d_out = zeros(0, len(members))
            self._homology[key] = Homology(d_in, d_out, self.p)
        return self._homology[key]

    def cochain_vector(self, chain: Cochain, key: tuple[int, int]) -> np.ndarray:
        members = self.bucket_of.get(key, [])
        vec = zeros(1, len(members))[0]
        for n, coeff in chain.items():
            k2, pos = self.pos_in_bucket[n]
            if k2 != key:
                raise ValueError("cochain not homogeneous")
            vec[pos] = coeff % self.p
        return vec

    def chain_degree(self, chain: Cochain) -> tuple[int, int]:
        keys = {self.pos_in_bucket[n][0] for n in chain}
        if len(keys) != 1:
            raise ValueError(f"cochain not homogeneous: {keys}")
        return keys.pop()

    def is_cocycle(self, chain: Cochain) -> bool:
        if not chain:
            return True
        key = self.chain_degree(chain)
        vec = self.cochain_vector(chain, key)
        mat = self.d_mats[key]
        return not (mat.size and np.any(matmul(mat, vec.reshape(-1, 1), self.p)))

    def differential(self, chain: Cochain) -> Cochain:
        out: Cochain = {}
        for n, coeff in chain.items():
            for m, c2 in self._diff_images[n].items():
                v = (out.get(m, 0) + coeff * c2) % self.p
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out


def build_model(c: BasedAlgebra, x_mod: BasedBimodule) -> CochainModel:
    return CochainModel(c, x_mod)


class HHClass:
    def __init__(self, name: Name, j: int, k: int, h: int, rep: Cochain):
        self.name = name
        self.j = j
        self.k = k
        self.h = h
        self.rep = rep

    def display(self) -> str:
        return format_name(self.name)

    def __repr__(self):
        return f"HHClass({self.display()}, j={self.j}, k={self.k}, h={self.h})"


def format_name(name: Name) -> str:
    kind = name[0]
    if kind == "z":
        return "1" if name[1] == 0 else ("z" if name[1] == 1 else f"z^{name[1]}")
    if kind == "kz":
        return "k" if name[1] == 0 else ("kz" if name[1] == 1 else f"kz^{name[1]}")
    if kind == "c2":
        return f"c2_{name[1]}"
    if kind == "soc":
        return f"soc_{name[1]}"
    if kind == "mu":
        return f"mu_{name[1]}"
    if kind == "nu":
        return f"nu_{name[1]}"
    if kind == "e":
        return f"e_{name[1]}"
    return "_".join(str(t) for t in name)


class HHModule:
    """Named homology classes of a cochain model, with projection to names."""

    def __init__(self, model: CochainModel, classes: list[HHClass]):
        self.model = model
        self.classes = classes
        self.p = model.p
        self.by_name = {cl.name: cl for cl in classes}
        # per-bucket change of basis: homology coordinates of each canonical rep
        self._bucket_classes: dict[tuple[int, int], list[int]] = {}
        for idx, cl in enumerate(classes):
            self._bucket_classes.setdefault((cl.j, cl.k), []).append(idx)
        self._solvers: dict[tuple[int, int], tuple[np.ndarray, list[int]]] = {}
        for key, idxs in self._bucket_classes.items():
            hom = model.homology_at(key)
            if hom.dimension != len(idxs):
                raise UnrecognizedSignature(
                    f"{len(idxs)} named classes vs homology dimension {hom.dimension} at {key}")
            mat = zeros(hom.dimension, len(idxs))
            for col, idx in enumerate(idxs):
                vec = model.cochain_vector(classes[idx].rep, key)
                mat[:, col] = hom.project(vec)
            from .exactlin import rref
            rr, piv = rref(mat.T, self.p)
            if len(piv) != len(idxs):
                raise UnrecognizedSignature(f"named classes not independent at {key}")
            self._solvers[key] = (mat, idxs)

    def dims_by_h(self, h_max: int) -> list[int]:
        out = [0] * (h_max + 1)
        for cl in self.classes:
            if cl.h <= h_max:
                out[cl.h] += 1
        return out

    def project(self, chain: Cochain) -> NameCombo:
        """Express a cocycle as a combination of the named classes."""
        if not chain:
            return {}
        model = self.model
        key = model.chain_degree(chain)
        vec = model.cochain_vector(chain, key)
        hom = model.homology_at(key)
        coords = hom.project(vec)
        if not np.any(coords):
            return {}
        if key not in self._solvers:
            raise UnrecognizedSignature(f"nonzero class at unnamed degree {key}")
        mat, idxs = self._solvers[key]
        # solve mat @ x = coords over F_p
        from .exactlin import rref
        aug = np.concatenate([mat, coords.reshape(-1, 1)], axis=1)
        rr, piv = rref(aug, self.p)
        if mat.shape[1] in piv:
            raise UnrecognizedSignature("cocycle not in span of named classes")
        sol = zeros(1, mat.shape[1])[0]
        for r, c in enumerate(piv):
            sol[c] = rr[r, mat.shape[1]]
        out: NameCombo = {}
        for col, idx in enumerate(idxs):
            if sol[col]:
                out[self.classes[idx].name] = int(sol[col])
        return out


# ---------------------------------------------------------------------------
# canonical representatives for the five standard coefficient cases

def _chain(model: CochainModel, terms: list[tuple[int, int, int]]) -> Cochain:
    out: Cochain = {}
    for ci, xi, coeff in terms:
        pr = (ci, xi)
        if pr in model.pair_index:
            n = model.pair_index[pr]
            v = (out.get(n, 0) + coeff) % model.p
            if v:
                out[n] = v
            else:
                out.pop(n, None)
    return out


def _x_index(x_mod: BasedBimodule, omega: OmegaAlgebra, src: int, a: int, b: int) -> int | None:
    """Index in x_mod of the Omega-monomial (src, a, b), if it survives there."""
    key = (src, a, b)
    if key not in omega.key:
        return None
    name = omega.basis[omega.key[key]].name
    return x_mod.index.get(name)


def canonical_chi_classes(model: CochainModel) -> list[HHClass]:
    """z^l, kappa z^l, c2_s style classes for X in {Omega, Theta, OmegaEpOmega}."""
    c, x_mod, omega, p = model.c, model.x_mod, model.omega, model.p
    classes = []
    for ell in range(p):
        terms = []
        for s in range(ell + 1, p + 1):
            xi = _x_index(x_mod, omega, s, ell, ell)
            if xi is not None:
                terms.append((c.idem[s], xi, 1))
        rep = _chain(model, terms)
        if rep:
            classes.append(HHClass(("z", ell), -2 * ell, 2 * ell, 0, rep))
    for ell in range(p - 1):
        terms = []
        for s in range(ell + 1, p):
            xi = _x_index(x_mod, omega, s, ell, ell + 1)
            if xi is not None:
                terms.append((c.xi[s], xi, 1))
        rep = _chain(model, terms)
        if rep:
            classes.append(HHClass(("kz", ell), -2 * ell, 2 * ell + 1, 1, rep))
    for s in range(1, p):
        xi = _x_index(x_mod, omega, s, 0, 0)
        if xi is not None:
            rep = _chain(model, [(c.loop[s], xi, 1)])
            if rep:
                classes.append(HHClass(("c2", s), 2, 0, 2, rep))
    return classes


def canonical_dual_classes(model: CochainModel) -> list[HHClass]:
    """e_s (x) e_s* classes for X = Omega*."""
    c, x_mod, p = model.c, model.x_mod, model.p
    classes = []
    for s in range(1, p + 1):
        xi = x_mod.index[f"e{s}*"]
        rep = _chain(model, [(c.idem[s], xi, 1)])
        classes.append(HHClass(("e", s), 0, 0, 0, rep))
    return classes


def canonical_sigma_classes(model: CochainModel) -> list[HHClass]:
    """Socle classes, mu_l and nu_l for X = Theta^sigma.

    At the middle vertex h = (p-1)/2, mu_l is represented by f_{h,l} + g_{h,l}
    and nu_l by v_{h,l} - v_{h+1,l}; the differential sends f and -g to
    v_s + v_{s+1}, so adjacent v's are homologous up to sign and these span.
    """
    c, x_mod, omega, p = model.c, model.x_mod, model.omega, model.p
    h = (p - 1) // 2
    classes = []
    for s in range(1, p):
        xi = _x_index(x_mod, omega, p - s, p - s - 1, s - 1)
        rep = _chain(model, [(c.idem[s], xi, 1)])
        classes.append(HHClass(("soc", s), 2 - p, p - 2, 0, rep))
    for ell in range(1, h + 1):
        x_f = _x_index(x_mod, omega, h + 1, h - ell, h - ell)    # slot (h+1, h) after twist
        x_g = _x_index(x_mod, omega, h, h - ell, h - ell)        # slot (h, h+1) after twist
        rep = _chain(model, [(c.xi[h], x_f, 1), (c.eta[h], x_g, 1)])
        classes.append(HHClass(("mu", ell), 2 * ell + 2 - p, p - 2 * ell - 1, 1, rep))
        x_v1 = _x_index(x_mod, omega, h + 1, h - ell + 1, h - ell)
        x_v2 = _x_index(x_mod, omega, h, h - ell, h - ell + 1)
        rep = _chain(model, [(c.loop[h], x_v1, 1), (c.loop[h + 1], x_v2, -1)])
        classes.append(HHClass(("nu", ell), 2 * ell + 2 - p, p - 2 * ell, 2, rep))
    return classes


KIND_OMEGA = "omega"
KIND_THETA = "theta"
KIND_THETA_SIGMA = "theta-sigma"
KIND_DUAL = "omega-dual"
KIND_IDEAL = "omega-ep-omega"


def homology_named(model: CochainModel, kind: str | None = None) -> HHModule:
    """Compute homology and attach canonical names when the coefficients are
    one of the five standard cases; otherwise generate rref-based names."""
    if kind in (KIND_OMEGA, KIND_THETA, KIND_IDEAL):
        classes = canonical_chi_classes(model)
    elif kind == KIND_DUAL:
        classes = canonical_dual_classes(model)
    elif kind == KIND_THETA_SIGMA:
        classes = canonical_sigma_classes(model)
    elif kind is None:
        classes = []
        for key in sorted(model.bucket_of):
            hom = model.homology_at(key)
            for n in range(hom.dimension):
                rep: Cochain = {}
                members = model.bucket_of[key]
                for pos, coeff in enumerate(hom.representatives[n]):
                    if coeff:
                        rep[members[pos]] = int(coeff)
                h_degs = {model.c.basis[model.pairs[m][0]].j for m in rep}
                h = h_degs.pop() if len(h_degs) == 1 else -1
                classes.append(HHClass(("auto", key[0], key[1], n), key[0], key[1], h, rep))
    else:
        raise ValueError(f"unknown coefficient kind {kind!r}")

    # truncated coefficient cases drop the candidates that fail to be cocycles
    # (e.g. low z-powers over the ideal); what survives must span everything
    classes = [cl for cl in classes if cl.rep and model.is_cocycle(cl.rep)]
    total = sum(model.homology_at(key).dimension for key in model.bucket_of)
    if len(classes) != total:
        raise UnrecognizedSignature(
            f"{len(classes)} canonical classes but homology dimension {total}")
    return HHModule(model, classes)


def push_named(src: HHModule, tgt: HHModule, name_map: dict[Name, NameCombo],
               combo: NameCombo) -> NameCombo:
    """Apply a class-level map given on names to a name combination."""
    out: NameCombo = {}
    p = src.p
    for name, coeff in combo.items():
        for name2, c2 in name_map.get(name, {}).items():
            v = (out.get(name2, 0) + coeff * c2) % p
            if v:
                out[name2] = v
            else:
                out.pop(name2, None)
    return out


def cup(model_x: CochainModel, u: Cochain, model_y: CochainModel, v: Cochain,
        pairing: Pairing, model_z: CochainModel) -> Cochain:
    """Cup product of cocycles at representative level.

    Result lives in the model over pairing's target; c-parts compose in the
    opposite order and the Koszul sign is (-1)^{k(x) k(y)} over the
    coefficient k-degrees.  Only pairings of even k-shift induce chain maps;
    odd ones (the socle embeddings) are handled at class level by composing
    a cup through their even factor with the named map they induce.
    """
    if pairing.factor is not None:
        raise PairingDegreeMismatch(
            f"pairing {pairing.name} has odd degree; cup through its factor instead")
    if not model_x.is_cocycle(u) or not model_y.is_cocycle(v):
        raise NotACocycle("cup inputs must be cocycles")
    if pairing.x_mod is not model_x.x_mod or pairing.y_mod is not model_y.x_mod:
        raise PairingDegreeMismatch("pairing does not match the given models")
    c, p = model_x.c, model_x.p
    out: Cochain = {}
    for nu, cu in u.items():
        ci_u, xi_u = model_x.pairs[nu]
        kx = model_x.x_mod.basis[xi_u].k
        for nv, cv in v.items():
            ci_v, xi_v = model_y.pairs[nv]
            ky = model_y.x_mod.basis[xi_v].k
            cpart = c.mul_basis(ci_v, ci_u)  # opposite composition
            if not cpart:
                continue
            coeff_part = pairing.apply(xi_u, xi_v)
            if not coeff_part:
                continue
            sign = -1 if (kx * ky) % 2 else 1
            for cc, c1 in cpart.items():
                for zz, c2 in coeff_part.items():
                    pr = (cc, zz)
                    if pr not in model_z.pair_index:
                        raise AssertionError("cup left the diagonal")
                    n = model_z.pair_index[pr]
                    val = (out.get(n, 0) + sign * cu * cv * c1 * c2) % p
                    if val:
                        out[n] = val
                    else:
                        out.pop(n, None)
    if not model_z.is_cocycle(out):
        raise NotACocycle("cup product failed to be a cocycle")
    return out


# ---------------------------------------------------------------------------
# independent oracle: reduced relative bar complex over the vertex subalgebra

def bar_oracle(alg: BasedAlgebra, x_mod: BasedBimodule, n_max: int,
               cell_cap: int | None = None) -> list[int]:
    """dim HH^n(alg, x_mod) for n = 0..n_max via the reduced bar complex.

    Cochains in degree n are A0-bimodule maps (rad A)^{(x)_{A0} n} -> X,
    graded by the difference of internal (j, k) degrees; the computation is
    done one graded piece at a time.  No Koszulity is used anywhere.
    """
    cap = cell_cap if cell_cap is not None else max_cells()
    p = alg.p
    rad = [i for i, b in enumerate(alg.basis) if b.j != 0 or b.k != 0]

    # chains[n] maps a tuple of radical indices to its slot (left, right)
    chains: list[list[tuple]] = [[()]]
    cells = 0
    for n in range(1, n_max + 2):
        prev = chains[n - 1]
        cur = []
        for ch in prev:
            last_right = alg.basis[ch[-1]].right if ch else None
            for r in rad:
                if ch and alg.basis[r].left != last_right:
                    continue
                cur.append(ch + (r,))
        chains.append(cur)
        cells += len(cur) * max(1, x_mod.dim // max(1, len(alg.vertices)))
        if cells > cap:
            raise TooLarge(f"bar complex would exceed {cap} cells")

    def chain_slot(ch: tuple) -> tuple[int, int] | None:
        if not ch:
            return None
        return alg.basis[ch[0]].left, alg.basis[ch[-1]].right

    def chain_degree(ch: tuple) -> tuple[int, int]:
        j = sum(alg.basis[r].j for r in ch)
        k = sum(alg.basis[r].k for r in ch)
        return j, k

    # cochain basis in degree n: (chain, x_index) with matching slots,
    # bucketed by (j(x) - j(chain), k(x) - k(chain)); degree 0 uses the
    # vertex chain (v,) as a stand-in for the empty chain at vertex v
    basis_by_n = []
    index_by_n = []
    rad_set = set(rad)
    for n in range(0, n_max + 2):
        buckets: dict[tuple[int, int], list[tuple[tuple, int]]] = {}
        if n == 0:
            for v in alg.vertices:
                for xi, xb in enumerate(x_mod.basis):
                    if xb.left == v and xb.right == v:
                        buckets.setdefault((xb.j, xb.k), []).append(((v,), xi))
        else:
            for ch in chains[n]:
                lft, rgt = chain_slot(ch)
                dj, dk = chain_degree(ch)
                for xi, xb in enumerate(x_mod.basis):
                    if xb.left == lft and xb.right == rgt:
                        buckets.setdefault((xb.j - dj, xb.k - dk), []).append((ch, xi))
        basis_by_n.append(buckets)
        index = {}
        for key, members in buckets.items():
            for pos, b in enumerate(members):
                index[b] = (key, pos)
        index_by_n.append(index)

    # differentials as sparse columns per graded bucket; the oracle only
    # needs ranks: dim HH^n = |C^n| - rank(d_n) - rank(d_{n-1})
    from .exactlin import sparse_rank

    col_cache: dict[int, dict[tuple[int, int], list[Combo]]] = {}

    def d_columns(n: int) -> dict[tuple[int, int], list[Combo]]:
        if n in col_cache:
            return col_cache[n]
        cols = {key: [dict() for _ in members] for key, members in basis_by_n[n].items()}
        src_index = index_by_n[n]
        tgt_index = index_by_n[n + 1]

        def scatter(tgt_b, src_b, coeff: int) -> None:
            loc = src_index.get(src_b)
            if loc is None:
                return
            key, col = loc
            key2, row = tgt_index[tgt_b]
            assert key == key2
            d = cols[key][col]
            v = (d.get(row, 0) + coeff) % p
            if v:
                d[row] = v
            else:
                d.pop(row, None)

        for long_ch in chains[n + 1]:
            lft, rgt = chain_slot(long_ch)
            for xi, xb in enumerate(x_mod.basis):
                if xb.left != lft or xb.right != rgt:
                    continue
                tgt_b = (long_ch, xi)
                # r0 . phi(r1..rn)
                head = long_ch[1:] if n >= 1 else (alg.basis[long_ch[0]].right,)
                for src_x, c in _left_sources(x_mod, long_ch[0], xi).items():
                    scatter(tgt_b, (head, src_x), c)
                # inner collapses phi(.. r_i r_{i+1} ..)
                for i in range(0, n):
                    prod = alg.mul_basis(long_ch[i], long_ch[i + 1])
                    if not prod:
                        continue
                    sgn = -1 if (i + 1) % 2 else 1
                    for mid, cm in prod.items():
                        if mid in rad_set:
                            collapsed = long_ch[:i] + (mid,) + long_ch[i + 2:]
                            scatter(tgt_b, (collapsed, xi), sgn * cm)
                # (-1)^{n+1} phi(r0..r_{n-1}) . rn
                tail = long_ch[:-1] if n >= 1 else (alg.basis[long_ch[-1]].left,)
                sgn = -1 if (n + 1) % 2 else 1
                for src_x, c in _right_sources(x_mod, long_ch[-1], xi).items():
                    scatter(tgt_b, (tail, src_x), sgn * c)
        col_cache[n] = cols
        return cols

    rank_cache: dict[tuple[int, tuple[int, int]], int] = {}

    def d_rank(n: int, key: tuple[int, int]) -> int:
        if (n, key) not in rank_cache:
            cols = d_columns(n).get(key, [])
            rank_cache[(n, key)] = sparse_rank(cols, p)
        return rank_cache[(n, key)]

    # spot-check d.d = 0 on the lowest degree with both maps present
    lower = d_columns(0)
    upper = d_columns(1)
    for key, cols in lower.items():
        nxt = upper.get(key)
        if nxt is None:
            continue
        for col in cols:
            acc: Combo = {}
            for row, c in col.items():
                for row2, c2 in nxt[row].items():
                    acc[row2] = (acc.get(row2, 0) + c * c2) % p
            if any(v % p for v in acc.values()):
                raise AssertionError("bar differential does not square to zero")

    dims = []
    for n in range(0, n_max + 1):
        total = 0
        for key in sorted(basis_by_n[n]):
            size = len(basis_by_n[n][key])
            r_out = d_rank(n, key)
            r_in = d_rank(n - 1, key) if n >= 1 else 0
            total += size - r_out - r_in
        dims.append(total)
    return dims


def _left_sources(x_mod: BasedBimodule, a: int, target_x: int) -> Combo:
    """{x : coeff of target_x in a . x}."""
    cache = getattr(x_mod, "_left_sources_cache", None)
    if cache is None:
        cache = {}
        for (aa, m), prod in x_mod.left.items():
            for tgt, c in prod.items():
                cache.setdefault((aa, tgt), {})[m] = c
        x_mod._left_sources_cache = cache
    return cache.get((a, target_x), {})


def _right_sources(x_mod: BasedBimodule, a: int, target_x: int) -> Combo:
    """{x : coeff of target_x in x . a}."""
    cache = getattr(x_mod, "_right_sources_cache", None)
    if cache is None:
        cache = {}
        for (m, aa), prod in x_mod.right.items():
            for tgt, c in prod.items():
                cache.setdefault((aa, tgt), {})[m] = c
        x_mod._right_sources_cache = cache
    return cache.get((a, target_x), {})
