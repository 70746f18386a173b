"""The homology-grid algebra: bimodule components, natural maps, and products.

The grid is stated data (rows are powers of the tilting complex, columns are
slots within a row); each component is one of the five bimodules realized by
``quiver`` with explicit (j, k) shifts.  The sixteen natural bimodule maps of
the construction are built here, together with the balanced coefficient
pairings that the product table selects.

Pairing/tensor conventions follow ``quiver``: mul(a, b) applies b first.
The dual is normalized so that (a f b)(m) = f(b m a); the degree-(p-2) form
on the preprojective quotient pairs a monomial with its unique complement at
sigma-mirrored slots.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import quiver
from .exactlin import rank, zeros
from .koszulhh import Pairing
from .quiver import (BasedBimodule, BimoduleMap, Combo, OmegaAlgebra,
                     combo_add, tensor_over)

KIND_OMEGA = "Omega"
KIND_THETA_SIGMA = "ThetaSigma"
KIND_THETA = "Theta"
KIND_DUAL = "OmegaDual"
KIND_IDEAL = "OmegaEpOmega"


class ConstructionFailure(Exception):
    pass


class WindowTooSmall(Exception):
    pass


class _ClubOut:
    """Marker target for window-truncated products."""

    def __repr__(self):
        return "CLUB_OUT"


CLUB_OUT = _ClubOut()


def ideal_partner(omega: OmegaAlgebra, idx: int) -> int:
    """beta-partner inside the ideal: complement the down/up counts to p-1."""
    src, a, b = omega.data(idx)
    left = src - a + b
    return omega.key[(left, omega.p - 1 - a, omega.p - 1 - b)]


def theta_partner(omega: OmegaAlgebra, idx: int) -> int:
    """Form partner of a non-ideal monomial: paths compose to the socle."""
    src, a, b = omega.data(idx)
    left = src - a + b
    p = omega.p
    return omega.key[(left, src - 1 - a, p - 1 - b - src)]


class NaturalMaps:
    """Bimodules and all natural maps/pairings for one prime p."""

    def __init__(self, p: int):
        self.p = p
        self.c = quiver.build_zigzag_c(p)
        self.omega = quiver.build_omega(p)
        om = self.omega
        self.reg = quiver.regular_bimodule(om)
        self.theta = quiver.quotient_theta(om)
        self.theta_sigma = quiver.twist_sigma(self.theta)
        self.dual = quiver.dual(self.reg)
        self.ideal = quiver.sub_ideal_epep(om)
        self.modules = {
            KIND_OMEGA: self.reg,
            KIND_THETA: self.theta,
            KIND_THETA_SIGMA: self.theta_sigma,
            KIND_DUAL: self.dual,
            KIND_IDEAL: self.ideal,
        }
        self._build_maps()
        self._build_pairings()

    # -- linear maps ---------------------------------------------------------

    def _build_maps(self) -> None:
        om, p = self.omega, self.p
        ideal, reg, dualm = self.ideal, self.reg, self.dual
        theta, ths = self.theta, self.theta_sigma

        # alpha: ideal -> Omega (inclusion)
        cols = [{ideal.parent_index[m]: 1} for m in range(ideal.dim)]
        self.alpha = BimoduleMap(ideal, reg, cols, name="alpha")

        # beta: ideal -> ideal* via the complementing form
        ideal_dual = quiver.dual(ideal)
        pos_in_ideal = {old: new for new, old in enumerate(ideal.parent_index)}
        cols = []
        for m in range(ideal.dim):
            partner = ideal_partner(om, ideal.parent_index[m])
            cols.append({pos_in_ideal[partner]: 1})
        self.ideal_dual = ideal_dual
        self.beta = BimoduleMap(ideal, ideal_dual, cols,
                                dj=2 * (p - 1), dk=-2 * (p - 1), name="beta")

        # gamma: Omega* ->> ideal,  m* -> beta-partner(m) for ideal monomials
        cols = []
        for f in range(dualm.dim):
            m = f  # dual basis is indexed like Omega's
            if om.in_ideal(m):
                cols.append({pos_in_ideal[ideal_partner(om, m)]: 1})
            else:
                cols.append({})
        self.gamma = BimoduleMap(dualm, ideal, cols,
                                 dj=2 - 2 * p, dk=2 * p - 2, name="gamma")

        # kappa: Omega ->> Theta
        pos_in_theta = {old: new for new, old in enumerate(theta.parent_index)}
        cols = []
        for m in range(reg.dim):
            cols.append({pos_in_theta[m]: 1} if m in pos_in_theta else {})
        self.kappa = BimoduleMap(reg, theta, cols, name="kappa")

        # lam: Theta^sigma -> Theta* (self-injectivity) and mu = kappa* o lam
        theta_dual = quiver.dual(theta)
        cols = []
        for m in range(ths.dim):
            m_omega = theta.parent_index[m]  # underlying monomial
            partner = theta_partner(om, m_omega)
            cols.append({pos_in_theta[partner]: 1})
        self.theta_dual = theta_dual
        self.lam = BimoduleMap(ths, theta_dual, cols,
                               dj=p - 2, dk=-(p - 2), name="lambda")

        # mu: Theta^sigma -> Omega*, m -> (Omega-monomial of the form partner)*
        cols = []
        for m in range(ths.dim):
            m_omega = theta.parent_index[m]
            partner = theta_partner(om, m_omega)
            cols.append({partner: 1})
        self.mu = BimoduleMap(ths, dualm, cols, dj=p - 2, dk=-(p - 2), name="mu")

    # -- pairings ------------------------------------------------------------

    def _action_pairing(self, x_mod: BasedBimodule, side: str,
                        other: BasedBimodule, name: str) -> Pairing:
        table: dict[tuple[int, int], Combo] = {}
        if side == "left":  # Omega x X -> X through the regular bimodule index
            for (a, m), prod in x_mod.left.items():
                table[(a, m)] = dict(prod)
            return Pairing(other, x_mod, x_mod, table, name=name)
        for (m, a), prod in x_mod.right.items():
            table[(m, a)] = dict(prod)
        return Pairing(x_mod, other, x_mod, table, name=name)

    def _build_pairings(self) -> None:
        om, p = self.omega, self.p
        reg, ideal, dualm = self.reg, self.ideal, self.dual
        theta, ths = self.theta, self.theta_sigma

        self.pairings: dict[str, Pairing] = {}

        def put(pr: Pairing) -> None:
            self.pairings[pr.name] = pr

        put(Pairing(reg, reg, reg, {k: dict(v) for k, v in om.products.items()}, name="mult"))
        for kind, mod in self.modules.items():
            if kind == KIND_OMEGA:
                continue
            put(self._action_pairing(mod, "left", reg, f"act_l:{kind}"))
            put(self._action_pairing(mod, "right", reg, f"act_r:{kind}"))

        # Omega x I and I x Omega multiplication into the ideal
        pos_in_ideal = {old: new for new, old in enumerate(ideal.parent_index)}
        table: dict[tuple[int, int], Combo] = {}
        for a in range(reg.dim):
            for m in range(ideal.dim):
                prod = om.mul_basis(a, ideal.parent_index[m])
                mapped = {pos_in_ideal[i]: c for i, c in prod.items()}
                if mapped:
                    table[(a, m)] = mapped
        put(Pairing(reg, ideal, ideal, table, name="mult_into_ideal_l"))
        table = {}
        for m in range(ideal.dim):
            for a in range(reg.dim):
                prod = om.mul_basis(ideal.parent_index[m], a)
                mapped = {pos_in_ideal[i]: c for i, c in prod.items()}
                if mapped:
                    table[(m, a)] = mapped
        put(Pairing(ideal, reg, ideal, table, name="mult_into_ideal_r"))
        # same multiplications but landing in the ambient algebra
        table = {}
        for a in range(reg.dim):
            for m in range(ideal.dim):
                prod = om.mul_basis(a, ideal.parent_index[m])
                if prod:
                    table[(a, m)] = dict(prod)
        put(Pairing(reg, ideal, reg, table, name="mult_incl_l"))
        table = {}
        for m in range(ideal.dim):
            for a in range(reg.dim):
                prod = om.mul_basis(ideal.parent_index[m], a)
                if prod:
                    table[(m, a)] = dict(prod)
        put(Pairing(ideal, reg, reg, table, name="mult_incl_r"))

        # eta: I x I -> Omega*,  (u, v) -> gamma^{-1}(u) . v
        table = {}
        for u in range(ideal.dim):
            f = ideal_partner(om, ideal.parent_index[u])  # gamma(f*) = u
            for v in range(ideal.dim):
                prod = dualm.right.get((f, ideal.parent_index[v]), {})
                if prod:
                    table[(u, v)] = dict(prod)
        put(Pairing(ideal, ideal, dualm, table, name="eta"))

        # zeta_l / zeta_r: ideal acting on Omega*
        table = {}
        for u in range(ideal.dim):
            for f in range(dualm.dim):
                prod = dualm.left.get((ideal.parent_index[u], f), {})
                if prod:
                    table[(u, f)] = dict(prod)
        put(Pairing(ideal, dualm, dualm, table, name="zeta_l"))
        table = {}
        for f in range(dualm.dim):
            for u in range(ideal.dim):
                prod = dualm.right.get((f, ideal.parent_index[u]), {})
                if prod:
                    table[(f, u)] = dict(prod)
        put(Pairing(dualm, ideal, dualm, table, name="zeta_r"))

        # eps: Omega* x Omega* -> Omega*,  (f, g) -> f . gamma(g)
        table = {}
        for f in range(dualm.dim):
            for g in range(dualm.dim):
                gg = self.gamma.columns[g]
                out: Combo = {}
                for tgt, c in gg.items():
                    combo_add(out, dualm.right.get((f, ideal.parent_index[tgt]), {}), c, p)
                if out:
                    table[(f, g)] = out
        put(Pairing(dualm, dualm, dualm, table, name="eps"))

        # theta_l / theta_r: Omega x Omega* -> ideal via gamma, iota via alpha
        table = {}
        t_iota: dict[tuple[int, int], Combo] = {}
        for a in range(reg.dim):
            for f in range(dualm.dim):
                af = dualm.left.get((a, f), {})
                out = {}
                for tgt, c in af.items():
                    combo_add(out, self.gamma.columns[tgt], c, p)
                if out:
                    table[(a, f)] = out
                    t_iota[(a, f)] = self.alpha.apply(out)
        put(Pairing(reg, dualm, ideal, table, name="theta_l"))
        put(Pairing(reg, dualm, reg, t_iota, name="iota_l"))
        table = {}
        t_iota = {}
        for f in range(dualm.dim):
            for a in range(reg.dim):
                fa = dualm.right.get((f, a), {})
                out = {}
                for tgt, c in fa.items():
                    combo_add(out, self.gamma.columns[tgt], c, p)
                if out:
                    table[(f, a)] = out
                    t_iota[(f, a)] = self.alpha.apply(out)
        put(Pairing(dualm, reg, ideal, table, name="theta_r"))
        put(Pairing(dualm, reg, reg, t_iota, name="iota_r"))

        # collapse pairings between the preprojective-type components
        def sigma_idx(m_omega: int) -> int:
            return quiver.theta_sigma_index(om, m_omega)

        theta_alg_mul = {}
        pos_in_theta = {old: new for new, old in enumerate(theta.parent_index)}
        for i_new, i_old in enumerate(theta.parent_index):
            for j_new, j_old in enumerate(theta.parent_index):
                prod = om.mul_basis(i_old, j_old)
                mapped = {pos_in_theta[i]: c for i, c in prod.items() if i in pos_in_theta}
                if mapped:
                    theta_alg_mul[(i_new, j_new)] = mapped

        def collapse(x_sigma: bool, y_sigma: bool) -> Pairing:
            x_mod = ths if x_sigma else theta
            y_mod = ths if y_sigma else theta
            z_mod = ths if (x_sigma != y_sigma) else theta
            table: dict[tuple[int, int], Combo] = {}
            for m in range(theta.dim):
                m_omega = theta.parent_index[m]
                for n in range(theta.dim):
                    n_omega = theta.parent_index[n]
                    nn = sigma_idx(n_omega) if x_sigma else n_omega
                    nn_new = pos_in_theta.get(nn)
                    if nn_new is None:
                        continue
                    prod = theta_alg_mul.get((m, nn_new))
                    if prod:
                        table[(m, n)] = dict(prod)
            tag = f"collapse:{'s' if x_sigma else 'p'}{'s' if y_sigma else 'p'}"
            return Pairing(x_mod, y_mod, z_mod, table, name=tag)

        put(collapse(True, True))
        put(collapse(True, False))
        put(collapse(False, True))
        put(collapse(False, False))

        # nu_l: Theta x Theta^sigma -> Omega*; nu_r: Theta^sigma x Theta -> Omega*
        # (odd k-shift through mu, so they carry their factorization for cup)
        for tag, inner in (("nu_l", "collapse:ps"), ("nu_r", "collapse:sp")):
            base = self.pairings[inner]
            table = {}
            for key, prod in base.table.items():
                out: Combo = {}
                for tgt, c in prod.items():
                    combo_add(out, self.mu.columns[tgt], c, p)
                if out:
                    table[key] = out
            put(Pairing(base.x_mod, base.y_mod, dualm, table, name=tag,
                        factor=(base, self.mu)))

        # literal zero pairings for the tensor-vanishing products
        for tag, (xm, ym) in {
            "zero:ideal,theta": (ideal, theta), "zero:theta,ideal": (theta, ideal),
            "zero:ideal,theta_sigma": (ideal, ths), "zero:theta_sigma,ideal": (ths, ideal),
            "zero:dual,theta": (dualm, theta), "zero:theta,dual": (theta, dualm),
            "zero:dual,theta_sigma": (dualm, ths), "zero:theta_sigma,dual": (ths, dualm),
        }.items():
            put(Pairing(xm, ym, dualm, {}, name=tag))

    # -- consistency checks --------------------------------------------------

    def check_maps(self) -> None:
        for mp in (self.alpha, self.beta, self.gamma, self.kappa, self.lam, self.mu):
            mp.check_intertwines()
            mp.check_degree_shift()
        p = self.p
        if rank(self.beta.matrix(), p) != self.ideal.dim:
            raise ConstructionFailure("beta is not an isomorphism")
        if rank(self.lam.matrix(), p) != self.theta.dim:
            raise ConstructionFailure("lambda is not an isomorphism")
        if rank(self.alpha.matrix(), p) != self.ideal.dim:
            raise ConstructionFailure("alpha is not injective")
        if rank(self.gamma.matrix(), p) != self.ideal.dim:
            raise ConstructionFailure("gamma is not surjective")
        if rank(self.kappa.matrix(), p) != self.theta.dim:
            raise ConstructionFailure("kappa is not surjective")
        if rank(self.mu.matrix(), p) != self.theta.dim:
            raise ConstructionFailure("mu is not injective")

    def check_pairings(self) -> None:
        for pr in self.pairings.values():
            pr.check()

    def pairing_rank_on_tensor(self, name: str) -> tuple[int, int]:
        """Rank of the induced map (X (x)_Omega Y) -> Z for a pairing."""
        pr = self.pairings[name]
        tp = tensor_over(pr.x_mod, pr.y_mod)
        mat = zeros(pr.z_mod.dim, tp.dim)
        for col, c in enumerate(tp.free):
            i, j = tp.pairs[c]
            for row, coeff in pr.apply(i, j).items():
                mat[row, col] = coeff
        return rank(mat, self.p), tp.dim


# ---------------------------------------------------------------------------
# grid components and the windowed algebra

@dataclass(frozen=True)
class GridComponent:
    a: int
    b: int
    kind: str
    jshift: int
    kshift: int

    @property
    def i(self) -> int:
        return self.a + self.b


def component_at(p: int, a: int, b: int) -> GridComponent | None:
    """Kind and shifts of the grid slot (a, b), or None if the slot is vacant."""
    if b == 0:
        if a <= 0:
            return GridComponent(a, b, KIND_OMEGA, a * p, a * (1 - p))
        if a == 1:
            return GridComponent(a, b, KIND_IDEAL, p, 1 - p)
        return GridComponent(a, b, KIND_DUAL, 2 + (a - 2) * p, (a - 2) * (1 - p))
    if a <= 0 and b <= -1:
        kind = KIND_THETA_SIGMA if b % 2 else KIND_THETA
        return GridComponent(a, b, kind, a * p, a * (1 - p))
    if a >= 2 and b >= 1:
        kind = KIND_THETA if b % 2 else KIND_THETA_SIGMA
        return GridComponent(a, b, kind, (a - 1) * p, (a - 1) * (1 - p) + 1)
    return None


# the five-part multiplication table: which pairing applies at which target
def select_pairing(maps: NaturalMaps, k1: str, k2: str, target: GridComponent | None):
    """Pairing for a product of component kinds, or None for a zero product."""
    if target is None:
        return None
    kt = target.kind
    P = maps.pairings
    theta_kinds = (KIND_THETA, KIND_THETA_SIGMA)
    if k1 == KIND_OMEGA:
        if k2 == KIND_OMEGA:
            return P["mult"]
        if k2 == KIND_IDEAL:
            return {KIND_IDEAL: P["mult_into_ideal_l"], KIND_OMEGA: P["mult_incl_l"]}.get(kt)
        if k2 in theta_kinds:
            return P[f"act_l:{k2}"] if kt in theta_kinds else None
        if k2 == KIND_DUAL:
            return {KIND_DUAL: P["act_l:OmegaDual"], KIND_IDEAL: P["theta_l"],
                    KIND_OMEGA: P["iota_l"]}.get(kt)
    if k2 == KIND_OMEGA:
        if k1 == KIND_IDEAL:
            return {KIND_IDEAL: P["mult_into_ideal_r"], KIND_OMEGA: P["mult_incl_r"]}.get(kt)
        if k1 in theta_kinds:
            return P[f"act_r:{k1}"] if kt in theta_kinds else None
        if k1 == KIND_DUAL:
            return {KIND_DUAL: P["act_r:OmegaDual"], KIND_IDEAL: P["theta_r"],
                    KIND_OMEGA: P["iota_r"]}.get(kt)
    if k1 == KIND_IDEAL and k2 == KIND_IDEAL:
        return P["eta"]
    if k1 == KIND_IDEAL and k2 == KIND_DUAL:
        return P["zeta_l"]
    if k1 == KIND_DUAL and k2 == KIND_IDEAL:
        return P["zeta_r"]
    if k1 == KIND_DUAL and k2 == KIND_DUAL:
        return P["eps"]
    if k1 in theta_kinds and k2 in theta_kinds:
        x_s, y_s = k1 == KIND_THETA_SIGMA, k2 == KIND_THETA_SIGMA
        if kt in theta_kinds:
            return P[f"collapse:{'s' if x_s else 'p'}{'s' if y_s else 'p'}"]
        if kt == KIND_DUAL:
            if not x_s and y_s:
                return P["nu_l"]
            if x_s and not y_s:
                return P["nu_r"]
            return None
        return None
    # ideal against preprojective quotients and duals against them: zero
    return None


class ClubWindow:
    """Realized grid components over a finite (a, b) range with their product."""

    def __init__(self, p: int, i_min: int, i_max: int, maps: NaturalMaps | None = None):
        if not (i_min <= 0 and 1 <= i_max):
            raise WindowTooSmall("window must contain rows 0 and 1")
        self.p = p
        self.maps = maps or NaturalMaps(p)
        self.components: dict[tuple[int, int], GridComponent] = {}
        self.i_min, self.i_max = i_min, i_max
        for i in range(i_min, i_max + 1):
            self.extend_to_row(i)

    def module_of(self, comp: GridComponent) -> BasedBimodule:
        return self.maps.modules[comp.kind]

    def basis(self) -> list[tuple[GridComponent, int]]:
        out = []
        for key in sorted(self.components):
            comp = self.components[key]
            mod = self.module_of(comp)
            out.extend((comp, m) for m in range(mod.dim))
        return out

    def total_degree(self, comp: GridComponent, idx: int) -> tuple[int, int, int]:
        b = self.module_of(comp).basis[idx]
        return comp.i, b.j + comp.jshift, b.k + comp.kshift

    def product(self, comp1: GridComponent, m1: int, comp2: GridComponent, m2: int):
        """Product of two window elements.

        Returns (target, combo); (None, {}) is a genuine zero, while a target
        slot outside the window gives (CLUB_OUT, None).
        """
        a, b = comp1.a + comp2.a, comp1.b + comp2.b
        target = component_at(self.p, a, b)
        if target is None:
            return None, {}
        pairing = select_pairing(self.maps, comp1.kind, comp2.kind, target)
        if pairing is None:
            return None, {}
        if (a, b) not in self.components:
            return CLUB_OUT, None
        return target, pairing.apply(m1, m2)

    def socle_evaluation(self, combo) -> int:
        """Sum of the coefficients on idempotent duals of a dual-algebra element."""
        total = 0
        dualm = self.maps.dual
        for idx, c in combo.items():
            if dualm.basis[idx].name.startswith("e") and dualm.basis[idx].j == 0:
                total = (total + c) % self.p
        return total

    def extend_to_row(self, row: int) -> None:
        """Add all grid slots of a row to the window."""
        if row <= 0:
            slots = [(a, row - a) for a in range(row, 1)]
        elif row == 1:
            slots = [(1, 0)]
        else:
            slots = [(a, row - a) for a in range(2, row + 1)]
        for (a, b) in slots:
            comp = component_at(self.p, a, b)
            if comp is not None and (a, b) not in self.components:
                self.components[(a, b)] = comp
        self.i_min = min(self.i_min, row)
        self.i_max = max(self.i_max, row)

    def symmetry_form(self, i: int):
        """Bilinear forms row -i x row i+2 -> F through the top-left dual slot.

        Returns {(slotA, slotB): matrix-as-dict} for the component pairs whose
        product lands at (2, 0); each form is evaluated by projecting onto the
        socle coordinates of the dual component there.  The window is extended
        automatically when a requested row is missing.
        """
        self.extend_to_row(-i)
        self.extend_to_row(i + 2)
        self.extend_to_row(2)
        out = {}
        row_lo = [(a, b) for (a, b) in self.components if a + b == -i]
        row_hi = [(a, b) for (a, b) in self.components if a + b == i + 2]
        for (a1, b1) in sorted(row_lo):
            for (a2, b2) in sorted(row_hi):
                if (a1 + a2, b1 + b2) != (2, 0):
                    continue
                c1 = self.components[(a1, b1)]
                c2 = self.components[(a2, b2)]
                m1d = self.module_of(c1).dim
                m2d = self.module_of(c2).dim
                mat = {}
                for u in range(m1d):
                    for v in range(m2d):
                        tgt, prod = self.product(c1, u, c2, v)
                        val = self.socle_evaluation(prod) if tgt is not None else 0
                        if val:
                            mat[(u, v)] = val
                out[((a1, b1), (a2, b2))] = (mat, m1d, m2d)
        return out


def build_natural_maps(p: int) -> NaturalMaps:
    """Construct and check the full set of natural maps at this prime."""
    maps = NaturalMaps(p)
    maps.check_maps()
    return maps


def build_club_window(p: int, i_min: int, i_max: int,
                      maps: NaturalMaps | None = None) -> ClubWindow:
    return ClubWindow(p, i_min, i_max, maps=maps)
