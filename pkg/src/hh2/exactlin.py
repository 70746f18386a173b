"""Exact linear algebra over the prime field F_p.

Matrices are dense numpy int64 arrays with entries reduced to [0, p).
A matrix of shape (m, n) is a linear map F_p^n -> F_p^m acting on column
vectors.  All pivoting uses a fixed column order, so echelon forms, kernel
bases and homology representatives are canonical: the same input always
produces byte-identical output.
"""

from __future__ import annotations

import numpy as np


class NotOddPrime(Exception):
    """Raised when a modulus is not an odd prime >= 3."""


class CompositionNotZero(Exception):
    """Raised when two maps passed as a complex fail d_out . d_in = 0."""


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_odd_prime(p: int) -> None:
    if not is_odd_prime(p):
        raise NotOddPrime(f"modulus must be an odd prime >= 3, got {p}")


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # int64 is safe: entries < p < 2**31 and inner dimensions are small here
    return (a.astype(np.int64) @ b.astype(np.int64)) % p


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with pivots chosen in fixed column order."""
    a = np.array(mat, dtype=np.int64, copy=True) % p
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if a[i, c] % p:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[[r, piv], :] = a[[piv, r], :]
        inv = pow(int(a[r, c]), -1, p)
        a[r, :] = (a[r, :] * inv) % p
        for i in range(m):
            if i != r and a[i, c]:
                a[i, :] = (a[i, :] - a[i, c] * a[r, :]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat: np.ndarray, p: int) -> int:
    if mat.size == 0:
        return 0
    return len(rref(mat, p)[1])


def rank_and_kernel(mat: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """Rank and a canonical kernel basis.

    Returns (rank, K) where the rows of K form the reduced-echelon basis of
    {v : mat @ v = 0}; rank + K.shape[0] == mat.shape[1].
    """
    m, n = mat.shape
    if n == 0:
        return 0, zeros(0, 0)
    if m == 0:
        return 0, identity(n)
    r, pivots = rref(mat, p)
    free = [c for c in range(n) if c not in pivots]
    kern = zeros(len(free), n)
    for row, f in enumerate(free):
        kern[row, f] = 1
        for i, c in enumerate(pivots):
            kern[row, c] = (-int(r[i, f])) % p
    return len(pivots), kern


def solve_coordinates(basis_rows: np.ndarray, pivots: list[int], v: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of v in the span of RREF rows; raises if v is outside."""
    v = np.array(v, dtype=np.int64, copy=True) % p
    coeffs = zeros(1, basis_rows.shape[0])[0]
    for i, c in enumerate(pivots):
        coeff = int(v[c]) % p
        if coeff:
            coeffs[i] = coeff
            v = (v - coeff * basis_rows[i]) % p
    if np.any(v % p):
        raise ValueError("vector not in span")
    return coeffs


class Homology:
    """Homology of a two-step complex  F^a --d_in--> F^mid --d_out--> F^b.

    Representatives are canonical: boundaries are put in RREF first, kernel
    vectors are reduced against them and then against each other, so the
    surviving rows are uniquely determined by the input matrices.  The
    projection sends ker(d_out) onto homology coordinates, kills im(d_in) and
    maps representative i to the i-th standard basis vector.
    """

    def __init__(self, d_in: np.ndarray, d_out: np.ndarray, p: int):
        self.p = p
        mid = d_in.shape[0] if d_in.size or d_in.shape[0] else d_out.shape[1]
        if d_in.shape[0] != d_out.shape[1]:
            raise ValueError("middle dimensions disagree")
        comp = matmul(d_out, d_in, p)
        if np.any(comp):
            raise CompositionNotZero("d_out . d_in != 0")
        self.mid = mid

        bnd_rref, bnd_piv = rref(d_in.T, p) if d_in.size else (zeros(0, mid), [])
        nb = len(bnd_piv)
        boundaries = bnd_rref[:nb]

        _, kern = rank_and_kernel(d_out, p)

        # reduce cocycles against the boundary rows
        reduced = []
        for row in kern:
            v = row.copy()
            for i, c in enumerate(bnd_piv):
                if v[c]:
                    v = (v - int(v[c]) * boundaries[i]) % p
            reduced.append(v)
        reduced_mat = np.array(reduced, dtype=np.int64) if reduced else zeros(0, mid)
        rep_rref, rep_piv = rref(reduced_mat, p)
        reps = rep_rref[: len(rep_piv)]

        # representative rows vanish on boundary pivot columns, so coordinates
        # are read off by eliminating boundary pivots first, then rep pivots
        self.dimension = len(rep_piv)
        self.representatives = reps
        self._bnd = boundaries
        self._bnd_piv = bnd_piv
        self._rep_piv = rep_piv
        self._dout = d_out

    def project(self, v: np.ndarray) -> np.ndarray:
        """Homology coordinates of a cocycle v; raises if v is not a cocycle."""
        v = np.array(v, dtype=np.int64, copy=True) % self.p
        if self._dout.size and np.any(matmul(self._dout, v.reshape(-1, 1), self.p)):
            raise ValueError("vector is not a cocycle")
        out = zeros(1, self.dimension)[0]
        for i, c in enumerate(self._bnd_piv):
            coeff = int(v[c]) % self.p
            if coeff:
                v = (v - coeff * self._bnd[i]) % self.p
        for i, c in enumerate(self._rep_piv):
            coeff = int(v[c]) % self.p
            if coeff:
                out[i] = coeff
                v = (v - coeff * self.representatives[i]) % self.p
        if np.any(v % self.p):
            raise ValueError("cocycle not in ker(d_out) + im(d_in) span (bug)")
        return out


def homology(d_in: np.ndarray, d_out: np.ndarray, p: int) -> Homology:
    return Homology(d_in, d_out, p)


def sparse_rank(columns: list[dict], p: int) -> int:
    """Rank of a matrix given as sparse columns {row: coeff} over F_p.

    Left-looking elimination keyed on smallest row index; columns are
    consumed in order, so the result is deterministic.
    """
    pivots: dict[int, dict] = {}
    rank_ = 0
    for col in columns:
        cur = {r: c % p for r, c in col.items() if c % p}
        while cur:
            r = min(cur)
            piv = pivots.get(r)
            if piv is None:
                inv = pow(cur[r], -1, p)
                pivots[r] = {rr: (cc * inv) % p for rr, cc in cur.items()}
                rank_ += 1
                break
            f = cur[r]
            for rr, cc in piv.items():
                v = (cur.get(rr, 0) - f * cc) % p
                if v:
                    cur[rr] = v
                else:
                    cur.pop(rr, None)
        # empty cur: column was dependent
    return rank_
