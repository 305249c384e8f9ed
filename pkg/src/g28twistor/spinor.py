"""The 16-dimensional spinor module of Cl(8) and its matrix realization.

The module is the left ideal V = Cl(8)·A for A = A8(1 + beta8), where A8 is
the real part of the ordered product (e1 + i e2)(e3 + i e4)(e5 + i e6)
(e7 + i e8) and beta8 = e1 e3 e5 e7.  V is spanned by the 16 elements
alpha_B = e1 e_B A and alpha_{B+8} = e_B A, and left multiplication in this
basis realizes Cl(8) as the full algebra of real 16x16 matrices.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from .multivector import EXACT, FLOAT, AlgebraError, Multivector

N = 8
DIM = 16
NBLADES = 1 << N

FLOAT_RESIDUAL_TOL = 1e-9


class SpinorBasisError(RuntimeError):
    """The 16 candidate spinors are not linearly independent."""


class NotInIdeal(AlgebraError):
    """Element does not lie in the spinor module Cl(8)·A."""


def _complex_generator_product_real_part() -> Multivector:
    # expand prod_k (e_{2k-1} + i e_{2k}) as a (re, im) pair; keep re
    re = Multivector.scalar(1)
    im = Multivector.zero()
    for k in range(1, 5):
        a = Multivector.basis_vector(2 * k - 1)
        b = Multivector.basis_vector(2 * k)
        re, im = re * a - im * b, re * b + im * a
    return re


def _fraction_inverse(mat):
    """Gauss-Jordan inverse of a square Fraction matrix; None if singular."""
    n = len(mat)
    aug = [[Fraction(mat[i][j]) for j in range(n)] +
           [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class SpinorStructure:
    """Constants of the spinor module plus exact coordinate-solving data.

    Immutable after construction; the float mirrors of the basis data are
    built lazily on first use from the exact values.
    """

    def __init__(self, a8, beta8, A, alphas, gram_inv):
        self.a8 = a8
        self.beta8 = beta8
        self.A = A
        self.alphas = tuple(alphas)
        self.gram_inv = gram_inv
        self._float = None

    # --- float mirror -----------------------------------------------------

    def _float_data(self):
        if self._float is None:
            mf = np.zeros((NBLADES, DIM))
            for j, a in enumerate(self.alphas):
                for mask, c in a.terms.items():
                    mf[mask, j] = float(c)
            ginv = np.array([[float(x) for x in row] for row in self.gram_inv])
            alphas_f = tuple(a.to_float() for a in self.alphas)
            self._float = (mf, ginv, alphas_f, self.A.to_float())
        return self._float

    @property
    def alphas_float(self):
        return self._float_data()[2]

    @property
    def A_float(self):
        return self._float_data()[3]

    # --- coordinates -------------------------------------------------------

    def coords(self, s: Multivector, check: bool = True):
        """Coordinates c with sum_j c_j alpha_j = s.

        Exact ring: list of 16 Fractions, residual must vanish identically.
        Float ring: ndarray of 16 doubles, residual below 1e-9.
        Raises NotInIdeal when s is outside the module.
        """
        if s.ring == EXACT:
            d = [a.blade_inner(s) for a in self.alphas]
            c = [sum(gi * dk for gi, dk in zip(row, d)) for row in self.gram_inv]
            if check:
                recon = {}
                for cj, a in zip(c, self.alphas):
                    if cj:
                        for mask, ac in a.terms.items():
                            recon[mask] = recon.get(mask, 0) + cj * ac
                if {m: x for m, x in recon.items() if x} != s.terms:
                    raise NotInIdeal("exact residual nonzero")
            return c
        mf, ginv, _, _ = self._float_data()
        svec = np.zeros(NBLADES)
        for mask, coeff in s.terms.items():
            svec[mask] = coeff
        c = ginv @ (mf.T @ svec)
        if check:
            res = float(np.linalg.norm(mf @ c - svec))
            if res > FLOAT_RESIDUAL_TOL:
                raise NotInIdeal(f"residual {res:.3e} exceeds {FLOAT_RESIDUAL_TOL}")
        return c

    def decode_even(self, s: Multivector):
        """Vector z with e1 z A = s, read off the alpha_1..alpha_8 coordinates."""
        c = self.coords(s)
        return self._decode(c, half=0)

    def decode_odd(self, s: Multivector):
        """Vector z with z A = s, read off the alpha_9..alpha_16 coordinates."""
        c = self.coords(s)
        return self._decode(c, half=1)

    @staticmethod
    def _decode(c, half):
        lo, hi = (0, 8) if half == 0 else (8, 16)
        other = c[8:16] if half == 0 else c[0:8]
        if isinstance(c, np.ndarray):
            if float(np.linalg.norm(other)) > FLOAT_RESIDUAL_TOL:
                raise NotInIdeal("element mixes even and odd spinor halves")
            return np.asarray(c[lo:hi], dtype=float)
        if any(x != 0 for x in other):
            raise NotInIdeal("element mixes even and odd spinor halves")
        return list(c[lo:hi])


def build_spinor_structure() -> SpinorStructure:
    """Construct A8, beta8, A, the 16 basis spinors and the exact solver.

    Fails hard (SpinorBasisError) if the candidate basis is not linearly
    independent, which would contradict the module being 16-dimensional.
    """
    a8 = _complex_generator_product_real_part()
    beta8 = Multivector.blade([1, 3, 5, 7])
    A = a8 * (Multivector.scalar(1) + beta8)
    e1 = Multivector.basis_vector(1)
    alphas = [e1 * Multivector.basis_vector(B) * A for B in range(1, 9)]
    alphas += [Multivector.basis_vector(B) * A for B in range(1, 9)]
    gram = [[alphas[j].blade_inner(alphas[k]) for k in range(DIM)]
            for j in range(DIM)]
    gram_inv = _fraction_inverse(gram)
    if gram_inv is None:
        raise SpinorBasisError("candidate spinor basis has rank below 16")
    return SpinorStructure(a8, beta8, A, alphas, gram_inv)


@lru_cache(maxsize=1)
def get_structure() -> SpinorStructure:
    return build_spinor_structure()


def spinor_coords(s: Multivector, structure: SpinorStructure | None = None):
    st = structure or get_structure()
    return st.coords(s)


def rep(x: Multivector, structure: SpinorStructure | None = None):
    """Left-multiplication matrix of x on the spinor basis.

    Column j holds the basis coordinates of x·alpha_j, so rep(x y) equals
    rep(x) @ rep(y).  Exact inputs give a 16x16 list of Fraction rows,
    float inputs an ndarray.
    """
    st = structure or get_structure()
    if x.ring == EXACT:
        cols = [st.coords(x * a) for a in st.alphas]
        return [[cols[j][i] for j in range(DIM)] for i in range(DIM)]
    cols = [st.coords(x * a) for a in st.alphas_float]
    return np.column_stack(cols)


def odd_block(v, structure: SpinorStructure | None = None):
    """The 8x8 block P_v with rep(v) = [[0, P_v], [-P_v^T, 0]], linear in v.

    Accepts a length-8 component sequence; Fractions/ints stay exact,
    anything else computes in floats.
    """
    st = structure or get_structure()
    comps = list(v)
    exact = all(isinstance(x, (int, Fraction)) for x in comps)
    ring = EXACT if exact else FLOAT
    mv = Multivector.from_vector(comps, ring=ring)
    alphas = st.alphas if exact else st.alphas_float
    cols = [st.coords(mv * alphas[8 + b]) for b in range(8)]
    if exact:
        return [[cols[b][i] for b in range(8)] for i in range(8)]
    return np.column_stack([c[:8] for c in cols])


def rep_to_json(m):
    """16x16 matrix as nested lists: strings when exact, numbers when float."""
    if isinstance(m, np.ndarray):
        return [[float(x) for x in row] for row in m]
    return [[str(x) for x in row] for row in m]


# --- exact matrix helpers --------------------------------------------------

def exact_mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def exact_transpose(a):
    return [list(row) for row in zip(*a)]


def exact_identity(n, scale=1):
    return [[Fraction(scale) if i == j else Fraction(0) for j in range(n)]
            for i in range(n)]


def _rank_mod_p(rows, p=1_000_003):
    a = np.array(rows, dtype=np.int64) % p
    m, n = a.shape
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, col]), p - 2, p)
        a[r] = a[r] * inv % p
        mask = a[r + 1:, col] != 0
        if mask.any():
            a[r + 1:][mask] = (a[r + 1:][mask] - np.outer(a[r + 1:, col][mask], a[r])) % p
        r += 1
    return r


def _fraction_rank(rows):
    a = [[Fraction(x) for x in row] for row in rows]
    m, n = len(a), len(a[0])
    r = 0
    for col in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(r + 1, m):
            if a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def exact_rank(rows) -> int:
    """Rank over the rationals of a dense matrix (rows of Fractions/ints).

    Fast path: full rank modulo a prime certifies full rank over Q; anything
    short of that falls back to exact rational elimination.
    """
    ints = []
    for row in rows:
        frac = [Fraction(x) for x in row]
        den = 1
        for x in frac:
            den = lcm(den, x.denominator)
        ints.append([int(x * den) for x in frac])
    r = _rank_mod_p(ints)
    if r == min(len(rows), len(rows[0])):
        return r
    return _fraction_rank(rows)
