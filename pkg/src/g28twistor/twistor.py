"""Oriented 2-planes in R^8 as complex structures, and the fibrations they carry.

A point of G(2,8) is an oriented orthonormal pair (u, w) with Clifford
product u w.  Left multiplication on the even half of the spinor module
turns each such point into an orthogonal complex structure on R^8; reading
the spinor coordinates of x·A gives the bundle projection tau onto S^6, and
on the fiber over e3 the coordinates of x·alpha_2 give a further projection
tau1 onto a 4-sphere.  The bilinear spinor solves are precomputed as small
float tensors so the smooth-geometry code can evaluate them in bulk.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .multivector import EXACT, FLOAT, Multivector
from .spinor import get_structure, rep

E1 = np.eye(8)[0]
E3 = np.eye(8)[2]
E4 = np.eye(8)[3]


class GeometryError(ValueError):
    """Base class for geometric precondition and consistency failures."""


class PreconditionViolation(GeometryError):
    pass


class DecompositionFailure(GeometryError):
    """A spinor-coordinate decomposition violated its asserted shape."""


class NotInFiber(GeometryError):
    pass


class InvarianceFailure(GeometryError):
    pass


def standard_j() -> np.ndarray:
    """The complex structure J e_{2i-1} = e_{2i}, J e_{2i} = -e_{2i-1}."""
    j = np.zeros((8, 8))
    for i in range(4):
        j[2 * i + 1, 2 * i] = 1.0
        j[2 * i, 2 * i + 1] = -1.0
    return j


STANDARD_J = standard_j()


# --- bivector <-> matrix helpers -------------------------------------------

def bivector_matrix(mv: Multivector) -> np.ndarray:
    """Antisymmetric coefficient matrix of the grade-2 part."""
    c = np.zeros((8, 8))
    for mask, coeff in mv.terms.items():
        if mask.bit_count() != 2:
            continue
        j = mask.bit_length() - 1
        i = (mask ^ (1 << j)).bit_length() - 1
        c[i, j] = coeff
        c[j, i] = -coeff
    return c


def bivector_from_matrix(c: np.ndarray) -> Multivector:
    terms = {}
    for i in range(8):
        for j in range(i + 1, 8):
            terms[(1 << i) | (1 << j)] = c[i, j]
    return Multivector(terms, ring=FLOAT)


def vector_mv(v, ring=FLOAT) -> Multivector:
    return Multivector.from_vector(list(v), ring=ring)


# --- precomputed spinor kernels ---------------------------------------------

class _Kernels:
    """Float tensors for the bilinear spinor solves.

    PHI[k,l,i,j]: upper-left block of rep(e_i e_j), so the complex-structure
    matrix of a bivector with antisymmetric coefficients C is
    (1/2) sum_ij C_ij PHI[:,:,i,j].  VW[k,i,j]: k-th alpha_(1..8) coordinate
    of e_i e_j A (decodes z from e1 z A).  T1[k,i,j]: same for e_i e_j
    alpha_2, which drives the projection onto S^4.
    """

    def __init__(self):
        st = get_structure()
        phi = np.zeros((8, 8, 8, 8))
        vw = np.zeros((8, 8, 8))
        t1 = np.zeros((8, 8, 8))
        alpha2 = st.alphas[1]
        for i in range(8):
            for j in range(8):
                eij = Multivector({(1 << i): 1}) * Multivector({(1 << j): 1})
                cij = st.coords(eij * st.A, check=False)
                ct = st.coords(eij * alpha2, check=False)
                vw[:, i, j] = [float(x) for x in cij[:8]]
                t1[:, i, j] = [float(x) for x in ct[:8]]
                if i < j:
                    m = rep(eij, st)
                    blk = np.array([[float(m[k][l]) for l in range(8)]
                                    for k in range(8)])
                    phi[:, :, i, j] = blk
                    phi[:, :, j, i] = -blk
        self.phi = phi
        self.vw = vw
        self.t1 = t1


@lru_cache(maxsize=1)
def _kernels() -> _Kernels:
    return _Kernels()


# --- the Grassmannian -------------------------------------------------------

class GrassmannPoint:
    """Oriented orthonormal 2-frame (u, w) with its Clifford product u w.

    Frames are orthonormalized on construction (Gram-Schmidt, orientation
    taken from the argument order); instances are immutable.
    """

    __slots__ = ("u", "w", "cliff", "_cmat")

    def __init__(self, u, w):
        u = np.asarray(u, dtype=float)
        w = np.asarray(w, dtype=float)
        if u.shape != (8,) or w.shape != (8,):
            raise PreconditionViolation("frame vectors must have 8 components")
        nu = np.linalg.norm(u)
        if nu < 1e-12:
            raise PreconditionViolation("zero frame vector")
        u = u / nu
        w = w - np.dot(w, u) * u
        nw = np.linalg.norm(w)
        if nw < 1e-12:
            raise PreconditionViolation("degenerate frame: vectors are parallel")
        w = w / nw
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)
        cmat = np.outer(u, w) - np.outer(w, u)
        object.__setattr__(self, "_cmat", cmat)
        object.__setattr__(self, "cliff", bivector_from_matrix(cmat))

    def __setattr__(self, name, value):
        raise AttributeError("GrassmannPoint is immutable")

    def coeff_matrix(self) -> np.ndarray:
        return self._cmat.copy()

    def plane_distance(self, other: "GrassmannPoint") -> float:
        """Frobenius distance between the oriented plane bivectors."""
        return float(np.linalg.norm(self._cmat - other._cmat)) / np.sqrt(2.0)

    def check_invariants(self, tol: float = 1e-10) -> float:
        """Max deviation from |u|=|w|=1, u.w=0 and cliff^2 = -1."""
        dev = max(abs(np.linalg.norm(self.u) - 1.0),
                  abs(np.linalg.norm(self.w) - 1.0),
                  abs(float(np.dot(self.u, self.w))))
        sq = self.cliff * self.cliff + Multivector.scalar(1.0, ring=FLOAT)
        return max(dev, sq.norm())

    def to_json(self):
        return {"u": [float(x) for x in self.u], "w": [float(x) for x in self.w]}

    @classmethod
    def from_json(cls, data):
        return cls(np.array(data["u"]), np.array(data["w"]))

    def __repr__(self):
        return f"GrassmannPoint(u={self.u.round(6).tolist()}, w={self.w.round(6).tolist()})"


def as_s6_point(v, tol: float = 1e-10) -> np.ndarray:
    """Validate a unit vector orthogonal to e1."""
    v = np.asarray(v, dtype=float)
    if v.shape != (8,):
        raise PreconditionViolation("point must have 8 components")
    if abs(np.linalg.norm(v) - 1.0) > tol or abs(v[0]) > tol:
        raise PreconditionViolation("not a unit vector orthogonal to e1")
    return v


def as_s4_point(t, tol: float = 1e-10) -> np.ndarray:
    """Validate a unit vector orthogonal to e1, e2, e3."""
    t = np.asarray(t, dtype=float)
    if abs(np.linalg.norm(t) - 1.0) > tol or np.max(np.abs(t[:3])) > tol:
        raise PreconditionViolation("not a unit vector orthogonal to e1,e2,e3")
    return t


def complex_structure_residual(j: np.ndarray) -> float:
    """Max deviation of J from J^T J = I and J^2 = -I."""
    eye = np.eye(j.shape[0])
    return max(float(np.linalg.norm(j.T @ j - eye)),
               float(np.linalg.norm(j @ j + eye)))


# --- the twistor map and fibrations -----------------------------------------

def phi_star(x: GrassmannPoint) -> np.ndarray:
    """The orthogonal complex structure on R^8 defined by x (acts on the left)."""
    k = _kernels()
    return 0.5 * np.einsum("klij,ij->kl", k.phi, x._cmat)


def tau(x: GrassmannPoint, tol: float = 1e-9) -> np.ndarray:
    """Bundle projection G(2,8) -> S^6: the v with x A = e1 v A."""
    k = _kernels()
    v = 0.5 * np.einsum("kij,ij->k", k.vw, x._cmat)
    if abs(v[0]) > tol or abs(np.linalg.norm(v) - 1.0) > tol:
        raise DecompositionFailure(
            f"x A = e1 v A gave v1={v[0]:.2e}, |v|={np.linalg.norm(v):.12f}")
    return v


def j_v(v, tol: float = 1e-9) -> np.ndarray:
    """The complex structure J_v with J_v e1 = v, built from e1 v w A solves."""
    v = as_s6_point(v)
    k = _kernels()
    # complement of span{e1, v}: J_v(w) decodes from the spinor product
    wmat = np.eye(8) - np.outer(E1, E1) - np.outer(v, v)
    jw = np.einsum("kij,i,jc->kc", k.vw, v, wmat)
    j = np.outer(v, E1) - np.outer(E1, v) + jw
    res = complex_structure_residual(j)
    if res > tol:
        raise DecompositionFailure(f"J_v residual {res:.2e}")
    return j


def fiber_point(v, u) -> GrassmannPoint:
    """The fiber element of tau over v spanned by (u, J_v u), for unit u."""
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > 1e-10:
        raise PreconditionViolation("u must be a unit vector")
    return GrassmannPoint(u, j_v(v) @ u)


def tangent_action(x: GrassmannPoint, xvec, tol: float = 1e-8) -> np.ndarray:
    """J_x on T_v S^6 through the spinor identity x e1 X A = e1 Y A.

    This is the direct spinor-product route; it must agree with the matrix
    action of phi_star(x), which the verification suites cross-check.
    """
    xvec = np.asarray(xvec, dtype=float)
    v = tau(x)
    nx = np.linalg.norm(xvec)
    if abs(xvec[0]) > tol * max(nx, 1.0) or abs(np.dot(xvec, v)) > tol * max(nx, 1.0):
        raise PreconditionViolation("X must be tangent to S^6 at tau(x)")
    st = get_structure()
    s = x.cliff * (vector_mv(E1) * vector_mv(xvec) * st.A_float)
    y = np.asarray(st.decode_even(s))
    if abs(y[0]) > tol * max(nx, 1.0) or abs(np.dot(y, v)) > tol * max(nx, 1.0):
        raise DecompositionFailure("image is not tangent to S^6")
    return y


def tau1(x: GrassmannPoint, tol: float = 1e-8) -> np.ndarray:
    """Projection of the fiber over e3 onto S^4, via t = -(decode of x alpha_2)."""
    v = tau(x)
    if np.linalg.norm(v - E3) > tol:
        raise NotInFiber(f"tau(x) is {np.round(v, 6)} rather than e3")
    k = _kernels()
    t = -0.5 * np.einsum("kij,ij->k", k.t1, x._cmat)
    if abs(np.linalg.norm(t) - 1.0) > tol or np.max(np.abs(t[:3])) > tol:
        raise DecompositionFailure(
            f"tau1 image not on S^4: |t|={np.linalg.norm(t):.12f}, t[:3]={t[:3]}")
    return t


def theta_space(theta: float) -> np.ndarray:
    """Rows: the orthonormal 4-frame spanning the fiber family at angle theta."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    basis = np.zeros((4, 8))
    basis[0, 0], basis[0, 6] = c, s      # c*e1 + s*e7
    basis[1, 2], basis[1, 4] = c, s      # c*e3 + s*e5
    basis[2, 1], basis[2, 7] = c, s      # c*e2 + s*e8
    basis[3, 3], basis[3, 5] = c, s      # c*e4 + s*e6
    return basis


def theta_fiber(theta: float, a, tol: float = 1e-8) -> GrassmannPoint:
    """Fiber element of tau1 over cos(theta) e4 + sin(theta) e6 from a in V(theta)."""
    a = np.asarray(a, dtype=float)
    if abs(np.linalg.norm(a) - 1.0) > 1e-10:
        raise PreconditionViolation("a must be a unit vector")
    basis = theta_space(theta)
    res = np.linalg.norm(a - basis.T @ (basis @ a))
    if res > tol:
        raise PreconditionViolation(
            f"a lies outside the theta-plane (residual {res:.2e})")
    return GrassmannPoint(a, j_v(E3) @ a)


def s4_invariance_check(x: GrassmannPoint, tol: float = 1e-8) -> np.ndarray:
    """Induced complex structure on T_t S^4 for t = tau1(x).

    Verifies that phi_star(x) preserves span{e1, e2, e3, t} and returns the
    matrix induced on the orthogonal complement, which must square to -I.
    """
    t = tau1(x, tol=tol)
    j = phi_star(x)
    span = np.zeros((4, 8))
    span[0, 0] = span[1, 1] = span[2, 2] = 1.0
    span[3] = t
    q_span, _ = np.linalg.qr(span.T)
    proj = q_span @ q_span.T
    img = j @ q_span
    res = float(np.linalg.norm(img - proj @ img))
    if res > tol:
        raise InvarianceFailure(f"span{{e1,e2,e3,t}} not preserved: residual {res:.2e}")
    # orthonormal basis of the complement
    full = np.hstack([q_span, np.eye(8)])
    q_all, _ = np.linalg.qr(full)
    comp = q_all[:, 4:8]
    induced = comp.T @ j @ comp
    res_c = float(np.linalg.norm(j @ comp - comp @ induced))
    if res_c > tol:
        raise InvarianceFailure(f"complement not preserved: residual {res_c:.2e}")
    if np.linalg.norm(induced @ induced + np.eye(4)) > tol:
        raise InvarianceFailure("induced matrix does not square to -I")
    return induced


def calibration_form(theta: float) -> Multivector:
    """The grade-2 calibration b1 ^ b2 - b3 ^ b4 of the fiber family at theta."""
    b = theta_space(theta)
    return (vector_mv(b[0]).wedge(vector_mv(b[1]))
            - vector_mv(b[2]).wedge(vector_mv(b[3])))


def spinor_identity_residual(x: GrassmannPoint) -> float:
    """Residual of x A8 beta8 = e1 v A8 + e1 (e3 - v) A8 beta8 on the e3 fiber.

    v is recovered from t = tau1(x) through t = e4 - 2 J v with the standard J.
    """
    st = get_structure()
    t = tau1(x)
    v = STANDARD_J @ (t - E4) / 2.0
    a8 = st.a8.to_float()
    beta8 = st.beta8.to_float()
    lhs = x.cliff * (a8 * beta8)
    rhs = (vector_mv(E1) * vector_mv(v) * a8
           + vector_mv(E1) * vector_mv(E3 - v) * (a8 * beta8))
    return (lhs - rhs).norm()
