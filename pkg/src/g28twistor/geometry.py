"""Numerical differential geometry of the bundle G(2,8) -> S^6.

Tangent vectors to G(2,8) at a frame (e1, e2) are the bivectors
E_{1a} = e_a e2 and E_{2a} = e1 e_a for a completed orthonormal frame, with
metric g = 2 * (Frobenius pairing).  Clifford multiplication by the base
point is an almost complex structure; the bundle projection splits tangent
spaces into horizontal and vertical parts.  Sections of the bundle induce
almost complex structures on S^6; their holomorphicity defect and Nijenhuis
tensor are evaluated by central finite differences, with off-manifold points
handled by closest-point retractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .multivector import FLOAT, Multivector
from .spinor import get_structure
from .twistor import (
    E1,
    GeometryError,
    GrassmannPoint,
    PreconditionViolation,
    as_s6_point,
    bivector_from_matrix,
    bivector_matrix,
    j_v,
    phi_star,
    tau,
    vector_mv,
)

_E = np.eye(8)

FD_STEP = 1e-5          # first derivatives (section pushforwards)
FD_STEP_BRACKET = 1e-4  # Lie brackets and other second-order quantities

_STEP_RANGE = (1e-9, 1e-2)


class RetractionFailure(GeometryError):
    """No well-defined closest plane (degenerate top singular pair)."""


def _check_step(h: float):
    if not _STEP_RANGE[0] < h < _STEP_RANGE[1]:
        raise PreconditionViolation(f"finite-difference step {h} outside {_STEP_RANGE}")


def _antisym(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.outer(a, b) - np.outer(b, a)


# --- frames ------------------------------------------------------------------

def frame_completion(x: GrassmannPoint) -> np.ndarray:
    """Rows e3..e8 completing (x.u, x.w) to an orthonormal basis of R^8.

    Deterministic: the two standard axes most aligned with the plane are
    dropped and the rest are Gram-Schmidt orthonormalized in index order.
    """
    scores = np.sqrt(x.u ** 2 + x.w ** 2)
    drop = set(np.argsort(-scores, kind="stable")[:2])
    basis = [x.u, x.w]
    for i in range(8):
        if i in drop:
            continue
        c = _E[i].copy()
        for b in basis:
            c -= np.dot(c, b) * b
        n = np.linalg.norm(c)
        if n < 1e-8:
            raise GeometryError("frame completion degenerated")
        basis.append(c / n)
    return np.array(basis[2:])


def s6_frame(v: np.ndarray) -> np.ndarray:
    """Rows e3..e8: a deterministic orthonormal frame of T_v S^6."""
    v = as_s6_point(v)
    drop = 1 + int(np.argmax(np.abs(v[1:])))
    basis = [_E[0], v]
    for i in range(1, 8):
        if i == drop:
            continue
        c = _E[i].copy()
        for b in basis:
            c -= np.dot(c, b) * b
        n = np.linalg.norm(c)
        if n < 1e-8:
            raise GeometryError("tangent frame degenerated")
        basis.append(c / n)
    return np.array(basis[2:])


@dataclass(frozen=True, eq=False)
class G28Tangent:
    """Tangent vector to G(2,8): a grade-2 multivector attached to a base point."""

    base: GrassmannPoint
    vec: Multivector

    def coeff_matrix(self) -> np.ndarray:
        return bivector_matrix(self.vec)

    def __add__(self, other: "G28Tangent") -> "G28Tangent":
        _same_base(self, other)
        return G28Tangent(self.base, self.vec + other.vec)

    def __sub__(self, other: "G28Tangent") -> "G28Tangent":
        _same_base(self, other)
        return G28Tangent(self.base, self.vec - other.vec)

    def __mul__(self, c) -> "G28Tangent":
        return G28Tangent(self.base, self.vec * float(c))

    __rmul__ = __mul__

    def g_norm(self) -> float:
        return float(np.sqrt(max(metric_g(self.base, self, self), 0.0)))


def _same_base(x: G28Tangent, y: G28Tangent):
    if x.base is not y.base and x.base.plane_distance(y.base) > 1e-8:
        raise GeometryError("tangent vectors live at different base points")


def tangent_basis_matrices(x: GrassmannPoint) -> np.ndarray:
    """Stacked coefficient matrices of E_{1a}=e_a e2 then E_{2a}=e1 e_a, a=3..8."""
    comp = frame_completion(x)
    mats = np.zeros((12, 8, 8))
    for k in range(6):
        mats[k] = _antisym(comp[k], x.w)
        mats[6 + k] = _antisym(x.u, comp[k])
    return mats


def tangent_frame(x: GrassmannPoint) -> list[G28Tangent]:
    """The 12 basis tangent vectors at x (dim G(2,8) = 12)."""
    return [G28Tangent(x, bivector_from_matrix(m))
            for m in tangent_basis_matrices(x)]


def tangent_project_matrix(x: GrassmannPoint, c: np.ndarray) -> np.ndarray:
    """Orthogonal projection of a bivector coefficient matrix onto T_x G(2,8)."""
    mats = tangent_basis_matrices(x)
    coords = np.einsum("kab,ab->k", mats, c) / 2.0
    return np.einsum("k,kab->ab", coords, mats)


def metric_g(x: GrassmannPoint, X: G28Tangent, Y: G28Tangent) -> float:
    """The metric 2 * sum of frame-coordinate products (Frobenius pairing x2)."""
    _same_base(X, Y)
    if X.base is not x and x.plane_distance(X.base) > 1e-8:
        raise GeometryError("tangent vectors do not live at x")
    return 2.0 * float(X.vec.blade_inner(Y.vec))


# --- the almost complex structure on G(2,8) ---------------------------------

def _jtilde_matrix(x: GrassmannPoint, c: np.ndarray) -> np.ndarray:
    prod = x.cliff * bivector_from_matrix(c)
    return tangent_project_matrix(x, bivector_matrix(prod.grade(2)))


def jtilde(x: GrassmannPoint, X: G28Tangent) -> G28Tangent:
    """Clifford left-multiplication by the base point: E_{1a} -> E_{2a} -> -E_{1a}."""
    _same_base(X, G28Tangent(x, X.vec))
    prod = x.cliff * X.vec
    out = tangent_project_matrix(x, bivector_matrix(prod.grade(2)))
    residual = (prod - bivector_from_matrix(out)).norm()
    if residual > 1e-8 * max(1.0, prod.norm()):
        raise RuntimeError(f"jtilde left the tangent space (residual {residual:.2e})")
    return G28Tangent(x, bivector_from_matrix(out))


def hv_split(x: GrassmannPoint, X: G28Tangent) -> tuple[G28Tangent, G28Tangent]:
    """Metric-orthogonal (horizontal, vertical) parts of X.

    The vertical space of the bundle projection is spanned by
    e_a (J_v e1) + e1 (J_v e_a) and the horizontal space by the differences,
    for v = tau(x) and a completed frame e3..e8.
    """
    v = tau(x)
    jv = j_v(v)
    comp = frame_completion(x)
    je1 = jv @ x.u
    c = X.coeff_matrix()
    hor = np.zeros((8, 8))
    ver = np.zeros((8, 8))
    for k in range(6):
        jea = jv @ comp[k]
        vmat = _antisym(comp[k], je1) + _antisym(x.u, jea)
        hmat = _antisym(comp[k], je1) - _antisym(x.u, jea)
        ver += vmat * (np.einsum("ab,ab->", vmat, c) / 2.0) / 2.0
        hor += hmat * (np.einsum("ab,ab->", hmat, c) / 2.0) / 2.0
    res = np.linalg.norm(c - hor - ver)
    if res > 1e-8 * max(1.0, np.linalg.norm(c)):
        raise GeometryError(f"horizontal + vertical missed X by {res:.2e}")
    return (G28Tangent(x, bivector_from_matrix(hor)),
            G28Tangent(x, bivector_from_matrix(ver)))


def tau_push(x: GrassmannPoint, X: G28Tangent) -> np.ndarray:
    """Pushforward along the bundle projection: the Y with X A = e1 Y A."""
    from .twistor import _kernels

    _same_base(X, G28Tangent(x, X.vec))
    return 0.5 * np.einsum("kij,ij->k", _kernels().vw, X.coeff_matrix())


# --- sections ----------------------------------------------------------------

@dataclass(frozen=True)
class Section:
    """A smooth map S^6 -> G(2,8) with tau(eval(v)) = v, evaluated pointwise."""

    name: str
    eval: Callable[[np.ndarray], GrassmannPoint]

    def __call__(self, v: np.ndarray) -> GrassmannPoint:
        return self.eval(np.asarray(v, dtype=float))


def canonical_section() -> Section:
    """f(v) = e1 ^ v, the section fixing the first frame vector."""
    return Section("canonical", lambda v: GrassmannPoint(_E[0], v))


_SHIFT = np.roll(np.eye(8), -1, axis=0)   # (Mv)_i = v_{i+1 mod 8}


def perturbed_section(rho: float = 0.3) -> Section:
    """fiber_point(v, unit(e1 + rho * M v)) for a fixed cyclic-shift M."""
    from .twistor import fiber_point

    def eval_fn(v):
        u = _E[0] + rho * (_SHIFT @ v)
        return fiber_point(v, u / np.linalg.norm(u))

    return Section(f"perturbed", eval_fn)


def section_registry() -> dict[str, Section]:
    return {s.name: s for s in (canonical_section(), perturbed_section())}


def section_push(f: Section, v: np.ndarray, X: np.ndarray,
                 h: float = FD_STEP) -> G28Tangent:
    """Pushforward f_* X by a central difference along the great circle of X."""
    _check_step(h)
    v = as_s6_point(v)
    X = np.asarray(X, dtype=float)
    base = f(v)
    n = np.linalg.norm(X)
    if n == 0.0:
        return G28Tangent(base, Multivector.zero(ring=FLOAT))
    if abs(X[0]) > 1e-8 * n or abs(np.dot(X, v)) > 1e-8 * n:
        raise PreconditionViolation("X must be tangent to S^6 at v")
    xhat = X / n
    plus = f(np.cos(h * n) * v + np.sin(h * n) * xhat)
    minus = f(np.cos(h * n) * v - np.sin(h * n) * xhat)
    diff = (plus.coeff_matrix() - minus.coeff_matrix()) / (2.0 * h)
    return G28Tangent(base, bivector_from_matrix(tangent_project_matrix(base, diff)))


def induced_acs(f: Section, v: np.ndarray,
                h: float = FD_STEP) -> Callable[[np.ndarray], np.ndarray]:
    """The almost complex structure J_f at v: push down J-tilde of the
    horizontal part of the section pushforward."""
    v = as_s6_point(v)
    x = f(v)

    def apply(X: np.ndarray) -> np.ndarray:
        z = section_push(f, v, X, h=h)
        hor, _ = hv_split(x, z)
        return tau_push(x, jtilde(x, hor))

    return apply


def holo_defect(f: Section, v: np.ndarray, h: float = FD_STEP) -> float:
    """Operator g-norm of f_* J_f - J-tilde f_* at v (zero iff holomorphic there).

    The linear map is assembled on an orthonormal tangent frame and the
    largest singular value is returned, so the value is frame-independent.
    """
    v = as_s6_point(v)
    x = f(v)
    jf = induced_acs(f, v, h=h)
    frame = s6_frame(v)
    basis = tangent_basis_matrices(x)
    cols = []
    for Xa in frame:
        d = section_push(f, v, jf(Xa), h=h) - jtilde(x, section_push(f, v, Xa, h=h))
        coords = np.einsum("kab,ab->k", basis, d.coeff_matrix()) / 2.0
        cols.append(np.sqrt(2.0) * coords)   # g-orthonormal coordinates
    m = np.column_stack(cols)
    return float(np.linalg.svd(m, compute_uv=False)[0])


def beta_form(f: Section, v: np.ndarray, X, Y, h: float = FD_STEP) -> np.ndarray:
    """Spinor-valued second-fundamental-type form: project Yf * (e1 X A).

    X and Y may be complex combinations of tangent vectors; the result is
    the complex 16-vector of spinor coordinates after projecting onto the
    span of e1 Z A with Z tangent at v (the odd half is identically zero).
    """
    st = get_structure()
    v = as_s6_point(v)
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    zr = section_push(f, v, X=np.real(Y), h=h) if np.any(np.real(Y)) else None
    zi = section_push(f, v, X=np.imag(Y), h=h) if np.any(np.imag(Y)) else None
    a_f = st.A_float
    e1mv = vector_mv(_E[0])
    s_re = e1mv * vector_mv(np.real(X)) * a_f
    s_im = e1mv * vector_mv(np.imag(X)) * a_f
    zero = Multivector.zero(ring=FLOAT)
    yr = zr.vec if zr is not None else zero
    yi = zi.vec if zi is not None else zero
    p_re = yr * s_re - yi * s_im
    p_im = yr * s_im + yi * s_re
    c = (np.asarray(st.coords(p_re, check=False))
         + 1j * np.asarray(st.coords(p_im, check=False)))
    z = c[:8]
    z = z - z[0] * _E[0].astype(complex) - np.dot(z, v) * v.astype(complex)
    out = np.zeros(16, dtype=complex)
    out[:8] = z
    return out


# --- Nijenhuis tensor on S^6 ---------------------------------------------------

def _s6_retract(p: np.ndarray) -> np.ndarray:
    q = p.copy()
    q[0] = 0.0
    n = np.linalg.norm(q)
    if n < 1e-9:
        raise GeometryError("point retracted to the origin")
    return q / n


def _s6_tangent_project(v: np.ndarray, z: np.ndarray) -> np.ndarray:
    z = z - z[0] * _E[0]
    return z - np.dot(z, v) * v


def nijenhuis_s6(f: Section, v: np.ndarray, X, Y,
                 h: float = FD_STEP_BRACKET) -> np.ndarray:
    """N_{J_f}(X, Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] at v.

    Constant seed vectors are extended by tangent projection at the
    retracted point and brackets are central finite differences; the
    pointwise J is the complex-structure matrix of the section value, so
    shrinking h converges to the tensor regardless of the extension.
    """
    _check_step(h)
    v = as_s6_point(v)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    for z in (X, Y):
        n = np.linalg.norm(z)
        if n and (abs(z[0]) > 1e-8 * n or abs(np.dot(z, v)) > 1e-8 * n):
            raise PreconditionViolation("inputs must be tangent to S^6 at v")

    def ext(w):
        def field(p):
            q = _s6_retract(p)
            return w - np.dot(w, q) * q - w[0] * _E[0]
        return field

    def jfield(base):
        def field(p):
            q = _s6_retract(p)
            return phi_star(f(q)) @ base(p)
        return field

    xf, yf = ext(X), ext(Y)
    jxf, jyf = jfield(xf), jfield(yf)

    def bracket(ef, ff):
        return (ff(v + h * ef(v)) - ff(v - h * ef(v))
                - ef(v + h * ff(v)) + ef(v - h * ff(v))) / (2.0 * h)

    j0 = phi_star(f(v))
    n = (bracket(jxf, jyf)
         - j0 @ _s6_tangent_project(v, bracket(jxf, yf))
         - j0 @ _s6_tangent_project(v, bracket(xf, jyf))
         - bracket(xf, yf))
    return _s6_tangent_project(v, n)


# --- retraction and the Kaehler checks on G(2,8) -------------------------------

def retract_bivector(c) -> GrassmannPoint:
    """Closest unit simple bivector to a near-simple one.

    The top singular plane of the antisymmetric coefficient matrix carries
    the dominant rotation; orientation is matched by the sign of the
    Frobenius pairing.  A degenerate top pair raises RetractionFailure.
    """
    if isinstance(c, Multivector):
        c = bivector_matrix(c)
    c = np.asarray(c, dtype=float)
    s = c.T @ c
    lam, q = np.linalg.eigh(s)
    if lam[7] < 1e-18:
        raise RetractionFailure("zero bivector has no closest plane")
    if lam[6] - lam[5] <= 1e-6 * lam[7]:
        raise RetractionFailure("top singular plane is degenerate")
    u, w = q[:, 7], q[:, 6]
    x = GrassmannPoint(u, w)
    pairing = np.einsum("ab,ab->", x.coeff_matrix(), c)
    if abs(pairing) < 1e-12:
        raise RetractionFailure("orientation is undetermined")
    if pairing < 0:
        x = GrassmannPoint(w, u)
    return x


def _const_field(xmat: np.ndarray):
    def field(b):
        return tangent_project_matrix(retract_bivector(b), xmat)
    return field


def _jfield_g28(base):
    def field(b):
        pt = retract_bivector(b)
        return _jtilde_matrix(pt, base(b))
    return field


def _bracket_g28(ef, ff, b0: np.ndarray, h: float) -> np.ndarray:
    return (ff(b0 + h * ef(b0)) - ff(b0 - h * ef(b0))
            - ef(b0 + h * ff(b0)) + ef(b0 - h * ff(b0))) / (2.0 * h)


def nijenhuis_g28(x: GrassmannPoint, X: G28Tangent, Y: G28Tangent,
                  h: float = FD_STEP_BRACKET) -> G28Tangent:
    """N of the Clifford almost complex structure at x; vanishes (Kaehler).

    J-tilde is extended off the manifold through the closest-point
    retraction; tensoriality makes the extension immaterial as h -> 0.
    """
    _check_step(h)
    _same_base(X, Y)
    b0 = x.coeff_matrix()
    xf = _const_field(X.coeff_matrix())
    yf = _const_field(Y.coeff_matrix())
    jxf, jyf = _jfield_g28(xf), _jfield_g28(yf)
    n = (_bracket_g28(jxf, jyf, b0, h)
         - _jtilde_matrix(x, tangent_project_matrix(x, _bracket_g28(jxf, yf, b0, h)))
         - _jtilde_matrix(x, tangent_project_matrix(x, _bracket_g28(xf, jyf, b0, h)))
         - _bracket_g28(xf, yf, b0, h))
    n = tangent_project_matrix(x, n)
    return G28Tangent(x, bivector_from_matrix(n))


def kahler_d_omega(x: GrassmannPoint, X: G28Tangent, Y: G28Tangent,
                   Z: G28Tangent, h: float = FD_STEP_BRACKET) -> float:
    """d omega (X, Y, Z) for omega = g(J-tilde ., .); vanishes (Kaehler).

    Evaluated through the invariant formula with projection-extended fields
    and finite-difference derivatives and brackets.
    """
    _check_step(h)
    _same_base(X, Y)
    _same_base(Y, Z)
    b0 = x.coeff_matrix()
    fields = [_const_field(t.coeff_matrix()) for t in (X, Y, Z)]

    def omega_at(b, e1f, e2f):
        pt = retract_bivector(b)
        return np.einsum("ab,ab->", _jtilde_matrix(pt, e1f(b)), e2f(b))

    def deriv(ef, e1f, e2f):
        return (omega_at(b0 + h * ef(b0), e1f, e2f)
                - omega_at(b0 - h * ef(b0), e1f, e2f)) / (2.0 * h)

    def omega0(amat, bmat):
        return float(np.einsum("ab,ab->", _jtilde_matrix(x, amat), bmat))

    xf, yf, zf = fields
    br = {(0, 1): _bracket_g28(xf, yf, b0, h),
          (0, 2): _bracket_g28(xf, zf, b0, h),
          (1, 2): _bracket_g28(yf, zf, b0, h)}
    mats = [t.coeff_matrix() for t in (X, Y, Z)]
    return float(
        deriv(xf, yf, zf) - deriv(yf, xf, zf) + deriv(zf, xf, yf)
        - omega0(br[(0, 1)], mats[2])
        + omega0(br[(0, 2)], mats[1])
        - omega0(br[(1, 2)], mats[0]))
