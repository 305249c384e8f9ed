"""Named verification suites: each check samples deterministically and
produces a CheckRecord comparing a residual against a pinned tolerance.

Check ids name the claim being verified (see the claims table in the
README); every check derives its own sample stream from (seed, id), so
suites can run in any order and reports stay byte-identical for a given
configuration apart from timings.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import geometry, sampling, spinor, twistor
from .multivector import (
    EXACT,
    Multivector,
    format_multivector,
    parse_multivector,
)

VERSION = "0.1.0"

SUITES = ("clifford", "spin-rep", "twistor", "s4-twistor", "kahler",
          "submersion", "s6-sections", "all")

_E = np.eye(8)

# pass iff residual <= tolerance; "floor" checks store the violating
# fraction of samples, so their tolerance is the allowed fraction
DEFAULT_TOLERANCES = {
    "clifford.relations": 1e-15,
    "clifford.associativity": 1e-15,
    "clifford.involutions": 1e-15,
    "clifford.parser-roundtrip": 1e-15,
    "spinrep.module-rank": 1e-15,
    "spinrep.ideal-membership": 1e-15,
    "spinrep.homomorphism": 1e-15,
    "spinrep.transpose": 1e-15,
    "spinrep.block-structure": 1e-15,
    "spinrep.injectivity": 1e-15,
    "spinrep.golden-block": 1e-15,
    "spinrep.so8-blocks": 1e-12,
    "thm2.1.orthogonal": 1e-9,
    "thm2.1.square": 1e-9,
    "thm2.1.separation": 1e-15,
    "thm2.1.welldefined": 1e-9,
    "thm2.2.fiber": 1e-8,
    "thm2.2.invariant-plane": 1e-8,
    "thm2.2.tangent-cross": 1e-9,
    "jv.structure": 1e-9,
    "thm2.3.base-point": 1e-12,
    "thm2.3.theta-circle": 1e-8,
    "thm2.3.spinor-identity": 1e-9,
    "thm2.3.s4-invariance": 1e-8,
    "calib.endpoints": 1e-12,
    "calib.contact": 1e-10,
    "prop3.1.nijenhuis": 1e-4,
    "prop3.1.nijenhuis-decay": 1e-15,
    "prop3.1.domega": 1e-3,
    "prop3.1.domega-decay": 1e-15,
    "jtilde.square": 1e-10,
    "jtilde.isometry": 1e-9,
    "prop3.2.isometry": 1e-6,
    "prop3.2.vertical": 1e-9,
    "prop3.3.diagram": 1e-8,
    "prop3.3.hv-preserved": 1e-8,
    "hv.recombine": 1e-10,
    "sec.property": 1e-8,
    "sec.acs-cross": 1e-6,
    "sec.defect-floor": 0.05,
    "sec.nijenhuis-floor": 0.05,
    "sec.verdict-agreement": 1e-15,
    "sec.beta-nonzero": 1e-15,
}

# decay checks treat residuals below this as the roundoff floor, where the
# halving ratio is dominated by rounding rather than truncation
ROUNDOFF_FLOOR = 1e-9

DEFECT_FLOOR = 0.05
NIJENHUIS_FLOOR = 1e-2
EPS_FD = 1e-4
EPS_SIG = 1e-2

NIJENHUIS_PAIRS = ((0, 1), (0, 2), (2, 4))


class ConfigError(ValueError):
    """Invalid suite configuration (maps to exit code 2)."""


@dataclass
class SuiteConfig:
    suite: str = "all"
    seed: int = 42
    samples: int = 100
    fd_step: float = geometry.FD_STEP
    tolerances: dict = field(default_factory=dict)
    fmt: str = "text"
    section: str | None = None

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {SUITES}")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if not 1e-9 < self.fd_step < 1e-2:
            raise ConfigError("fd-step must lie in (1e-9, 1e-2)")
        for name, value in self.tolerances.items():
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance name {name!r}")
            if not value > 0:
                raise ConfigError(f"tolerance {name} must be positive")
        if self.section is not None and self.section not in geometry.section_registry():
            raise ConfigError(f"unknown section {self.section!r}")
        if self.fmt not in ("text", "json"):
            raise ConfigError(f"unknown format {self.fmt!r}")

    def tolerance(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])

    @property
    def bracket_step(self) -> float:
        return min(10.0 * self.fd_step, 9e-3)


@dataclass
class CheckRecord:
    id: str
    status: str
    residual: object          # float, or the marker "exact", or "error: ..."
    tolerance: float
    samples: int
    elapsed_ms: int
    anchor: str

    def to_json(self):
        residual = self.residual
        if isinstance(residual, float):
            residual = float(f"{residual:.6e}")
        return {"id": self.id, "status": self.status, "residual": residual,
                "tolerance": self.tolerance, "samples": self.samples,
                "elapsed_ms": self.elapsed_ms, "anchor": self.anchor}


def _check(cfg: SuiteConfig, check_id: str, anchor: str, samples: int, fn,
           tol_name: str | None = None) -> CheckRecord:
    tol = cfg.tolerance(tol_name or check_id)
    rng = sampling.stream(cfg.seed, check_id)
    t0 = time.perf_counter()
    try:
        residual = fn(rng)
    except Exception as exc:                 # checks must never crash the run
        residual = f"error: {type(exc).__name__}: {exc}"
    elapsed_ms = int((time.perf_counter() - t0) * 1000)
    if residual == "exact":
        status = "pass"
    elif isinstance(residual, str):
        status = "fail"
    else:
        residual = float(residual)
        status = "pass" if residual <= tol else "fail"
    return CheckRecord(check_id, status, residual, tol, samples, elapsed_ms, anchor)


def _decay_excess(full: float, half: float) -> float:
    """0 when halving the step cut the residual 3x or both sit at roundoff."""
    return max(0.0, min(half - full / 3.0, half - ROUNDOFF_FLOOR))


# --- clifford ----------------------------------------------------------------

def suite_clifford(cfg: SuiteConfig) -> list[CheckRecord]:
    def relations(rng):
        for b in range(1, 9):
            for c in range(1, 9):
                eb = Multivector.basis_vector(b)
                ec = Multivector.basis_vector(c)
                want = Multivector.scalar(-2 if b == c else 0)
                if eb * ec + ec * eb != want:
                    return 1.0
        return "exact"

    def associativity(rng):
        bad = 0
        for _ in range(cfg.samples):
            a, b, c = (sampling.exact_multivector(rng, 3) for _ in range(3))
            if (a * b) * c != a * (b * c):
                bad += 1
        return "exact" if bad == 0 else float(bad)

    def involutions(rng):
        bad = 0
        for _ in range(cfg.samples):
            x = sampling.exact_multivector(rng)
            y = sampling.exact_multivector(rng)
            ok = (x.involute().involute() == x
                  and x.reverse().reverse() == x
                  and (x * y).reverse() == y.reverse() * x.reverse()
                  and (x * y).involute() == x.involute() * y.involute())
            bad += 0 if ok else 1
        return "exact" if bad == 0 else float(bad)

    def parser(rng):
        bad = 0
        n = max(cfg.samples, 100)
        for _ in range(n):
            text = format_multivector(sampling.exact_multivector(rng, 6))
            if format_multivector(parse_multivector(text)) != text:
                bad += 1
        return "exact" if bad == 0 else float(bad)

    return [
        _check(cfg, "clifford.relations", "Cl(8) relations", 64, relations),
        _check(cfg, "clifford.associativity", "Cl(8) relations", cfg.samples,
               associativity),
        _check(cfg, "clifford.involutions", "Cl(8) relations", cfg.samples,
               involutions),
        _check(cfg, "clifford.parser-roundtrip", "text format",
               max(cfg.samples, 100), parser),
    ]


# --- spin-rep -----------------------------------------------------------------

def suite_spin_rep(cfg: SuiteConfig) -> list[CheckRecord]:
    st = spinor.get_structure()

    def module_rank(rng):
        rows = [[a.terms.get(mask, Fraction(0)) for a in st.alphas]
                for mask in range(256)]
        rank = spinor.exact_rank(rows)
        return "exact" if rank == 16 else float(16 - rank)

    def membership(rng):
        for _ in range(cfg.samples):
            x = sampling.exact_multivector(rng)
            st.coords(x * st.A)           # NotInIdeal would raise -> fail
        return "exact"

    def homomorphism(rng):
        bad = 0
        for _ in range(cfg.samples):
            x = sampling.exact_multivector(rng)
            y = sampling.exact_multivector(rng)
            if spinor.rep(x * y, st) != spinor.exact_mat_mul(
                    spinor.rep(x, st), spinor.rep(y, st)):
                bad += 1
        return "exact" if bad == 0 else float(bad)

    def transpose(rng):
        bad = 0
        for _ in range(cfg.samples):
            x = sampling.exact_multivector(rng)
            if spinor.rep(x.reverse().involute(), st) != spinor.exact_transpose(
                    spinor.rep(x, st)):
                bad += 1
        return "exact" if bad == 0 else float(bad)

    def blocks(rng):
        for mask in range(256):
            m = spinor.rep(Multivector({mask: 1}), st)
            even = mask.bit_count() % 2 == 0
            for i in range(8):
                for j in range(8):
                    off = (m[i][8 + j], m[8 + i][j])
                    diag = (m[i][j], m[8 + i][8 + j])
                    zeros = off if even else diag
                    if zeros[0] != 0 or zeros[1] != 0:
                        return 1.0
        return "exact"

    def injectivity(rng):
        rows = []
        for mask in range(256):
            m = spinor.rep(Multivector({mask: 1}), st)
            rows.append([m[i][j] for i in range(16) for j in range(16)])
        rank = spinor.exact_rank(rows)
        return "exact" if rank == 256 else float(256 - rank)

    def golden(rng):
        golden_block = [
            [0, 1, 0, 0, 0, 0, 0, 0], [-1, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, -1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, -1, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, -1], [0, 0, 0, 0, 0, 0, 1, 0]]
        m = spinor.rep(Multivector.blade([1, 2]), st)
        for i in range(8):
            for j in range(8):
                if m[i][j] != golden_block[i][j]:
                    return 1.0
        return "exact"

    def so8(rng):
        worst = 0.0
        pairs = [(b, c) for b in range(1, 9) for c in range(1, 9) if b != c]
        idx = rng.choice(len(pairs), size=min(cfg.samples, len(pairs)),
                         replace=False)
        for k in idx:
            b, c = pairs[int(k)]
            m = spinor.rep(Multivector.blade([b, c]) if b < c
                           else Multivector.blade([c, b]) * -1, st)
            for rows in ((0, 8), (8, 16)):
                blk = [r[rows[0]:rows[1]] for r in m[rows[0]:rows[1]]]
                if spinor.exact_mat_mul(spinor.exact_transpose(blk), blk) \
                        != spinor.exact_identity(8):
                    return 1.0
                det = np.linalg.det(np.array(blk, dtype=float))
                worst = max(worst, abs(det - 1.0))
        return worst

    return [
        _check(cfg, "spinrep.module-rank", "spinor module", 16, module_rank),
        _check(cfg, "spinrep.ideal-membership", "spinor module", cfg.samples,
               membership),
        _check(cfg, "spinrep.homomorphism", "Phi isomorphism", cfg.samples,
               homomorphism),
        _check(cfg, "spinrep.transpose", "Phi isomorphism", cfg.samples,
               transpose),
        _check(cfg, "spinrep.block-structure", "Phi isomorphism", 256, blocks),
        _check(cfg, "spinrep.injectivity", "Phi isomorphism", 256, injectivity),
        _check(cfg, "spinrep.golden-block", "Thm 2.1", 64, golden),
        _check(cfg, "spinrep.so8-blocks", "Phi isomorphism",
               min(cfg.samples, 56), so8),
    ]


# --- twistor -------------------------------------------------------------------

def suite_twistor(cfg: SuiteConfig) -> list[CheckRecord]:
    def orthogonal(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            j = twistor.phi_star(sampling.grassmann_point(rng))
            worst = max(worst, float(np.linalg.norm(j.T @ j - np.eye(8))))
        return worst

    def square(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            j = twistor.phi_star(sampling.grassmann_point(rng))
            worst = max(worst, float(np.linalg.norm(j @ j + np.eye(8))))
        return worst

    def separation(rng):
        bad = total = 0
        pts = [sampling.grassmann_point(rng)
               for _ in range(min(cfg.samples, 40))]
        for i in range(len(pts)):
            for k in range(i + 1, len(pts)):
                if pts[i].plane_distance(pts[k]) <= 1e-6:
                    continue
                total += 1
                d = np.linalg.norm(twistor.phi_star(pts[i])
                                   - twistor.phi_star(pts[k]))
                bad += 0 if d > 1e-6 else 1
        return bad / max(total, 1)

    def welldefined(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            x = sampling.grassmann_point(rng)
            ang = rng.uniform(0, 2 * np.pi)
            y = twistor.GrassmannPoint(
                np.cos(ang) * x.u + np.sin(ang) * x.w,
                -np.sin(ang) * x.u + np.cos(ang) * x.w)
            worst = max(worst, float(np.linalg.norm(
                twistor.phi_star(x) - twistor.phi_star(y))))
        return worst

    def fiber(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            v = sampling.s6_point(rng)
            u = sampling.unit_vector(rng)
            worst = max(worst, float(np.linalg.norm(
                twistor.tau(twistor.fiber_point(v, u)) - v)))
        return worst

    def invariant_plane(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            v = sampling.s6_point(rng)
            x = twistor.fiber_point(v, sampling.unit_vector(rng))
            j = twistor.phi_star(x)
            for z in (_E[0], v):
                img = j @ z
                res = img - np.dot(img, _E[0]) * _E[0] - np.dot(img, v) * v
                worst = max(worst, float(np.linalg.norm(res)))
        return worst

    def tangent_cross(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            v = sampling.s6_point(rng)
            x = twistor.fiber_point(v, sampling.unit_vector(rng))
            xv = sampling.s6_tangent(rng, v)
            worst = max(worst, float(np.linalg.norm(
                twistor.tangent_action(x, xv) - twistor.phi_star(x) @ xv)))
        return worst

    def jv_structure(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            j = twistor.j_v(sampling.s6_point(rng))
            worst = max(worst, twistor.complex_structure_residual(j))
        return worst

    return [
        _check(cfg, "thm2.1.orthogonal", "Thm 2.1", cfg.samples, orthogonal),
        _check(cfg, "thm2.1.square", "Thm 2.1", cfg.samples, square),
        _check(cfg, "thm2.1.separation", "Thm 2.1", min(cfg.samples, 40),
               separation),
        _check(cfg, "thm2.1.welldefined", "Thm 2.1", cfg.samples, welldefined),
        _check(cfg, "thm2.2.fiber", "Thm 2.2", cfg.samples, fiber),
        _check(cfg, "thm2.2.invariant-plane", "Thm 2.2", cfg.samples,
               invariant_plane),
        _check(cfg, "thm2.2.tangent-cross", "Thm 2.2", cfg.samples,
               tangent_cross),
        _check(cfg, "jv.structure", "Thm 2.2", cfg.samples, jv_structure),
    ]


# --- s4-twistor -----------------------------------------------------------------

def _theta_sample(rng, theta):
    coef = rng.normal(size=4)
    coef /= np.linalg.norm(coef)
    return twistor.theta_space(theta).T @ coef


def suite_s4_twistor(cfg: SuiteConfig) -> list[CheckRecord]:
    n_theta = max(cfg.samples // 10, 1)

    def base_point(rng):
        x = twistor.GrassmannPoint(_E[0], _E[2])
        return float(np.linalg.norm(twistor.tau1(x) - _E[3]))

    def theta_circle(rng):
        worst = 0.0
        for _ in range(n_theta):
            theta = rng.uniform(0, 2 * np.pi)
            want = np.cos(theta) * _E[3] + np.sin(theta) * _E[5]
            for _ in range(10):
                x = twistor.theta_fiber(theta, _theta_sample(rng, theta))
                worst = max(worst, float(np.linalg.norm(twistor.tau1(x) - want)))
        return worst

    def identity(rng):
        worst = 0.0
        for _ in range(n_theta):
            theta = rng.uniform(0, 2 * np.pi)
            x = twistor.theta_fiber(theta, _theta_sample(rng, theta))
            worst = max(worst, twistor.spinor_identity_residual(x))
        return worst

    def invariance(rng):
        worst = 0.0
        for _ in range(n_theta):
            theta = rng.uniform(0, 2 * np.pi)
            x = twistor.theta_fiber(theta, _theta_sample(rng, theta))
            m = twistor.s4_invariance_check(x)
            worst = max(worst, float(np.linalg.norm(m @ m + np.eye(4))))
        return worst

    def endpoints(rng):
        e = Multivector.blade
        want0 = e([1, 3]).to_float() - e([2, 4]).to_float()
        want_pi = e([5, 7]).to_float() * -1.0 + e([6, 8]).to_float()
        return max((twistor.calibration_form(0.0) - want0).norm(),
                   (twistor.calibration_form(np.pi) - want_pi).norm())

    def contact(rng):
        worst = 0.0
        for _ in range(n_theta):
            theta = rng.uniform(0, 2 * np.pi)
            x = twistor.theta_fiber(theta, _theta_sample(rng, theta))
            pairing = float(twistor.calibration_form(theta).blade_inner(x.cliff))
            worst = max(worst, abs(pairing - 1.0))
        return worst

    return [
        _check(cfg, "thm2.3.base-point", "Thm 2.3", 1, base_point),
        _check(cfg, "thm2.3.theta-circle", "Thm 2.3", n_theta * 10,
               theta_circle),
        _check(cfg, "thm2.3.spinor-identity", "Thm 2.3", n_theta, identity),
        _check(cfg, "thm2.3.s4-invariance", "Thm 2.3", n_theta, invariance),
        _check(cfg, "calib.endpoints", "Thm 2.3", 2, endpoints),
        _check(cfg, "calib.contact", "Thm 2.3", n_theta, contact),
    ]


# --- kahler ----------------------------------------------------------------------

def _random_g28_tangent(rng, x, frame):
    c = rng.normal(size=12)
    out = frame[0] * c[0]
    for i in range(1, 12):
        out = out + frame[i] * c[i]
    return out


def suite_kahler(cfg: SuiteConfig) -> list[CheckRecord]:
    n = min(cfg.samples, 50)
    h = cfg.bracket_step

    def _nijenhuis_maxima(rng):
        full, half = 0.0, 0.0
        for _ in range(n):
            x = sampling.grassmann_point(rng)
            fr = geometry.tangent_frame(x)
            X = _random_g28_tangent(rng, x, fr)
            Y = _random_g28_tangent(rng, x, fr)
            full = max(full, geometry.nijenhuis_g28(x, X, Y, h=h).g_norm())
            half = max(half, geometry.nijenhuis_g28(x, X, Y, h=h / 2).g_norm())
        return full, half

    def _domega_maxima(rng):
        full, half = 0.0, 0.0
        for _ in range(n):
            x = sampling.grassmann_point(rng)
            fr = geometry.tangent_frame(x)
            args = [_random_g28_tangent(rng, x, fr) for _ in range(3)]
            full = max(full, abs(geometry.kahler_d_omega(x, *args, h=h)))
            half = max(half, abs(geometry.kahler_d_omega(x, *args, h=h / 2)))
        return full, half

    nij_cache = {}

    def nijenhuis(rng):
        nij_cache["vals"] = _nijenhuis_maxima(rng)
        return nij_cache["vals"][0]

    def nijenhuis_decay(rng):
        full, half = nij_cache.get("vals") or _nijenhuis_maxima(
            sampling.stream(cfg.seed, "prop3.1.nijenhuis"))
        return _decay_excess(full, half)

    dom_cache = {}

    def domega(rng):
        dom_cache["vals"] = _domega_maxima(rng)
        return dom_cache["vals"][0]

    def domega_decay(rng):
        full, half = dom_cache.get("vals") or _domega_maxima(
            sampling.stream(cfg.seed, "prop3.1.domega"))
        return _decay_excess(full, half)

    def jt_square(rng):
        worst = 0.0
        for _ in range(n):
            x = sampling.grassmann_point(rng)
            fr = geometry.tangent_frame(x)
            X = _random_g28_tangent(rng, x, fr)
            out = geometry.jtilde(x, geometry.jtilde(x, X))
            worst = max(worst, (out.vec + X.vec).norm())
        return worst

    def jt_isometry(rng):
        worst = 0.0
        for _ in range(n):
            x = sampling.grassmann_point(rng)
            fr = geometry.tangent_frame(x)
            X = _random_g28_tangent(rng, x, fr)
            Y = _random_g28_tangent(rng, x, fr)
            worst = max(worst, abs(
                geometry.metric_g(x, geometry.jtilde(x, X), geometry.jtilde(x, Y))
                - geometry.metric_g(x, X, Y)))
        return worst

    return [
        _check(cfg, "prop3.1.nijenhuis", "Prop 3.1", n, nijenhuis),
        _check(cfg, "prop3.1.nijenhuis-decay", "Prop 3.1", n, nijenhuis_decay),
        _check(cfg, "prop3.1.domega", "Prop 3.1", n, domega),
        _check(cfg, "prop3.1.domega-decay", "Prop 3.1", n, domega_decay),
        _check(cfg, "jtilde.square", "Prop 3.1", n, jt_square),
        _check(cfg, "jtilde.isometry", "Prop 3.1", n, jt_isometry),
    ]


# --- submersion -----------------------------------------------------------------

def suite_submersion(cfg: SuiteConfig) -> list[CheckRecord]:
    def _fiber_frames(rng):
        v = sampling.s6_point(rng)
        x = twistor.fiber_point(v, sampling.unit_vector(rng))
        comp = geometry.frame_completion(x)
        jv = twistor.j_v(v)
        je1 = jv @ x.u
        hor, ver = [], []
        for k in range(6):
            a = np.outer(comp[k], je1) - np.outer(je1, comp[k])
            b = np.outer(x.u, jv @ comp[k]) - np.outer(jv @ comp[k], x.u)
            ver.append(geometry.G28Tangent(x, twistor.bivector_from_matrix(a + b)))
            hor.append(geometry.G28Tangent(x, twistor.bivector_from_matrix(a - b)))
        return x, v, hor, ver

    def isometry(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            x, v, hor, _ = _fiber_frames(rng)
            imgs = np.array([geometry.tau_push(x, H * 0.5) for H in hor])
            worst = max(worst, float(np.linalg.norm(imgs @ imgs.T - np.eye(6))))
        return worst

    def vertical(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            x, _, _, ver = _fiber_frames(rng)
            for V in ver:
                worst = max(worst, float(np.linalg.norm(geometry.tau_push(x, V))))
        return worst

    def diagram(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            x = twistor.fiber_point(sampling.s6_point(rng),
                                    sampling.unit_vector(rng))
            fr = geometry.tangent_frame(x)
            X = _random_g28_tangent(rng, x, fr)
            lhs = geometry.tau_push(x, geometry.jtilde(x, X))
            rhs = twistor.tangent_action(x, geometry.tau_push(x, X))
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
        return worst

    def preserved(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            x = twistor.fiber_point(sampling.s6_point(rng),
                                    sampling.unit_vector(rng))
            fr = geometry.tangent_frame(x)
            X = _random_g28_tangent(rng, x, fr)
            h, v = geometry.hv_split(x, X)
            _, bad_v = geometry.hv_split(x, geometry.jtilde(x, h))
            bad_h, _ = geometry.hv_split(x, geometry.jtilde(x, v))
            worst = max(worst, bad_v.g_norm(), bad_h.g_norm())
        return worst

    def recombine(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            x = twistor.fiber_point(sampling.s6_point(rng),
                                    sampling.unit_vector(rng))
            fr = geometry.tangent_frame(x)
            X = _random_g28_tangent(rng, x, fr)
            h, v = geometry.hv_split(x, X)
            worst = max(worst, ((h.vec + v.vec) - X.vec).norm())
        return worst

    return [
        _check(cfg, "prop3.2.isometry", "Prop 3.2", cfg.samples, isometry),
        _check(cfg, "prop3.2.vertical", "Prop 3.2", cfg.samples, vertical),
        _check(cfg, "prop3.3.diagram", "Prop 3.3", cfg.samples, diagram),
        _check(cfg, "prop3.3.hv-preserved", "Prop 3.3", cfg.samples, preserved),
        _check(cfg, "hv.recombine", "Prop 3.2", cfg.samples, recombine),
    ]


# --- s6-sections -----------------------------------------------------------------

def _nijenhuis_richardson_max(f, v, frame, h):
    best = 0.0
    for (i, j) in NIJENHUIS_PAIRS:
        n_full = geometry.nijenhuis_s6(f, v, frame[i], frame[j], h=h)
        n_half = geometry.nijenhuis_s6(f, v, frame[i], frame[j], h=h / 2)
        rich = (4.0 * n_half - n_full) / 3.0
        best = max(best, float(np.max(np.abs(rich))))
    return best


def _section_scan(cfg: SuiteConfig, f, rng):
    """Richardson-extrapolated defect and max-Nijenhuis per sampled point."""
    defects, nijs = [], []
    for _ in range(cfg.samples):
        v = sampling.s6_point(rng)
        d_full = geometry.holo_defect(f, v, h=cfg.fd_step)
        d_half = geometry.holo_defect(f, v, h=cfg.fd_step / 2)
        defects.append((4.0 * d_half - d_full) / 3.0)
        nijs.append(_nijenhuis_richardson_max(f, v, geometry.s6_frame(v),
                                              cfg.bracket_step))
    return np.array(defects), np.array(nijs)


def _section_checks(cfg: SuiteConfig, name: str, f) -> list[CheckRecord]:
    h = cfg.fd_step
    cache = {}

    def prop(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            v = sampling.s6_point(rng)
            worst = max(worst, float(np.linalg.norm(twistor.tau(f(v)) - v)))
        return worst

    def acs_cross(rng):
        worst = 0.0
        for _ in range(min(cfg.samples, 25)):
            v = sampling.s6_point(rng)
            jf = geometry.induced_acs(f, v, h=h)
            x = f(v)
            xv = sampling.s6_tangent(rng, v)
            worst = max(worst, float(np.linalg.norm(
                jf(xv) - twistor.tangent_action(x, xv))))
        return worst

    def defect_floor(rng):
        cache["vals"] = _section_scan(cfg, f, rng)
        defects, _ = cache["vals"]
        return float(np.mean(defects <= DEFECT_FLOOR))

    def nijenhuis_floor(rng):
        if "vals" not in cache:
            cache["vals"] = _section_scan(
                cfg, f, sampling.stream(cfg.seed, f"sec.{name}.defect-floor"))
        _, nijs = cache["vals"]
        return float(np.mean(nijs <= NIJENHUIS_FLOOR))

    def verdict(rng):
        if "vals" not in cache:
            return "error: defect scan unavailable"
        defects, nijs = cache["vals"]
        small = (defects < EPS_FD) & (nijs < EPS_FD)
        large = (defects > EPS_SIG) & (nijs > EPS_SIG)
        return float(np.mean(~(small | large)))

    def beta_nonzero(rng):
        bad = 0
        m = min(cfg.samples, 20)
        for _ in range(m):
            v = sampling.s6_point(rng)
            jf = geometry.induced_acs(f, v, h=h)
            fr = geometry.s6_frame(v)
            xc = fr[0] - 1j * jf(fr[0])
            y = fr[2] - np.dot(fr[2], jf(fr[0])) * jf(fr[0])
            y = y / np.linalg.norm(y)
            yc = y - 1j * jf(y)
            n1 = np.linalg.norm(geometry.beta_form(f, v, xc, yc, h=h))
            n2 = np.linalg.norm(geometry.beta_form(f, v, xc, yc, h=h / 2))
            rich = abs((4.0 * n2 - n1) / 3.0)
            bad += 0 if rich > NIJENHUIS_FLOOR else 1
        return bad / m

    return [
        _check(cfg, f"sec.{name}.property", "Thm 2.2", cfg.samples, prop,
               tol_name="sec.property"),
        _check(cfg, f"sec.{name}.acs-cross", "Prop 3.4",
               min(cfg.samples, 25), acs_cross, tol_name="sec.acs-cross"),
        _check(cfg, f"sec.{name}.defect-floor", "Thm 3.5", cfg.samples,
               defect_floor, tol_name="sec.defect-floor"),
        _check(cfg, f"sec.{name}.nijenhuis-floor", "Thm 3.5", cfg.samples,
               nijenhuis_floor, tol_name="sec.nijenhuis-floor"),
        _check(cfg, f"sec.{name}.verdict-agreement", "Thm 3.5", cfg.samples,
               verdict, tol_name="sec.verdict-agreement"),
        _check(cfg, f"sec.{name}.beta-nonzero", "Thm 3.5",
               min(cfg.samples, 20), beta_nonzero, tol_name="sec.beta-nonzero"),
    ]


def suite_s6_sections(cfg: SuiteConfig) -> list[CheckRecord]:
    registry = geometry.section_registry()
    names = [cfg.section] if cfg.section else sorted(registry)
    records = []
    for name in names:
        records.extend(_section_checks(cfg, name, registry[name]))
    return records


# --- orchestration -----------------------------------------------------------------

_SUITE_BUILDERS = {
    "clifford": suite_clifford,
    "spin-rep": suite_spin_rep,
    "twistor": suite_twistor,
    "s4-twistor": suite_s4_twistor,
    "kahler": suite_kahler,
    "submersion": suite_submersion,
    "s6-sections": suite_s6_sections,
}


def run(cfg: SuiteConfig) -> tuple[list[CheckRecord], int]:
    """Run the configured suite(s); exit code 0 iff every record passes."""
    names = list(_SUITE_BUILDERS) if cfg.suite == "all" else [cfg.suite]
    records = []
    for name in names:
        records.extend(_SUITE_BUILDERS[name](cfg))
    records.sort(key=lambda r: r.id)
    code = 0 if all(r.status == "pass" for r in records) else 1
    return records, code


def report_json(cfg: SuiteConfig, records: list[CheckRecord]) -> dict:
    tolerances = {name: cfg.tolerance(name) for name in sorted(DEFAULT_TOLERANCES)}
    return {
        "header": {
            "version": VERSION,
            "seeds": {
                "root": cfg.seed,
                "scheme": "sha256(seed:check-id) -> philox4x64-10 key",
            },
            "tolerances": tolerances,
        },
        "checks": [r.to_json() for r in records],
    }


def report_text(cfg: SuiteConfig, records: list[CheckRecord]) -> str:
    lines = [
        f"g28twistor verification v{VERSION}",
        f"suite={cfg.suite} seed={cfg.seed} samples={cfg.samples} "
        f"fd_step={cfg.fd_step:g}",
        "prng: sha256(seed:check-id) -> philox4x64-10 key",
        "tolerances: " + " ".join(
            f"{k}={cfg.tolerance(k):g}" for k in sorted(DEFAULT_TOLERANCES)),
        "",
    ]
    for r in records:
        res = r.residual if isinstance(r.residual, str) else f"{r.residual:.3e}"
        lines.append(f"[{r.status.upper():4s}] {r.id:32s} residual={res:<14s} "
                     f"tol={r.tolerance:.0e} samples={r.samples} ({r.anchor})")
    n_pass = sum(r.status == "pass" for r in records)
    lines.append("")
    lines.append(f"{n_pass}/{len(records)} checks passed")
    return "\n".join(lines)


def scan_s6_csv(cfg: SuiteConfig):
    """Field-scan rows: v1..v8, holo_defect, nijenhuis_max (deterministic)."""
    if cfg.section is None:
        raise ConfigError("scan requires --section")
    f = geometry.section_registry()[cfg.section]
    yield "v1,v2,v3,v4,v5,v6,v7,v8,holo_defect,nijenhuis_max"
    points = sampling.s6_scan_points(cfg.seed, cfg.samples)
    for v in points:
        d = geometry.holo_defect(f, v, h=cfg.fd_step)
        frame = geometry.s6_frame(v)
        best = 0.0
        for (i, j) in NIJENHUIS_PAIRS:
            n = geometry.nijenhuis_s6(f, v, frame[i], frame[j],
                                      h=cfg.bracket_step)
            best = max(best, float(np.max(np.abs(n))))
        coords = ",".join(f"{x:.12g}" for x in v)
        yield f"{coords},{d:.12g},{best:.12g}"
