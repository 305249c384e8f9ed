"""Deterministic sample streams shared by the verification suites and CLI.

Every check derives its own generator from (seed, label): the label is
hashed with SHA-256 and the first 128 bits key a Philox4x64-10 counter
generator.  Both primitives are standardized, so any implementation can
reproduce the exact sample streams from the seed alone.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from statistics import NormalDist

import numpy as np

from .multivector import EXACT, Multivector
from .twistor import GrassmannPoint

_NORMAL = NormalDist()


def stream(seed: int, label: str) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    key = int.from_bytes(digest[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))


def unit_vector(rng: np.random.Generator, dim: int = 8) -> np.ndarray:
    while True:
        v = rng.normal(size=dim)
        n = np.linalg.norm(v)
        if n > 1e-6:
            return v / n


def s6_point(rng: np.random.Generator) -> np.ndarray:
    v = unit_vector(rng)
    v[0] = 0.0
    return v / np.linalg.norm(v)


def s6_tangent(rng: np.random.Generator, v: np.ndarray) -> np.ndarray:
    while True:
        x = rng.normal(size=8)
        x[0] = 0.0
        x -= np.dot(x, v) * v
        n = np.linalg.norm(x)
        if n > 1e-6:
            return x / n


def grassmann_point(rng: np.random.Generator) -> GrassmannPoint:
    return GrassmannPoint(unit_vector(rng), unit_vector(rng))


def exact_multivector(rng: np.random.Generator, max_blades: int = 4,
                      n: int = 8) -> Multivector:
    """Sparse random rational multivector with small coefficients."""
    terms = {}
    for _ in range(int(rng.integers(1, max_blades + 1))):
        mask = int(rng.integers(0, 1 << n))
        num = int(rng.integers(-9, 10))
        den = int(rng.integers(1, 10))
        terms[mask] = terms.get(mask, Fraction(0)) + Fraction(num, den)
    return Multivector(terms, n=n, ring=EXACT)


def s6_scan_points(seed: int, count: int) -> np.ndarray:
    """Deterministic low-discrepancy points on S^6 (rows).

    A Kronecker sequence with the generalized golden ratio fills [0,1)^7;
    coordinates map through the normal quantile and normalize into the
    hyperplane orthogonal to e1.  The seed offsets the sequence.
    """
    d = 7
    phi = 2.0
    for _ in range(40):
        phi = (1.0 + phi) ** (1.0 / (d + 1))
    alpha = np.array([(1.0 / phi) ** (k + 1) for k in range(d)])
    offset = (seed % (2 ** 31)) * 0.618033988749895
    out = np.zeros((count, 8))
    for i in range(count):
        u = ((offset + alpha * (i + 1)) % 1.0)
        u = np.clip(u, 1e-12, 1.0 - 1e-12)
        g = np.array([_NORMAL.inv_cdf(x) for x in u])
        n = np.linalg.norm(g)
        if n < 1e-9:
            g[0] = 1.0
            n = 1.0
        out[i, 1:] = g / n
    return out
