"""Sparse multivector arithmetic in the negative-definite Clifford algebras Cl(n).

Generators e_1 .. e_n satisfy e_i e_j + e_j e_i = -2 delta_ij.  Basis blades
are bitmasks (bit b set means e_{b+1} is a factor, factors in ascending
order), so n is capped at 12 to keep masks in one machine word.  Coefficients
live in one of two rings, tagged per multivector: exact rationals
(fractions.Fraction) or IEEE doubles with small terms pruned.
"""

from __future__ import annotations

import re
from fractions import Fraction

EXACT = "exact"
FLOAT = "float"

MAX_GENERATORS = 12
PRUNE_EPS = 1e-12

_TERM_RE = re.compile(
    r"""(?P<coeff>\d+(?:/\d+|\.\d+)?)?   # optional integer, fraction or decimal
        (?P<star>\*)?
        (?P<blade>e\d+)?                 # optional blade, e.g. e137
        $""",
    re.VERBOSE,
)


class AlgebraError(ValueError):
    """Base class for multivector construction and arithmetic errors."""


class RingMismatch(AlgebraError):
    """Operands carry different coefficient rings."""


class DimensionMismatch(AlgebraError):
    """Operands carry different generator counts."""


class ParseError(AlgebraError):
    """Malformed multivector text."""


def blade_grade(mask: int) -> int:
    return mask.bit_count()


def blade_mul(a: int, b: int) -> tuple[int, int]:
    """Product of two basis blades: (sign, result mask).

    The sign counts transpositions needed to sort the concatenated factor
    lists, plus one factor -1 per repeated generator (e_i^2 = -1).
    """
    s = 0
    t = a >> 1
    while t:
        s += (t & b).bit_count()
        t >>= 1
    s += (a & b).bit_count()
    return (-1 if s & 1 else 1, a ^ b)


def mask_from_indices(indices) -> int:
    mask = 0
    for i in indices:
        bit = 1 << (i - 1)
        if i < 1 or mask & bit:
            raise AlgebraError(f"bad generator index list {tuple(indices)}")
        mask |= bit
    return mask


def indices_from_mask(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def _coerce(value, ring):
    return Fraction(value) if ring == EXACT else float(value)


def _keep(c, ring) -> bool:
    return c != 0 if ring == EXACT else abs(c) > PRUNE_EPS


class Multivector:
    """Immutable element of Cl(n), stored as a map {blade mask: coefficient}.

    Values never hold explicit zeros (exact ring) or coefficients with
    magnitude <= 1e-12 (float ring).  Mixed-ring or mixed-n operands are
    rejected rather than coerced.
    """

    __slots__ = ("n", "ring", "terms")

    def __init__(self, terms, n: int = 8, ring: str = EXACT):
        if not 1 <= n <= MAX_GENERATORS:
            raise AlgebraError(f"generator count {n} outside 1..{MAX_GENERATORS}")
        if ring not in (EXACT, FLOAT):
            raise AlgebraError(f"unknown ring tag {ring!r}")
        clean = {}
        for mask, c in terms.items():
            if not 0 <= mask < (1 << n):
                raise AlgebraError(f"blade mask {mask} out of range for n={n}")
            c = _coerce(c, ring)
            if _keep(c, ring):
                clean[mask] = c
        self.n = n
        self.ring = ring
        self.terms = clean

    @classmethod
    def _new(cls, terms, n, ring):
        # internal fast path: terms already coerced, may hold zeros
        mv = object.__new__(cls)
        mv.n = n
        mv.ring = ring
        mv.terms = {m: c for m, c in terms.items() if _keep(c, ring)}
        return mv

    @classmethod
    def scalar(cls, value, n: int = 8, ring: str = EXACT) -> "Multivector":
        return cls({0: value}, n=n, ring=ring)

    @classmethod
    def zero(cls, n: int = 8, ring: str = EXACT) -> "Multivector":
        return cls({}, n=n, ring=ring)

    @classmethod
    def blade(cls, indices, coeff=1, n: int = 8, ring: str = EXACT) -> "Multivector":
        """Blade from ascending generator indices, e.g. blade([1, 3])."""
        return cls({mask_from_indices(indices): coeff}, n=n, ring=ring)

    @classmethod
    def basis_vector(cls, i: int, n: int = 8, ring: str = EXACT) -> "Multivector":
        return cls.blade([i], n=n, ring=ring)

    @classmethod
    def from_vector(cls, components, n: int = 8, ring: str = FLOAT) -> "Multivector":
        """Grade-1 element with the given components in the e_1..e_n basis."""
        comps = list(components)
        if len(comps) != n:
            raise DimensionMismatch(f"expected {n} components, got {len(comps)}")
        return cls({1 << i: c for i, c in enumerate(comps)}, n=n, ring=ring)

    def to_vector(self):
        """Components of a grade-1 element (error if other grades present)."""
        comps = [_coerce(0, self.ring)] * self.n
        for mask, c in self.terms.items():
            if mask.bit_count() != 1:
                raise AlgebraError("not a grade-1 element")
            comps[mask.bit_length() - 1] = c
        return comps

    def to_float(self) -> "Multivector":
        if self.ring == FLOAT:
            return self
        return Multivector._new({m: float(c) for m, c in self.terms.items()}, self.n, FLOAT)

    def _check(self, other: "Multivector"):
        if self.n != other.n:
            raise DimensionMismatch(f"n mismatch: {self.n} vs {other.n}")
        if self.ring != other.ring:
            raise RingMismatch(f"ring mismatch: {self.ring} vs {other.ring}")

    # --- ring operations -------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(other, self.n, self.ring)
        self._check(other)
        out = dict(self.terms)
        for mask, c in other.terms.items():
            out[mask] = out.get(mask, 0) + c
        return Multivector._new(out, self.n, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return Multivector._new({m: -c for m, c in self.terms.items()}, self.n, self.ring)

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(other, self.n, self.ring)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return Multivector.scalar(other, self.n, self.ring).__sub__(self)

    def __mul__(self, other):
        if not isinstance(other, Multivector):
            c = _coerce(other, self.ring)
            return Multivector._new({m: c * v for m, v in self.terms.items()},
                                    self.n, self.ring)
        self._check(other)
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                sign, mask = blade_mul(ma, mb)
                prod = ca * cb
                out[mask] = out.get(mask, 0) + (prod if sign > 0 else -prod)
        return Multivector._new(out, self.n, self.ring)

    def __rmul__(self, other):
        # scalars commute with everything
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, Multivector):
            raise AlgebraError("division only by scalars")
        c = _coerce(other, self.ring)
        return Multivector._new({m: v / c for m, v in self.terms.items()},
                                self.n, self.ring)

    def __xor__(self, other):
        return self.wedge(other)

    def __invert__(self):
        return self.reverse()

    def wedge(self, other: "Multivector") -> "Multivector":
        """Exterior product: grade-selected part of the geometric product.

        On blades this is the product when the factor sets are disjoint and
        zero otherwise, which reproduces u ^ w = (uw - wu)/2 on vectors.
        """
        self._check(other)
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                sign, mask = blade_mul(ma, mb)
                prod = ca * cb
                out[mask] = out.get(mask, 0) + (prod if sign > 0 else -prod)
        return Multivector._new(out, self.n, self.ring)

    def reverse(self) -> "Multivector":
        """Reversal of factor order: grade k picks up (-1)^(k(k-1)/2)."""
        out = {}
        for mask, c in self.terms.items():
            k = mask.bit_count()
            out[mask] = -c if (k * (k - 1) // 2) & 1 else c
        return Multivector._new(out, self.n, self.ring)

    def involute(self) -> "Multivector":
        """Main automorphism: grade k picks up (-1)^k."""
        out = {}
        for mask, c in self.terms.items():
            out[mask] = -c if mask.bit_count() & 1 else c
        return Multivector._new(out, self.n, self.ring)

    def grade(self, k: int) -> "Multivector":
        if not 0 <= k <= self.n:
            raise AlgebraError(f"grade {k} outside 0..{self.n}")
        return Multivector._new(
            {m: c for m, c in self.terms.items() if m.bit_count() == k},
            self.n, self.ring)

    def grades(self):
        return sorted({m.bit_count() for m in self.terms})

    def scalar_part(self):
        return self.terms.get(0, _coerce(0, self.ring))

    def blade_inner(self, other: "Multivector"):
        """Frobenius pairing: sum over blades of the coefficient products."""
        self._check(other)
        a, b = self.terms, other.terms
        if len(b) < len(a):
            a, b = b, a
        return sum((c * b[m] for m, c in a.items() if m in b),
                   _coerce(0, self.ring))

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(sum(float(c) * float(c) for c in self.terms.values())) ** 0.5

    def approx_eq(self, other: "Multivector", tol: float = 1e-9) -> bool:
        return (self - other).norm() <= tol

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            if self.terms and (len(self.terms) > 1 or 0 not in self.terms):
                return False
            return self.scalar_part() == _coerce(other, self.ring)
        return (self.n, self.ring, self.terms) == (other.n, other.ring, other.terms)

    def __hash__(self):
        return hash((self.n, self.ring, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Multivector({format_multivector(self)!r}, n={self.n}, ring={self.ring!r})"

    def __str__(self):
        return format_multivector(self)


# --- spec-level operation aliases ----------------------------------------

def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def wedge(a: Multivector, b: Multivector) -> Multivector:
    return a.wedge(b)


def grade_involution(a: Multivector) -> Multivector:
    return a.involute()


def reversion(a: Multivector) -> Multivector:
    return a.reverse()


def grade_project(a: Multivector, k: int) -> Multivector:
    return a.grade(k)


def blade_inner(a: Multivector, b: Multivector):
    return a.blade_inner(b)


# --- text format ----------------------------------------------------------

def _format_coeff(c, ring) -> str:
    if ring == EXACT:
        return str(c)
    r = repr(c)
    if "e" in r or "E" in r:
        # keep the blade grammar unambiguous: no scientific notation
        r = format(c, ".20f").rstrip("0").rstrip(".")
    return r


def format_multivector(a: Multivector) -> str:
    """Canonical text form: terms sorted by grade then mask, e.g. '1 + 3/2*e13'."""
    if not a.terms:
        return "0"
    parts = []
    for mask in sorted(a.terms, key=lambda m: (m.bit_count(), m)):
        c = a.terms[mask]
        neg = c < 0
        mag = -c if neg else c
        if mask == 0:
            body = _format_coeff(mag, a.ring)
        else:
            idx = indices_from_mask(mask)
            if any(i > 9 for i in idx):
                raise AlgebraError("text format supports generator indices 1..9 only")
            blade = "e" + "".join(str(i) for i in idx)
            body = blade if mag == 1 else f"{_format_coeff(mag, a.ring)}*{blade}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def parse_multivector(text: str, n: int = 8, ring: str = EXACT) -> Multivector:
    """Parse the term grammar 'coeff*e<digits>' with strictly increasing digits.

    Examples: 'e1', '-1/2*e1357', '3/2*e13 - e2478 + 1'.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty multivector text")
    # split into signed terms
    chunks = re.findall(r"([+-]?)\s*([^+\-\s][^+-]*)", s)
    if not chunks or "".join(sign + body for sign, body in chunks).replace(" ", "") \
            != s.replace(" ", ""):
        raise ParseError(f"malformed multivector text {text!r}")
    terms: dict[int, object] = {}
    for sign, body in chunks:
        m = _TERM_RE.match(body.strip())
        if not m or (m.group("coeff") is None and m.group("blade") is None):
            raise ParseError(f"malformed term {body.strip()!r}")
        if (m.group("star") is not None) != (
                m.group("coeff") is not None and m.group("blade") is not None):
            raise ParseError(f"malformed term {body.strip()!r}")
        coeff = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
        if sign == "-":
            coeff = -coeff
        mask = 0
        if m.group("blade"):
            digits = m.group("blade")[1:]
            prev = 0
            for d in digits:
                i = int(d)
                if i == 0 or i <= prev:
                    raise ParseError(
                        f"blade indices must be strictly increasing in {body.strip()!r}")
                if i > n:
                    raise ParseError(f"generator index {i} exceeds n={n}")
                prev = i
                mask |= 1 << (i - 1)
        terms[mask] = terms.get(mask, Fraction(0)) + coeff
    return Multivector(terms, n=n, ring=ring)
