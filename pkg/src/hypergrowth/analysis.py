"""Isoperimetric ratios, golden-ratio asymptotics and continuum comparisons.

Every inequality here is decided with exact integer arithmetic. Real numbers
(mpmath ``mpf``) appear only in limits, eigenvalues and the continuum
hyperbolic quantities, at a configurable working precision in decimal digits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import InvalidN, InvalidRadius, PrecisionExhausted
from .recurrence import area_closed, fibonacci, perimeter_closed, transfer_matrix

DEFAULT_PRECISION = 50

ExactRatio = Fraction


def ratio_json(q: Fraction, digits: int = 20) -> dict[str, str]:
    with mpmath.workdps(digits + 5):
        dec = mpmath.nstr(mpmath.mpf(q.numerator) / q.denominator, digits)
    return {"num": str(q.numerator), "den": str(q.denominator), "decimal": dec}


def real_json(x, digits: int) -> dict:
    return {"value": mpmath.nstr(x, digits), "precision": digits}


@dataclass(frozen=True)
class GoldenConstants:
    phi: mpmath.mpf
    psi: mpmath.mpf
    sqrt5: mpmath.mpf
    precision: int


def golden_constants(precision: int = DEFAULT_PRECISION) -> GoldenConstants:
    with mpmath.workdps(precision + 10):
        s5 = mpmath.sqrt(5)
        return GoldenConstants((1 + s5) / 2, (1 - s5) / 2, s5, precision)


# -- isoperimetry of D_7(r) -------------------------------------------------


def iso_ratio(r: int) -> Fraction:
    """A(r)/P(r) for D_7(r), reduced."""
    if r < 1:
        raise InvalidRadius(f"r must be >= 1, got {r}")
    return Fraction(area_closed(r), perimeter_closed(r))


@dataclass(frozen=True)
class BoundEntry:
    r: int
    ratio: Fraction
    holds: bool


@dataclass(frozen=True)
class IsoBoundReport:
    bound: int
    entries: tuple[BoundEntry, ...]

    @property
    def all_pass(self) -> bool:
        return all(e.holds for e in self.entries)

    @property
    def max_ratio(self) -> Fraction:
        return max(e.ratio for e in self.entries)

    @property
    def monotone(self) -> bool:
        # Observed, not asserted anywhere.
        rs = [e.ratio for e in self.entries]
        return all(a <= b for a, b in zip(rs, rs[1:]))

    def as_dict(self) -> dict:
        return {
            "bound": self.bound,
            "all_pass": self.all_pass,
            "max_ratio": ratio_json(self.max_ratio),
            "monotone_observed": self.monotone,
            "entries": [
                {"r": e.r, "ratio": ratio_json(e.ratio), "holds": e.holds} for e in self.entries
            ],
        }


def iso_bound_check(r_max: int, bound: int = 7) -> IsoBoundReport:
    """Check ``bound * P(r) >= A(r)`` for r = 1..r_max by cross-multiplication."""
    if r_max < 1:
        raise InvalidRadius(f"r_max must be >= 1, got {r_max}")
    entries = []
    for r in range(1, r_max + 1):
        a, p = area_closed(r), perimeter_closed(r)
        entries.append(BoundEntry(r, Fraction(a, p), bound * p >= a))
    return IsoBoundReport(bound, tuple(entries))


def iso_limit_estimate(r: int, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """iso_ratio(r) as a real; tends to sqrt(5) as r grows."""
    q = iso_ratio(r)
    with mpmath.workdps(precision):
        return mpmath.mpf(q.numerator) / q.denominator


def limit_identity(precision: int = DEFAULT_PRECISION) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Return (4/phi**2 + 3/phi**3, sqrt(5))."""
    g = golden_constants(precision)
    with mpmath.workdps(precision):
        return 4 / g.phi**2 + 3 / g.phi**3, +g.sqrt5


# -- growth rates ------------------------------------------------------------


def growth_rate(n: int, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Spectral radius of the n-th transfer matrix.

    The matrix has determinant 1 and trace n-4, so the dominant root of
    x**2 - (n-4) x + 1 is returned. n = 6 gives 1 (linear growth).
    """
    if n < 6:
        raise InvalidN(f"growth rate needs n >= 6, got {n}")
    m = transfer_matrix(n)
    tr, det = m.trace, m.determinant
    with mpmath.workdps(precision):
        disc = mpmath.mpf(tr * tr - 4 * det)
        return (tr + mpmath.sqrt(disc)) / 2


def growth_regime(n: int) -> str:
    if n < 6:
        raise InvalidN(f"growth regime needs n >= 6, got {n}")
    return "polynomial" if n == 6 else "exponential"


# -- Binet ---------------------------------------------------------------------


@dataclass(frozen=True)
class BinetEntry:
    r: int
    exact: int
    approx: mpmath.mpf
    rounded: int

    @property
    def matches(self) -> bool:
        return self.rounded == self.exact


@dataclass(frozen=True)
class BinetReport:
    precision: int
    entries: tuple[BinetEntry, ...]
    denominator: str = "phi - psi = sqrt(5)"

    @property
    def all_match(self) -> bool:
        return all(e.matches for e in self.entries)

    def as_dict(self) -> dict:
        return {
            "precision": self.precision,
            "denominator": self.denominator,
            "all_match": self.all_match,
            "entries": [
                {"r": e.r, "exact": str(e.exact), "binet": mpmath.nstr(e.approx, 25), "matches": e.matches}
                for e in self.entries
            ],
        }


def binet(r: int, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """(phi**r - psi**r) / (phi - psi)."""
    g = golden_constants(precision)
    with mpmath.workdps(precision):
        return (g.phi**r - g.psi**r) / (g.phi - g.psi)


def binet_check(r_max: int, precision: int = DEFAULT_PRECISION) -> BinetReport:
    if r_max < 1:
        raise InvalidRadius(f"r_max must be >= 1, got {r_max}")
    # F(r) has about r*log10(phi) digits; keep 3 guard digits below the units place.
    needed = math.ceil(r_max * math.log10((1 + math.sqrt(5)) / 2)) + 3
    if needed > precision:
        raise PrecisionExhausted(
            f"Binet evaluation up to r={r_max} needs ~{needed} digits, have {precision}"
        )
    entries = []
    for r in range(1, r_max + 1):
        approx = binet(r, precision)
        entries.append(BinetEntry(r, fibonacci(r), approx, int(mpmath.nint(approx))))
    return BinetReport(precision, tuple(entries))


# -- continuum hyperbolic geometry -----------------------------------------------


class Geometry(enum.Enum):
    HYPERBOLIC = "hyperbolic"
    EUCLIDEAN = "euclidean"


@dataclass(frozen=True)
class ContinuumMetrics:
    n: int
    triangle_angle: mpmath.mpf
    triangle_area: mpmath.mpf
    side_length: mpmath.mpf
    hyperbolic_disk_area_scale: mpmath.mpf
    euclidean_area_scale: mpmath.mpf
    precision: int

    def as_dict(self, digits: int = 20) -> dict:
        d = min(digits, self.precision)
        return {
            "n": self.n,
            "precision": d,
            "triangle_angle": mpmath.nstr(self.triangle_angle, d),
            "triangle_area": mpmath.nstr(self.triangle_area, d),
            "side_length": mpmath.nstr(self.side_length, d),
            "hyperbolic_disk_area_scale": mpmath.nstr(self.hyperbolic_disk_area_scale, d),
            "euclidean_area_scale": mpmath.nstr(self.euclidean_area_scale, d),
        }


def equilateral_side(angle) -> mpmath.mpf:
    """Side of the hyperbolic equilateral triangle with the given angles.

    Angle form of the law of cosines: cosh(side) = cos(a) / (1 - cos(a)).
    """
    c = mpmath.cos(angle)
    return mpmath.acosh(c / (1 - c))


def equilateral_angle(side) -> mpmath.mpf:
    """Inverse of :func:`equilateral_side`, via the side form of the law of cosines."""
    ch, sh = mpmath.cosh(side), mpmath.sinh(side)
    return mpmath.acos((ch * ch - ch) / (sh * sh))


def continuum_metrics(n: int, precision: int = DEFAULT_PRECISION) -> ContinuumMetrics:
    if n < 7:
        raise InvalidN(f"hyperbolic equilateral triangles need n >= 7, got {n}")
    with mpmath.workdps(precision + 10):
        angle = 2 * mpmath.pi / n
        area = mpmath.pi - 3 * angle
        side = equilateral_side(angle)
        back = equilateral_angle(side)
        if abs(back - angle) > mpmath.mpf(10) ** (-(precision - 5)):
            raise ArithmeticError(f"law of cosines round trip failed for n={n}")
        return ContinuumMetrics(
            n=n,
            triangle_angle=angle,
            triangle_area=area,
            side_length=side,
            hyperbolic_disk_area_scale=area,
            euclidean_area_scale=mpmath.sqrt(3) / 4,
            precision=precision,
        )


def scaled_area(r: int, geometry: Geometry = Geometry.HYPERBOLIC, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Metric area of D_7(r) built from hyperbolic or unit Euclidean triangles."""
    a = area_closed(r)
    with mpmath.workdps(precision):
        scale = mpmath.pi / 7 if geometry is Geometry.HYPERBOLIC else mpmath.sqrt(3) / 4
        return scale * a
