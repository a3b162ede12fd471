"""Degree, genus, Riemann-Roch and the bounds used in the normality criteria.

Everything here is exact integer or ``Fraction`` arithmetic; bounds with an
integer part are floored explicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .surface_models import DivisorClass, SurfaceModel, canonical_class, intersect, model_invariants


class InconsistentData(ValueError):
    """Numerical input that cannot come from an actual curve or surface."""


@dataclass(frozen=True)
class CurveBundleData:
    d: int
    g: int
    h0: int
    h1: int

    def __post_init__(self):
        if self.g < 0 or self.h0 < 0 or self.h1 < 0:
            raise InconsistentData(f"negative entry in {self}")
        if self.h0 - self.h1 != self.d - self.g + 1:
            raise InconsistentData(f"Riemann-Roch fails for {self}")
        if self.d > 2 * self.g - 2 and self.h1 != 0:
            raise InconsistentData(f"non-special degree with h1 > 0: {self}")


# -- surfaces ----------------------------------------------------------------

def degree(model: SurfaceModel, L: DivisorClass) -> int:
    return intersect(model, L, L)


def sectional_genus(model: SurfaceModel, L: DivisorClass) -> int:
    K = canonical_class(model)
    twice = intersect(model, L, K + L)
    assert twice % 2 == 0, "adjunction parity violated"
    return 1 + twice // 2


def arithmetic_genus(model: SurfaceModel, D: DivisorClass) -> int:
    K = canonical_class(model)
    twice = intersect(model, D, D) + intersect(model, D, K)
    assert twice % 2 == 0, "adjunction parity violated"
    return 1 + twice // 2


def chi_line_bundle(model: SurfaceModel, D: DivisorClass) -> int:
    """Surface Riemann-Roch: chi(D) = chi(O) + D.(D - K)/2."""
    chi = model_invariants(model)[0]
    K = canonical_class(model)
    twice = intersect(model, D, D - K)
    assert twice % 2 == 0
    return chi + twice // 2


def chi_multiple(chi_O: int, d: int, LK: int, t: int) -> int:
    """chi(tL) from numbers alone: chi(O) + (t^2 d - t L.K)/2."""
    twice = t * t * d - t * LK
    if twice % 2:
        raise InconsistentData(f"odd value in Riemann-Roch: d={d}, L.K={LK}, t={t}")
    return chi_O + twice // 2


def canonical_degree_on_section(d: int, g: int) -> int:
    """L.K from adjunction, 2g - 2 = d + L.K."""
    return 2 * g - 2 - d


# -- curves ------------------------------------------------------------------

def curve_rr(d: int, g: int, h1: int) -> int:
    """h0 of a degree-d line bundle on a genus-g curve with the given h1."""
    if g < 0 or h1 < 0:
        raise InconsistentData("g and h1 must be >= 0")
    h0 = d - g + 1 + h1
    if h0 < 0:
        raise InconsistentData(f"negative h0 from (d={d}, g={g}, h1={h1})")
    return h0


def delta_genus(d: int, h0: int) -> int:
    """Delta = 2 + d - h0. Negative values are returned, not rejected."""
    if h0 < 0:
        raise InconsistentData("h0 must be >= 0")
    return 2 + d - h0


def castelnuovo_bound(d: int, N: int) -> int:
    """Castelnuovo's bound on the sectional genus of a degree-d surface in P^N.

    m = [(d-2)/(N-2)],  g <= [ m * (d - N + 1 - (m - 1)(N - 2)/2) ].
    """
    if N < 3:
        raise ValueError("castelnuovo_bound needs N >= 3")
    if d < N - 1:
        raise ValueError(f"a non-degenerate surface in P^{N} has degree >= {N - 1}")
    m = (d - 2) // (N - 2)
    value = m * (Fraction(d - N + 1) - Fraction((m - 1) * (N - 2), 2))
    return math.floor(value)


def plane_curve_genus(d: int) -> int:
    return (d - 1) * (d - 2) // 2


def clifford_index_bundle(d: int, h0: int) -> int:
    if h0 < 1:
        raise ValueError("Clifford index needs h0 >= 1")
    return d - 2 * (h0 - 1)


def clifford_curve_max(g: int) -> int:
    if g < 0:
        raise ValueError("g must be >= 0")
    return max(0, (g - 1) // 2)


@dataclass(frozen=True)
class GenusRange:
    """Allowed sectional genera; ``upper`` set means g <= upper, else ``values``."""

    upper: int | None = None
    values: frozenset[int] = frozenset()
    scope: str = "d=9, h0(L)>=6, not a scroll"

    def __contains__(self, g: int) -> bool:
        if self.upper is not None:
            return g <= self.upper
        return g in self.values

    def describe(self) -> str:
        if self.upper is not None:
            return f"g <= {self.upper}"
        return "g in {" + ", ".join(str(v) for v in sorted(self.values)) + "}"


def genus_range_from_h1(h1_LC: int) -> GenusRange:
    """Sectional genus allowed by h1(L|C) for degree-9 non-scrolls with h0(L) >= 6."""
    if h1_LC < 0:
        raise ValueError("h1 must be >= 0")
    if h1_LC == 0:
        return GenusRange(upper=5)
    if h1_LC == 1:
        return GenusRange(values=frozenset({6, 7}))
    return GenusRange(values=frozenset({7}))


def au_ra_k2(g: int, chi: int) -> int:
    """K^2 = 6 chi - 5 g + 23 for degree-9 surfaces in P^4."""
    return 6 * chi - 5 * g + 23
