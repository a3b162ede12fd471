"""Enumeration of numerical classes of candidate irreducible curves.

A class ``r = v - sum a_i E_i`` (``v`` pulled back from the base) is a
candidate of L-degree ``t`` and arithmetic genus ``p`` if it passes the
necessary conditions in :func:`is_candidate`. The search is complete for that
predicate: the box over ``v`` is closed by a Cauchy-Schwarz argument, and the
multiplicities ``a_i`` are solved exactly from

    sum L.E_i a_i   = L.v - t
    sum a_i(a_i-1)  = v.v + v.K + 2 - 2p.

Realizability of a candidate is not decided.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .invariants import arithmetic_genus
from .surface_models import (
    DivisorClass,
    SurfaceModel,
    canonical_class,
    format_class,
    intersect,
    nef_generators,
)

# hard stop for box scans; reaching it means the region did not close
_SCAN_LIMIT = 100_000


class SearchBoxError(ValueError):
    pass


@dataclass(frozen=True)
class CurveQuery:
    model: SurfaceModel
    L: DivisorClass
    target_degree: int
    target_pa: int
    min_self: int | None = None
    a_max: int | None = None

    def __post_init__(self):
        d = intersect(self.model, self.L, self.L)
        if d <= 0:
            raise SearchBoxError("L^2 must be positive")
        if not 1 <= self.target_degree <= d:
            raise SearchBoxError(f"target degree must lie in [1, {d}]")
        if self.target_pa < 0:
            raise SearchBoxError("target arithmetic genus must be >= 0")


# -- predicate suite -------------------------------------------------------

def _exceptional_index(model: SurfaceModel, r: DivisorClass) -> int | None:
    for i in range(1, model.n_blowups + 1):
        if r == model.E(i):
            return i
    return None


def is_candidate(
    model: SurfaceModel,
    L: DivisorClass,
    r: DivisorClass,
    degree: int,
    pa: int,
    min_self: int | None = None,
) -> bool:
    """Necessary conditions for ``r`` to be an irreducible curve of the given type.

    * r = E_i, or r is a strict transform: leading coefficient a >= 0 (ruled)
      or h >= 1 (plane), all multiplicities a_i >= 0, r != 0;
    * a_i <= r.f on ruled bases (a_i <= h on the plane); a class with r.f = 0
      is a single fibre, through at most one blown-up point;
    * r.N >= 0 for the pulled-back nef generators N of the base;
    * r.E_i >= 0 unless r = E_i;
    * Hodge index: r^2 L^2 <= (L.r)^2.
    """
    if intersect(model, L, r) != degree:
        return False
    if arithmetic_genus(model, r) != pa:
        return False
    r2 = intersect(model, r, r)
    if min_self is not None and r2 < min_self:
        return False
    d = intersect(model, L, L)
    if r2 * d > degree * degree:
        return False
    if _exceptional_index(model, r) is not None:
        return True
    if r.is_zero():
        return False
    b = model.base_rank
    mults = [-c for c in r.coeffs[b:]]
    if any(m < 0 for m in mults):
        return False
    if model.is_ruled:
        a, fib = r[0], r[1]
        if a < 0:
            return False
        if a == 0:
            # an irreducible curve with r.f = 0 is a fibre
            if fib != 1 or sum(mults) > 1:
                return False
        elif max(mults, default=0) > a:
            return False
    else:
        h = r[0]
        if h < 1 or max(mults, default=0) > h:
            return False
    if any(intersect(model, r, N) < 0 for N in nef_generators(model)):
        return False
    return all(intersect(model, r, model.E(i)) >= 0 for i in range(1, model.n_blowups + 1))


# -- multiplicities --------------------------------------------------------

def _multisets(n: int, s1: int, s2: int, cap: int, top: int | None = None) -> Iterator[tuple[int, ...]]:
    """Non-increasing n-tuples in [0, cap] with given sum and sum of squares."""
    if top is None:
        top = cap
    if n == 0:
        if s1 == 0 and s2 == 0:
            yield ()
        return
    if s1 < 0 or s2 < 0 or s1 > n * top or s1 * s1 > n * s2:
        return
    for a in range(min(top, s1), -1, -1):
        if a * a > s2:
            continue
        for rest in _multisets(n - 1, s1 - a, s2 - a * a, cap, a):
            yield (a,) + rest


def solve_multiplicities(s1: int, s2: int, n: int, cap: int) -> list[tuple[int, ...]]:
    """All multisets (a_1..a_n), 0 <= a_i <= cap, with sum s1 and sum of squares s2.

    Each multiset is returned once, as a non-increasing tuple.
    """
    if n < 0 or cap < 0:
        raise ValueError("n and cap must be >= 0")
    if s1 * s1 > n * s2 and n > 0:
        return []
    return sorted(_multisets(n, s1, s2, cap), reverse=True)


def _distinct_permutations(values: Sequence[int]) -> Iterator[tuple[int, ...]]:
    counts = Counter(values)
    keys = sorted(counts)
    n = len(values)

    def rec(prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                prefix.append(k)
                yield from rec(prefix)
                prefix.pop()
                counts[k] += 1

    yield from rec([])


def _multiplicity_vectors(
    weights: Sequence[int], s: int, Q: int, cap: int
) -> Iterator[tuple[int, ...]]:
    """Ordered vectors a with sum w_i a_i = s, sum a_i(a_i - 1) = Q, 0 <= a_i <= cap."""
    groups: dict[int, list[int]] = {}
    for i, w in enumerate(weights):
        groups.setdefault(w, []).append(i)
    group_list = sorted(groups.items())
    n = len(weights)

    def rec(k: int, s_rem: int, q_rem: int) -> Iterator[list[tuple[list[int], tuple[int, ...]]]]:
        if k == len(group_list):
            if s_rem == 0 and q_rem == 0:
                yield []
            return
        w, idx = group_list[k]
        m = len(idx)
        for s1 in range(0, min(m * cap, s_rem // w) + 1):
            for s2 in range(s1, s1 + q_rem + 1):
                for ms in _multisets(m, s1, s2, cap):
                    for tail in rec(k + 1, s_rem - w * s1, q_rem - (s2 - s1)):
                        yield [(idx, ms)] + tail

    for assignment in rec(0, s, Q):
        parts = [list(_distinct_permutations(ms)) for _, ms in assignment]

        def expand(j: int, vec: list[int]) -> Iterator[tuple[int, ...]]:
            if j == len(assignment):
                yield tuple(vec)
                return
            idx = assignment[j][0]
            for perm in parts[j]:
                for pos, val in zip(idx, perm):
                    vec[pos] = val
                yield from expand(j + 1, vec)

        yield from expand(0, [0] * n)


# -- search box ------------------------------------------------------------

def _quadratic_coeffs(fn) -> tuple[Fraction, Fraction, Fraction]:
    f0, f1, f2 = fn(0), fn(1), fn(2)
    A = (f2 - 2 * f1 + f0) / 2
    B = f1 - f0 - A
    return A, B, f0


def _sublevel_interval(fn, lo: int | None = None) -> range:
    """Integer points where the convex quadratic ``fn`` is <= 0 (clipped below at ``lo``)."""
    A, B, C = _quadratic_coeffs(fn)
    if A <= 0:
        raise SearchBoxError("search region is not bounded")
    disc = B * B - 4 * A * C
    if disc < 0:
        return range(0)
    # widen by one on each side and let the exact test decide
    root = math.isqrt(math.floor(disc)) + 1
    left = math.floor((-B - root) / (2 * A)) - 1
    right = math.ceil((-B + root) / (2 * A)) + 1
    while fn(left) <= 0:
        left -= 1
    while fn(right) <= 0:
        right += 1
    if lo is not None:
        left = max(left, lo - 1)
    if right - left > _SCAN_LIMIT:
        raise SearchBoxError("search region too large")
    return range(left + 1, right)


class _Setup:
    def __init__(self, q: CurveQuery):
        m = q.model
        self.model = m
        self.L = q.L
        self.t = q.target_degree
        self.p = q.target_pa
        b = m.base_rank
        self.b = b
        self.weights = [intersect(m, q.L, m.E(i)) for i in range(1, m.n_blowups + 1)]
        if any(w <= 0 for w in self.weights):
            raise SearchBoxError("L.E_i must be positive for every exceptional curve")
        self.L2 = sum(w * w for w in self.weights)
        self.wmin = min(self.weights, default=1)
        self.K = canonical_class(m)

    def base_vec(self, v: Sequence[int]) -> DivisorClass:
        return self.model.divisor(list(v) + [0] * self.model.n_blowups)

    def s_and_Q(self, v: Sequence[int]) -> tuple[int, int]:
        D = self.base_vec(v)
        s = intersect(self.model, self.L, D) - self.t
        Q = intersect(self.model, D, D) + intersect(self.model, D, self.K) + 2 - 2 * self.p
        return s, Q

    def relaxed(self, v: Sequence[int]) -> Fraction:
        s, Q = self.s_and_Q(v)
        return Fraction(s * s, self.L2) - Fraction(s, self.wmin) - Q


def _base_box(st: _Setup, a_max: int | None) -> Iterator[tuple[int, ...]]:
    m = st.model
    if m.n_blowups == 0:
        yield from _base_box_unblown(st, a_max)
        return
    if m.kind == "plane":
        rng = _sublevel_interval(lambda h: st.relaxed((h,)), lo=1)
        for h in rng:
            if a_max is None or h <= a_max:
                yield (h,)
        return

    def min_over_b(a: int) -> Fraction:
        A, B, C = _quadratic_coeffs(lambda b: st.relaxed((a, b)))
        return C - B * B / (4 * A)

    for a in _sublevel_interval(min_over_b, lo=0):
        if a_max is not None and a > a_max:
            break
        for b in _sublevel_interval(lambda b: st.relaxed((a, b))):
            yield (a, b)


def _base_box_unblown(st: _Setup, a_max: int | None) -> Iterator[tuple[int, ...]]:
    m = st.model
    if m.kind == "plane":
        x = st.L[0]
        if x > 0 and st.t % x == 0:
            yield (st.t // x,)
        return
    # write L as a positive combination of the two nef generators; then
    # t = c1 (r.N1) + c2 (r.N2) with both intersections >= 0 bounds a = r.f
    f, N2 = nef_generators(m)
    x = st.L[0]
    n2 = N2[0]
    c2 = Fraction(x, n2)
    c1 = Fraction(st.L[1]) - c2 * N2[1]
    if c1 <= 0 or c2 <= 0:
        raise SearchBoxError("L is not ample on the base; search box does not close")
    top = math.floor(st.t / c1)
    if a_max is not None:
        top = min(top, a_max)
    for a in range(0, top + 1):
        num = st.t - intersect(m, st.L, st.base_vec((a, 0)))
        if num % x == 0:
            yield (a, num // x)


def search_box(q: CurveQuery) -> list[tuple[int, ...]]:
    """Base vectors scanned by :func:`enumerate_curves`."""
    return list(_base_box(_Setup(q), q.a_max))


def enumerate_curves(q: CurveQuery) -> list[DivisorClass]:
    st = _Setup(q)
    m = q.model
    found: set[DivisorClass] = set()
    for i in range(1, m.n_blowups + 1):
        E = m.E(i)
        if is_candidate(m, q.L, E, q.target_degree, q.target_pa, q.min_self):
            found.add(E)
    for v in _base_box(st, q.a_max):
        s, Q = st.s_and_Q(v)
        if s < 0 or Q < 0:
            continue
        if m.is_ruled:
            cap = 1 if v[0] == 0 else v[0]
        else:
            cap = v[0]
        if cap < 0:
            continue
        for mults in _multiplicity_vectors(st.weights, s, Q, cap):
            r = m.divisor(list(v) + [-a for a in mults])
            if is_candidate(m, q.L, r, q.target_degree, q.target_pa, q.min_self):
                found.add(r)
    return sorted(found, key=lambda D: D.coeffs)


@dataclass(frozen=True)
class CurveRecord:
    coeffs: tuple[int, ...]
    label: str
    self_intersection: int
    dot_K: int
    pa: int
    extra: bool = False

    def to_json(self) -> dict:
        return {
            "class": list(self.coeffs),
            "label": self.label,
            "r2": self.self_intersection,
            "rK": self.dot_K,
            "pa": self.pa,
            "extra": self.extra,
        }


def annotate(
    model: SurfaceModel,
    classes: Sequence[DivisorClass],
    expected: Sequence[DivisorClass] | None = None,
) -> list[CurveRecord]:
    """Attach r^2, r.K and p_a; mark classes missing from ``expected`` as extras."""
    K = canonical_class(model)
    known = set(expected) if expected is not None else None
    out = []
    for r in classes:
        out.append(
            CurveRecord(
                coeffs=r.coeffs,
                label=format_class(model, r),
                self_intersection=intersect(model, r, r),
                dot_K=intersect(model, r, K),
                pa=arithmetic_genus(model, r),
                extra=known is not None and r not in known,
            )
        )
    return out
