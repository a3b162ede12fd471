"""Chow rings of the blow-up of a rank-4 or rank-5 quadric cone in P^5.

The multiplication tables are read from ``data/cone_rank{4,5}.json``. Grades
are codimensions in the fourfold: 1 divisors, 2 surfaces, 3 curves, 4 points.
Loading verifies the checksum, symmetry, associativity on every basis triple,
the defining products (p1 = tau.P1, ...) and the stored Chern data.
"""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping

TOP = 4


class ConeRingError(ValueError):
    pass


def _checksum(doc: Mapping) -> str:
    core = {"basis": doc["basis"], "products": doc["products"]}
    return hashlib.sha256(json.dumps(core, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


@dataclass(frozen=True)
class CycleClass:
    ring: "ConeRing"
    grade: int
    coeffs: tuple[int, ...]

    def __add__(self, other: "CycleClass") -> "CycleClass":
        self._compatible(other)
        return CycleClass(self.ring, self.grade, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CycleClass") -> "CycleClass":
        return self + (-1) * other

    def __rmul__(self, k: int) -> "CycleClass":
        return CycleClass(self.ring, self.grade, tuple(k * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        return cycle_mul(self, other)

    def _compatible(self, other: "CycleClass") -> None:
        if other.ring is not self.ring or other.grade != self.grade:
            raise ConeRingError("cycles live in different groups")

    def degree(self) -> int:
        if self.grade != TOP:
            raise ConeRingError("degree is defined for 0-cycles only")
        return self.coeffs[0]

    def as_dict(self) -> dict[str, int]:
        names = self.ring.basis[self.grade]
        return {n: c for n, c in zip(names, self.coeffs) if c}

    def __repr__(self) -> str:
        return f"CycleClass(rank={self.ring.rank}, grade={self.grade}, {self.as_dict()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycleClass):
            return NotImplemented
        return self.ring is other.ring and self.grade == other.grade and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ring.rank, self.grade, self.coeffs))


class ConeRing:
    def __init__(self, doc: Mapping):
        if doc.get("checksum") != _checksum(doc):
            raise ConeRingError(f"checksum mismatch in rank-{doc.get('rank')} table")
        self.rank: int = doc["rank"]
        self.basis: dict[int, tuple[str, ...]] = {int(k): tuple(v) for k, v in doc["basis"].items()}
        self.display_names: dict[str, str] = dict(doc.get("display_names", {}))
        self.grade_of: dict[str, int] = {}
        for g, names in self.basis.items():
            for n in names:
                if n in self.grade_of:
                    raise ConeRingError(f"basis name {n!r} used twice")
                self.grade_of[n] = g
        self.ambiguous: list[dict] = []
        self._table: dict[tuple[str, str], dict[str, int]] = {}
        for entry in doc["products"]:
            a, b, val = entry["left"], entry["right"], entry["value"]
            target = self.grade_of[a] + self.grade_of[b]
            for n in val:
                if self.grade_of.get(n) != target:
                    raise ConeRingError(f"{a}.{b} = {val} has the wrong grade")
            for key in ((a, b), (b, a)):
                if key in self._table and self._table[key] != val:
                    raise ConeRingError(f"conflicting entries for {a}.{b}")
                self._table[key] = dict(val)
            if entry.get("status") == "AMBIGUOUS":
                self.ambiguous.append(dict(entry))
        self._doc = doc
        self._verify()

    # construction ---------------------------------------------------------

    def gen(self, name: str) -> CycleClass:
        g = self.grade_of[name]
        return CycleClass(self, g, tuple(int(n == name) for n in self.basis[g]))

    def cycle(self, grade: int, coeffs: Mapping[str, int] | Iterable[int]) -> CycleClass:
        names = self.basis[grade]
        if isinstance(coeffs, Mapping):
            unknown = set(coeffs) - set(names)
            if unknown:
                raise ConeRingError(f"not in grade {grade}: {sorted(unknown)}")
            vec = tuple(int(coeffs.get(n, 0)) for n in names)
        else:
            vec = tuple(int(c) for c in coeffs)
            if len(vec) != len(names):
                raise ConeRingError(f"grade {grade} has {len(names)} basis elements")
        return CycleClass(self, grade, vec)

    def zero(self, grade: int) -> CycleClass:
        return CycleClass(self, grade, (0,) * len(self.basis[grade]))

    def basis_product(self, a: str, b: str) -> CycleClass:
        g = self.grade_of[a] + self.grade_of[b]
        if g > TOP:
            return self.zero(g) if g in self.basis else None  # type: ignore[return-value]
        return self.cycle(g, self._table.get((a, b), {}))

    # Chern data -------------------------------------------------------------

    def c1(self) -> CycleClass:
        return self.cycle(1, self._doc["chern"]["c1"])

    def T(self) -> CycleClass:
        """Exceptional divisor of the blow-up."""
        return self.cycle(1, self._doc["chern"]["T"])

    def tau(self) -> CycleClass:
        return self.gen("tau")

    def c2(self) -> CycleClass:
        chern = self._doc["chern"]
        if "c2" in chern:
            return self.cycle(2, chern["c2"])
        total = self.zero(2)
        for k, a, b in chern["c2_products"]:
            total = total + k * (self.gen(a) * self.gen(b))
        return total

    # checks -------------------------------------------------------------------

    def _verify(self) -> None:
        names = list(self.grade_of)
        for a, b in itertools.product(names, repeat=2):
            if self.grade_of[a] + self.grade_of[b] <= TOP and (a, b) not in self._table:
                if not self._doc.get("empty_entries_are_zero"):
                    raise ConeRingError(f"missing entry {a}.{b}")
        bad = check_commutativity(self) + check_associativity(self)
        if bad:
            raise ConeRingError(f"rank-{self.rank} table fails ring axioms: {bad[:3]}")
        for target, a, b in self._doc.get("definitions", []):
            if self.gen(a) * self.gen(b) != self.gen(target):
                raise ConeRingError(f"table does not reproduce {target} = {a}.{b}")
        tau = self.tau()
        if self.rank == 4 and self.c1() != 4 * tau - self.T():
            raise ConeRingError("c1 != 4 tau - T")
        if self.rank == 5 and self.c1() != 2 * (tau + self.gen("Z")):
            raise ConeRingError("c1 != 2(tau + Z)")
        if (self.T() * tau * tau * tau).degree() != 0:
            raise ConeRingError("exceptional divisor is not contracted by tau")

    def display(self, name: str) -> str:
        return self.display_names.get(name, name)


def check_commutativity(ring: ConeRing) -> list[tuple[str, str]]:
    bad = []
    for a, b in itertools.combinations_with_replacement(ring.grade_of, 2):
        if ring.grade_of[a] + ring.grade_of[b] > TOP:
            continue
        if ring.basis_product(a, b) != ring.basis_product(b, a):
            bad.append((a, b))
    return bad


def check_associativity(ring: ConeRing) -> list[tuple[str, str, str]]:
    bad = []
    for a, b, c in itertools.product(ring.grade_of, repeat=3):
        if ring.grade_of[a] + ring.grade_of[b] + ring.grade_of[c] > TOP:
            continue
        x, y, z = ring.gen(a), ring.gen(b), ring.gen(c)
        if (x * y) * z != x * (y * z):
            bad.append((a, b, c))
    return bad


@lru_cache(maxsize=None)
def cone_ring(rank: int) -> ConeRing:
    if rank not in (4, 5):
        raise ConeRingError(f"no Chow ring table for rank {rank} (supported: 4, 5)")
    text = resources.files("pnsurf").joinpath(f"data/cone_rank{rank}.json").read_text(encoding="utf-8")
    return ConeRing(json.loads(text))


def cycle_mul(x: CycleClass, y: CycleClass) -> CycleClass:
    if x.ring is not y.ring:
        raise ConeRingError("cycles from different rings")
    ring = x.ring
    g = x.grade + y.grade
    if g > TOP:
        raise ConeRingError(f"grade overflow: {x.grade} + {y.grade} > {TOP}")
    out = [0] * len(ring.basis[g])
    for a, ca in zip(ring.basis[x.grade], x.coeffs):
        if not ca:
            continue
        for b, cb in zip(ring.basis[y.grade], y.coeffs):
            if not cb:
                continue
            prod = ring.basis_product(a, b)
            for i, v in enumerate(prod.coeffs):
                out[i] += ca * cb * v
    return CycleClass(ring, g, tuple(out))


# -- surfaces inside the cone ---------------------------------------------------

@dataclass(frozen=True)
class C1Restriction:
    """Value of c1(cone)|_S' . c1(S') for one configuration, with its derivation."""

    value: int
    derivation: str


def c1_restriction_point(LK: int, E2: int = -1) -> C1Restriction:
    """Rank 5, vertex a smooth point of S: c1|S' = 2(2L - E), c1(S') = -K_S - E."""
    return C1Restriction(-4 * LK + 2 * E2, f"2(2L-E).(-K_S-E) with L.K={LK}, E^2={E2}")


def c1_restriction_line(LK: int, delta: int, rK: int = -1) -> C1Restriction:
    """Rank 4, vertex line r in S with T|S' = delta r: c1|S' = 4L - delta r, c1(S') = -K."""
    return C1Restriction(-4 * LK + delta * rK, f"(4L-{delta}r).(-K) with L.K={LK}, r.K={rK}")


def c1_restriction_points(LK: int, s: int) -> C1Restriction:
    """Rank 4, S meets the vertex line transversally in s points, S' = Bl_s S."""
    return C1Restriction(-4 * LK - s, f"(4L-sum E_j).(-K_S-sum E_j) with L.K={LK}, s={s}")


def dpf_residual(
    ring: ConeRing,
    S_class: CycleClass,
    K2_Sprime: int,
    c2_Sprime: int,
    c1_restriction: C1Restriction | int,
) -> int:
    """c2(cone)|S' - (S'.S' + c1(cone)|S'.c1(S') - K_S'^2 + c2(S')).

    Zero means the Chern relation is satisfied; any other value excludes the
    configuration.
    """
    if S_class.ring is not ring or S_class.grade != 2:
        raise ConeRingError("S' must be a surface class in the given ring")
    value = c1_restriction.value if isinstance(c1_restriction, C1Restriction) else int(c1_restriction)
    lhs = (ring.c2() * S_class).degree()
    rhs = (S_class * S_class).degree() + value - K2_Sprime + c2_Sprime
    return lhs - rhs


@dataclass(frozen=True)
class VertexConfig:
    """How the surface meets the vertex: ``disjoint``, ``meets`` (total multiplicity s) or ``contains_line``."""

    kind: str
    s: int | None = None

    def __post_init__(self):
        if self.kind not in ("disjoint", "meets", "contains_line"):
            raise ValueError(f"unknown vertex configuration {self.kind!r}")


@dataclass(frozen=True)
class ConeSolution:
    rank: int
    coeffs: tuple[int, ...]  # (alpha, beta) for rank 5, (alpha, beta, gamma, delta) for rank 4
    config: str

    @property
    def key(self) -> tuple[int, ...]:
        """(alpha, beta) for rank 5; (alpha, delta, beta+gamma) or (alpha, s) for rank 4."""
        if self.rank == 5:
            return self.coeffs
        a, b, g, d = self.coeffs
        if self.config == "contains_line":
            return (a, d, b + g)
        if self.config == "meets":
            return (a, b + g)
        return (a, b + g, d)

    def cycle(self) -> CycleClass:
        ring = cone_ring(self.rank)
        names = ring.basis[2]
        if self.rank == 5:
            return ring.cycle(2, dict(zip(names, self.coeffs)))
        a, b, g, d = self.coeffs
        return ring.cycle(2, {"Q": a, "p1": b, "p2": g, "F": d})


def surface_class(ring: ConeRing, *coeffs: int) -> CycleClass:
    return ring.cycle(2, coeffs)


def enumerate_cone_classes(ring: ConeRing, degree: int, config: VertexConfig) -> list[ConeSolution]:
    """Surface classes of the given degree compatible with the vertex configuration.

    All relations are evaluated through the multiplication table:
    deg = tau^2.S', tau.T.S' = delta (line in S) or 0, and T^2.S' = -delta^2,
    -s or 0. Rank 4 uses the effectivity bounds alpha, alpha+beta, alpha+gamma
    >= 0, and alpha >= 2 when the vertex meets S in points.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    tau, T = ring.tau(), ring.T()
    tt, tT, TT = tau * tau, tau * T, T * T
    out: list[ConeSolution] = []

    def values(S: CycleClass) -> tuple[int, int, int]:
        return (tt * S).degree(), (tT * S).degree(), (TT * S).degree()

    if ring.rank == 5:
        if config.kind == "contains_line":
            raise ValueError("the rank-5 cone has a point vertex")
        for a in range(0, degree + 1):
            for b in range(0, degree + 1):
                S = surface_class(ring, a, b)
                dg, _, t2 = values(S)
                if dg != degree:
                    continue
                if config.kind == "disjoint" and t2 != 0:
                    continue
                if config.kind == "meets":
                    if t2 >= 0 or (config.s is not None and -t2 != config.s):
                        continue
                out.append(ConeSolution(5, (a, b), config.kind))
        return out

    for a in range(0, degree + 1):
        for d in range(0, degree + 1):
            for b in range(-a, degree - a - d + 1):
                g = degree - 2 * a - b - d
                if a + g < 0:
                    continue
                S = surface_class(ring, a, b, g, d)
                dg, tl, t2 = values(S)
                if dg != degree:
                    continue
                if config.kind == "contains_line":
                    if tl < 1 or t2 != -tl * tl:
                        continue
                elif config.kind == "disjoint":
                    if tl != 0 or t2 != 0:
                        continue
                else:
                    s = -t2
                    if tl != 0 or s < 1 or a < 2:
                        continue
                    if config.s is not None and s != config.s:
                        continue
                out.append(ConeSolution(4, (a, b, g, d), config.kind))
    return out


def admissible_keys(solutions: Iterable[ConeSolution]) -> list[tuple[int, ...]]:
    return sorted({s.key for s in solutions}, reverse=True)


@dataclass(frozen=True)
class ResidualRow:
    solution: ConeSolution
    residual: int
    derivation: str

    def to_json(self) -> dict:
        return {
            "coeffs": list(self.solution.coeffs),
            "config": self.solution.config,
            "residual": self.residual,
            "derivation": self.derivation,
        }


def chern_exclusion(rank: int, degree: int, LK: int, K2: int, c2: int) -> list[ResidualRow]:
    """Chern residual of every admissible cone class for a surface with (L.K, K^2, c2).

    Rank 5: the vertex is a point of S and S' is S blown up once. Rank 4: every
    class that contains the vertex line (S' = S), and every class meeting it in
    s points (S' = Bl_s S).
    """
    ring = cone_ring(rank)
    rows: list[ResidualRow] = []
    if rank == 5:
        for sol in enumerate_cone_classes(ring, degree, VertexConfig("meets", 1)):
            c1r = c1_restriction_point(LK)
            r = dpf_residual(ring, sol.cycle(), K2 - 1, c2 + 1, c1r)
            rows.append(ResidualRow(sol, r, c1r.derivation))
        return rows
    for sol in enumerate_cone_classes(ring, degree, VertexConfig("contains_line")):
        c1r = c1_restriction_line(LK, sol.coeffs[3])
        rows.append(ResidualRow(sol, dpf_residual(ring, sol.cycle(), K2, c2, c1r), c1r.derivation))
    for sol in enumerate_cone_classes(ring, degree, VertexConfig("meets")):
        s = sol.key[1]
        c1r = c1_restriction_points(LK, s)
        rows.append(ResidualRow(sol, dpf_residual(ring, sol.cycle(), K2 - s, c2 + s, c1r), c1r.derivation))
    return rows
