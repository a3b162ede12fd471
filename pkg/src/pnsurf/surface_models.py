"""Numerical classes on rational and ruled surface models.

A model is one of the plane, a Hirzebruch surface F_e, or a P^1-bundle over a
curve of genus q with invariant e, blown up at n general points lying on
distinct fibres. Classes are integer vectors in the fixed basis

    plane:  (H, E_1, ..., E_n)
    ruled:  (C0, f, E_1, ..., E_n)

where C0, f and H denote pullbacks from the base surface.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

PLANE = "plane"
HIRZEBRUCH = "hirzebruch"
RULED = "ruled"
KINDS = (PLANE, HIRZEBRUCH, RULED)


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class DivisorClass:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def _check(self, other: "DivisorClass") -> None:
        if len(self) != len(other):
            raise ModelError(f"class dimensions differ: {len(self)} vs {len(other)}")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self))

    def __mul__(self, k: int) -> "DivisorClass":
        if not isinstance(k, int):
            return NotImplemented
        return DivisorClass(tuple(k * a for a in self))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class SurfaceModel:
    """Blow-up of the plane or of a P^1-bundle at ``n_blowups`` general points.

    For ``kind == "hirzebruch"`` the base curve is rational (q = 0) and e >= 0.
    For ``kind == "ruled"`` any q >= 0 is allowed and e may be negative, as for
    the indecomposable bundles over an elliptic curve.
    """

    kind: str
    n_blowups: int = 0
    e: int = 0
    q: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelError(f"unknown base kind {self.kind!r}")
        if self.n_blowups < 0:
            raise ModelError("n_blowups must be >= 0")
        if self.kind == HIRZEBRUCH:
            if self.e < 0:
                raise ModelError("Hirzebruch surface needs e >= 0")
            if self.q != 0:
                raise ModelError("Hirzebruch surface has rational base (q = 0)")
        if self.kind == RULED and self.q < 0:
            raise ModelError("base genus q must be >= 0")
        if self.kind == PLANE and (self.e or self.q):
            raise ModelError("plane takes no e or q parameter")

    @property
    def is_ruled(self) -> bool:
        return self.kind != PLANE

    @property
    def base_rank(self) -> int:
        return 1 if self.kind == PLANE else 2

    @property
    def rank(self) -> int:
        return self.base_rank + self.n_blowups

    @property
    def basis_names(self) -> tuple[str, ...]:
        base = ("H",) if self.kind == PLANE else ("C0", "f")
        return base + tuple(f"E{i}" for i in range(1, self.n_blowups + 1))

    @cached_property
    def base_gram(self) -> tuple[tuple[int, ...], ...]:
        if self.kind == PLANE:
            return ((1,),)
        return ((-self.e, 1), (1, 0))

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        r, b = self.rank, self.base_rank
        rows = [[0] * r for _ in range(r)]
        for i in range(b):
            for j in range(b):
                rows[i][j] = self.base_gram[i][j]
        for i in range(b, r):
            rows[i][i] = -1
        return tuple(tuple(row) for row in rows)

    # class constructors -------------------------------------------------

    def divisor(self, coeffs: Iterable[int]) -> DivisorClass:
        D = DivisorClass(tuple(coeffs))
        if len(D) != self.rank:
            raise ModelError(f"expected {self.rank} coefficients, got {len(D)}")
        return D

    def zero(self) -> DivisorClass:
        return DivisorClass((0,) * self.rank)

    def basis(self, i: int) -> DivisorClass:
        v = [0] * self.rank
        v[i] = 1
        return DivisorClass(tuple(v))

    def H(self) -> DivisorClass:
        if self.kind != PLANE:
            raise ModelError("H is only defined on the plane")
        return self.basis(0)

    def C0(self) -> DivisorClass:
        if self.kind == PLANE:
            raise ModelError("C0 is only defined on ruled bases")
        return self.basis(0)

    def f(self) -> DivisorClass:
        if self.kind == PLANE:
            raise ModelError("f is only defined on ruled bases")
        return self.basis(1)

    def E(self, i: int) -> DivisorClass:
        """Exceptional curve E_i, 1-based."""
        if not 1 <= i <= self.n_blowups:
            raise ModelError(f"no exceptional curve E{i}")
        return self.basis(self.base_rank + i - 1)

    def E_sum(self) -> DivisorClass:
        D = self.zero()
        for i in range(1, self.n_blowups + 1):
            D = D + self.E(i)
        return D

    def pullback(self, *base_coeffs: int, mults: Sequence[int] | int = 0) -> DivisorClass:
        """Class ``sum base_coeffs * base - sum mults_i E_i``.

        ``mults`` may be a single int, applied to every exceptional curve.
        """
        if len(base_coeffs) != self.base_rank:
            raise ModelError(f"expected {self.base_rank} base coefficients")
        if isinstance(mults, int):
            mults = [mults] * self.n_blowups
        if len(mults) != self.n_blowups:
            raise ModelError(f"expected {self.n_blowups} multiplicities")
        return self.divisor(list(base_coeffs) + [-m for m in mults])

    # serialization ------------------------------------------------------

    def to_json(self) -> dict:
        base: dict = {"kind": self.kind}
        if self.kind != PLANE:
            base["e"] = self.e
        if self.kind == RULED:
            base["q"] = self.q
        return {"base": base, "blowups": self.n_blowups}

    def __str__(self) -> str:
        if self.kind == PLANE:
            name = "P2"
        elif self.kind == HIRZEBRUCH:
            name = f"F_{self.e}"
        else:
            name = f"Ruled(q={self.q}, e={self.e})"
        return f"Bl_{self.n_blowups} {name}" if self.n_blowups else name


def build_model(spec: dict) -> SurfaceModel:
    """Build a model from ``{"base": {"kind": ..., "e": ..., "q": ...}, "blowups": n}``."""
    try:
        base = spec["base"]
        kind = base["kind"]
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed surface spec: {spec!r}") from exc
    n = int(spec.get("blowups", 0))
    if kind == PLANE:
        return SurfaceModel(PLANE, n)
    if kind == HIRZEBRUCH:
        return SurfaceModel(HIRZEBRUCH, n, e=int(base.get("e", 0)))
    if kind == RULED:
        return SurfaceModel(RULED, n, e=int(base.get("e", 0)), q=int(base.get("q", 0)))
    raise ModelError(f"unknown base kind {kind!r}")


def format_class(model: SurfaceModel, D: DivisorClass) -> str:
    terms = []
    for c, name in zip(D, model.basis_names):
        if c == 0:
            continue
        if c == 1:
            t = name
        elif c == -1:
            t = f"-{name}"
        else:
            t = f"{c}{name}"
        terms.append(t)
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def intersect(model: SurfaceModel, D1: DivisorClass, D2: DivisorClass) -> int:
    if len(D1) != model.rank or len(D2) != model.rank:
        raise ModelError(
            f"class dimension does not match model rank {model.rank}: {len(D1)}, {len(D2)}"
        )
    G = model.gram
    total = 0
    b = model.base_rank
    for i in range(b):
        if D1[i] == 0:
            continue
        for j in range(b):
            total += D1[i] * G[i][j] * D2[j]
    for i in range(b, model.rank):
        total -= D1[i] * D2[i]
    return total


def self_intersection(model: SurfaceModel, D: DivisorClass) -> int:
    return intersect(model, D, D)


def canonical_class(model: SurfaceModel) -> DivisorClass:
    """K = -3H + sum E_i on the plane, -2C0 + (2q - 2 - e) f + sum E_i on ruled bases."""
    if model.kind == PLANE:
        base = [-3]
    else:
        base = [-2, 2 * model.q - 2 - model.e]
    return model.divisor(base + [1] * model.n_blowups)


def model_invariants(model: SurfaceModel) -> tuple[int, int, int]:
    """Return ``(chi(O), K^2, c2)``."""
    if model.kind == PLANE:
        chi, c2 = 1, 3
    else:
        chi, c2 = 1 - model.q, 4 * (1 - model.q)
    c2 += model.n_blowups
    K = canonical_class(model)
    K2 = intersect(model, K, K)
    if 12 * chi != K2 + c2:
        raise ModelError(f"Noether formula fails on {model}: 12*{chi} != {K2} + {c2}")
    return chi, K2, c2


def nef_generators(model: SurfaceModel) -> tuple[DivisorClass, ...]:
    """Pullbacks of generators of the nef cone of the base surface.

    Plane: H. Ruled with e >= 0: f and C0 + e f. Ruled with e < 0 (char 0): f and
    2 C0 + e f.
    """
    if model.kind == PLANE:
        return (model.H(),)
    f = model.f()
    if model.e >= 0:
        return (f, model.C0() + model.e * f)
    return (f, 2 * model.C0() + model.e * f)
