"""Projective normality of degree-9 surfaces: criteria, profiles and the classifier.

Each rule in :data:`REGISTRY` is either *computed* (the engine evaluates it
from the profile numbers) or an *axiom*, a fact imported from the literature
that the engine cites but does not prove. A verdict carries the ordered trail
of every rule that was evaluated.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from math import comb
from typing import NamedTuple

from .invariants import (
    au_ra_k2,
    canonical_degree_on_section,
    castelnuovo_bound,
    chi_line_bundle,
    chi_multiple,
    clifford_curve_max,
    curve_rr,
    degree,
    delta_genus,
    genus_range_from_h1,
    plane_curve_genus,
    sectional_genus,
)
from .surface_models import (
    DivisorClass,
    SurfaceModel,
    build_model,
    canonical_class,
    format_class,
    intersect,
    model_invariants,
)

COMPUTED = "computed"
AXIOM = "axiom"
SKIPPED = "skipped"


@dataclass(frozen=True)
class Rule:
    id: str
    anchor: str
    kind: str


def _r(id: str, anchor: str, kind: str = COMPUTED) -> tuple[str, Rule]:
    return id, Rule(id, anchor, kind)


REGISTRY: dict[str, Rule] = dict(
    [
        # bookkeeping
        _r("degree", "d = L^2 on the given lattice"),
        _r("sectional-genus", "2g - 2 = L.(K + L)"),
        _r("delta-genus", "Delta = 2 + d - h0(L)"),
        _r("castelnuovo", "Castelnuovo bound on the sectional genus"),
        _r("not-evaluable", "criterion skipped: missing profile data", SKIPPED),
        _r("structure", "conic bundle when (K + L).f = 0, scroll when L.f = 1"),
        _r("h1-from-rr", "h1(L) = h0(L) - chi(L) when (K - L).L < 0 forces h2(L) = 0"),
        _r("linear-normality", "1-normality: h0(L) = N + 1"),
        # general criteria
        _r("codim-one", "hypersurfaces are projectively normal"),
        _r("fujita-ladder", "Fujita: ladder regular when g >= Delta and d >= 2 Delta - 1"),
        _r("fujita-normal", "Fujita: normally generated when g >= Delta and d >= 2 Delta + 1"),
        _r("section-rr", "Riemann-Roch on a smooth hyperplane section"),
        _r("h1-section-genus", "h1(L|C) restricts the sectional genus (d = 9, h0 >= 6, non-scroll)"),
        _r("clifford-max", "cl(C) <= [(g - 1)/2]"),
        _r("green-lazarsfeld", "Green-Lazarsfeld: d >= 2g + 1 - 2 h1 - cl(C) gives normal generation"),
        _r("hyperelliptic-block", "hyperelliptic curves carry no normally generated bundle of degree <= 2g"),
        _r("two-normal-suffices", "degree >= g + 1: normal generation iff 2-normality"),
        _r("quadric-deficit", "h0(O_P^N(2)) - h0(O_S(2))"),
        _r("chi-2L", "h0(2L) = chi(2L) under vanishing of h1(2L), h2(2L)"),
        # degree 9, h0 >= 6
        _r("low-delta-genus", "g = 0 forces Delta = 0; g = 1 with Delta >= 2 only for elliptic scrolls"),
        _r("io-delta3", "Ionescu: Delta = 3 forces g = 3", AXIOM),
        _r("io-delta4", "Ionescu: Delta = 4 normally generated unless a scroll over a genus-2 curve", AXIOM),
        _r("castelnuovo-surface", "Harris: Castelnuovo surfaces are projectively normal", AXIOM),
        _r("no-low-genus-p5", "no degree-9 surfaces in P^5 with g = 2, 3", AXIOM),
        _r("g4-irregular", "g = 4, h0(L|C) = 6 forces q(S) > 0"),
        _r("g4-cases", "Livorni / Ionescu: three g = 4 configurations in P^5, all over an elliptic curve", AXIOM),
        _r("g4-quadric-equivalence", "g = 4: 2-normal iff 3-regular iff projectively normal iff in no quadric", AXIOM),
        _r("g4-case1-homma", "Homma: P^1-bundle over an elliptic curve, e = -1, L = 3C0 is projectively normal", AXIOM),
        _r("g4-case2-lines", "lines on the e = -1 blow-up: E_i and f - E_i only"),
        _r("g4-case2-cones", "Chern relation on the blown-up quadric cone"),
        _r("g4-case2-cone-exclusion", "e = -1 blow-up lies in no quadric (cone and hyperplane-section analysis)", AXIOM),
        _r("g4-case3-congruence", "e = 0 blow-up is a congruence of lines of bidegree (3,6), lying in a quadric", AXIOM),
        _r("g5-h1-equivalence", "g = 5, h1(L) = 0: PN iff section PN iff S in exactly one quadric", AXIOM),
        _r("conic-bundle-section", "L.f = 2 over a rational base makes C a double cover of P^1"),
        _r("hyperelliptic-sections", "Sommese-Van de Ven: degree-9 surfaces with hyperelliptic sections are rational conic bundles", AXIOM),
        _r("trigonal-conic-bundle", "Fania: a conic bundle with trigonal section has g = 2q + 2, q <= 1"),
        _r("g5-trigonal-list", "g = 5 trigonal sections: remaining surfaces are projectively normal", AXIOM),
        _r("g5-trigonal-nonexistence", "the trigonal Bl_12 F_1 candidate does not exist", AXIOM),
        _r("g5-trigonal-case3", "Brignone-Lanteri: K^2 = -2, K.(K+L) = -3 excludes trigonal sections"),
        _r("g6-section-quadrics", "genus-6 degree-9 curve in P^4 lies on exactly two quadrics", AXIOM),
        # P^4
        _r("p4-classification", "Aure-Ranestad classification of degree-9 surfaces in P^4", AXIOM),
        _r("p4-k2", "K^2 = 6 chi - 5g + 23"),
        _r("p4-vanishing", "Aure-Ranestad: h1(2L) = h2(2L) = 0", AXIOM),
        _r("p4-no-quadric", "surfaces on quartics with g >= 7 lie in no quadric", AXIOM),
        _r("p4-linkage", "Aure-Ranestad: g = 9 surfaces linked (3,4) to a cubic scroll are projectively normal", AXIOM),
        _r("p4-complete-intersection", "complete intersections are projectively normal", AXIOM),
        _r("p4-linked-plane", "surfaces linked to a plane are arithmetically Cohen-Macaulay", AXIOM),
        # scrolls
        _r("scroll-slope", "mu(E) = deg E / rk E"),
        _r("scroll-quotient-bound", "quotients of a very ample bundle are very ample"),
        _r("butler", "Butler: mu^-(E) > 2g gives projective normality"),
        _r("elliptic-scroll", "elliptic scrolls are projectively normal", AXIOM),
        _r("ionescu-hyperelliptic", "Ionescu: scrolls over hyperelliptic curves have Delta = n g"),
        _r("scroll-trigonal-open", "scrolls over trigonal curves with 3 <= g <= 5 in P^5 are not decided"),
    ]
)


def rule(id: str) -> Rule:
    return REGISTRY[id]


class FujitaResult(NamedTuple):
    ladder_regular: bool
    normally_generated: bool


def fujita_check(d: int, g: int, delta: int) -> FujitaResult:
    if delta < 0:
        raise ValueError("Delta must be >= 0")
    ok = g >= delta
    return FujitaResult(ok and d >= 2 * delta - 1, ok and d >= 2 * delta + 1)


def gl_check(d: int, g: int, h1_L: int, clC: int) -> bool:
    """True when deg(L) >= 2g + 1 - 2 h1(L) - cl(C)."""
    if min(d, g, h1_L, clC) < 0:
        raise ValueError("inputs must be >= 0")
    return d >= 2 * g + 1 - 2 * h1_L - clC


def hyperelliptic_block(d: int, g: int) -> bool:
    """True when a hyperelliptic genus-g curve has no normally generated bundle of degree d."""
    if g < 2:
        raise ValueError("hyperelliptic curves have g >= 2")
    return d <= 2 * g


def two_normal_suffices(d: int, g: int) -> bool:
    return d >= g + 1


QUADRICS = {4: comb(6, 2), 5: comb(7, 2)}


def quadric_deficit(N: int, h0_2L: int) -> int:
    """h0(O_P^N(2)) - h0(O_S(2)); negative means 2-normality is impossible."""
    if N not in QUADRICS:
        raise ValueError(f"quadric_deficit supports N in {sorted(QUADRICS)}, got {N}")
    if h0_2L < 0:
        raise ValueError("h0 must be >= 0")
    return QUADRICS[N] - h0_2L


def min_very_ample_degree(g: int) -> int | None:
    """Smallest degree of a very ample line bundle on a genus-g curve, for g <= 2."""
    return {0: 1, 1: 3, 2: 5}.get(g)


def mu_minus_lower_bound(g: int, rank: int, d: int) -> Fraction | None:
    """Lower bound for mu^-(E) of a very ample rank-2 bundle, from its quotients.

    A quotient line bundle of a very ample bundle is very ample, and the only
    rank-2 quotient is E itself.
    """
    v = min_very_ample_degree(g)
    if rank != 2 or v is None:
        return None
    return min(Fraction(v), Fraction(d, rank))


# -- verdicts -------------------------------------------------------------------

class Status(str, Enum):
    PN = "ProjectivelyNormal"
    NOT_PN = "NotProjectivelyNormal"
    UNDETERMINED = "Undetermined"


class InconsistentProfile(ValueError):
    """The profile cannot describe an existing surface."""


class CriterionConflict(RuntimeError):
    """Two conclusive criteria disagree; this points at an encoding error."""


def _plain(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (frozenset, set)):
        return sorted(_plain(v) for v in value)
    return value


@dataclass(frozen=True)
class TrailEntry:
    id: str
    anchor: str
    kind: str
    inputs: tuple[tuple[str, object], ...]
    conclusion: str

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "kind": self.kind,
            "inputs": {k: _plain(v) for k, v in self.inputs},
            "conclusion": self.conclusion,
        }

    def render(self) -> str:
        args = ", ".join(f"{k}={_plain(v)}" for k, v in self.inputs)
        return f"[{self.kind}] {self.id} | {self.anchor} | {args} | {self.conclusion}"


@dataclass(frozen=True)
class NormalityVerdict:
    status: Status
    trail: tuple[TrailEntry, ...]
    label: str = ""

    def __post_init__(self):
        if not self.trail:
            raise ValueError("a verdict needs a non-empty trail")

    @property
    def deciding(self) -> TrailEntry | None:
        for entry in self.trail:
            if entry.conclusion.startswith("=>"):
                return entry
        return None

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "status": self.status.value,
            "trail": [e.to_json() for e in self.trail],
        }

    def render(self) -> str:
        lines = [f"status: {self.status.value}"]
        if self.label:
            lines.insert(0, f"profile: {self.label}")
        lines.append("trail:")
        lines += [f"  {i}. {e.render()}" for i, e in enumerate(self.trail, 1)]
        return "\n".join(lines)


class _Trail:
    """Collects trail entries; the first conclusive criterion fixes the status."""

    def __init__(self):
        self.entries: list[TrailEntry] = []
        self.status: Status | None = None

    def log(self, id: str, conclusion: str, **inputs) -> None:
        r = REGISTRY[id]
        self.entries.append(TrailEntry(id, r.anchor, r.kind, tuple(inputs.items()), conclusion))

    def decide(self, status: Status, id: str, reason: str, **inputs) -> None:
        self.log(id, f"=> {status.value}: {reason}", **inputs)
        if self.status is None:
            self.status = status
        elif self.status is not status:
            raise CriterionConflict(
                f"{id} concludes {status.value} but an earlier criterion gave {self.status.value}"
            )

    def skip(self, criterion: str, missing: str) -> None:
        self.log("not-evaluable", f"{criterion} needs {missing}", criterion=criterion)

    def inconsistent(self, id: str, reason: str, **inputs) -> InconsistentProfile:
        self.log(id, f"inconsistent: {reason}", **inputs)
        return InconsistentProfile(f"{id}: {reason}")

    def verdict(self, label: str = "") -> NormalityVerdict:
        return NormalityVerdict(self.status or Status.UNDETERMINED, tuple(self.entries), label)


# -- profiles ---------------------------------------------------------------------

HYPERELLIPTIC = "hyperelliptic"
TRIGONAL = "trigonal-or-plane-quintic"
CLIFFORD_2 = "cl>=2"
UNKNOWN = "unknown"
SECTION_TYPES = (HYPERELLIPTIC, TRIGONAL, CLIFFORD_2, UNKNOWN)

KNOWN_FLAGS = frozenset(
    {
        "scroll",
        "conic_bundle",
        "rational",
        "elliptic_bundle_blowup",
        "k3",
        "enriques_projection",
        "minimal_elliptic",
        "general_type",
        "linked_cubic_scroll",
        "complete_intersection",
        "linked_plane",
    }
)


@dataclass(frozen=True)
class SurfaceProfile:
    """What is known about a polarized surface (S, L) embedded in P^N.

    Unknown numbers are ``None``. When ``model`` and ``L`` are given, d, g,
    chi and q are computed from the lattice and must agree with any stated
    values; conic bundle and scroll structures are detected from L.f.
    """

    N: int
    d: int | None = 9
    g: int | None = None
    q: int | None = None
    chi: int | None = None
    h1_L: int | None = None
    h0_L: int | None = None
    h1_LC: int | None = None
    section_clifford: str = UNKNOWN
    flags: frozenset[str] = frozenset()
    base_genus: int | None = None
    case: str | None = None
    model: SurfaceModel | None = None
    L: DivisorClass | None = None
    label: str = ""

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("flags", frozenset(self.flags))
        unknown = self.flags - KNOWN_FLAGS
        if unknown:
            raise InconsistentProfile(f"unknown structure flags {sorted(unknown)}")
        if self.section_clifford not in SECTION_TYPES:
            raise InconsistentProfile(f"section_clifford must be one of {SECTION_TYPES}")
        if (self.model is None) != (self.L is None):
            raise InconsistentProfile("model and L must be given together")
        if self.model is not None:
            m, L = self.model, self.L
            chi, _, _ = model_invariants(m)
            lattice = {"d": degree(m, L), "g": sectional_genus(m, L), "chi": chi, "q": m.q}
            for key, value in lattice.items():
                stated = getattr(self, key)
                if stated is not None and stated != value:
                    raise InconsistentProfile(f"stated {key}={stated} but the lattice gives {value}")
                set_(key, value)
            if m.is_ruled:
                K = canonical_class(m)
                Lf = intersect(m, L, m.f())
                extra = set()
                if Lf == 1:
                    extra.add("scroll")
                elif intersect(m, K + L, m.f()) == 0:
                    extra.add("conic_bundle")
                if m.q == 0 and m.n_blowups:
                    extra.add("rational")
                if self.base_genus is None and extra & {"scroll", "conic_bundle"}:
                    set_("base_genus", m.q)
                set_("flags", self.flags | extra)
            else:
                set_("flags", self.flags | {"rational"})
        if self.g is None or self.d is None:
            raise InconsistentProfile("degree and sectional genus are required")
        if self.d < 1 or self.g < 0 or self.N < 2:
            raise InconsistentProfile("need d >= 1, g >= 0, N >= 2")

    @property
    def h0(self) -> int:
        return self.h0_L if self.h0_L is not None else self.N + 1

    @property
    def delta(self) -> int:
        return delta_genus(self.d, self.h0)

    @classmethod
    def from_json(cls, doc: dict) -> "SurfaceProfile":
        doc = dict(doc)
        model = L = None
        if "surface" in doc:
            model = build_model(doc.pop("surface"))
            L = model.divisor(doc.pop("L"))
        known = {f for f in cls.__dataclass_fields__} - {"model", "L"}
        extra = set(doc) - known
        if extra:
            raise InconsistentProfile(f"unknown profile keys {sorted(extra)}")
        doc["flags"] = frozenset(doc.get("flags", ()))
        return cls(model=model, L=L, **doc)

    def to_json(self) -> dict:
        out: dict = {}
        for name in self.__dataclass_fields__:
            v = getattr(self, name)
            if name == "model" or v is None or v == "" or v == frozenset():
                continue
            if name == "L":
                out["surface"] = self.model.to_json()
                v = list(v)
            out[name] = _plain(v)
        return out


@dataclass(frozen=True)
class ScrollSpec:
    base_genus: int
    rank: int
    d: int
    mu_minus_lower_bound: Fraction | None = None
    stable: bool | None = None
    N: int | None = None
    base_curve: str = UNKNOWN
    mu: Fraction = field(init=False)

    def __post_init__(self):
        if self.rank < 2:
            raise ValueError("a scroll needs a bundle of rank >= 2")
        if self.base_genus < 0 or self.d < 1:
            raise ValueError("need base genus >= 0 and degree >= 1")
        if self.base_curve not in SECTION_TYPES:
            raise ValueError(f"base_curve must be one of {SECTION_TYPES}")
        object.__setattr__(self, "mu", Fraction(self.d, self.rank))
        if self.stable:
            object.__setattr__(self, "mu_minus_lower_bound", self.mu)
        elif self.mu_minus_lower_bound is not None:
            object.__setattr__(self, "mu_minus_lower_bound", Fraction(self.mu_minus_lower_bound))


# -- scrolls ------------------------------------------------------------------------

def _scroll(s: ScrollSpec, t: _Trail) -> None:
    g = s.base_genus
    t.log("scroll-slope", f"mu = {s.mu}", d=s.d, rank=s.rank)
    bound = s.mu_minus_lower_bound
    v = min_very_ample_degree(g)
    quotient = mu_minus_lower_bound(g, s.rank, s.d)
    if quotient is not None:
        if s.stable is None and v > s.mu:
            # every line bundle quotient has degree >= v > mu, so nothing destabilizes
            t.log("scroll-quotient-bound", f"quotients have degree >= {v} > mu: E is stable, mu^- = {s.mu}",
                  g=g, min_quotient=v, mu=s.mu)
            quotient = s.mu
        else:
            t.log("scroll-quotient-bound", f"mu^- >= {quotient}", g=g, min_quotient=v, mu=s.mu)
        bound = quotient if bound is None else max(bound, quotient)
    if bound is None:
        t.skip("butler", "a lower bound for mu^-")
    elif bound > 2 * g:
        t.decide(Status.PN, "butler", f"mu^- >= {bound} > {2 * g}", mu_minus=bound, g=g)
    else:
        t.log("butler", f"mu^- >= {bound} does not exceed 2g = {2 * g}", mu_minus=bound, g=g)

    if g == 1 and s.rank == 2:
        t.decide(Status.PN, "elliptic-scroll", "scroll over an elliptic curve", g=g)

    if s.N is None:
        t.skip("delta-genus", "the ambient dimension N")
        return
    dim = s.rank
    delta = delta_genus(s.d, s.N + 1) + dim - 2
    t.log("delta-genus", f"Delta = {delta}", d=s.d, h0=s.N + 1, dim=dim)
    if s.base_curve == HYPERELLIPTIC or (g == 2):
        expect = dim * g
        if g >= 2 and delta != expect:
            raise t.inconsistent("ionescu-hyperelliptic", f"Delta = {delta}, expected {expect}", g=g, dim=dim)
        if g >= 2:
            t.log("ionescu-hyperelliptic", f"Delta = {expect}", g=g, dim=dim)
    if s.d != 9 or s.rank != 2:
        return
    fj = fujita_check(s.d, g, delta)
    if fj.normally_generated:
        t.decide(Status.PN, "fujita-normal", "normally generated", d=s.d, g=g, delta=delta)
        return
    if delta == 4 and g == 3:
        t.decide(Status.PN, "io-delta4", "base curve has genus 3", g=g, delta=delta)
        return
    if delta != 5:
        return
    t.log("fujita-ladder", f"ladder regular: {fj.ladder_regular}", d=s.d, g=g, delta=delta)
    if g == 7:
        t.decide(Status.PN, "castelnuovo-surface", "g equals the Castelnuovo bound", g=g)
    elif g == 6:
        _g6_sections(t)
    elif g in (3, 4, 5):
        cl_max = clifford_curve_max(g)
        t.log("clifford-max", f"cl(C) <= {cl_max}", g=g)
        curve = s.base_curve
        if g == 5 and curve == CLIFFORD_2:
            if gl_check(s.d, g, 0, 2):
                t.decide(Status.PN, "green-lazarsfeld", "9 >= 2g + 1 - cl", d=s.d, g=g, h1=0, cl=2)
            return
        if curve == CLIFFORD_2:
            raise t.inconsistent("clifford-max", f"cl(C) >= 2 impossible for g = {g}", g=g)
        if curve == HYPERELLIPTIC:
            raise t.inconsistent("ionescu-hyperelliptic", f"Delta = 5 but a hyperelliptic base needs {2 * g}", g=g)
        t.log("scroll-trigonal-open", "base curve trigonal: no criterion applies", g=g, N=s.N)


def scroll_verdict(s: ScrollSpec, label: str = "") -> NormalityVerdict:
    t = _Trail()
    _scroll(s, t)
    return t.verdict(label)


# -- surfaces that are not scrolls -----------------------------------------------------

P4_ITEMS: dict[tuple[int, int], str] = {
    (6, 1): "rational, or the projection of a degree-10 Enriques surface in P^5",
    (7, 1): "rational",
    (7, 2): "minimal elliptic",
    (8, 2): "K3 with 5 (-1)-lines",
    (8, 3): "minimal of general type",
    (9, 4): "linked (3,4) to a cubic scroll",
    (10, 6): "complete intersection (3,3)",
    (10, 5): "complete intersection (3,3), chi as listed in the normality statement",
    (12, 9): "linked to a plane",
}
CHI_DISCREPANCY = "chi = 6 in the classification list, chi = 5 in the normality statement for g = 10"

G4_CASES = {(-1, 0): "g4-case1", (-1, 3): "g4-case2", (0, 3): "g4-case3"}
G5_TRIGONAL_CASES = ("g5-trigonal-1", "g5-trigonal-2", "g5-trigonal-3", "g5-trigonal-4")


def _g6_sections(t: _Trail) -> None:
    h0_2LC = curve_rr(18, 6, 0)
    t.log("section-rr", f"h0(2L|C) = {h0_2LC}", d=18, g=6, h1=0)
    t.log("quadric-deficit", f"{quadric_deficit(4, h0_2LC)} quadrics at least contain C", N=4, h0=h0_2LC)
    t.log("g6-section-quadrics", "C is 2-normal", g=6)
    if two_normal_suffices(9, 6):
        t.decide(Status.PN, "two-normal-suffices", "C is projectively normal and the ladder is regular", d=9, g=6)


def _bookkeeping(p: SurfaceProfile, t: _Trail) -> SurfaceProfile:
    if p.model is not None:
        t.log("degree", f"d = {p.d}", model=str(p.model), L=list(p.L))
        t.log("sectional-genus", f"g = {p.g}", model=str(p.model), L=list(p.L))
        if p.flags & {"scroll", "conic_bundle"}:
            t.log("structure", ", ".join(sorted(p.flags & {"scroll", "conic_bundle"})),
                  L_f=intersect(p.model, p.L, p.model.f()))
    if p.d != 9:
        raise t.inconsistent("degree", f"the classification covers d = 9, got {p.d}", d=p.d)
    if p.h0 < p.N + 1:
        raise t.inconsistent("linear-normality", "h0(L) < N + 1 means L does not embed in P^N",
                             h0=p.h0, N=p.N)
    delta = p.delta
    if delta < 0:
        raise t.inconsistent("delta-genus", f"Delta = {delta} < 0", d=p.d, h0=p.h0)
    t.log("delta-genus", f"Delta = {delta}", d=p.d, h0=p.h0)
    if p.N >= 3:
        try:
            bound = castelnuovo_bound(p.d, p.N)
        except ValueError as exc:
            raise t.inconsistent("castelnuovo", str(exc), d=p.d, N=p.N) from None
        if p.g > bound:
            raise t.inconsistent("castelnuovo", f"g = {p.g} > {bound}", d=p.d, N=p.N)
        t.log("castelnuovo", f"g = {p.g} <= {bound}", d=p.d, N=p.N)
    LK = canonical_degree_on_section(p.d, p.g)
    if p.chi is None:
        t.skip("h1-from-rr", "chi(O_S)")
    elif LK >= p.d:
        t.skip("h1-from-rr", "(K - L).L < 0")
    else:
        chi_L = chi_multiple(p.chi, p.d, LK, 1)
        h1 = p.h0 - chi_L
        if h1 < 0 or (p.h1_L is not None and p.h1_L != h1):
            raise t.inconsistent("h1-from-rr", f"h1(L) = {h1} conflicts with the profile",
                                 h0=p.h0, chi_L=chi_L, stated=p.h1_L)
        t.log("h1-from-rr", f"h1(L) = {h1}", h0=p.h0, chi_L=chi_L)
        if p.h1_L is None:
            p = replace(p, h1_L=h1)
    return p


def _p4(p: SurfaceProfile, t: _Trail) -> None:
    if p.chi is None:
        t.skip("p4-classification", "chi(O_S)")
        return
    item = P4_ITEMS.get((p.g, p.chi))
    if item is None:
        raise t.inconsistent("p4-classification", "no such degree-9 surface in P^4", g=p.g, chi=p.chi)
    inputs = dict(g=p.g, chi=p.chi)
    if p.g == 10:
        inputs["note"] = CHI_DISCREPANCY
    t.log("p4-classification", item, **inputs)
    K2 = au_ra_k2(p.g, p.chi)
    if p.model is not None and model_invariants(p.model)[1] != K2:
        raise t.inconsistent("p4-k2", "K^2 of the lattice differs", g=p.g, chi=p.chi)
    t.log("p4-k2", f"K^2 = {K2}", g=p.g, chi=p.chi)
    LK = canonical_degree_on_section(p.d, p.g)
    t.log("p4-vanishing", "h1(2L) = h2(2L) = 0", g=p.g)
    h0_2L = chi_multiple(p.chi, p.d, LK, 2)
    t.log("chi-2L", f"h0(2L) = {h0_2L}", chi=p.chi, d=p.d, LK=LK)
    if p.g <= 9:
        h0_2LC = curve_rr(2 * p.d, p.g, 0)
        t.log("section-rr", f"h0(2L|C) = {h0_2LC}", d=2 * p.d, g=p.g, h1=0)
        if p.h1_L == 0:
            total = p.h0 + h0_2LC
            if total != h0_2L:
                raise t.inconsistent("section-rr", f"h0(L) + h0(2L|C) = {total} != {h0_2L}")
            t.log("section-rr", f"h0(2L) = h0(L) + h0(2L|C) = {total}", h0_L=p.h0, h0_2LC=h0_2LC)
    deficit = quadric_deficit(4, h0_2L)
    if deficit < 0:
        t.decide(Status.NOT_PN, "quadric-deficit", f"h0(2L) = {h0_2L} > 15, not 2-normal", N=4, h0=h0_2L)
        return
    t.log("quadric-deficit", f"deficit {deficit}", N=4, h0=h0_2L)
    if p.g == 8:
        t.log("p4-no-quadric", "S lies in no quadric, so it is 2-normal", g=p.g)
        if two_normal_suffices(p.d, p.g):
            t.decide(Status.PN, "two-normal-suffices", "2-normal with d >= g + 1", d=p.d, g=p.g)
    elif p.g == 9:
        t.decide(Status.PN, "p4-linkage", "linked (3,4) to a cubic scroll", g=p.g)
    elif p.g == 10:
        t.decide(Status.PN, "p4-complete-intersection", "complete intersection (3,3)", g=p.g, chi=p.chi)
    elif p.g == 12:
        t.decide(Status.PN, "p4-linked-plane", "arithmetically Cohen-Macaulay", g=p.g)


def _g4_case(p: SurfaceProfile) -> str | None:
    if p.case is not None:
        return p.case
    m = p.model
    if m is not None and m.is_ruled and m.q == 1:
        return G4_CASES.get((m.e, m.n_blowups))
    return None


def _g4(p: SurfaceProfile, t: _Trail) -> None:
    h0_LC = curve_rr(p.d, p.g, 0)
    t.log("section-rr", f"h0(L|C) = {h0_LC}", d=p.d, g=p.g, h1=0)
    if p.q == 0:
        raise t.inconsistent("g4-irregular", "a regular surface would have h0(L) = 7", q=p.q)
    t.log("g4-irregular", "q(S) > 0", h0_LC=h0_LC)
    case = _g4_case(p)
    t.log("g4-cases", f"configuration {case or 'not identified'}", case=case)
    if case is None:
        t.skip("g4-quadric-equivalence", "the surface configuration")
        return
    if case == "g4-case1":
        t.decide(Status.PN, "g4-case1-homma", "P^1-bundle with L = 3C0")
        return
    t.log("g4-quadric-equivalence", "PN iff S lies in no quadric", N=5)
    if case == "g4-case2":
        _g4_case2_evidence(p, t)
        t.decide(Status.PN, "g4-case2-cone-exclusion", "no quadric contains S")
    elif case == "g4-case3":
        if p.model is not None:
            h0_2L = chi_line_bundle(p.model, 2 * p.L)
            t.log("chi-2L", f"h0(2L) = {h0_2L}", model=str(p.model))
            t.log("quadric-deficit", f"deficit {quadric_deficit(5, h0_2L)}: 2-normal iff in no quadric",
                  N=5, h0=h0_2L)
        t.decide(Status.NOT_PN, "g4-case3-congruence", "S lies in a quadric")
    else:
        raise t.inconsistent("g4-cases", f"unknown configuration {case}")


def _g4_case2_evidence(p: SurfaceProfile, t: _Trail) -> None:
    # imported lazily: the curve search is only needed for this configuration
    from .cone_chow import chern_exclusion
    from .curve_search import CurveQuery, enumerate_curves

    m = p.model
    if m is None:
        t.skip("g4-case2-lines", "the lattice model")
    else:
        lines = enumerate_curves(CurveQuery(m, p.L, 1, 0))
        t.log("g4-case2-lines", f"{len(lines)} lines", classes=[format_class(m, r) for r in lines])
    if p.chi is None:
        t.skip("g4-case2-cones", "chi(O_S)")
        return
    LK = canonical_degree_on_section(p.d, p.g)
    if m is None:
        t.skip("g4-case2-cones", "K^2 and c2 of the lattice model")
        return
    chi, K2, c2 = model_invariants(m)
    for rank in (5, 4):
        rows = chern_exclusion(rank, p.d, LK, K2, c2)
        zeros = [list(r.solution.coeffs) for r in rows if r.residual == 0]
        conclusion = "every class has a nonzero residual" if not zeros else "residual vanishes for some classes"
        t.log("g4-case2-cones", conclusion, rank=rank, classes=len(rows), vanishing=zeros)


def _g5(p: SurfaceProfile, t: _Trail) -> None:
    fj = fujita_check(p.d, p.g, p.delta)
    t.log("fujita-ladder", f"ladder regular: {fj.ladder_regular}", d=p.d, g=p.g, delta=p.delta)
    if p.h1_L is None:
        t.skip("g5-h1-equivalence", "h1(L)")
    else:
        t.log("g5-h1-equivalence", "PN iff exactly one quadric contains S" if p.h1_L == 0
              else "h1(L) > 0: equivalence not available", h1_L=p.h1_L)
    cl_max = clifford_curve_max(p.g)
    t.log("clifford-max", f"cl(C) <= {cl_max}", g=p.g)

    section = p.section_clifford
    cb = "conic_bundle" in p.flags
    rational_cb = cb and ("rational" in p.flags or p.base_genus == 0)
    if rational_cb:
        t.log("conic-bundle-section", "C is hyperelliptic", base_genus=0)
        if section not in (UNKNOWN, HYPERELLIPTIC):
            raise t.inconsistent("conic-bundle-section", f"section declared {section}")
        section = HYPERELLIPTIC

    if section == CLIFFORD_2:
        if gl_check(p.d, p.g, 0, 2):
            t.decide(Status.PN, "green-lazarsfeld", "C normally generated, ladder regular",
                     d=p.d, g=p.g, h1=0, cl=2)
    elif section == HYPERELLIPTIC:
        if hyperelliptic_block(p.d, p.g):
            t.log("hyperelliptic-block", "C is not projectively normal", d=p.d, g=p.g)
        t.decide(Status.NOT_PN, "hyperelliptic-sections", "rational conic bundle")
    elif section == TRIGONAL:
        if cb:
            q = p.base_genus
            raise t.inconsistent("trigonal-conic-bundle", f"g = {p.g} is not 2q + 2 with q <= 1", q=q)
        _g5_trigonal(p, t)
    else:
        t.skip("green-lazarsfeld", "the Clifford index of C")


def _g5_trigonal(p: SurfaceProfile, t: _Trail) -> None:
    case = p.case
    if case == "g5-trigonal-4":
        raise t.inconsistent("g5-trigonal-nonexistence", "no such surface exists", case=case)
    if case == "g5-trigonal-3" and p.model is not None:
        m = p.model
        K = canonical_class(m)
        K2 = intersect(m, K, K)
        KKL = intersect(m, K, K + p.L)
        t.log("g5-trigonal-case3", f"K^2 = {K2}, K.(K+L) = {KKL}", model=str(m))
        if (K2, KKL) == (-2, -3):
            if gl_check(p.d, p.g, 0, 2):
                t.decide(Status.PN, "green-lazarsfeld", "section not trigonal, so cl(C) = 2",
                         d=p.d, g=p.g, h1=0, cl=2)
            return
    t.decide(Status.PN, "g5-trigonal-list", "every existing trigonal case is projectively normal",
             case=case)


def classify(p: SurfaceProfile) -> NormalityVerdict:
    """Decide projective normality of a degree-9 surface from its profile."""
    t = _Trail()
    p = _bookkeeping(p, t)
    if "scroll" in p.flags:
        base = p.base_genus if p.base_genus is not None else p.g
        _scroll(ScrollSpec(base, 2, p.d, N=p.N, base_curve=p.section_clifford), t)
        return t.verdict(p.label)
    if p.h0 > p.N + 1:
        t.decide(Status.NOT_PN, "linear-normality", "L is not linearly normal", h0=p.h0, N=p.N)
        return t.verdict(p.label)
    if p.N == 3:
        t.decide(Status.PN, "codim-one", "hypersurface in P^3")
        return t.verdict(p.label)
    if p.N == 4:
        _p4(p, t)
        return t.verdict(p.label)

    delta, g = p.delta, p.g
    if p.h1_LC is not None:
        allowed = genus_range_from_h1(p.h1_LC)
        if g not in allowed:
            raise t.inconsistent("h1-section-genus", f"g = {g} outside {allowed.describe()}", h1_LC=p.h1_LC)
        t.log("h1-section-genus", allowed.describe(), h1_LC=p.h1_LC)
    if delta <= 4:
        fj = fujita_check(p.d, g, delta)
        if fj.normally_generated:
            t.decide(Status.PN, "fujita-normal", "normally generated", d=p.d, g=g, delta=delta)
        elif delta == 4:
            t.decide(Status.PN, "io-delta4", "not a scroll", delta=delta, g=g)
        elif delta == 3:
            raise t.inconsistent("io-delta3", f"g = {g} != 3", g=g)
        else:
            raise t.inconsistent("low-delta-genus", f"g = {g} < Delta = {delta} for a non-scroll",
                                 g=g, delta=delta)
        return t.verdict(p.label)
    if delta > 5:
        t.skip("delta-genus", "Delta <= 5 for N >= 5")
        return t.verdict(p.label)
    if g <= 3:
        raise t.inconsistent("no-low-genus-p5", f"g = {g}", g=g)
    if g == 4:
        _g4(p, t)
    elif g == 5:
        _g5(p, t)
    elif g == 6:
        t.log("fujita-ladder", "ladder regular", d=p.d, g=g, delta=delta)
        _g6_sections(t)
    elif g == 7:
        t.decide(Status.PN, "castelnuovo-surface", "g equals the Castelnuovo bound", g=g)
    return t.verdict(p.label)


# -- adjoint pre-image ---------------------------------------------------------------

OPEN = "open"


@dataclass(frozen=True)
class AdjointResult:
    """Whether L = K + M can hold with M very ample.

    ``exists`` is ``False`` when the numbers of M rule out very ampleness and
    ``"open"`` when no numerical obstruction was found.
    """

    exists: bool | str
    d_adj: int
    g_adj: int
    candidate: DivisorClass | None
    violations: tuple[str, ...]
    positivity: tuple[tuple[str, int], ...] = ()

    def to_json(self) -> dict:
        return {
            "exists": self.exists,
            "candidate": list(self.candidate) if self.candidate is not None else None,
            "M^2": self.d_adj,
            "g(M)": self.g_adj,
            "positivity": dict(self.positivity),
            "violations": list(self.violations),
        }


def very_ample_violations(d: int, g: int, positivity: tuple[tuple[str, int], ...] = ()) -> list[str]:
    """Numerical reasons a class of degree d and sectional genus g cannot be very ample."""
    out = [f"M.{name} = {v} < 1" for name, v in positivity if v < 1]
    if d <= 0:
        out.append(f"M^2 = {d} <= 0")
        return out
    if g < 0:
        out.append(f"g(M) = {g} < 0")
    if d <= 2:
        if g != 0:
            out.append(f"degree {d} surfaces have g = 0, got {g}")
        return out
    plane = plane_curve_genus(d)
    bound = castelnuovo_bound(d, 4)
    if g != plane and g > bound:
        out.append(f"g(M) = {g}: neither a surface in P^3 (g = {plane}) nor within Castelnuovo in P^4 (<= {bound})")
    return out


def adjoint_preimage_numeric(d: int, g: int, K2: int) -> AdjointResult:
    """Adjoint check from (d, g, K^2) alone: M^2 = d - 2 L.K + K^2, 2g(M) - 2 = d - L.K."""
    LK = canonical_degree_on_section(d, g)
    d_adj = d - 2 * LK + K2
    twice = d - LK
    if twice % 2:
        raise InconsistentProfile(f"parity fails for M.L = {twice}")
    g_adj = 1 + twice // 2
    v = tuple(very_ample_violations(d_adj, g_adj))
    return AdjointResult(False if v else OPEN, d_adj, g_adj, None, v)


def adjoint_preimage_check(model: SurfaceModel | None, L: DivisorClass | None) -> AdjointResult:
    if model is None or L is None:
        raise ValueError("the adjoint check needs a lattice model and L")
    M = L - canonical_class(model)
    d_adj = intersect(model, M, M)
    ML = intersect(model, M, L)
    assert ML % 2 == 0, "adjunction parity violated"
    g_adj = 1 + ML // 2
    pos = [("f", intersect(model, M, model.f()))] if model.is_ruled else [("H", intersect(model, M, model.H()))]
    pos += [(f"E{i}", intersect(model, M, model.E(i))) for i in range(1, model.n_blowups + 1)]
    pos = tuple(pos)
    v = tuple(very_ample_violations(d_adj, g_adj, pos))
    return AdjointResult(False if v else OPEN, d_adj, g_adj, M, v, pos)
