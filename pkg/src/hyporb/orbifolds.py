"""Truncated dynamically associated orbifolds built from orbit data.

The constructions here turn finite orbit data of a catalogue map into a pair
of marked orbifolds (base and lift), check the covering and inclusion
relations exactly in integer arithmetic, enumerate the boundary set of the
lift inside the base, and measure the separation of the truncated
postsingular set.  All ramification values are computed over the truncated
orbit graph only and every product is tagged with its truncation depth.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import (
    CycleCollision,
    DivisibilityError,
    DomainError,
    EmptyInput,
    NotFound,
)
from .maps import (
    EntireMapSpec,
    OrbitRecord,
    Preperiodic,
    TruncatedPostsingular,
    evaluate,
    local_degree,
    postsingular_truncation,
)

_MATCH_TOL = 1e-9


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# Surfaces and marked orbifolds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Plane:
    """The whole complex plane."""


@dataclass(frozen=True)
class PlaneMinusDiscs:
    """Plane with finitely many closed round discs removed."""

    discs: tuple[tuple[complex, float], ...]


@dataclass(frozen=True)
class DiscSurface:
    """A bounded round disc domain (used by synthetic model pairs)."""

    center: complex
    radius: float


Surface = Plane | PlaneMinusDiscs | DiscSurface


@dataclass(frozen=True)
class MarkedOrbifold:
    """Planar surface descriptor plus finitely many marked points.

    ``marks`` maps points to ramification values >= 2; marks are pairwise
    separated by at least 1e-9 and never lie inside a removed disc.
    ``truncation_complete`` records that every source orbit closed up within
    the truncation (no escaping orbit), so no marks are missing.
    """

    surface: Surface
    marks: tuple[tuple[complex, int], ...]
    truncation_depth: int = 0
    truncation_complete: bool = False

    def __post_init__(self):
        pts = [p for p, _ in self.marks]
        for i, p in enumerate(pts):
            for q in pts[i + 1 :]:
                if abs(p - q) < _MATCH_TOL:
                    raise DomainError(f"marks too close: {p!r}, {q!r}")
        for p, nu in self.marks:
            if nu < 2:
                raise DomainError("ramification values must be >= 2")
            if not self.contains(p):
                raise DomainError(f"mark {p!r} outside the surface")

    def contains(self, z: complex) -> bool:
        if isinstance(self.surface, Plane):
            return True
        if isinstance(self.surface, PlaneMinusDiscs):
            return all(abs(z - c) > r for c, r in self.surface.discs)
        return abs(z - self.surface.center) < self.surface.radius

    def boundary_distance(self, z: complex) -> float:
        """Euclidean distance from ``z`` to the surface boundary (inf on the plane)."""
        if isinstance(self.surface, Plane):
            return math.inf
        if isinstance(self.surface, PlaneMinusDiscs):
            return min(abs(z - c) - r for c, r in self.surface.discs)
        return self.surface.radius - abs(z - self.surface.center)

    def ramification(self, z: complex, tol: float = _MATCH_TOL) -> int:
        for p, nu in self.marks:
            if abs(z - p) <= tol:
                return nu
        return 1

    def mark_points(self) -> np.ndarray:
        return np.asarray([p for p, _ in self.marks], dtype=complex)

    def to_json(self) -> dict:
        if isinstance(self.surface, Plane):
            surf = {"kind": "plane", "discs": []}
        elif isinstance(self.surface, PlaneMinusDiscs):
            surf = {
                "kind": "plane_minus_discs",
                "discs": [[c.real, c.imag, r] for c, r in self.surface.discs],
            }
        else:
            surf = {
                "kind": "disc",
                "discs": [[self.surface.center.real, self.surface.center.imag, self.surface.radius]],
            }
        return {
            "surface": surf,
            "marks": [[p.real, p.imag, nu] for p, nu in self.marks],
            "truncation_depth": self.truncation_depth,
            "truncation_complete": self.truncation_complete,
        }

    @staticmethod
    def from_json(data: dict) -> "MarkedOrbifold":
        kind = data["surface"]["kind"]
        discs = [(complex(c[0], c[1]), float(c[2])) for c in data["surface"]["discs"]]
        if kind == "plane":
            surface: Surface = Plane()
        elif kind == "plane_minus_discs":
            surface = PlaneMinusDiscs(tuple(discs))
        elif kind == "disc":
            (c, r), = discs
            surface = DiscSurface(c, r)
        else:
            raise DomainError(f"unknown surface kind {kind!r}")
        marks = tuple((complex(m[0], m[1]), int(m[2])) for m in data["marks"])
        return MarkedOrbifold(
            surface,
            marks,
            int(data["truncation_depth"]),
            bool(data.get("truncation_complete", False)),
        )


# ---------------------------------------------------------------------------
# Separation report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeparationReport:
    """Separation statistics of a truncated postsingular set.

    epsilon_star: min over pairs of |z - w| / max(|z|, |w|).
    annulus_count_M: max number of points in a closed annulus [r, K r].
    orbit_crit_bound_c: max number of critical points on a stored orbit.
    """

    epsilon_star: float
    annulus_count_M: int
    orbit_crit_bound_c: int
    max_local_degree: int
    depth: int
    K: float

    def to_json(self) -> dict:
        return {
            "epsilon_star": self.epsilon_star,
            "annulus_count_M": self.annulus_count_M,
            "orbit_crit_bound_c": self.orbit_crit_bound_c,
            "max_local_degree": self.max_local_degree,
            "depth": self.depth,
            "K": self.K,
        }


def pairwise_separation(points: list[complex]) -> float:
    """min over distinct pairs of |z - w| / max(|z|, |w|)."""
    if len(points) < 2:
        raise EmptyInput("need at least two points")
    best = math.inf
    for i, z in enumerate(points):
        for w in points[i + 1 :]:
            denom = max(abs(z), abs(w))
            if denom == 0.0:
                raise DomainError("duplicate zero points")
            best = min(best, abs(z - w) / denom)
    return best


def annulus_count(points: list[complex], K: float) -> int:
    """max over swept r of the number of points with r <= |z| <= K r.

    Candidate radii are the point moduli scaled by (1 -+ 1e-9), which is
    enough to realize every extremal closed annulus.
    """
    if K <= 1:
        raise DomainError("K must exceed 1")
    moduli = sorted(abs(p) for p in points)
    candidates = []
    for m in moduli:
        if m > 0:
            candidates.extend((m * (1 - 1e-9), m * (1 + 1e-9), m / K * (1 - 1e-9)))
    best = 0
    for r in candidates:
        if r <= 0:
            continue
        count = sum(1 for m in moduli if r * (1 - 1e-12) <= m <= K * r * (1 + 1e-12))
        best = max(best, count)
    return best


def separation_report(
    trunc: TruncatedPostsingular,
    K: float,
    map_spec: EntireMapSpec | None = None,
    crit_tol: float = 1e-9,
) -> SeparationReport:
    """Separation statistics of the Julia-candidate part of a truncation.

    The per-orbit critical count treats each singular value's witness
    critical point as the orbit seed, matching the bounded-criticality
    convention.
    """
    pts = trunc.julia_points()
    if not pts:
        raise EmptyInput("no Julia-candidate points in the truncation")
    eps_star = pairwise_separation(pts) if len(pts) >= 2 else math.inf
    M = annulus_count(pts, K)

    c = 0
    max_deg = 1
    if map_spec is not None:
        witness = {v: c0 for v, c0 in map_spec.critical_value_witnesses}
        for value, rec in trunc.records.items():
            chain = []
            if value in witness:
                chain.append(witness[value])
            chain.extend(rec.points)
            degrees = [local_degree(map_spec, p, crit_tol) for p in chain]
            c = max(c, sum(1 for d in degrees if d > 1))
            max_deg = max(max_deg, max(degrees, default=1))
    return SeparationReport(
        epsilon_star=eps_star,
        annulus_count_M=M,
        orbit_crit_bound_c=c,
        max_local_degree=max_deg,
        depth=trunc.depth,
        K=K,
    )


# ---------------------------------------------------------------------------
# Repelling cycles and absorbing discs
# ---------------------------------------------------------------------------


def _newton_periodic(
    map_spec: EntireMapSpec, period: int, seed: complex, iters: int = 80
) -> complex | None:
    z = complex(seed)
    for _ in range(iters):
        w = z
        dw = 1.0 + 0j
        ok = True
        for _ in range(period):
            try:
                dw *= map_spec.deriv(w)
                w = evaluate(map_spec, w)
            except Exception:
                ok = False
                break
        if not ok:
            return None
        g = w - z
        dg = dw - 1.0
        if abs(dg) < 1e-14:
            return None
        step = g / dg
        z -= step
        if abs(step) < 1e-13:
            break
    try:
        w = z
        for _ in range(period):
            w = evaluate(map_spec, w)
    except Exception:
        return None
    return z if abs(w - z) < 1e-9 else None


def cycle_multiplier(map_spec: EntireMapSpec, cycle: list[complex]) -> complex:
    mult = 1.0 + 0j
    for p in cycle:
        mult *= map_spec.deriv(p)
    return mult


def find_repelling_cycle(
    map_spec: EntireMapSpec,
    period: int,
    seed_box: tuple[complex, complex] = (1.0 + 4.0j, 4.0 + 9.0j),
    exclude: list[complex] | None = None,
    grid: int = 12,
    exclusion_radius: float = 1e-6,
) -> list[complex]:
    """Locate a repelling cycle of the given period by Newton from a seed grid.

    Accepted cycles have multiplier modulus > 1 + 1e-6, exact period, and
    keep distance >= ``exclusion_radius`` from every excluded point (by
    default the truncated postsingular set).  The returned cycle is the
    deterministic minimum over (|z|, re, im) of the accepted cycle starts.
    """
    if period < 1:
        raise DomainError("period must be >= 1")
    if exclude is None:
        exclude = [p.point for p in postsingular_truncation(map_spec, 12).points]
    lo, hi = seed_box
    seeds = [
        complex(re, im)
        for re in np.linspace(lo.real, hi.real, grid)
        for im in np.linspace(lo.imag, hi.imag, grid)
    ]
    found: list[complex] = []
    for seed in seeds:
        z = _newton_periodic(map_spec, period, seed)
        if z is None:
            continue
        cyc = [z]
        ok = True
        for _ in range(period - 1):
            try:
                cyc.append(evaluate(map_spec, cyc[-1]))
            except Exception:
                ok = False
                break
        if not ok:
            continue
        # exact period: no earlier return to the start
        if any(abs(cyc[j] - z) < 1e-9 for j in range(1, period)):
            continue
        if abs(cycle_multiplier(map_spec, cyc)) <= 1.0 + 1e-6:
            continue
        if any(abs(p - q) < exclusion_radius for p in cyc for q in exclude):
            continue
        if all(abs(z - f) > 1e-8 for f in found):
            found.append(z)
    if not found:
        raise NotFound(f"no repelling {period}-cycle in box {seed_box!r}")
    start = min(found, key=lambda z: (abs(z), z.real, z.imag))
    cyc = [start]
    for _ in range(period - 1):
        cyc.append(evaluate(map_spec, cyc[-1]))
    return cyc


@dataclass(frozen=True)
class AbsorbingDisc:
    center: complex
    radius: float
    boundary_sup: float


def find_absorbing_disc(
    map_spec: EntireMapSpec,
    attracting_point: complex,
    r_grid: tuple[float, ...] = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0),
    samples: int = 720,
) -> AbsorbingDisc:
    """Smallest grid radius whose disc about the attracting point maps inside itself.

    Certification samples the image of the boundary circle and requires
    sup |f(z) - p| < r (1 - 1e-6).
    """
    p = complex(attracting_point)
    if abs(evaluate(map_spec, p) - p) > 1e-9:
        raise DomainError("attracting_point is not fixed")
    if abs(map_spec.deriv(p)) >= 1.0:
        raise DomainError("attracting_point is not attracting")
    for r in sorted(r_grid):
        sup = max(
            abs(evaluate(map_spec, p + r * cmath.exp(2j * math.pi * j / samples)) - p)
            for j in range(samples)
        )
        if sup < r * (1.0 - 1e-6):
            return AbsorbingDisc(center=p, radius=float(r), boundary_sup=sup)
    raise NotFound(f"no radius in {r_grid!r} certifies an absorbing disc")


# ---------------------------------------------------------------------------
# Orbit graph and the associated pair
# ---------------------------------------------------------------------------


@dataclass
class _GraphNode:
    point: complex
    degree: int          # local degree of the map at the point
    image: int | None    # index of f(point) in the node list, None past truncation


def _build_orbit_graph(
    map_spec: EntireMapSpec,
    trunc: TruncatedPostsingular,
    cycle: list[complex],
) -> list[_GraphNode]:
    """Orbit graph over Julia-candidate orbits, their critical witnesses, and the cycle.

    Fatou-candidate orbits are excluded: they live inside removed discs and a
    critical attracting cycle would feed an unbounded degree product.
    """
    nodes: list[_GraphNode] = []

    def find(z: complex) -> int | None:
        for i, n in enumerate(nodes):
            if abs(n.point - z) <= _MATCH_TOL:
                return i
        return None

    def add(z: complex) -> int:
        i = find(z)
        if i is not None:
            return i
        nodes.append(_GraphNode(point=z, degree=local_degree(map_spec, z), image=None))
        return len(nodes) - 1

    julia_values = {
        value for value, rec in trunc.records.items() if not _orbit_attracts_rec(map_spec, rec)
    }
    for value, rec in trunc.records.items():
        if value not in julia_values:
            continue
        idx = [add(p) for p in rec.points]
        for a, b in zip(idx, idx[1:]):
            nodes[a].image = b
    for v, c in map_spec.critical_value_witnesses:
        if v not in julia_values:
            continue
        ci = add(c)
        vi = find(v)
        if vi is not None:
            nodes[ci].image = vi
    cyc_idx = [add(p) for p in cycle]
    for j, a in enumerate(cyc_idx):
        nodes[a].image = cyc_idx[(j + 1) % len(cyc_idx)]
    return nodes


def _orbit_attracts_rec(map_spec: EntireMapSpec, rec: OrbitRecord) -> bool:
    cyc = rec.cycle_points()
    return bool(cyc) and abs(cycle_multiplier(map_spec, cyc)) < 1.0 - 1e-9


def _chain_lcm(nodes: list[_GraphNode]) -> list[int]:
    """lcm of degree products over all orbit-graph chains ending at each node.

    D(z) = lcm over edges u -> z of deg(u) * max(D(u), 1); iterated to the
    fixed point, which exists because every value divides lcm(1..C).
    """
    n = len(nodes)
    D = [1] * n
    has_chain = [False] * n
    for _ in range(n + 1):
        changed = False
        for i, node in enumerate(nodes):
            j = node.image
            if j is None:
                continue
            contrib = node.degree * (D[i] if has_chain[i] else 1)
            new = _lcm(D[j], contrib) if has_chain[j] else contrib
            if not has_chain[j] or new != D[j]:
                D[j] = new
                has_chain[j] = True
                changed = True
        if not changed:
            break
    return [D[i] if has_chain[i] else 1 for i in range(n)]


def build_associated_orbifold(
    map_spec: EntireMapSpec,
    depth: int,
    escape_radius: float = 1e6,
    cycle: list[complex] | None = None,
    absorb_grid: tuple[float, ...] = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0),
    lift_window_radius: float = 120.0,
) -> tuple[MarkedOrbifold, MarkedOrbifold]:
    """Build the truncated associated pair (base, lift) from orbit data.

    Base marks: every truncated Julia-candidate point carries the lcm of
    local-degree products over the chains of the truncated orbit graph, and
    every cycle point carries 2.  Lift marks are nu(f(z)) / deg(f, z) on the
    stored preimage nodes, with divisibility checked exactly.  When an
    attracting basin is detected the surfaces drop certified absorbing discs
    (the lift also drops the certified discs around the attracting point's
    preimages inside ``lift_window_radius``).
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    trunc = postsingular_truncation(map_spec, depth, escape_radius)
    julia_pts = trunc.julia_points()
    if cycle is None:
        cycle = find_repelling_cycle(map_spec, 1, exclude=[p.point for p in trunc.points])
    for b in cycle:
        if any(abs(b - p) <= _MATCH_TOL for p in julia_pts):
            raise CycleCollision(f"cycle point {b!r} meets the truncated postsingular set")

    nodes = _build_orbit_graph(map_spec, trunc, cycle)
    D = _chain_lcm(nodes)
    cycle_set = [b for b in cycle]

    def is_cycle(z: complex) -> bool:
        return any(abs(z - b) <= _MATCH_TOL for b in cycle_set)

    julia = set()
    for p in julia_pts:
        julia.add(min(range(len(nodes)), key=lambda i: abs(nodes[i].point - p)))

    base_marks: list[tuple[complex, int]] = []
    for i, node in enumerate(nodes):
        if is_cycle(node.point):
            base_marks.append((node.point, 2))
        elif i in julia and D[i] > 1:
            base_marks.append((node.point, D[i]))

    # Surface: plane unless an attracting basin was detected.
    fatou_cycles: list[complex] = []
    for value, rec in trunc.records.items():
        cyc = rec.cycle_points()
        if cyc and abs(cycle_multiplier(map_spec, cyc)) < 1.0 - 1e-9:
            for q in cyc:
                if all(abs(q - f) > _MATCH_TOL for f in fatou_cycles):
                    fatou_cycles.append(q)
    if fatou_cycles:
        discs = []
        lift_discs = []
        for q in sorted(fatou_cycles, key=lambda z: (abs(z), z.real, z.imag)):
            disc = find_absorbing_disc(map_spec, q, absorb_grid)
            discs.append((disc.center, disc.radius))
            for pre in map_spec.preimages(q, lift_window_radius, 0.0):
                r_pre = _certify_preimage_disc(map_spec, pre, disc)
                if r_pre is not None:
                    lift_discs.append((pre, r_pre))
        base_surface: Surface = PlaneMinusDiscs(tuple(discs))
        lift_surface: Surface = PlaneMinusDiscs(tuple(lift_discs))
    else:
        base_surface = Plane()
        lift_surface = Plane()

    complete = all(
        isinstance(rec.status, Preperiodic) for rec in trunc.records.values()
    ) if trunc.records else True
    base = MarkedOrbifold(
        base_surface, tuple(base_marks), truncation_depth=depth, truncation_complete=complete
    )

    # Lift marks from the stored nodes: nu(f(z)) / deg(f, z).
    lift_marks: list[tuple[complex, int]] = []

    def add_lift_mark(z: complex, nu_tilde: int) -> None:
        if nu_tilde > 1 and all(abs(z - q) > _MATCH_TOL for q, _ in lift_marks):
            lift_marks.append((z, nu_tilde))

    for i, node in enumerate(nodes):
        if not base.contains(node.point):
            continue
        if node.image is not None:
            nu_image = base.ramification(nodes[node.image].point)
        elif i in julia:
            # Image beyond truncation: every chain into it extends a chain
            # through this node, so its ramification is divisible by
            # deg(node) * D(node); the quotient below is then D(node).
            nu_image = node.degree * max(D[i], 1)
        else:
            continue
        if nu_image % node.degree != 0:
            raise DivisibilityError(
                f"deg(f, {node.point!r}) = {node.degree} does not divide nu = {nu_image}"
            )
        add_lift_mark(node.point, nu_image // node.degree)

    # Every preimage of a base mark inside the window is a lift mark with
    # the quotient ramification; most of them are unmarked in the base and
    # feed the boundary set.
    for value, nu_value in base.marks:
        for z in map_spec.preimages(value, lift_window_radius, 0.0):
            if not base.contains(z):
                continue
            deg = local_degree(map_spec, z)
            if nu_value % deg != 0:
                raise DivisibilityError(
                    f"deg(f, {z!r}) = {deg} does not divide nu({value!r}) = {nu_value}"
                )
            add_lift_mark(z, nu_value // deg)

    lift = MarkedOrbifold(
        lift_surface, tuple(lift_marks), truncation_depth=depth, truncation_complete=complete
    )
    return base, lift


def _certify_preimage_disc(
    map_spec: EntireMapSpec,
    pre: complex,
    disc: AbsorbingDisc,
    samples: int = 180,
) -> float | None:
    """Largest grid radius r with f(D_r(pre)) inside the absorbing disc."""
    best = None
    for r in (disc.radius, disc.radius * 0.5, disc.radius * 0.25):
        try:
            sup = max(
                abs(
                    evaluate(map_spec, pre + r * cmath.exp(2j * math.pi * j / samples))
                    - disc.center
                )
                for j in range(samples)
            )
        except Exception:
            continue
        if sup < disc.radius * (1.0 - 1e-6):
            best = r
            break
    return best


# ---------------------------------------------------------------------------
# Covering / inclusion checks
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    passed: bool
    witnesses: list[str] = field(default_factory=list)


def check_covering_relation(
    map_spec: EntireMapSpec,
    base: MarkedOrbifold,
    lift: MarkedOrbifold,
    samples: list[complex] | None = None,
) -> CheckResult:
    """Exact check of nu(f(z)) = deg(f, z) * nu_tilde(z) at stored marks.

    Marks whose image lies beyond the stored marks of the base (truncation
    frontier) are skipped.  Optional unmarked samples must satisfy the
    identity trivially (1 = 1 * 1).
    """
    witnesses: list[str] = []
    frontier = max((abs(p) for p, _ in base.marks), default=0.0)
    for z, nu_tilde in lift.marks:
        try:
            fz = evaluate(map_spec, z)
        except Exception:
            continue
        deg = local_degree(map_spec, z)
        nu_image = base.ramification(fz)
        if nu_image == 1 and abs(fz) > frontier * (1 - 1e-9):
            continue  # image beyond the truncated mark set
        if nu_image != deg * nu_tilde:
            witnesses.append(
                f"at z={z!r}: nu(f(z))={nu_image} != deg {deg} * nu_tilde {nu_tilde}"
            )
    for v, c in map_spec.critical_value_witnesses:
        nu_image = base.ramification(v)
        if nu_image == 1:
            continue
        deg = local_degree(map_spec, c)
        nu_tilde = lift.ramification(c)
        if nu_image != deg * nu_tilde:
            witnesses.append(
                f"at witness {c!r}: nu={nu_image} != deg {deg} * nu_tilde {nu_tilde}"
            )
    if samples:
        for z in samples:
            try:
                fz = evaluate(map_spec, z)
            except Exception:
                continue
            if base.ramification(fz) != local_degree(map_spec, z) * lift.ramification(z):
                witnesses.append(f"unmarked sample z={z!r} violates the covering identity")
    return CheckResult(passed=not witnesses, witnesses=witnesses)


def _surface_included(inner: Surface, outer: Surface) -> bool:
    if isinstance(outer, Plane):
        return True
    if isinstance(outer, PlaneMinusDiscs):
        if not isinstance(inner, PlaneMinusDiscs):
            return False
        # every removed disc of the outer surface must be covered by a
        # removed disc of the inner surface
        return all(
            any(abs(c - ci) + r <= ri + 1e-12 for ci, ri in inner.discs)
            for c, r in outer.discs
        )
    if isinstance(outer, DiscSurface):
        if isinstance(inner, DiscSurface):
            return abs(inner.center - outer.center) + inner.radius <= outer.radius + 1e-12
        return False
    return False


def check_holomorphic_inclusion(lift: MarkedOrbifold, base: MarkedOrbifold) -> CheckResult:
    """Surface containment plus divisibility nu(z) | nu_tilde(z) at base marks."""
    witnesses: list[str] = []
    if not _surface_included(lift.surface, base.surface):
        witnesses.append("lift surface is not contained in the base surface")
    for p, nu in base.marks:
        if not lift.contains(p):
            continue
        nu_tilde = lift.ramification(p)
        if nu_tilde % nu != 0:
            witnesses.append(f"nu({p!r}) = {nu} does not divide nu_tilde = {nu_tilde}")
    return CheckResult(passed=not witnesses, witnesses=witnesses)


# ---------------------------------------------------------------------------
# Boundary set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """Disc (r_min = 0) or annulus window for boundary-set enumeration."""

    r_max: float
    r_min: float = 0.0
    center: complex = 0j

    def __post_init__(self):
        if self.r_max <= self.r_min or self.r_max <= 0:
            raise DomainError("need 0 <= r_min < r_max")


@dataclass
class BoundarySet:
    """Points of the lift-in-base boundary: extra ramification and surface boundary."""

    points: list[complex]
    provenance: list[str]  # "extra_ramification" | "surface_boundary"
    truncation_warning: bool = False

    def __len__(self) -> int:
        return len(self.points)


def boundary_set(
    map_spec: EntireMapSpec,
    lift: MarkedOrbifold,
    base: MarkedOrbifold,
    window: Window,
    circle_samples: int = 12,
) -> BoundarySet:
    """Enumerate boundary points of the lift inside the base within a window.

    Extra-ramification points are the preimages of base marks whose lift
    ramification exceeds their base ramification; surface-boundary points are
    sampled on removed-disc boundaries of the lift.  A truncation warning is
    attached when the window reaches beyond the stored mark moduli.
    """
    pts: list[complex] = []
    prov: list[str] = []
    if base.marks == lift.marks and type(base.surface) is type(lift.surface):
        if _surface_included(base.surface, lift.surface) and _surface_included(
            lift.surface, base.surface
        ):
            return BoundarySet([], [], truncation_warning=False)
    seen: set[tuple[float, float]] = set()
    for value, nu_value in base.marks:
        for z in map_spec.preimages(value, window.r_max, window.r_min):
            if not base.contains(z) or not lift.contains(z):
                continue
            deg = local_degree(map_spec, z)
            if nu_value % deg != 0:
                raise DivisibilityError(
                    f"deg(f, {z!r}) = {deg} does not divide nu({value!r}) = {nu_value}"
                )
            nu_tilde = nu_value // deg
            if nu_tilde > base.ramification(z):
                key = (round(z.real, 8), round(z.imag, 8))
                if key not in seen:
                    seen.add(key)
                    pts.append(z)
                    prov.append("extra_ramification")
    if isinstance(lift.surface, PlaneMinusDiscs):
        base_discs = base.surface.discs if isinstance(base.surface, PlaneMinusDiscs) else ()
        for c, r in lift.surface.discs:
            shared = any(abs(c - cb) <= _MATCH_TOL and abs(r - rb) <= 1e-12 for cb, rb in base_discs)
            if shared:
                continue  # coincides with the base boundary: infinite distance
            for j in range(circle_samples):
                z = c + r * cmath.exp(2j * math.pi * j / circle_samples)
                m = abs(z - window.center)
                if window.r_min <= m <= window.r_max and base.contains(z):
                    pts.append(z)
                    prov.append("surface_boundary")
    # Preimages of marks deeper than the second-deepest stored orbit point
    # would already fall inside this window, so flag windows beyond it; a
    # complete truncation (every orbit closed up) has no missing marks.
    moduli = sorted(abs(p) for p, _ in base.marks)
    frontier = moduli[-2] if len(moduli) >= 2 else (moduli[-1] if moduli else 0.0)
    warning = window.r_max > frontier and not base.truncation_complete
    order = sorted(range(len(pts)), key=lambda i: (abs(pts[i]), pts[i].real, pts[i].imag))
    return BoundarySet(
        points=[pts[i] for i in order],
        provenance=[prov[i] for i in order],
        truncation_warning=warning,
    )
