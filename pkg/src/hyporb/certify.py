"""Certified expansion lower bounds via density upper bounds and curve lengths.

The engine only ever needs UPPER bounds on distances: the expansion floor is
decreasing in the distance, so any certified path length R_bar yields a valid
certificate lambda_lower(R_bar).  Density upper bounds come from closed-form
witness models (a one-cone disc around the nearest mark, or a mark-free
disc), and curve lengths are summed per piece with the exact supremum of the
witness density over the piece, refined adaptively near singularities so the
bound converges to the true integral from above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import lambda_lower
from .curves import PolylineCurve, polyline_point_distance
from .errors import BranchBreak, DomainError, PathBlocked
from .maps import EntireMapSpec, evaluate, pullback_curve
from .models import ConeDisc, cone_density, hyp_distance_disc
from .orbifolds import (
    BoundarySet,
    DiscSurface,
    MarkedOrbifold,
    Plane,
    PlaneMinusDiscs,
    Window,
    boundary_set,
)


@dataclass(frozen=True)
class CleanDisc:
    """A mark-free disc witness of radius ``radius`` centred at the point."""

    radius: float


@dataclass(frozen=True)
class DensityBound:
    point: complex
    upper: float
    witness: ConeDisc | CleanDisc


def _isolation_radius(orb: MarkedOrbifold, index: int) -> float:
    """Distance from mark ``index`` to the nearest other mark or the boundary."""
    p, _ = orb.marks[index]
    dist = orb.boundary_distance(p)
    for j, (q, _) in enumerate(orb.marks):
        if j != index:
            dist = min(dist, abs(p - q))
    return dist


def upper_density_bound(orb: MarkedOrbifold, z: complex) -> DensityBound:
    """Closed-form upper bound on the orbifold density at ``z``.

    Inside the isolation disc of the nearest mark the witness is the one-cone
    disc model there; elsewhere it is the largest mark-free disc around
    ``z``.  Either witness embeds holomorphically, so its density dominates.
    """
    z = complex(z)
    if not orb.contains(z):
        raise DomainError(f"{z!r} lies outside the surface")
    b_dist = orb.boundary_distance(z)
    if not orb.marks:
        if not math.isfinite(b_dist):
            raise DomainError("mark-free plane is not hyperbolic")
        return DensityBound(point=z, upper=2.0 / b_dist, witness=CleanDisc(b_dist))
    dists = [abs(z - p) for p, _ in orb.marks]
    i = int(np.argmin(dists))
    p, nu = orb.marks[i]
    d = dists[i]
    if d <= 1e-12:
        raise DomainError(f"{z!r} is numerically at a mark")
    eps = _isolation_radius(orb, i)
    if not math.isfinite(eps):
        # a plane with a single mark is not hyperbolic; no witness exists
        raise DomainError("no finite witness disc around the only mark")
    if d < eps:
        return DensityBound(
            point=z,
            upper=cone_density(nu, eps, d),
            witness=ConeDisc(order=nu, radius=eps, center=p),
        )
    delta = min(min(dists), b_dist)
    if not math.isfinite(delta):
        raise DomainError("unbounded mark-free region: no witness disc")
    return DensityBound(point=z, upper=2.0 / delta, witness=CleanDisc(delta))


# ---------------------------------------------------------------------------
# Vectorized certified curve length
# ---------------------------------------------------------------------------


def _seg_point_dists(a: np.ndarray, b: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """(pieces, marks) matrix of segment-to-point distances."""
    d = (b - a)[:, None]
    ap = pts[None, :] - a[:, None]
    dd = (d.real**2 + d.imag**2)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(dd > 0, (ap.real * d.real + ap.imag * d.imag) / np.where(dd > 0, dd, 1), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a[:, None] + t * d
    return np.abs(pts[None, :] - closest)


def _boundary_min_dist(orb: MarkedOrbifold, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-piece minimum distance to the surface boundary."""
    n = a.shape[0]
    if isinstance(orb.surface, Plane):
        return np.full(n, np.inf)
    if isinstance(orb.surface, PlaneMinusDiscs):
        centers = np.asarray([c for c, _ in orb.surface.discs], dtype=complex)
        radii = np.asarray([r for _, r in orb.surface.discs])
        if centers.size == 0:
            return np.full(n, np.inf)
        d = _seg_point_dists(a, b, centers) - radii[None, :]
        return d.min(axis=1)
    # Disc surface: the boundary circle is farthest from the segment at an endpoint.
    c = orb.surface.center
    far = np.maximum(np.abs(a - c), np.abs(b - c))
    return orb.surface.radius - far


def certified_curve_length(
    orb: MarkedOrbifold,
    curve: PolylineCurve,
    refinement: float = 1e-3,
    mark_margin: float = 1e-9,
    max_rounds: int = 60,
    tighten: float = 1.02,
) -> float:
    """Upper bound for the orbifold length of a polyline.

    Segments are bisected (nested, so halving ``refinement`` never increases
    the result) until each piece is shorter than ``refinement``; pieces whose
    certified density supremum still exceeds ``tighten`` times the density at
    their far end keep splitting, which grades the subdivision geometrically
    into integrable singularities.  Each piece contributes its Euclidean
    length times the exact supremum of the best witness density over the
    piece, so the total always dominates the witness-model integral.
    """
    if refinement <= 0:
        raise DomainError("refinement must be positive")
    verts = curve.as_array()
    a_all = verts[:-1]
    b_all = verts[1:]
    keep = np.abs(b_all - a_all) > 0
    a = a_all[keep]
    b = b_all[keep]
    if a.size == 0:
        curve.certified_metric_length = 0.0
        return 0.0

    marks = orb.mark_points()
    nus = np.asarray([nu for _, nu in orb.marks], dtype=float)
    iso = np.asarray([_isolation_radius(orb, i) for i in range(len(orb.marks))])
    # an infinite isolation radius admits no valid cone witness
    iso = np.where(np.isfinite(iso), iso, 0.0)

    def piece_bounds(a_: np.ndarray, b_: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(sup bound, far-end pointwise bound) per piece."""
        bdy = _boundary_min_dist(orb, a_, b_)
        if np.any(bdy < mark_margin) or np.any(bdy <= 0):
            raise DomainError("curve touches the surface boundary")
        if marks.size:
            dmin = _seg_point_dists(a_, b_, marks)
            dmax = np.maximum(np.abs(a_[:, None] - marks[None, :]), np.abs(b_[:, None] - marks[None, :]))
            if np.any(dmin.min(axis=1) < mark_margin) or np.any(dmin.min(axis=1) <= 0):
                raise DomainError("curve touches a mark")
            clean = 2.0 / np.minimum(dmin.min(axis=1), bdy)
            sup = clean.copy()
            far = clean.copy()
            for j in range(marks.size):
                inside = dmax[:, j] < iso[j]
                if not np.any(inside):
                    continue
                k = nus[j]
                eps = iso[j]
                lo = dmin[inside, j]
                hi = dmax[inside, j]
                cone_sup = np.maximum(
                    _cone_density_arr(k, eps, lo), _cone_density_arr(k, eps, hi)
                )
                cone_far = _cone_density_arr(k, eps, hi)
                sup_in = sup[inside]
                far_in = far[inside]
                sup[inside] = np.minimum(sup_in, cone_sup)
                far[inside] = np.minimum(far_in, cone_far)
            return sup, far
        return 2.0 / bdy, 2.0 / bdy

    total = 0.0
    for _ in range(max_rounds):
        lens = np.abs(b - a)
        sup, far = piece_bounds(a, b)
        split = (lens > refinement) | (sup > tighten * far)
        done = ~split
        total += float(np.sum(lens[done] * sup[done]))
        if not np.any(split):
            break
        a_s, b_s = a[split], b[split]
        mid = 0.5 * (a_s + b_s)
        a = np.concatenate([a_s, mid])
        b = np.concatenate([mid, b_s])
    else:
        lens = np.abs(b - a)
        sup, _ = piece_bounds(a, b)
        total += float(np.sum(lens * sup))
    curve.certified_metric_length = total
    return total


def _cone_density_arr(k: float, eps: float, d: np.ndarray) -> np.ndarray:
    u = (d / eps) ** (1.0 / k)
    with np.errstate(divide="ignore"):
        return 2.0 / (k * eps ** (1.0 / k) * d ** ((k - 1.0) / k) * (1.0 - u * u))


# ---------------------------------------------------------------------------
# Expansion certificates
# ---------------------------------------------------------------------------


@dataclass
class ExpansionCertificate:
    """A point, a certified distance upper bound, and the expansion floor it implies."""

    point: complex
    path: PolylineCurve
    R_bar: float
    lambda_bar: float
    truncation_depth: int

    def to_json(self) -> dict:
        return {
            "point": [self.point.real, self.point.imag],
            "R_bar": self.R_bar,
            "lambda_bar": self.lambda_bar,
            "path": [[v.real, v.imag] for v in self.path.vertices],
            "truncation_depth": self.truncation_depth,
        }


def _exact_disc_distance(orb: MarkedOrbifold, z: complex, w: complex) -> float:
    c, r = orb.surface.center, orb.surface.radius
    return hyp_distance_disc((z - c) / r, (w - c) / r)


def _candidate_paths(z: complex, b: complex) -> list[list[complex]]:
    paths = [[z, b]]
    h = 0.5 * max(abs(z), abs(b))
    if h > 0:
        for sgn in (1.0, -1.0):
            paths.append([z, z + 1j * sgn * h, b])
    return paths


def _min_mark_distance(orb: MarkedOrbifold, pts: list[complex]) -> float:
    marks = orb.mark_points()
    if marks.size == 0:
        return math.inf
    a = np.asarray(pts[:-1], dtype=complex)
    b = np.asarray(pts[1:], dtype=complex)
    return float(_seg_point_dists(a, b, marks).min())


def expansion_certificate(
    pair: tuple[MarkedOrbifold, MarkedOrbifold],
    z: complex,
    boundary: BoundarySet,
    refinement: float = 1e-3,
    margin_rel: float = 1e-3,
    max_candidates: int = 12,
) -> ExpansionCertificate:
    """Certify an expansion floor at ``z`` from a boundary-point supply.

    Candidate boundary points (nearest by Euclidean distance, plus a
    high-imaginary selection that keeps paths away from mark rows) are joined
    to ``z`` by straight or single-waypoint paths; the smallest certified
    path length wins.  On a mark-free disc orbifold the exact hyperbolic
    distance is used, which reproduces the sharp single-cone case.
    """
    base, lift = pair
    if not boundary.points:
        raise PathBlocked("empty boundary set")
    z = complex(z)
    if lift.ramification(z) > 1 or base.ramification(z) > 1:
        raise DomainError(f"{z!r} is marked")
    if not base.contains(z):
        raise DomainError(f"{z!r} outside the base surface")

    if isinstance(base.surface, DiscSurface) and not base.marks:
        b = min(boundary.points, key=lambda p: _exact_disc_distance(base, z, p))
        R_bar = _exact_disc_distance(base, z, b)
        return ExpansionCertificate(
            point=z,
            path=PolylineCurve.segment(z, b),
            R_bar=R_bar,
            lambda_bar=lambda_lower(R_bar),
            truncation_depth=base.truncation_depth,
        )

    pts = boundary.points
    by_euclid = sorted(pts, key=lambda p: (abs(p - z), p.real, p.imag))
    candidates = list(by_euclid[:max_candidates])
    high = [p for p in pts if abs(p.imag) >= 0.5 * abs(z)]
    for p in sorted(high, key=lambda p: (abs(p - z), p.real, p.imag))[:4]:
        if p not in candidates:
            candidates.append(p)

    margin = margin_rel * _local_isolation(base, z)
    best: tuple[float, list[complex]] | None = None
    for b in candidates:
        for path_pts in _candidate_paths(z, b):
            if _min_mark_distance(base, path_pts) < margin:
                continue
            try:
                length = certified_curve_length(
                    base,
                    PolylineCurve(path_pts),
                    refinement=max(refinement, _path_len(path_pts) / 256.0),
                    mark_margin=min(margin, 1e-9),
                )
            except DomainError:
                continue
            if math.isfinite(length) and (best is None or length < best[0]):
                best = (length, path_pts)
    if best is None:
        raise PathBlocked(f"no mark-avoiding path from {z!r} to the boundary set")
    R_bar, path_pts = best
    return ExpansionCertificate(
        point=z,
        path=PolylineCurve(path_pts),
        R_bar=R_bar,
        lambda_bar=lambda_lower(R_bar),
        truncation_depth=base.truncation_depth,
    )


def _path_len(pts: list[complex]) -> float:
    return sum(abs(b - a) for a, b in zip(pts, pts[1:]))


def _local_isolation(orb: MarkedOrbifold, z: complex) -> float:
    marks = orb.mark_points()
    if marks.size == 0:
        d = orb.boundary_distance(z)
        return d if math.isfinite(d) else 1.0
    return float(np.abs(marks - z).min())


# ---------------------------------------------------------------------------
# Scans and experiments
# ---------------------------------------------------------------------------


@dataclass
class ScanRow:
    scale: float
    max_R_bar: float
    min_lambda_bar: float
    samples: int
    truncation_warning: bool


def sample_angles(count: int) -> list[float]:
    """Deterministic golden-angle set, bounded away from the real axis rows."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    return [2.0 * math.pi * ((0.17 + j * phi) % 1.0) for j in range(count)]


def annulus_uniformity_scan(
    map_spec: EntireMapSpec,
    pair: tuple[MarkedOrbifold, MarkedOrbifold],
    scales: list[float],
    samples_per_scale: int = 12,
    radius_factors: tuple[float, ...] = (1.0, 1.3, 1.7),
    refinement: float = 1e-3,
) -> list[ScanRow]:
    """Per-scale maxima of certified distances to the boundary set.

    For each scale t the boundary supply is the slice [t/8, 4 t max(factors)]
    of one shared enumeration, and certificates are computed at deterministic
    sample points on the circles |z| = t * radius_factors.  The tested claim
    is the absence of growth of max R_bar across scales.
    """
    base, lift = pair
    rows: list[ScanRow] = []
    n_angles = max(1, samples_per_scale // len(radius_factors))
    angles = sample_angles(n_angles)
    # One shared boundary enumeration covering every scale window.
    span = Window(
        r_max=4.0 * max(scales) * max(radius_factors),
        r_min=min(scales) / 8.0,
    )
    shared = boundary_set(map_spec, lift, base, span)
    for t in scales:
        r_lo, r_hi = t / 8.0, 4.0 * t * max(radius_factors)
        idx = [i for i, p in enumerate(shared.points) if r_lo <= abs(p) <= r_hi]
        bset = BoundarySet(
            points=[shared.points[i] for i in idx],
            provenance=[shared.provenance[i] for i in idx],
            truncation_warning=shared.truncation_warning,
        )
        if not bset.points:
            rows.append(
                ScanRow(scale=t, max_R_bar=math.nan, min_lambda_bar=math.nan, samples=0,
                        truncation_warning=True)
            )
            continue
        worst_R = 0.0
        best_lambda = math.inf
        n = 0
        for f in radius_factors:
            for theta in angles:
                z = t * f * complex(math.cos(theta), math.sin(theta))
                if base.ramification(z) > 1 or lift.ramification(z) > 1:
                    continue
                cert = expansion_certificate(pair, z, bset, refinement=refinement)
                worst_R = max(worst_R, cert.R_bar)
                best_lambda = min(best_lambda, cert.lambda_bar)
                n += 1
        rows.append(
            ScanRow(
                scale=t,
                max_R_bar=worst_R,
                min_lambda_bar=best_lambda,
                samples=n,
                truncation_warning=bset.truncation_warning,
            )
        )
    return rows


def spearman_rank_correlation(xs: list[float], ys: list[float]) -> float:
    """Spearman rho with average ranks for ties."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise DomainError("need two sequences of equal length >= 2")

    def ranks(vals: list[float]) -> np.ndarray:
        order = np.argsort(vals, kind="stable")
        r = np.empty(len(vals))
        sorted_vals = np.asarray(vals)[order]
        i = 0
        while i < len(vals):
            j = i
            while j + 1 < len(vals) and sorted_vals[j + 1] == sorted_vals[i]:
                j += 1
            r[order[i : j + 1]] = 0.5 * (i + j) + 1.0
            i = j + 1
        return r

    rx, ry = ranks(xs), ranks(ys)
    rx -= rx.mean()
    ry -= ry.mean()
    denom = math.sqrt(float((rx**2).sum() * (ry**2).sum()))
    if denom == 0.0:
        return 0.0
    return float((rx * ry).sum() / denom)


@dataclass
class PullbackRow:
    k: int
    length_bound: float


@dataclass
class PullbackResult:
    rows: list[PullbackRow]
    decay_rate: float
    forward_residual: float

    def ratios(self) -> list[tuple[int, float]]:
        return [
            (r1.k, r1.length_bound / r0.length_bound if r0.length_bound > 0 else math.nan)
            for r0, r1 in zip(self.rows, self.rows[1:])
        ]


def pullback_shrinking_experiment(
    map_spec: EntireMapSpec,
    pair: tuple[MarkedOrbifold, MarkedOrbifold],
    curve0: PolylineCurve,
    branch_seed: complex,
    k_max: int = 9,
    refinement: float = 1e-4,
    newton_tol: float = 1e-13,
) -> PullbackResult:
    """Iterated inverse-branch pullback with certified orbifold lengths.

    The first pullback uses ``branch_seed``; each later step continues with
    the preimage of the current first vertex closest to it.  Reports the
    certified length sequence, the fitted geometric decay rate, and the
    worst forward-mapping residual of the deepest curve against curve0.
    """
    base, _ = pair
    rows = [PullbackRow(k=0, length_bound=certified_curve_length(base, curve0, refinement))]
    curves = [curve0]
    seed = complex(branch_seed)
    for k in range(1, k_max + 1):
        lifted = pullback_curve(map_spec, curves[-1], seed, tol=newton_tol)
        rows.append(
            PullbackRow(k=k, length_bound=certified_curve_length(base, lifted, refinement))
        )
        curves.append(lifted)
        if k < k_max:
            target = lifted.vertices[0]
            pres = map_spec.preimages(target, abs(target) + 12.0, 0.0)
            if not pres:
                raise BranchBreak(0, "no preimages for the next pullback step")
            seed = min(pres, key=lambda p: (abs(p - target), p.real, p.imag))

    # forward consistency of the deepest curve
    residual = 0.0
    deepest = curves[-1]
    for v in deepest.vertices:
        w = v
        for _ in range(k_max):
            w = evaluate(map_spec, w)
        residual = max(residual, polyline_point_distance(curve0, w))

    lengths = [r.length_bound for r in rows if r.length_bound > 0]
    if len(lengths) >= 3:
        logs = np.log(lengths[1:])
        ks = np.arange(1, len(lengths))
        slope = float(np.polyfit(ks, logs, 1)[0])
        rate = math.exp(slope)
    else:
        rate = math.nan
    return PullbackResult(rows=rows, decay_rate=rate, forward_residual=residual)
