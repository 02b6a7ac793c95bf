"""Command-line front end: deterministic runs, JSON/CSV reports, exit codes.

Subcommands: bounds, orbifold, separation, expansion, pullback, homotopy,
basin.  Configuration is a flat key = value text file; command-line flags
override file values.  All floats are emitted with 12 significant digits and
every run with the same configuration produces byte-identical files.

Exit codes: 0 pass, 2 mathematical check failure, 64 usage error,
70 internal error.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import bounds as bnd
from .certify import (
    annulus_uniformity_scan,
    expansion_certificate,
    pullback_shrinking_experiment,
    spearman_rank_correlation,
)
from .curves import PolylineCurve
from .errors import HyporbError, NotFound, UsageError
from .homotopy import build_representative, epsilon_prime, relative_winding, winding_class
from .maps import get_map, postsingular_truncation
from .orbifolds import (
    DiscSurface,
    MarkedOrbifold,
    Window,
    boundary_set,
    build_associated_orbifold,
    check_covering_relation,
    check_holomorphic_inclusion,
    find_absorbing_disc,
    separation_report,
)


@dataclass
class RunConfig:
    """Flat run configuration with embedded defaults."""

    map: str = "cosh"
    depth: int = 8
    escape_radius: float = 1e6
    K: float = 2.0
    w_points: int = 999
    k_max: int = 64
    r_min: float = 0.05
    r_max: float = 8.0
    r_points: int = 160
    refinement: float = 1e-3
    margin_rel: float = 1e-3
    seed: int = 1234
    sample_count: int = 40
    sample_r_min: float = 2.0
    sample_r_max: float = 100.0
    scale_min_exp: int = 2
    scale_max_exp: int = 9
    samples_per_scale: int = 6
    pullback_re_a: float = 5.5
    pullback_re_b: float = 6.0
    pullback_imag: float = 0.5
    pullback_kmax: int = 9
    homotopy_eps: float = 1.0
    homotopy_n_max: int = 10
    homotopy_d: str = "2,3,6"
    output: str = "."
    format: str = "both"

    def validate(self) -> None:
        numeric_positive = (
            "escape_radius", "refinement", "margin_rel", "homotopy_eps",
            "sample_r_min", "sample_r_max", "r_min", "r_max",
        )
        for name in numeric_positive:
            if getattr(self, name) <= 0:
                raise UsageError(f"config key {name} must be positive")
        if self.K <= 1:
            raise UsageError("config key K must exceed 1")
        for name in ("depth", "w_points", "k_max", "r_points", "sample_count",
                     "samples_per_scale", "pullback_kmax", "homotopy_n_max"):
            if getattr(self, name) < 1:
                raise UsageError(f"config key {name} must be >= 1")
        if self.format not in ("json", "csv", "both"):
            raise UsageError("config key format must be json, csv or both")
        try:
            self.homotopy_orders()
        except ValueError:
            raise UsageError("config key homotopy_d must be comma-separated integers >= 2") from None

    def homotopy_orders(self) -> list[int]:
        orders = [int(tok) for tok in self.homotopy_d.split(",") if tok.strip()]
        if not orders or any(d < 2 for d in orders):
            raise ValueError("bad homotopy orders")
        return orders


def load_config(path: str | None) -> RunConfig:
    cfg = RunConfig()
    if path is None:
        return cfg
    valid = {f.name: f.type for f in fields(RunConfig)}
    updates: dict[str, object] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, _, value = (tok.strip() for tok in line.partition("="))
        if key not in valid:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        updates[key] = _coerce(key, value)
    return replace(cfg, **updates)


def _coerce(key: str, value: str):
    current = getattr(RunConfig(), key)
    try:
        if isinstance(current, bool):
            return value.lower() in ("1", "true", "yes")
        if isinstance(current, int):
            return int(value)
        if isinstance(current, float):
            return float(value)
        return value
    except ValueError:
        raise UsageError(f"config key {key}: cannot parse {value!r}") from None


def f12(x: float) -> float:
    """Round to 12 significant digits for stable, readable output."""
    if x != x or x in (math.inf, -math.inf):
        return x
    return float(f"{x:.12g}")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


class _Reporter:
    """Writes the per-command json/csv artifacts under the output directory."""

    def __init__(self, cfg: RunConfig, command: str):
        self.cfg = cfg
        self.command = command
        self.outdir = Path(cfg.output)
        self.outdir.mkdir(parents=True, exist_ok=True)

    def write_json(self, payload: dict) -> None:
        if self.cfg.format in ("json", "both"):
            path = self.outdir / f"{self.command}.json"
            path.write_text(json.dumps(payload, indent=2) + "\n")

    def write_csv(self, header: list[str], rows: list[list]) -> None:
        if self.cfg.format in ("csv", "both"):
            path = self.outdir / f"{self.command}.csv"
            lines = [",".join(header)]
            for row in rows:
                lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
            path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_bounds(cfg: RunConfig) -> int:
    rep = _Reporter(cfg, "bounds")
    w_grid = [0.001 * j for j in range(1, cfg.w_points + 1)]
    w_grid = [w for w in w_grid if 0.0 < w < 1.0]
    chain = bnd.verify_bound_chain(w_grid, range(2, cfg.k_max + 1))
    table = bnd.lambda_table(cfg.r_min, cfg.r_max, cfg.r_points)
    rep.write_csv(["R", "Lambda"], [[f12(R), f12(v)] for R, v in table])
    rep.write_json(
        {
            "command": "bounds",
            "passed": chain.passed,
            "samples": len(chain.samples),
            "worst_slack": f12(chain.worst_slack),
            "violations": [
                {"w": f12(v.w), "k": v.k, "what": v.description, "slack": f12(v.slack)}
                for v in chain.violations[:20]
            ],
            "lambda_at_1": f12(bnd.lambda_lower(1.0)),
        }
    )
    print(f"bounds: {'pass' if chain.passed else 'FAIL'} "
          f"({len(chain.samples)} samples, worst slack {_fmt(chain.worst_slack)})")
    return 0 if chain.passed else 2


def _build_pair(cfg: RunConfig):
    spec = get_map(cfg.map)
    pair = build_associated_orbifold(spec, cfg.depth, cfg.escape_radius)
    return spec, pair


def cmd_orbifold(cfg: RunConfig) -> int:
    rep = _Reporter(cfg, "orbifold")
    spec, (base, lift) = _build_pair(cfg)
    rng = np.random.default_rng(cfg.seed)
    samples = []
    while len(samples) < 8:
        z = complex(rng.uniform(-9, 9), rng.uniform(-9, 9))
        if base.contains(z) and base.ramification(z) == 1 and lift.ramification(z) == 1:
            samples.append(z)
    covering = check_covering_relation(spec, base, lift, samples)
    inclusion = check_holomorphic_inclusion(lift, base)
    trunc = postsingular_truncation(spec, cfg.depth, cfg.escape_radius)
    sep = separation_report(trunc, cfg.K, spec)
    payload = {
        "command": "orbifold",
        "map": cfg.map,
        "base": _round_orbifold(base.to_json()),
        "lift": _round_orbifold(lift.to_json()),
        "covering_passed": covering.passed,
        "covering_witnesses": covering.witnesses[:10],
        "inclusion_passed": inclusion.passed,
        "inclusion_witnesses": inclusion.witnesses[:10],
        "separation": {k: f12(v) if isinstance(v, float) else v for k, v in sep.to_json().items()},
    }
    rep.write_json(payload)
    rep.write_csv(
        ["mark_re", "mark_im", "ramification"],
        [[f12(p.real), f12(p.imag), nu] for p, nu in base.marks],
    )
    ok = covering.passed and inclusion.passed
    print(f"orbifold[{cfg.map}]: {'pass' if ok else 'FAIL'} "
          f"({len(base.marks)} base marks, {len(lift.marks)} lift marks)")
    return 0 if ok else 2


def _round_orbifold(data: dict) -> dict:
    data["surface"]["discs"] = [[f12(v) for v in d] for d in data["surface"]["discs"]]
    data["marks"] = [[f12(m[0]), f12(m[1]), m[2]] for m in data["marks"]]
    return data


def cmd_separation(cfg: RunConfig) -> int:
    rep = _Reporter(cfg, "separation")
    spec = get_map(cfg.map)
    trunc = postsingular_truncation(spec, cfg.depth, cfg.escape_radius)
    sep = separation_report(trunc, cfg.K, spec)
    payload = {
        "command": "separation",
        "map": cfg.map,
        "points": [[f12(p.point.real), f12(p.point.imag)] for p in trunc.points],
        "julia_candidates": sum(1 for p in trunc.points if not p.fatou_candidate),
        "fatou_candidates": sum(1 for p in trunc.points if p.fatou_candidate),
        "report": {k: f12(v) if isinstance(v, float) else v for k, v in sep.to_json().items()},
    }
    rep.write_json(payload)
    rep.write_csv(
        ["epsilon_star", "annulus_count_M", "orbit_crit_bound_c", "max_local_degree", "depth", "K"],
        [[f12(sep.epsilon_star), sep.annulus_count_M, sep.orbit_crit_bound_c,
          sep.max_local_degree, sep.depth, f12(sep.K)]],
    )
    print(f"separation[{cfg.map}]: eps*={_fmt(sep.epsilon_star)} M={sep.annulus_count_M} "
          f"c={sep.orbit_crit_bound_c}")
    return 0


def sample_points(cfg: RunConfig) -> list[complex]:
    """Deterministic log-spiral samples in the configured annulus."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    pts = []
    n = cfg.sample_count
    ratio = cfg.sample_r_max / cfg.sample_r_min
    for j in range(n):
        r = cfg.sample_r_min * ratio ** (j / max(n - 1, 1))
        theta = 2.0 * math.pi * ((0.17 + j * phi) % 1.0)
        pts.append(r * complex(math.cos(theta), math.sin(theta)))
    return pts


def cmd_expansion(cfg: RunConfig) -> int:
    rep = _Reporter(cfg, "expansion")
    spec, pair = _build_pair(cfg)
    base, lift = pair
    window = Window(r_max=8.0 * cfg.sample_r_max, r_min=0.0)
    supply = boundary_set(spec, lift, base, window)
    certs = []
    for z in sample_points(cfg):
        cert = expansion_certificate(
            pair, z, supply, refinement=cfg.refinement, margin_rel=cfg.margin_rel
        )
        certs.append(cert)
    min_lambda = min(c.lambda_bar for c in certs)
    scales = [2.0**e for e in range(cfg.scale_min_exp, cfg.scale_max_exp + 1)]
    rows = annulus_uniformity_scan(
        spec, pair, scales, samples_per_scale=cfg.samples_per_scale, refinement=cfg.refinement
    )
    maxes = [r.max_R_bar for r in rows if r.samples > 0]
    rho = spearman_rank_correlation(list(range(len(maxes))), maxes) if len(maxes) >= 2 else 0.0
    payload = {
        "command": "expansion",
        "map": cfg.map,
        "certificates": [
            {
                "point": [f12(c.point.real), f12(c.point.imag)],
                "R_bar": f12(c.R_bar),
                "lambda_bar": f12(c.lambda_bar),
                "path": [[f12(v.real), f12(v.imag)] for v in c.path.vertices],
                "truncation_depth": c.truncation_depth,
            }
            for c in certs
        ],
        "min_lambda_bar": f12(min_lambda),
        "scan": [
            {
                "scale": f12(r.scale),
                "max_R_bar": f12(r.max_R_bar),
                "min_lambda_bar": f12(r.min_lambda_bar),
                "samples": r.samples,
                "truncation_warning": r.truncation_warning,
            }
            for r in rows
        ],
        "scan_spearman": f12(rho),
        "boundary_points": len(supply),
        "truncation_note": "boundary set enumerated from depth-"
        f"{cfg.depth} truncated data; escape labels are truncation-relative",
    }
    rep.write_json(payload)
    rep.write_csv(
        ["scale", "max_R_bar", "min_lambda_bar", "samples"],
        [[f12(r.scale), f12(r.max_R_bar), f12(r.min_lambda_bar), r.samples] for r in rows],
    )
    print(f"expansion[{cfg.map}]: min certified lambda {_fmt(min_lambda)} over {len(certs)} points")
    if min_lambda <= 1.0:
        print("internal error: certificate with lambda_bar <= 1", file=sys.stderr)
        return 70
    return 0


def cmd_pullback(cfg: RunConfig) -> int:
    rep = _Reporter(cfg, "pullback")
    spec, pair = _build_pair(cfg)
    a = complex(cfg.pullback_re_a, cfg.pullback_imag)
    b = complex(cfg.pullback_re_b, cfg.pullback_imag)
    curve0 = PolylineCurve([a, b])
    seed = -cmath.acosh(a) if cfg.map in ("cosh",) else None
    if seed is None:
        pres = spec.preimages(a, abs(a) + 12.0, 0.0)
        if not pres:
            raise NotFound("no branch seed for the pullback experiment")
        seed = min(pres, key=lambda p: (abs(p - a), p.real, p.imag))
    result = pullback_shrinking_experiment(
        spec, pair, curve0, seed, k_max=cfg.pullback_kmax, refinement=cfg.refinement
    )
    ratios = result.ratios()
    bad = [(k, v) for k, v in ratios if k >= 2 and not v < 1.0]
    rep.write_csv(
        ["k", "length_bound"],
        [[r.k, f12(r.length_bound)] for r in result.rows],
    )
    rep.write_json(
        {
            "command": "pullback",
            "map": cfg.map,
            "curve0": [[f12(v.real), f12(v.imag)] for v in curve0.vertices],
            "branch_seed": [f12(seed.real), f12(seed.imag)],
            "lengths": [f12(r.length_bound) for r in result.rows],
            "ratios": [{"k": k, "ratio": f12(v)} for k, v in ratios],
            "decay_rate": f12(result.decay_rate),
            "forward_residual": f12(result.forward_residual),
            "monotone_after_burn_in": not bad,
        }
    )
    print(f"pullback[{cfg.map}]: rate {_fmt(result.decay_rate)}, "
          f"forward residual {_fmt(result.forward_residual)}")
    return 0 if not bad else 2


def cmd_homotopy(cfg: RunConfig) -> int:
    rep = _Reporter(cfg, "homotopy")
    eps = cfg.homotopy_eps
    limit = eps / 6.0
    rows = []
    violations = 0
    from .certify import certified_curve_length

    for d in cfg.homotopy_orders():
        ep = epsilon_prime(eps, d)
        orb = MarkedOrbifold(DiscSurface(0j, eps), ((0j, d),))
        p = 0.8 * ep * cmath.exp(0.3j)
        q = 0.6 * ep * cmath.exp(-1.1j)
        direct = build_representative(p, q, 0, 1, eps, d)
        w0 = winding_class(direct, 0j)
        for n in range(0, cfg.homotopy_n_max + 1):
            for sign in (1, -1):
                rep_curve = build_representative(p, q, n, sign, eps, d)
                length = certified_curve_length(orb, rep_curve, refinement=eps, mark_margin=0.0)
                wind = relative_winding(winding_class(rep_curve, 0j), w0)
                ok = length < limit and wind == sign * n
                violations += 0 if ok else 1
                rows.append([d, n, sign, f12(length), wind, f12(limit)])
    rep.write_csv(["d", "n", "sign", "length", "winding", "limit"], rows)
    rep.write_json(
        {
            "command": "homotopy",
            "eps": f12(eps),
            "orders": cfg.homotopy_orders(),
            "n_max": cfg.homotopy_n_max,
            "rows": len(rows),
            "violations": violations,
            "max_length": f12(max(r[3] for r in rows)),
            "limit": f12(limit),
        }
    )
    print(f"homotopy: {len(rows)} representatives, max length "
          f"{_fmt(max(r[3] for r in rows))} < {_fmt(limit)}: {violations == 0}")
    return 0 if violations == 0 else 2


def cmd_basin(cfg: RunConfig) -> int:
    rep = _Reporter(cfg, "basin")
    spec = get_map(cfg.map)
    trunc = postsingular_truncation(spec, cfg.depth, cfg.escape_radius)
    discs = []
    seen: list[complex] = []
    for value, record in trunc.records.items():
        cyc = record.cycle_points()
        if not cyc:
            continue
        mult = abs(np.prod([spec.deriv(p) for p in cyc]))
        if mult >= 1.0 - 1e-9:
            continue
        for q in cyc:
            if any(abs(q - s) < 1e-9 for s in seen):
                continue
            seen.append(q)
            disc = find_absorbing_disc(spec, q)
            discs.append(
                {
                    "center": [f12(disc.center.real), f12(disc.center.imag)],
                    "radius": f12(disc.radius),
                    "boundary_sup": f12(disc.boundary_sup),
                }
            )
    rep.write_json({"command": "basin", "map": cfg.map, "absorbing_discs": discs})
    rep.write_csv(
        ["center_re", "center_im", "radius", "boundary_sup"],
        [[d["center"][0], d["center"][1], d["radius"], d["boundary_sup"]] for d in discs],
    )
    print(f"basin[{cfg.map}]: {len(discs)} absorbing disc(s)")
    return 0


_COMMANDS = {
    "bounds": cmd_bounds,
    "orbifold": cmd_orbifold,
    "separation": cmd_separation,
    "expansion": cmd_expansion,
    "pullback": cmd_pullback,
    "homotopy": cmd_homotopy,
    "basin": cmd_basin,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 64 on usage problems, not argparse's 2
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="hyporb", description=__doc__)
    parser.add_argument("command", choices=sorted(_COMMANDS) + ["show-config"])
    parser.add_argument("--config", help="flat key = value configuration file")
    parser.add_argument("--output", help="output directory (overrides config)")
    parser.add_argument("--map", help="catalogue map name")
    parser.add_argument("--depth", type=int)
    parser.add_argument("--format", choices=["json", "csv", "both"])
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override any config key",
    )
    parser.add_argument("--show-config", action="store_true", help="print the effective config")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config)
        overrides: dict[str, object] = {}
        for flag in ("output", "map", "depth", "format"):
            value = getattr(args, flag)
            if value is not None:
                overrides[flag] = value
        for item in args.set:
            if "=" not in item:
                raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in {f.name for f in fields(RunConfig)}:
                raise UsageError(f"unknown config key {key!r}")
            overrides[key] = _coerce(key, value.strip())
        cfg = replace(cfg, **overrides)
        cfg.validate()
        if args.command == "show-config" or args.show_config:
            for f in fields(RunConfig):
                print(f"{f.name} = {getattr(cfg, f.name)}")
            if args.command == "show-config":
                return 0
        return _COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64
    except HyporbError as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 70
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 70


if __name__ == "__main__":
    sys.exit(main())
