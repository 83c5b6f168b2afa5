"""``bergman-lab`` command line.

Every command prints one report on stdout.  JSON reports start with a
``config`` object echoing the effective settings; ``--format csv`` emits a
header row followed by data rows.

Exit codes: 0 success, 1 failed verification or numeric error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import (
    __version__,
    _core,
    geometry,
    kernels,
    lqk,
    maps,
    operators,
    quadrature,
    verify,
)
from .errors import BergmanLabError
from .serialization import (
    decode_point,
    decode_points,
    dumps,
    encode_complex,
    points_from_csv,
    points_to_csv,
    rows_to_csv,
)


@dataclass
class RunConfig:
    command: str
    subcommand: str | None = None
    samples: int = 10**6
    seed: int = 0
    threads: int = 1
    format: str = "json"
    closure: bool = False
    tol_sigma: float = quadrature.SIGMA_RULE
    tol_rel: float = 1e-9
    tol_crit: float = maps.EPS_CRIT
    tol_coef: float = operators.COEF_TOL
    args: dict = field(default_factory=dict)

    def header(self) -> dict:
        out = asdict(self)
        out["backend"] = _core.BACKEND
        out["version"] = __version__
        out["determinism"] = "values are reproducible for a fixed (seed, threads) pair"
        return out


def _default_seed() -> int:
    env = os.environ.get("BERGMAN_LAB_SEED")
    try:
        return int(env) if env not in (None, "") else 0
    except ValueError:
        return 0


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, default=10**6, help="Monte Carlo proposals (default 1e6)")
    p.add_argument("--seed", type=int, default=None,
                   help="master seed (default: $BERGMAN_LAB_SEED or 0)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker count; results are deterministic per (seed, threads)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--closure", action="store_true",
                   help="allow the first kernel argument on the closure")
    p.add_argument("--tol-sigma", type=float, default=quadrature.SIGMA_RULE,
                   help="sigma multiple for statistical checks")
    p.add_argument("--tol-rel", type=float, default=1e-9, help="relative tolerance")
    p.add_argument("--tol-crit", type=float, default=maps.EPS_CRIT,
                   help="critical-value guard band")
    p.add_argument("--tol-coef", type=float, default=operators.COEF_TOL,
                   help="coefficient tolerance for polynomial identities")


def _leaf(sub, name: str, common, help: str) -> argparse.ArgumentParser:
    return sub.add_parser(name, parents=[common], allow_abbrev=False, help=help)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    _common(common)
    parser = argparse.ArgumentParser(
        prog="bergman-lab", allow_abbrev=False,
        description="Bergman kernels of R_II, the tetrablock and the symmetrized bidisc.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = _leaf(sub, "kernel", common, "evaluate a Bergman kernel")
    p.add_argument("--domain", required=True, choices=sorted(geometry.DOMAINS))
    p.add_argument("--x", required=True, help="first point, JSON array of [re, im]")
    p.add_argument("--y", required=True, help="second point, JSON array of [re, im]")
    p.add_argument("--volume", type=float, default=None,
                   help="Vol(R_II) to use instead of a Monte Carlo estimate")

    p = _leaf(sub, "member", common, "domain membership")
    p.add_argument("--domain", required=True, choices=sorted(geometry.DOMAINS))
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--point", help="JSON point or list of points")
    g.add_argument("--csv", help="CSV file with re0,im0,... columns")

    p = _leaf(sub, "volume", common, "Monte Carlo domain volume")
    p.add_argument("--domain", required=True, choices=sorted(geometry.DOMAINS))

    p = _leaf(sub, "op", common, "apply Gamma, Gamma* or P to a polynomial")
    p.add_argument("--map", required=True, choices=sorted(maps.MAPS))
    p.add_argument("--apply", required=True, choices=("gamma", "gamma-star", "project"))
    p.add_argument("--poly", required=True,
                   help='JSON list of {"exp": [a, b, c], "coef": [re, im]}')

    p = _leaf(sub, "verify", common, "run verification suites")
    p.add_argument("--suite", default="all", choices=("all",) + verify.SUITES)
    p.add_argument("--vol-samples", type=int, default=10**7,
                   help="samples for each Vol(R_II) estimate")

    p = sub.add_parser("lqk", allow_abbrev=False, help="Lu Qi-Keng zeros of the tetrablock kernel")
    lsub = p.add_subparsers(dest="subcommand", required=True)
    _leaf(lsub, "roots", common, "roots of the axis polynomial")
    lp = _leaf(lsub, "pair", common, "interior zero pair")
    lp.add_argument("--r", type=float, required=True)
    lp.add_argument("--conjugate", action="store_true", help="use the root -i/sqrt(3)")
    lp.add_argument("--volume", type=float, default=None)
    ls = _leaf(lsub, "scan", common, "grid scan for zeros")
    ls.add_argument("--grid", type=int, default=100)
    ls.add_argument("--tol", type=float, default=1e-6)
    ls.add_argument("--family", choices=sorted(lqk.FAMILIES), default="axis")
    ls.add_argument("--range", type=float, nargs=2, default=(0.1, 0.95), metavar=("LO", "HI"))
    return parser


class UsageError(Exception):
    pass


def _point_arg(raw: str, name: str) -> np.ndarray:
    try:
        return decode_point(json.loads(raw))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--{name}: {exc}") from None


# ---------------------------------------------------------------------------
# commands


def _volume(cfg: RunConfig, given: float | None) -> kernels.VolumeConstant:
    if given is not None:
        return kernels.VolumeConstant(given)
    return kernels.rii_volume(max(cfg.samples, 10_000), cfg.seed, cfg.threads)


def cmd_kernel(cfg: RunConfig, ns) -> tuple[dict, int]:
    x = _point_arg(ns.x, "x")
    y = _point_arg(ns.y, "y")
    d = geometry.get_domain(ns.domain)
    V = None
    if d.name is geometry.DomainName.DISC:
        val = kernels.kernel_disc(x, y)
    elif d.name is geometry.DomainName.POLYDISC3:
        val = kernels.kernel_polydisc(x, y)
    elif d.name is geometry.DomainName.SYMBIDISC:
        for p, what in ((x, "x"), (y, "y")):
            if not geometry.is_member(d, p):
                raise BergmanLabError(f"{what} is not interior to symbidisc")
        val = kernels.symbidisc_kernel()(x, y)
    else:
        V = _volume(cfg, ns.volume)
        if d.name is geometry.DomainName.RII:
            val = kernels.kernel_rii(x, y, V, closure=cfg.closure)
        else:
            val = kernels.kernel_tetrablock_closed(x, y, V, closure=cfg.closure)
    return {"value": encode_complex(val), "volume": V.to_dict() if V else None}, 0


def cmd_member(cfg: RunConfig, ns) -> tuple[dict | str, int]:
    d = geometry.get_domain(ns.domain)
    if ns.csv:
        pts = points_from_csv(ns.csv)
    else:
        try:
            pts = decode_points(json.loads(ns.point))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"--point: {exc}") from None
    flags = np.atleast_1d(geometry.is_member(d, pts))
    if cfg.format == "csv":
        return points_to_csv(pts, {"member": [bool(f) for f in flags]}), 0
    member = bool(flags[0]) if len(flags) == 1 and not ns.csv else [bool(f) for f in flags]
    return {"domain": d.name.value, "member": member}, 0


def cmd_volume(cfg: RunConfig, ns) -> tuple[dict | str, int]:
    d = geometry.get_domain(ns.domain)
    if d.name is geometry.DomainName.RII:
        v = kernels.rii_volume(cfg.samples, cfg.seed, cfg.threads)
        payload = {"domain": d.name.value, "value": v.value, "stderr": v.stderr, "n": v.n_samples}
    else:
        est = quadrature.mc_integrate(d, None, cfg.samples, cfg.seed, cfg.threads)
        payload = {"domain": d.name.value, "value": est.value.real, "stderr": est.stderr,
                   "n": est.n}
    if cfg.format == "csv":
        return rows_to_csv(["domain", "value", "stderr", "n"], [payload.values()]), 0
    return payload, 0


def cmd_op(cfg: RunConfig, ns) -> tuple[dict, int]:
    m = maps.get_map(ns.map)
    nv = m.target.dimension if ns.apply == "gamma" else m.source.dimension
    try:
        data = json.loads(ns.poly)
    except ValueError as exc:
        raise UsageError(f"--poly: {exc}") from None
    try:
        poly = operators.Poly.from_json(data, nv)
    except (TypeError, KeyError, IndexError) as exc:
        raise UsageError(f"--poly: malformed term ({exc})") from None
    if ns.apply == "gamma":
        out = operators.gamma_apply(poly, m)
    elif ns.apply == "gamma-star":
        out = operators.gamma_star_apply(poly, m, cfg.tol_coef)
    else:
        out = operators.project_generic(poly, m)
    return {"map": m.name.value, "apply": ns.apply, "poly": out.to_json()}, 0


VERIFY_CSV_HEADER = ["suite", "check", "value_re", "value_im", "expected_re", "expected_im",
                     "stderr", "threshold", "passed"]


def cmd_verify(cfg: RunConfig, ns) -> tuple[dict | str, int]:
    opt = verify.VerifyOptions(samples=cfg.samples, seed=cfg.seed, threads=cfg.threads,
                               vol_samples=ns.vol_samples, sigmas=cfg.tol_sigma,
                               tol_rel=cfg.tol_rel, tol_coef=cfg.tol_coef, tol_crit=cfg.tol_crit)
    names = verify.SUITES if ns.suite == "all" else (ns.suite,)
    results = verify.verify_all(opt, names)
    passed = all(r.passed for r in results)
    code = 0 if passed else 1
    if cfg.format == "csv":
        rows = []
        for r in results:
            for c in r.checks:
                v, e = complex(c.value), complex(c.expected)
                rows.append([r.name, c.name, repr(v.real), repr(v.imag), repr(e.real),
                             repr(e.imag), repr(float(c.stderr)), repr(float(c.threshold)),
                             c.passed])
        return rows_to_csv(VERIFY_CSV_HEADER, rows), code
    payload = {"passed": passed, "suites": [r.to_dict() for r in results]}
    for r in results:
        if "volume" in r.info:
            payload["volume"] = r.info["volume"]
    return payload, code


SCAN_CSV_HEADER = ["u_re", "u_im", "v_re", "v_im", "k_re", "k_im", "residual"]


def cmd_lqk(cfg: RunConfig, ns) -> tuple[dict | str, int]:
    if ns.subcommand == "roots":
        roots = lqk.isolate_axis_roots()
        inside = [r for r in roots if r.in_disc]
        z0sq = (inside[0].root ** 2).real
        payload = {"polynomial": [float(c) for c in lqk.axis_family_polynomial().coef],
                   "roots": [r.to_dict() for r in roots],
                   "z0_squared": z0sq, "z0_squared_in_unit_interval": bool(-1 < z0sq < 0)}
        if cfg.format == "csv":
            return rows_to_csv(["root_re", "root_im", "in_disc", "residual"],
                               [[r.root.real, r.root.imag, r.in_disc, r.residual]
                                for r in roots]), 0
        return payload, 0
    if ns.subcommand == "pair":
        V = kernels.VolumeConstant(ns.volume) if ns.volume else lqk.UNIT_VOLUME
        cert = lqk.interior_zero_pair(ns.r, V, conjugate=ns.conjugate)
        ok = cert.interior and cert.relative_residual < cfg.tol_rel
        payload = {"certificate": cert.to_dict(), "volume": V.value, "passed": bool(ok)}
        return payload, 0 if ok else 1
    lo_hi = tuple(ns.range)
    grid = lqk.ScanGrid(lo_hi, lo_hi, ns.grid, ns.grid)
    certs = lqk.grid_scan_zeros(lqk.FAMILIES[ns.family](), grid, ns.tol)
    if cfg.format == "csv":
        rows = []
        for c in certs:
            u, v = c.params
            rows.append([u.real, u.imag, v.real, v.imag, c.kernel_value.real,
                         c.kernel_value.imag, c.relative_residual])
        return rows_to_csv(SCAN_CSV_HEADER, rows), 0
    return {"family": ns.family, "count": len(certs),
            "certificates": [c.to_dict() for c in certs]}, 0


COMMANDS = {"kernel": cmd_kernel, "member": cmd_member, "volume": cmd_volume, "op": cmd_op,
            "verify": cmd_verify, "lqk": cmd_lqk}


def dispatch(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    ns = parser.parse_args(argv)  # exits 2 on grammar errors
    seed = ns.seed if ns.seed is not None else _default_seed()
    extra = {k: v for k, v in vars(ns).items()
             if k not in {"command", "subcommand", "samples", "seed", "threads", "format",
                          "closure", "tol_sigma", "tol_rel", "tol_crit", "tol_coef"}}
    cfg = RunConfig(command=ns.command, subcommand=getattr(ns, "subcommand", None),
                    samples=ns.samples, seed=seed, threads=max(1, ns.threads), format=ns.format,
                    closure=ns.closure, tol_sigma=ns.tol_sigma, tol_rel=ns.tol_rel,
                    tol_crit=ns.tol_crit, tol_coef=ns.tol_coef, args=extra)
    try:
        payload, code = COMMANDS[ns.command](cfg, ns)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"bergman-lab: error: {exc}", file=sys.stderr)
        return 2
    except BergmanLabError as exc:
        payload, code = {"error": {"type": type(exc).__name__, "message": str(exc)}}, 1
        out.write(dumps({"config": cfg.header(), **payload}) + "\n")
        return code
    if isinstance(payload, str):
        out.write(payload)
    else:
        out.write(dumps({"config": cfg.header(), **payload}) + "\n")
    return code


def main(argv: list[str] | None = None) -> None:
    sys.exit(dispatch(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
