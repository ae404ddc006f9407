"""Command-line front end: curves, moments, limits and verification suites as CSV or JSON.

Exit codes: 0 success, 2 invalid configuration, 3 unsupported parameters,
4 a suite tolerance gate failed.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .edelman import wl_cdf_interpolant, wl_density
from .ensemble import EnsembleParams, UnsupportedParameters
from .ftwl import _integrate_density, ftwl_cdf_interpolant, ftwl_density, ftwl_moment
from .hfma import _m_index, equivalence_report
from .microscopic import MicroDist, convergence_probe, kappa
from .montecarlo import ks_distance, sample_min

EXIT_OK, EXIT_INVALID, EXIT_UNSUPPORTED, EXIT_GATE = 0, 2, 3, 4
ENV_PREFIX = "SPECTRA_"


class ConfigError(ValueError):
    pass


class GateFailure(Exception):
    def __init__(self, message, payload):
        super().__init__(message)
        self.payload = payload


def parse_grid(spec: str) -> dict:
    """'min:max:points[:log]' -> resolved grid dict."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"grid must be min:max:points[:lin|log], got {spec!r}")
    try:
        lo, hi, pts = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid {spec!r}: {exc}") from None
    scale = parts[3] if len(parts) == 4 else "lin"
    if scale not in ("lin", "log"):
        raise ConfigError(f"grid scale must be lin or log, got {scale!r}")
    if not lo < hi:
        raise ConfigError(f"grid needs min < max, got {lo} >= {hi}")
    if pts < 2:
        raise ConfigError(f"grid needs at least 2 points, got {pts}")
    if scale == "log" and lo <= 0:
        raise ConfigError("log grid needs min > 0")
    return {"min": lo, "max": hi, "points": pts, "scale": scale}


def grid_values(g: dict) -> np.ndarray:
    if g["scale"] == "log":
        return np.geomspace(g["min"], g["max"], g["points"])
    return np.linspace(g["min"], g["max"], g["points"])


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _env(name, cast, default):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(f"bad value {raw!r} for {ENV_PREFIX}{name}") from None


def resolve(args: argparse.Namespace) -> dict:
    """Flags override SPECTRA_* environment variables, which override defaults."""
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg["workers"] = args.workers if args.workers is not None else _env("WORKERS", int, os.cpu_count() or 1)
    if "seed" in cfg:
        cfg["seed"] = args.seed if args.seed is not None else _env("SEED", int, 42)
    if "tol" in cfg:
        cfg["tol"] = args.tol if args.tol is not None else _env("TOL", float, None)
        if cfg["tol"] is not None and not cfg["tol"] > 0:
            raise ConfigError("tolerance must be positive")
    if cfg["workers"] < 1:
        raise ConfigError("workers must be >= 1")
    if cfg.get("grid") is not None:
        cfg["grid"] = parse_grid(cfg["grid"])
    return cfg


def _params(cfg, kind=None) -> EnsembleParams:
    if cfg.get("N") is None:
        raise ConfigError("--N is required")
    return EnsembleParams.from_nu(cfg["N"], cfg["nu"], cfg["beta"], kind or cfg["ensemble"].upper())


def _pmap(func, items, workers):
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
            return list(pool.map(func, items))
    return [func(it) for it in items]


def _density_point(job):
    p, x = job
    if p.kind == "FT":
        return ftwl_density(p, x) if 0 <= x and p.n_dim * x < 1 else 0.0
    return wl_density(p, x) if x >= 0 else 0.0


def _segment_mass(job):
    p, a, b = job
    if b <= a:
        return 0.0
    if p.kind == "FT":
        hi = min(b, 1.0 / p.n_dim)
        return _integrate_density(p, max(a, 0.0), hi) if hi > max(a, 0.0) else 0.0
    from scipy import integrate
    return integrate.quad(lambda w: 2 * w * wl_density(p, w * w), math.sqrt(max(a, 0.0)),
                          math.sqrt(b), epsabs=0.0, epsrel=1e-11, limit=200)[0]


def cmd_density(cfg):
    p = _params(cfg)
    if p.beta != 1:
        raise UnsupportedParameters("finite-N densities are implemented for beta=1 only")
    if cfg["grid"] is None:
        end = 1.0 / p.n_dim if p.kind == "FT" else 4.0 * (p.nu + 2) ** 2 / p.n_dim
        cfg["grid"] = {"min": 0.0, "max": end, "points": 200, "scale": "lin"}
    xs = grid_values(cfg["grid"])
    if xs[0] < 0:
        raise ConfigError("density grid must start at x >= 0")
    dens = _pmap(_density_point, [(p, float(x)) for x in xs], cfg["workers"])
    edges = [0.0] + [float(x) for x in xs]
    masses = _pmap(_segment_mass, [(p, a, b) for a, b in zip(edges[:-1], edges[1:])], cfg["workers"])
    q = 1.0 - np.cumsum(masses)
    source = f"{p.kind.lower()}.{'odd-sum' if p.nu % 2 else 'tricomi'}"
    rows = [{"x": float(x), "p": float(d), "q": float(min(1.0, max(0.0, qq))), "source": source}
            for x, d, qq in zip(xs, dens, q)]
    return ["x", "p", "q"], rows, {}


def cmd_micro(cfg):
    d = MicroDist(cfg["beta"], cfg["nu"], cfg["picture"])
    if cfg["grid"] is None:
        top = 25.0 if cfg["picture"] == "y" else 5.0
        cfg["grid"] = {"min": 0.0, "max": top, "points": 101, "scale": "lin"}
    vs = grid_values(cfg["grid"])
    if vs[0] < 0:
        raise ConfigError("micro grid must start at >= 0")
    var = cfg["picture"]
    source = "micro.det" if d.beta == 2 else ("micro.pfaffian" if d.nu % 2 else "micro.closed")
    rows = [{var: float(v), "p": d.p(float(v)), "q": d.q(float(v)), "source": source} for v in vs]
    return [var, "p", "q"], rows, {}


def cmd_moments(cfg):
    rows = []
    for ell in cfg["ell"]:
        if cfg["N"] is None:
            val = kappa(ell, cfg["nu"], cfg["beta"])
            rows.append({"N": "inf", "nu": cfg["nu"], "ell": ell, "value": val,
                         "scaled": val, "source": "kappa.quadrature"})
            continue
        for n in cfg["N_list"]:
            p = EnsembleParams.from_nu(n, cfg["nu"], cfg["beta"], "FT")
            if p.beta != 1:
                raise UnsupportedParameters("finite-N moments are implemented for beta=1 only")
            val = ftwl_moment(p, ell)
            rows.append({"N": n, "nu": cfg["nu"], "ell": ell, "value": val,
                         "scaled": (4.0 * n ** 3) ** ell * val,
                         "source": "moment.beta-sum" if cfg["nu"] % 2 else "moment.quadrature"})
    return ["N", "nu", "ell", "value", "scaled"], rows, {}


def cmd_mc(cfg):
    p = _params(cfg)
    tol = cfg["tol"] = cfg["tol"] if cfg["tol"] is not None else 0.01
    batch = sample_min(p, cfg["n"], cfg["seed"], workers=cfg["workers"])
    suite = {"n": batch.size, "seed": batch.seed, "mean": float(batch.values.mean()),
             "min": float(batch.values.min()), "max": float(batch.values.max())}
    cdf = None
    if p.beta == 1 and p.nu <= 3 and (p.kind == "WL" or p.n_dim >= 2):
        cdf = ftwl_cdf_interpolant(p) if p.kind == "FT" else wl_cdf_interpolant(p)
    hi = float(np.quantile(batch.values, 0.999))
    edges = np.linspace(0.0, hi, cfg["bins"] + 1)
    counts, _ = np.histogram(batch.values, bins=edges)
    width = edges[1] - edges[0]
    rows = []
    for i, c in enumerate(counts):
        row = {"lo": float(edges[i]), "hi": float(edges[i + 1]),
               "empirical": float(c / (batch.size * width))}
        if cdf is not None:
            row["analytic"] = float((cdf(edges[i + 1]) - cdf(edges[i])) / width)
        row["source"] = "mc.histogram"
        rows.append(row)
    header = ["lo", "hi", "empirical"] + (["analytic"] if cdf is not None else [])
    if cdf is not None:
        ks = ks_distance(batch, cdf)
        suite.update(ks=ks, tol=tol, passed=bool(ks < tol))
        if ks >= tol:
            raise GateFailure(f"KS distance {ks:.4g} >= {tol}", (header, rows, suite))
    else:
        suite.update(ks=None, note="no finite-N analytic CDF for these parameters")
    return header, rows, suite


def cmd_equiv(cfg):
    beta, nu = cfg["beta"], cfg["nu"]
    m = _m_index(beta, nu)
    tol = cfg["tol"] = cfg["tol"] if cfg["tol"] is not None else (1e-7 if beta == 1 and m >= 2 else 1e-8)
    ys = [0.5, 1, 2, 4, 8, 16, 25] if cfg["grid"] is None else list(grid_values(cfg["grid"]))
    rep = equivalence_report(beta, nu, ys, backend=cfg["backend"])
    rows = [dict(r, source=f"equiv.{cfg['backend']}") for r in rep.rows]
    suite = {"max_diff_q": rep.max_diff_q, "max_diff_p": rep.max_diff_p,
             "max_diff": rep.max_diff, "tol": tol, "passed": bool(rep.max_diff < tol)}
    header = ["y", "q_hfma", "q_bessel", "p_hfma", "p_bessel", "diff_q", "diff_p"]
    if not suite["passed"]:
        raise GateFailure(f"max diff {rep.max_diff:.3g} >= {tol}", (header, rows, suite))
    return header, rows, suite


def cmd_converge(cfg):
    if cfg["grid"] is None:
        cfg["grid"] = {"min": 1.0, "max": 16.0, "points": 31, "scale": "lin"}
    ys = grid_values(cfg["grid"])
    routes = ("FT", "WL") if cfg["route"] == "both" else (cfg["route"].upper(),)
    rows = convergence_probe(cfg["nu"], cfg["N_list"], ys, routes=routes)
    header = ["N", "nu", "max_P"] + [f"gap_{r}" for r in routes]
    suite = {}
    passed = True
    for r in routes:
        gaps = [row[f"gap_{r}"] for row in rows]
        mono = all(b < a for a, b in zip(gaps, gaps[1:]))
        suite[f"monotone_{r}"] = mono
        suite[f"last_gap_rel_{r}"] = gaps[-1] / rows[-1]["max_P"]
        passed &= mono
    suite["passed"] = passed
    for row in rows:
        row["source"] = "converge.sup-gap"
    if not passed:
        raise GateFailure("sup-gap sequence is not strictly decreasing", (header, rows, suite))
    return header, rows, suite


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".15g")
    return str(v)


def render(cfg, header, rows, suite, fmt) -> str:
    if fmt == "json":
        obj = {"config": cfg, "rows": rows, "suite_results": suite, "version": __version__}
        return json.dumps(obj, indent=2, sort_keys=True, default=str, allow_nan=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# spectra {__version__}\n")
    for k in sorted(cfg):
        buf.write(f"# config.{k} = {json.dumps(cfg[k], sort_keys=True, default=str)}\n")
    for k in sorted(suite):
        buf.write(f"# suite.{k} = {json.dumps(suite[k], default=str)}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(row.get(h, "")) for h in header) + "\n")
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spectra", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, grid=True):
        sp.add_argument("--beta", type=int, default=1, choices=(1, 2))
        sp.add_argument("--nu", type=int, default=0)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
        sp.add_argument("--workers", type=int, default=None)
        if grid:
            sp.add_argument("--grid", default=None, help="min:max:points[:lin|log]")

    sp = sub.add_parser("density", help="finite-N smallest-eigenvalue density and gap probability")
    common(sp)
    sp.add_argument("--ensemble", choices=("ft", "wl"), default="ft")
    sp.add_argument("--N", type=int, required=True)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("micro", help="microscopic large-N limit")
    common(sp)
    sp.add_argument("--picture", choices=("y", "s"), default="y")
    sp.set_defaults(func=cmd_micro)

    sp = sub.add_parser("moments", help="finite-N fixed-trace moments, or kappa without --N")
    common(sp, grid=False)
    sp.add_argument("--N", default=None, help="one size or a comma-separated list")
    sp.add_argument("--ell", default="1", help="one power or a comma-separated list")
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("mc", help="Monte Carlo sampling with a KS gate")
    common(sp, grid=False)
    sp.add_argument("--ensemble", choices=("ft", "wl"), default="ft")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--n", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--bins", type=int, default=60)
    sp.add_argument("--tol", type=float, default=None)
    sp.set_defaults(func=cmd_mc)

    sp = sub.add_parser("equiv", help="0F1 of matrix argument versus Bessel determinants/Pfaffians")
    common(sp)
    sp.add_argument("--backend", choices=("quadrature", "series"), default="quadrature")
    sp.add_argument("--tol", type=float, default=None)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("converge", help="finite-N densities approaching the microscopic limit")
    common(sp)
    sp.add_argument("--N", default="8,16,32")
    sp.add_argument("--route", choices=("ft", "wl", "both"), default="both")
    sp.set_defaults(func=cmd_converge)
    return ap


def _postprocess(cfg):
    if cfg["command"] == "moments":
        cfg["ell"] = _int_list(cfg["ell"])
        if cfg["N"] is not None:
            cfg["N_list"] = _int_list(cfg["N"])
            cfg["N"] = cfg["N_list"]
    if cfg["command"] == "converge":
        cfg["N_list"] = _int_list(cfg["N"])
        cfg["N"] = cfg["N_list"]
    if cfg["command"] == "mc" and cfg["n"] < 1:
        raise ConfigError("--n must be >= 1")
    if cfg["nu"] < 0:
        raise ConfigError("--nu must be >= 0")


def _write(text, path):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        _postprocess(cfg)
        header, rows, suite = args.func(cfg)
    except GateFailure as exc:
        header, rows, suite = exc.payload
        _write(render(cfg, header, rows, suite, cfg["format"]), cfg["output"])
        print(f"spectra: gate failed: {exc}", file=sys.stderr)
        return EXIT_GATE
    except UnsupportedParameters as exc:
        print(f"spectra: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ConfigError, ValueError) as exc:
        print(f"spectra: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _write(render(cfg, header, rows, suite, cfg["format"]), cfg["output"])
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
