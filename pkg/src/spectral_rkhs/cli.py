"""Command-line front end.

    spectral-rkhs eval --manifold circle --kernel sobolev:1 --weighting riesz --points grid:8 --check-closed
    spectral-rkhs verify --suite semigroup
    spectral-rkhs converge --study circle-rate

Settings resolve as flags > ``--config`` JSON file > defaults; the resolved
values and their sources head every output file. Exit codes: 0 ok,
1 verification failure, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

import numpy as np

from . import curves, kernels, quadrature, rkhs, specfun, verification
from .kernels import AbelPolicy, FixedLevels, Heat, KernelSpec, Power, Sobolev, TailBound
from .spectra import (
    TWO_PI,
    Circle,
    Euclidean,
    Sphere,
    UnsupportedManifold,
    geodesic_distance,
    is_compact,
    random_points,
)

log = logging.getLogger("spectral_rkhs")

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {
    "manifold": "circle",
    "kernel": "sobolev:2",
    "weighting": "bessel",
    "trunc": "eps:1e-8",
    "abel": False,
    "abel_tol": 1e-6,
    "points": "grid:8",
    "pairs": "first",
    "format": "csv",
    "out": None,
    "seed": 0,
    "suite": "all",
    "study": "circle-rate",
    "curve": "ellipse:2,1",
    "target": "cos",
    "ridge": 0.0,
    "holdout": 64,
    "check_closed": False,
    "s": 0.75,
}


class ConfigError(ValueError):
    pass


# ------------------------------------------------------------------ parsing


def _num(text, kind=float):
    try:
        return kind(text)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None


def parse_manifold(text: str):
    try:
        return _parse_manifold(text)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _parse_manifold(text: str):
    name, _, arg = str(text).partition(":")
    if name == "circle":
        return Circle(_num(arg)) if arg else Circle()
    if name == "sphere":
        return Sphere(_num(arg or "3", int))
    if name == "euclidean":
        return Euclidean(_num(arg or "3", int))
    raise ConfigError(f"unknown manifold {text!r} (circle | sphere:d | euclidean:n)")


def parse_truncation(text):
    name, _, arg = str(text).partition(":")
    if name == "levels":
        return FixedLevels(_num(arg, int))
    if name == "eps":
        eps, _, lmax = arg.partition(",")
        return TailBound(_num(eps), _num(lmax, int) if lmax else 1_000_000)
    raise ConfigError(f"unknown truncation {text!r} (eps:E[,Lmax] | levels:L)")


def parse_family(text, weighting):
    name, _, arg = str(text).partition(":")
    try:
        if name == "sobolev":
            return Sobolev(_num(arg), weighting)
        if name == "heat":
            return Heat(_num(arg))
        if name == "power":
            s, _, r = arg.partition(",")
            return Power(Sobolev(_num(s), weighting), _num(r))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown kernel {text!r} (sobolev:s | heat:t | power:s,r)")


def parse_points(text, manifold, seed):
    name, _, arg = str(text).partition(":")
    if name == "grid":
        n = _num(arg, int)
        if n < 1:
            raise ConfigError("grid needs at least one point")
        if isinstance(manifold, Circle):
            return TWO_PI * np.arange(n) / n
        dim = manifold.d if isinstance(manifold, Sphere) else manifold.n
        pts = np.zeros((n, dim))
        if isinstance(manifold, Sphere):
            # great-circle meridian from the pole, separations 0..pi
            ang = np.linspace(0.0, math.pi, n) if n > 1 else np.zeros(1)
            pts[:, 0], pts[:, 1] = np.cos(ang), np.sin(ang)
        else:
            pts[:, 0] = np.linspace(0.0, 4.0, n)
        return pts
    if name == "random":
        n, _, sd = arg.partition(",")
        rng = np.random.default_rng(_num(sd, int) if sd else seed)
        return random_points(manifold, _num(n, int), rng)
    if name == "file":
        try:
            data = np.loadtxt(arg, delimiter=",", ndmin=2, comments="#")
        except OSError as exc:
            raise ConfigError(str(exc)) from None
        if isinstance(manifold, Circle):
            return np.mod(data[:, 0], TWO_PI)
        if isinstance(manifold, Sphere) and np.any(np.abs(np.linalg.norm(data, axis=1) - 1) > 1e-12):
            raise ConfigError("sphere points must be unit vectors")
        return data
    raise ConfigError(f"unknown point set {text!r} (grid:N | random:N[,seed] | file:PATH)")


def parse_curve(text):
    name, _, arg = str(text).partition(":")
    if name == "ellipse":
        a, _, b = arg.partition(",")
        return curves.ellipse(_num(a), _num(b))
    if name == "circle":
        return curves.round_circle(_num(arg or "1"))
    if name == "file":
        try:
            return curves.load_curve_csv(arg)
        except OSError as exc:
            raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown curve {text!r} (ellipse:a,b | circle:r | file:PATH)")


def resolve(args) -> tuple[dict, dict]:
    """Merge flags, config file and defaults; return (settings, source of each key)."""
    config = {}
    if args.config:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        unknown = set(config) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    settings, sources = {}, {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key], sources[key] = flag, "flag"
        elif key in config:
            settings[key], sources[key] = config[key], "config"
        else:
            settings[key], sources[key] = default, "default"
    return settings, sources


def build_spec(cfg):
    family = parse_family(cfg["kernel"], cfg["weighting"])
    abel = AbelPolicy(tol=float(cfg["abel_tol"])) if cfg["abel"] else None
    return KernelSpec(family, parse_truncation(cfg["trunc"]), abel)


# ------------------------------------------------------------------ output


def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def write_output(cfg, sources, command, columns, rows, meta=None):
    meta = meta or {}
    if cfg["format"] == "json":
        doc = {
            "command": command,
            "config": {k: cfg[k] for k in sorted(cfg)},
            "sources": {k: sources[k] for k in sorted(sources)},
            "meta": meta,
            "records": [dict(zip(columns, r)) for r in rows],
        }
        text = json.dumps(_jsonable(doc), indent=2, sort_keys=False) + "\n"
    elif cfg["format"] == "csv":
        buf = io.StringIO()
        buf.write(f"# command={command}\n")
        for k in sorted(cfg):
            buf.write(f"# {k}={cfg[k]} ({sources[k]})\n")
        for k, v in meta.items():
            buf.write(f"# {k}={fmt(v) if not isinstance(v, (list, dict)) else json.dumps(_jsonable(v))}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(v) for v in r])
        text = buf.getvalue()
    else:
        raise ConfigError(f"unknown format {cfg['format']!r} (csv | json)")
    if cfg["out"]:
        with open(cfg["out"], "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def _pairs(n, mode):
    if mode == "first":
        return np.zeros(n, int), np.arange(n)
    if mode == "diagonal":
        return np.arange(n), np.arange(n)
    if mode == "all":
        return np.triu_indices(n)
    if mode == "offdiagonal":
        return np.triu_indices(n, 1)
    raise ConfigError(f"unknown pair mode {mode!r} (first | diagonal | all | offdiagonal)")


def _closed_column(manifold, spec, a, b):
    fam = spec.family
    if isinstance(manifold, Euclidean) and isinstance(fam, Sobolev):
        return kernels.sobolev_euclidean(manifold.n, fam.s, a, b)
    if (isinstance(manifold, Circle) and manifold.length == TWO_PI and isinstance(fam, Sobolev)
            and fam.weighting == "riesz" and fam.s in (0.5, 1.0)):
        return kernels.sobolev_closed_circle(fam.s, a, b)
    raise ConfigError("closed form available for circle riesz s in {1/2, 1} and R^n only")


def cmd_eval(cfg, sources, command="eval"):
    manifold = parse_manifold(cfg["manifold"])
    spec = build_spec(cfg)
    pts = parse_points(cfg["points"], manifold, int(cfg["seed"]))
    i, j = _pairs(len(pts), cfg["pairs"])
    a, b = pts[i], pts[j]
    val, tail = kernels.evaluate(manifold, spec, a, b)
    val = np.broadcast_to(val, i.shape)
    sep = np.broadcast_to(geodesic_distance(manifold, a, b), i.shape)
    columns = ["i", "j", "separation", "value", "tail"]
    cols = [i, j, sep, val, np.full(i.shape, float(tail))]
    if cfg["check_closed"]:
        closed = np.broadcast_to(_closed_column(manifold, spec, a, b), i.shape)
        columns += ["closed", "abs_diff"]
        cols += [closed, np.abs(val - closed)]
    rows = list(zip(*cols))
    write_output(cfg, sources, command, columns, rows)
    return EXIT_OK


def cmd_profile(cfg, sources):
    cfg = dict(cfg, pairs="first")
    return cmd_eval(cfg, sources, "profile")


def cmd_heat(cfg, sources):
    name = str(cfg["kernel"]).partition(":")[0]
    if name != "heat":
        raise ConfigError("heat command needs --kernel heat:t")
    return cmd_eval(cfg, sources, "heat")


def cmd_gram(cfg, sources):
    manifold = parse_manifold(cfg["manifold"])
    spec = build_spec(cfg)
    pts = parse_points(cfg["points"], manifold, int(cfg["seed"]))
    g = rkhs.gram(manifold, spec, pts)
    i, j = np.triu_indices(len(pts))
    rows = list(zip(i, j, g.entries[i, j]))
    meta = {"min_eig_bound": g.min_eig_bound, "trace": g.trace, "psd": g.is_psd(), "tail": g.tail}
    write_output(cfg, sources, "gram", ["i", "j", "value"], rows, meta)
    return EXIT_OK


def _target(name, manifold, pts):
    if isinstance(manifold, Circle):
        table = {"cos": np.cos, "sin": np.sin, "cos2": lambda x: np.cos(2 * x)}
        if name in table:
            return table[name](pts)
    elif name.startswith("x") and name[1:].isdigit() and int(name[1:]) < pts.shape[1]:
        return pts[:, int(name[1:])]
    raise ConfigError(f"unknown interpolation target {name!r} (circle: cos|sin|cos2; else xK)")


def cmd_interp(cfg, sources):
    manifold = parse_manifold(cfg["manifold"])
    spec = build_spec(cfg)
    pts = parse_points(cfg["points"], manifold, int(cfg["seed"]))
    g = rkhs.gram(manifold, spec, pts)
    y = _target(cfg["target"], manifold, pts)
    coef = rkhs.interpolate(g, y, float(cfg["ridge"]))
    f = rkhs.interpolant(manifold, g, coef)
    rng = np.random.default_rng(int(cfg["seed"]) + 1)
    held = random_points(manifold, int(cfg["holdout"]), rng)
    truth = _target(cfg["target"], manifold, held)
    approx = f(held)
    rows = [(k, approx[k], truth[k], abs(approx[k] - truth[k])) for k in range(len(held))]
    meta = {"points": len(pts), "max_error": float(np.max(np.abs(approx - truth))),
            "condition": float(np.linalg.cond(g.entries + float(cfg["ridge"]) * np.eye(len(pts))))}
    write_output(cfg, sources, "interp", ["k", "interpolant", "target", "abs_error"], rows, meta)
    return EXIT_OK


def cmd_verify(cfg, sources):
    names = list(verification.SUITES) if cfg["suite"] == "all" else str(cfg["suite"]).split(",")
    unknown = [n for n in names if n not in verification.SUITES]
    if unknown:
        raise ConfigError(f"unknown suites {unknown}; choose from {sorted(verification.SUITES)}")
    rows, ok = [], True
    for name in names:
        rep = verification.SUITES[name]()
        log.info("suite %s: %s in %.2fs", name, "pass" if rep.passed else "FAIL", rep.seconds)
        ok &= rep.passed
        for c in rep.checks:
            if c.name.endswith("seconds"):
                # wall time stays out of the file so reruns are byte-identical
                log.info("  %s = %.3f (bound %g)", c.name, c.measured, c.bound)
                rows.append((name, c.name, "", c.bound, c.passed))
            else:
                rows.append((name, c.name, c.measured, c.bound, c.passed))
    write_output(cfg, sources, "verify", ["suite", "check", "measured", "bound", "passed"], rows,
                 {"all_passed": ok})
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_converge(cfg, sources):
    study = cfg["study"]
    if study == "circle-rate":
        table, rate = verification.circle_rate_table()
        rows = [(L, v, err, tail) for L, v, err, tail in table]
        write_output(cfg, sources, "converge", ["L", "value_at_0", "max_error", "certified_tail"], rows,
                     {"fitted_rate": rate})
    elif study == "singularity-slope":
        s = float(cfg["s"])
        manifold = parse_manifold(cfg["manifold"]) if cfg["manifold"] != "circle" else Sphere(3)
        sep, val, err = verification.singularity_table(s, manifold.d)
        slope = float(np.polyfit(np.log(sep), np.log(np.abs(val)), 1)[0])
        rows = list(zip(sep, val, err))
        write_output(cfg, sources, "converge", ["separation", "value", "aitken_cauchy"], rows,
                     {"fitted_slope": slope, "predicted_slope": 2 * s - manifold.d + 1})
    elif study == "abel":
        manifold = parse_manifold(cfg["manifold"]) if cfg["manifold"] != "circle" else Sphere(3)
        m = np.zeros(manifold.d)
        m2 = np.zeros(manifold.d)
        m[0], m2[1] = 1.0, 1.0
        seq, cauchy = verification.abel_table(manifold, float(cfg["s"]), m, m2)
        rows = [(t, v, cauchy[k] if k < len(cauchy) else "") for k, (t, v) in enumerate(seq)]
        write_output(cfg, sources, "converge", ["t", "K_t", "aitken_generation_cauchy"], rows,
                     {"cauchy_by_generation": cauchy})
    else:
        raise ConfigError(f"unknown study {study!r} (circle-rate | singularity-slope | abel)")
    return EXIT_OK


def cmd_curve(cfg, sources):
    curve = parse_curve(cfg["curve"])
    name, _, arg = str(cfg["points"]).partition(":")
    n = _num(arg, int) if name == "grid" else 16
    theta = TWO_PI * np.arange(n) / n
    s = curves.arc_length(curve, theta)
    ang = curves.circle_angle(curve, theta)
    columns = ["theta", "arc_length", "circle_angle"]
    cols = [theta, s, ang]
    if str(cfg["kernel"]).startswith(("sobolev", "heat", "power")):
        spec = build_spec(cfg)
        val, tail = curves.pullback_kernel(curve, spec, np.zeros(n), theta)
        columns += ["kernel_from_0", "tail"]
        cols += [np.broadcast_to(val, theta.shape), np.full(n, float(tail))]
    _, scale = curves.isometry_to_circle(curve)
    write_output(cfg, sources, "curve", columns, list(zip(*cols)),
                 {"length": curve.length, "scale": scale})
    return EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "profile": cmd_profile,
    "gram": cmd_gram,
    "interp": cmd_interp,
    "verify": cmd_verify,
    "converge": cmd_converge,
    "heat": cmd_heat,
    "curve": cmd_curve,
}


def build_parser():
    p = argparse.ArgumentParser(prog="spectral-rkhs", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="JSON file with any of the settings below")
    p.add_argument("--manifold", help="circle[:length] | sphere:d | euclidean:n")
    p.add_argument("--kernel", help="sobolev:s | heat:t | power:s,r")
    p.add_argument("--weighting", choices=kernels.WEIGHTINGS)
    p.add_argument("--trunc", help="eps:E[,Lmax] | levels:L")
    p.add_argument("--abel", action="store_const", const=True, help="Abel-sum below the threshold")
    p.add_argument("--abel-tol", dest="abel_tol", type=float)
    p.add_argument("--points", help="grid:N | random:N[,seed] | file:PATH")
    p.add_argument("--pairs", choices=("first", "diagonal", "all", "offdiagonal"))
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--suite", help="verification suite(s), comma separated, or 'all'")
    p.add_argument("--study", help="circle-rate | singularity-slope | abel")
    p.add_argument("--s", type=float, help="Sobolev index for converge studies")
    p.add_argument("--curve", help="ellipse:a,b | circle:r | file:PATH")
    p.add_argument("--target", help="interpolation target")
    p.add_argument("--ridge", type=float)
    p.add_argument("--holdout", type=int)
    p.add_argument("--check-closed", dest="check_closed", action="store_const", const=True)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


NUMERIC_ERRORS = (kernels.KernelError, rkhs.SingularSystemError, specfun.DomainError,
                  curves.ImmersionError, UnsupportedManifold, ArithmeticError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg, sources = resolve(args)
        return COMMANDS[args.command](cfg, sources)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NUMERIC_ERRORS as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        print(f"numeric failure: {json.dumps(diag)}", file=sys.stderr)
        out = cfg.get("out") if "cfg" in locals() else None
        if out:
            with open(out, "w") as fh:
                json.dump(diag, fh)
                fh.write("\n")
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
