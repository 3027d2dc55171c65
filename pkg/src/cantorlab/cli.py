"""Command-line front end.

Every subcommand accepts its parameters as flags or from ``--config
file.json`` (flags win).  The merged configuration is validated against a
JSON schema before anything runs.  Exit status: 0 on success, 2 for an
invalid configuration, 3 for a numeric failure and 4 when ``--check`` finds
a violated invariant.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io as cio
from .distributions import constant_field, heisenberg, involutivity_defect, lie_bracket, noninvolutivity_certificate, spanning_pair, tangency_check
from .geometry import Anchor, BoxDomain, CantorScaffold, ScheduleError, build_scaffold, indicator_seminorm_bound, make_schedule, theoretical_dimension
from .lusin import build_lusin, constant_datum, heisenberg_datum, minimal_eta, residual, residual_constant, zero_datum
from .phase import classify, figure_grid, tau_zero
from .seminorms import (
    FieldSampler,
    box_dimension_estimate,
    cantor_oracle,
    fractional_seminorm,
    half_interval_seminorm,
    superdensity_profile,
)
from .stokes import OneForm, RectangleProbe, boundary_escape_exact, circulation, curl_flux, heisenberg_form, locality_witness, monomial_form

EXIT_OK, EXIT_SCHEMA, EXIT_NUMERIC, EXIT_INVARIANT = 0, 2, 3, 4

DEFAULTS = {
    "k": 2,
    "B": 10,
    "delta": 0.01,
    "depth": 6,
    "seed": 0,
    "jobs": 1,
    "check": False,
    "distribution": "heisenberg",
    "points": 100,
    "samples": 1000,
    "budget": 1_000_000,
    "p": 1.0,
    "b": 0.2,
    "order": 8,
    "offsets": 32,
    "resolution": 128,
    "q": "inf",
    "target": "half-interval",
    "form": "heisenberg",
}


class InvariantViolation(RuntimeError):
    pass


def _require(ok: bool, what: str) -> None:
    if not ok:
        raise InvariantViolation(what)


# --------------------------------------------------------------- builders


def _schedule(cfg):
    regime = cfg.get("regime")
    if regime is None:
        raise cio.ConfigError("regime is required")
    param = {"sobolev": cfg.get("s"), "dimension": cfg.get("d")}.get(regime)
    return make_schedule(regime, cfg["k"], cfg["B"], cfg["delta"], param, cfg.get("values"))


def _domain(cfg, k):
    lo = cfg.get("lo", [0.0] * k)
    hi = cfg.get("hi", [1.0] * k)
    if len(lo) != k or len(hi) != k:
        raise cio.ConfigError("lo/hi must have k entries")
    return BoxDomain(tuple(lo), tuple(hi))


def _scaffold(cfg) -> CantorScaffold:
    if cfg.get("scaffold"):
        sc = CantorScaffold.from_dict(cio.read_json(cfg["scaffold"]))
        if cfg["depth"] > sc.depth:
            raise cio.ConfigError(f"depth {cfg['depth']} exceeds scaffold depth {sc.depth}")
        return sc
    sched = _schedule(cfg)
    return build_scaffold(_domain(cfg, sched.k), sched, cfg["depth"])


def _datum(cfg, sc):
    name = cfg["distribution"]
    if name == "heisenberg":
        if sc.k != 2:
            raise cio.ConfigError("heisenberg distribution needs k = 2")
        return heisenberg_datum(sc.domain), heisenberg()
    if name == "zero":
        return zero_datum(sc.k, 1, sc.domain), constant_field(np.zeros((1, sc.k)))
    if name == "constant":
        A = np.atleast_2d(np.asarray(cfg.get("matrix", [[0.0] * sc.k]), dtype=float))
        if A.shape[1] != sc.k:
            raise cio.ConfigError("matrix must have k columns")
        return constant_datum(A, sc.domain), constant_field(A)
    raise cio.ConfigError(f"distribution {name!r} is not available for graph builds")


def _lusin(cfg, sc):
    F, V = _datum(cfg, sc)
    eta = minimal_eta(F, sc.delta) if F.M2 > 0 else 1.0
    return build_lusin(F, sc, cfg["depth"], eta), F, V


def _centre_anchors(sc, level, n, seed):
    rng = np.random.default_rng(seed)
    return [Anchor(sc.random_path(level, rng), np.zeros(sc.k)) for _ in range(n)]


# --------------------------------------------------------------- commands


def cmd_build(cfg):
    """Build a Cantor scaffold and report its levels, sides and measures."""
    sc = _scaffold(cfg)
    rows = []
    for i in range(sc.depth + 1):
        closed = sc.card_L1 * 2.0 ** (sc.B * sc.k * i) * sc.r[i] ** sc.k
        rows.append(
            {
                "level": i,
                "r": sc.r[i],
                "count": sc.count(i),
                "measure": sc.measure(i),
                "closed_form": closed,
                "difference": sc.measure_difference(i) if i < sc.depth else None,
            }
        )
        if cfg["check"]:
            _require(abs(sc.measure(i) - closed) <= 1e-12 * max(closed, 1e-300), f"measure identity at level {i}")
            if i < sc.depth:
                _require(
                    abs(sc.measure(i) - sc.measure(i + 1) - sc.measure_difference(i)) <= 1e-12 * sc.measure(i),
                    f"difference identity at level {i}",
                )
    if cfg.get("out"):
        cio.write_json(sc.to_dict(), cfg["out"])
    cio.write_csv(rows, None)


def cmd_eval(cfg):
    """Evaluate the Lusin graph function and its gradient at random points."""
    sc = _scaffold(cfg)
    u, F, _ = _lusin(cfg, sc)
    rng = np.random.default_rng(cfg["seed"])
    x = sc.domain.sample(rng, cfg["points"])
    val, grad = u.evaluate(x)
    _require(not cfg["check"] or bool(np.all(np.isfinite(grad))), "non-finite gradient")
    rows = []
    for i in range(len(x)):
        row = {f"x{j + 1}": x[i, j] for j in range(sc.k)}
        row.update({f"u{a + 1}": val[i, a] for a in range(u.m)})
        row.update({f"du{a + 1}{j + 1}": grad[i, a, j] for a in range(u.m) for j in range(sc.k)})
        rows.append(row)
    cio.write_csv(rows, cfg.get("out"))


def cmd_residuals(cfg):
    """Worst residual over random points of random level-l cubes, per level."""
    sc = _scaffold(cfg)
    u, F, _ = _lusin(cfg, sc)
    C = residual_constant(F)
    rows = []
    for lev in range(cfg["depth"] + 1):
        rng = np.random.default_rng([cfg["seed"], lev])
        anchors = [
            Anchor(sc.random_path(lev, rng), rng.uniform(-0.5, 0.5, sc.k) * sc.r[lev]) for _ in range(cfg["samples"])
        ]
        res = residual(u, F, anchors=anchors)
        rows.append({"level": lev, "r": sc.r[lev], "samples": len(anchors), "max_residual": float(res.max()), "bound": C * sc.r[lev]})
    if cfg["check"]:
        last = rows[-1]
        _require(last["max_residual"] <= last["bound"], "residual above bound at the deepest level")
    cio.write_csv(rows, cfg.get("out"))


def cmd_verify(cfg):
    """Check the Lusin build against its recorded bounds."""
    sc = _scaffold(cfg)
    u, F, V = _lusin(cfg, sc)
    anchors = _centre_anchors(sc, cfg["depth"], cfg["samples"], cfg["seed"])
    passed = sum(tangency_check(u, V, anchor=a).ok for a in anchors)
    cert = noninvolutivity_certificate(V, np.zeros(V.n))
    report = {
        "distribution": cfg["distribution"],
        "depth": cfg["depth"],
        "samples": len(anchors),
        "pass_rate": passed / len(anchors),
        "certificate": None if cert is None else {"a": cert[0], "b": cert[1], "p": cert[2], "defect": cert[3]},
        "seed": cfg["seed"],
    }
    if cfg["check"]:
        _require(report["pass_rate"] == 1.0, "tangency failed at some centres")
    cio.write_json(report, cfg.get("out"))


def cmd_seminorm(cfg):
    """Estimate a fractional seminorm against the half-interval closed form or a Cantor indicator."""
    if cfg["target"] == "half-interval":
        s = cfg.get("s", 0.5)
        f = FieldSampler(lambda x: (x[:, 0] < 0.5).astype(float), BoxDomain((0.0,), (1.0,)), "indicator")
        est = fractional_seminorm(f, s, cfg["p"], cfg["budget"], cfg["seed"])
        ref = half_interval_seminorm(s) if cfg["p"] == 1 else None
        row = est.row() | {"quantity": "half-interval", "reference": ref}
        if cfg["check"] and ref is not None:
            _require(abs(est.value - ref) <= 3 * est.stderr + 1e-12, "half-interval estimate off by more than 3 SE")
    else:
        sc = _scaffold(cfg)
        s = cfg.get("s", sc.schedule.s)
        depth = cfg["depth"]
        f = FieldSampler(lambda x: (sc.depth_of(x) >= depth).astype(float), sc.domain, "indicator")
        est = fractional_seminorm(f, s, 1.0, cfg["budget"], cfg["seed"])
        bound = indicator_seminorm_bound(sc.schedule, s, depth, sc.domain)
        row = est.row() | {"quantity": "cantor-indicator", "reference": bound.value}
        if cfg["check"]:
            _require(est.value <= 2 * bound.value, "indicator seminorm above twice the bound")
    cio.write_csv([row], cfg.get("out"))


def cmd_dimension(cfg):
    """Fit the box-counting dimension of a scaffold."""
    sched = _schedule(cfg)
    levels = cfg.get("levels", list(range(2, 9)))
    sc = build_scaffold(_domain(cfg, sched.k), sched, max(levels))
    fit = box_dimension_estimate(sc, levels)
    theory = theoretical_dimension(sched) if sched.regime == "dimension" else None
    if cfg["check"] and theory is not None:
        _require(abs(fit.slope - theory) <= 0.05, "fitted dimension off by more than 0.05")
    cio.write_csv([{"levels": f"{levels[0]}..{levels[-1]}", "slope": fit.slope, "theoretical": theory}], cfg.get("out"))


def cmd_superdensity(cfg):
    """Profile the density of the Cantor set in shrinking balls."""
    sc = _scaffold(cfg)
    s = cfg.get("s", sc.schedule.s)
    rng = np.random.default_rng(cfg["seed"])
    path = sc.random_path(cfg["depth"], rng)
    radii = cfg.get("radii", [float(r) for r in sc.r[1 : cfg["depth"] + 1]])
    prof = superdensity_profile(cantor_oracle(sc, path), np.zeros(sc.k), radii, cfg["b"], s, cfg["samples"], cfg["seed"], relative=True)
    rows = [{"r": r, "ratio": q, "stderr": e, "exponent": prof.exponent} for r, q, e in zip(prof.radii, prof.ratios, prof.stderr)]
    cio.write_csv(rows, cfg.get("out"))


def _form(name: str) -> OneForm:
    if name == "heisenberg":
        return heisenberg_form()
    if name == "x1dx2":
        return monomial_form(1, 0, 2)
    if name == "sincos":
        return OneForm(
            lambda x: np.stack([np.sin(x[:, 0]) * np.cos(x[:, 1]), np.zeros(len(x))], axis=1),
            lambda x: np.sin(x[:, 0]) * np.sin(x[:, 1]),
        )
    if name.startswith("monomial:"):
        a, b, j = (int(v) for v in name.split(":", 1)[1].split(","))
        return monomial_form(a, b, j)
    raise cio.ConfigError(f"unknown form {name!r}")


def cmd_stokes(cfg):
    """Compare circulation and curl flux for a 1-form on a rectangle."""
    g = _form(cfg["form"])
    P = RectangleProbe(cfg.get("center", [0.5, 0.5]), cfg.get("direction", [1.0, 0.0]), tuple(cfg.get("half_sides", [0.5, 0.5])), cfg["order"])
    circ, flux = circulation(g, P), curl_flux(g, P)
    if cfg["check"]:
        _require(abs(circ - flux) <= 1e-8, "Stokes residual above 1e-8")
    cio.write_csv([{"form": cfg["form"], "circulation": circ, "flux": flux, "residual": abs(circ - flux), "order": cfg["order"]}], cfg.get("out"))


def cmd_escape(cfg):
    """Measure how much of a square boundary leaves the Cantor set, per radius."""
    sc = _scaffold(cfg)
    if sc.k != 2:
        raise cio.ConfigError("escape scans need k = 2")
    rng = np.random.default_rng(cfg["seed"])
    path = sc.random_path(cfg["depth"], rng)
    radii = cfg.get("radii", [float(r) for r in sc.r[1 : cfg["depth"] + 1]])
    scan = boundary_escape_exact(sc, path, radii, cfg["offsets"], seed=cfg["seed"])
    if cfg["check"]:
        _require(scan.exponent is not None and scan.exponent >= 1.05, "escape exponent below 1.05")
    cio.write_csv(scan.rows(), cfg.get("out"))


def cmd_witness(cfg):
    """Circulation over area on shrinking squares around a Cantor point."""
    sc = _scaffold(cfg)
    if cfg["distribution"] != "heisenberg":
        raise cio.ConfigError("the witness uses the heisenberg form")
    u, _, _ = _lusin(cfg, sc)
    rng = np.random.default_rng(cfg["seed"])
    path = sc.random_path(cfg["depth"], rng)
    radii = cfg.get("radii", [float(r) for r in sc.r[1 : cfg["depth"]]])
    rec = locality_witness(heisenberg_form(), radii, u=u, scaffold=sc, path=path)
    cio.write_json(rec.as_dict() | {"path": list(path), "seed": cfg["seed"]}, cfg.get("out"))


def cmd_phase(cfg):
    """Emit the phase diagram grid for one value of q."""
    grid = figure_grid(cfg["q"], cfg["resolution"])
    if cfg["check"]:
        _require(abs(grid.zero_crossing() - tau_zero(cfg["q"])) <= grid.cell, "threshold zero-crossing off by more than a cell")
    cio.write_csv(grid.rows(), cfg.get("out"))


# quick invariant battery used by ``check``


def _check_phase():
    probes = [((0.25, 0.6, "inf"), "frobenius"), ((0.25, 0.4, "inf"), "counterexample"), ((0.6, 0.1, 2), "frobenius"),
              ((0.1, 0.95, 1), "frobenius"), ((0.1, 0.85, 1), "counterexample"), ((0.5, 0.4, "inf"), "frobenius")]
    ok = all(classify(*p).label == lab for p, lab in probes)
    for q in (1, 1.5, 4, "inf"):
        g = figure_grid(q, 64)
        ok &= abs(g.zero_crossing() - tau_zero(q)) <= g.cell
    return "phase", ok


def _check_stokes():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(10):
        ang = rng.uniform(0, 2 * math.pi)
        P = RectangleProbe(rng.uniform(-1, 1, 2), [math.cos(ang), math.sin(ang)], tuple(rng.uniform(0.1, 1.0, 2)))
        for a in range(7):
            for b in range(7 - a):
                for j in (1, 2):
                    g = monomial_form(a, b, j)
                    worst = max(worst, abs(circulation(g, P) - curl_flux(g, P)))
    return "stokes", worst <= 1e-10


def _check_bracket():
    V = heisenberg()
    x = np.array([0.3, -0.2, 0.1])
    br = lie_bracket(spanning_pair(V, 1, 2, analytic=False), x, analytic=False)
    ok = np.max(np.abs(br - np.array([0.0, 0.0, -4.0]))) <= 1e-8
    return "bracket", bool(ok and involutivity_defect(V, x, 1, 2, 1) == 4.0)


def _check_measure():
    sched = make_schedule("dimension", 2, 1, 0.1, 1.0)
    sc = build_scaffold(BoxDomain.cube(2), sched, 8)
    ok = True
    for i in range(9):
        closed = sc.card_L1 * 2.0 ** (sc.B * sc.k * i) * sc.r[i] ** 2
        ok &= abs(sc.measure(i) - closed) <= 1e-12 * closed
    return "measure", bool(ok)


def cmd_check(cfg):
    """Run the built-in self-checks in parallel."""
    checks = [_check_phase, _check_stokes, _check_bracket, _check_measure]
    with ThreadPoolExecutor(max_workers=cfg["jobs"]) as pool:
        results = list(pool.map(lambda f: f(), checks))
    report = {name: bool(ok) for name, ok in results}
    cio.write_json(report, cfg.get("out"))
    _require(all(report.values()), "invariant battery: " + ", ".join(n for n, ok in report.items() if not ok))


COMMANDS = {
    "build": cmd_build,
    "eval": cmd_eval,
    "residuals": cmd_residuals,
    "verify": cmd_verify,
    "seminorm": cmd_seminorm,
    "dimension": cmd_dimension,
    "superdensity": cmd_superdensity,
    "stokes": cmd_stokes,
    "escape": cmd_escape,
    "witness": cmd_witness,
    "phase": cmd_phase,
    "check": cmd_check,
}


# ----------------------------------------------------------------- parsing


def _add_common(p):
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="JSON config file (flags override)")
    p.add_argument("--out", default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--jobs", type=int, default=S)
    p.add_argument("--check", action="store_const", const=True, default=S, help="exit 4 on invariant violations")
    p.add_argument("--regime", default=S)
    p.add_argument("--k", type=int, default=S)
    p.add_argument("--B", type=int, default=S)
    p.add_argument("--delta", type=float, default=S)
    p.add_argument("--d", type=float, default=S)
    p.add_argument("--s", type=float, default=S)
    p.add_argument("--values", type=float, nargs="+", default=S)
    p.add_argument("--depth", type=int, default=S)
    p.add_argument("--lo", type=float, nargs="+", default=S)
    p.add_argument("--hi", type=float, nargs="+", default=S)
    p.add_argument("--scaffold", default=S)
    p.add_argument("--distribution", default=S)
    p.add_argument("--matrix", type=json.loads, default=S, help="JSON nested list")
    p.add_argument("--points", type=int, default=S)
    p.add_argument("--samples", type=int, default=S)
    p.add_argument("--budget", type=int, default=S)
    p.add_argument("--target", default=S)
    p.add_argument("--p", type=float, default=S)
    p.add_argument("--levels", type=int, nargs="+", default=S)
    p.add_argument("--b", type=float, default=S)
    p.add_argument("--radii", type=float, nargs="+", default=S)
    p.add_argument("--form", default=S)
    p.add_argument("--center", type=float, nargs="+", default=S)
    p.add_argument("--direction", type=float, nargs="+", default=S)
    p.add_argument("--half-sides", dest="half_sides", type=float, nargs="+", default=S)
    p.add_argument("--order", type=int, default=S)
    p.add_argument("--offsets", type=int, default=S)
    p.add_argument("--q", default=S)
    p.add_argument("--resolution", type=int, default=S)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cantorlab", description="Cantor sets, Lusin graphs and fractional seminorm probes")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        _add_common(sub.add_parser(name, help=(fn.__doc__ or name).strip().splitlines()[0]))
    return parser


def merge_config(ns: argparse.Namespace) -> dict:
    cfg = {}
    given = vars(ns).copy()
    path = given.pop("config", None)
    if path:
        try:
            cfg = cio.read_json(path)
        except (OSError, json.JSONDecodeError) as exc:
            raise cio.ConfigError(f"cannot read config: {exc}") from None
        if not isinstance(cfg, dict):
            raise cio.ConfigError("config must be a JSON object")
        if cfg.get("command", given["command"]) != given["command"]:
            raise cio.ConfigError("config command does not match the subcommand")
    cfg.update(given)
    if "q" in cfg and isinstance(cfg["q"], str) and cfg["q"] != "inf":
        try:
            cfg["q"] = float(cfg["q"])
        except ValueError:
            pass
    cio.validate_config(cfg)
    full = dict(DEFAULTS)
    full.update(cfg)
    return full


def run(argv=None) -> int:
    parser = make_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = merge_config(ns)
        COMMANDS[cfg["command"]](cfg)
    except cio.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ScheduleError, ValueError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
