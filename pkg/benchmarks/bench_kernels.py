"""Compare the numba and pure-numpy kernels on identical inputs.

Run with ``python3 benchmarks/bench_kernels.py [--points N] [--repeat R]``.
The first numba call is timed separately (compilation, or loading from the
on-disk cache); the table reports the best of ``R`` warm runs.
"""

import argparse
import time

import numpy as np

from cantorlab import kernels
from cantorlab.geometry import BoxDomain, build_scaffold, make_schedule
from cantorlab.lusin import Resolved, build_lusin, heisenberg_datum, minimal_eta, resolve


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def lusin_inputs(n, seed):
    sched = make_schedule("sobolev", 2, 10, 0.01, 0.25)
    dom = BoxDomain((-0.0051, -0.0051), (0.0051, 0.0051))
    sc = build_scaffold(dom, sched, 6)
    F = heisenberg_datum(dom)
    u = build_lusin(F, sc, 6, minimal_eta(F, sc.delta))
    rng = np.random.default_rng(seed)
    res = resolve(sc, None, None, dom.sample(rng, n), 6)
    ok = res.lev >= 0
    res = Resolved(res.lev[ok], res.root[ok], res.digits[ok], res.y[ok], res.z[ok], res.has_next[ok])
    child_off, dA, a_top = u._gather(res, 6)
    return sc, (res.y, res.lev, child_off, dA, a_top, res.z, res.has_next, sc.r, sc.rho)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    sc, largs = lusin_inputs(args.points, args.seed)
    pts = sc.domain.sample(np.random.default_rng(args.seed + 1), args.points)
    margs = (pts, np.array(sc.lattice_lo, float), np.array(sc.lattice_hi, float), sc.delta, sc.r, sc.B, sc.depth)
    t = np.random.default_rng(args.seed + 2).uniform(-1, 1, args.points)
    rargs = (t, 0.4, 0.2)

    cases = [
        ("ramp", kernels.ramp_numpy, kernels.ramp_numba, rargs),
        ("membership_depth", kernels.membership_depth_numpy, kernels.membership_depth_numba, margs),
        ("lusin_eval", kernels.lusin_eval_numpy, kernels.lusin_eval_numba, largs),
    ]
    print(f"points={args.points} repeat={args.repeat} active backend={kernels.BACKEND}")
    print(f"{'kernel':<18}{'numpy [ms]':>12}{'numba [ms]':>12}{'first call [ms]':>17}{'speedup':>9}{'max |diff|':>12}")
    for name, f_np, f_nb, a in cases:
        t0 = time.perf_counter()
        f_nb(*a)
        first = time.perf_counter() - t0
        t_np, out_np = best_of(lambda: f_np(*a), args.repeat)
        t_nb, out_nb = best_of(lambda: f_nb(*a), args.repeat)
        o1 = out_np if isinstance(out_np, tuple) else (out_np,)
        o2 = out_nb if isinstance(out_nb, tuple) else (out_nb,)
        diff = max(float(np.max(np.abs(np.asarray(x, float) - np.asarray(y, float)))) for x, y in zip(o1, o2))
        print(f"{name:<18}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{1e3 * first:>17.1f}{t_np / t_nb:>9.1f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
