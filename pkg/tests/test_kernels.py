import os
import subprocess
import sys

import numpy as np
import pytest

from cantorlab import kernels
from cantorlab.lusin import Resolved, resolve


def test_ramp_backends_agree():
    t = np.random.default_rng(0).uniform(-1.0, 1.0, 20_000)
    a = kernels.ramp_numpy(t, 0.4, 0.2)
    b = kernels.ramp_numba(t, 0.4, 0.2)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=1e-13, atol=1e-13)


def test_ramp_shape_and_constants():
    w = 0.2
    t = np.linspace(0.4, 0.61, 105_001)
    phi, dphi, d2phi = kernels.ramp_numpy(t, 0.4, w)
    assert phi[0] == 1.0 and phi[-1] == 0.0
    assert np.all((phi >= 0) & (phi <= 1))
    # analytic maximum of the quintic smoothstep slope is 15/8 at the midpoint
    assert np.max(np.abs(dphi)) == pytest.approx(kernels.RAMP_C1 / w, rel=1e-2)
    assert np.max(np.abs(d2phi)) <= kernels.RAMP_C2 / w**2 * (1 + 1e-9)


def test_membership_backends_agree(dimension_scaffold):
    sc = dimension_scaffold
    pts = sc.domain.sample(np.random.default_rng(1), 50_000)
    args = (pts, np.array(sc.lattice_lo, float), np.array(sc.lattice_hi, float), sc.delta, sc.r, sc.B, sc.depth)
    np.testing.assert_array_equal(kernels.membership_depth_numpy(*args), kernels.membership_depth_numba(*args))


def test_lusin_eval_backends_agree(heisenberg_build):
    u, _ = heisenberg_build
    sc = u.scaffold
    res = resolve(sc, None, None, sc.domain.sample(np.random.default_rng(2), 20_000), 6)
    ok = res.lev >= 0
    res = Resolved(res.lev[ok], res.root[ok], res.digits[ok], res.y[ok], res.z[ok], res.has_next[ok])
    child_off, dA, a_top = u._gather(res, 6)
    args = (res.y, res.lev, child_off, dA, a_top, res.z, res.has_next, sc.r, sc.rho)
    u1, g1 = kernels.lusin_eval_numpy(*args)
    u2, g2 = kernels.lusin_eval_numba(*args)
    np.testing.assert_allclose(u1, u2, rtol=1e-12, atol=1e-20)
    np.testing.assert_allclose(g1, g2, rtol=1e-12, atol=1e-14)


def _run_backend(flag):
    code = (
        "import numpy as np, cantorlab;"
        "from cantorlab.geometry import BoxDomain, build_scaffold, make_schedule;"
        "sc = build_scaffold(BoxDomain.cube(2), make_schedule('dimension', 2, 1, 0.1, 1.0), 6);"
        "x = sc.domain.sample(np.random.default_rng(0), 2000);"
        "print(cantorlab.BACKEND, int(sc.depth_of(x).sum()))"
    )
    env = dict(os.environ, CANTORLAB_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return out.stdout.split()


def test_numpy_fallback_switch():
    backend0, total0 = _run_backend("0")
    backend1, total1 = _run_backend("1")
    assert backend0 == "numpy"
    assert backend1 == "numba"
    assert total0 == total1
