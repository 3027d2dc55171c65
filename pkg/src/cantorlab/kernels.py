"""Hot numeric kernels, each with a numba and a pure-numpy implementation.

The public names (``membership_depth``, ``lusin_eval``, ``ramp``) are bound
at import time according to :data:`cantorlab._accel.USE_NUMBA`.  Both
variants are always importable under ``*_numba`` / ``*_numpy`` so tests and
the benchmark can compare them directly.

Random numbers are never drawn inside a kernel: both paths consume the same
inputs and agree to rounding.
"""

from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

# quintic smoothstep S(u) = 6u^5 - 15u^4 + 10u^3 and its sup-norm constants
RAMP_C1 = 15.0 / 8.0
RAMP_C2 = 10.0 * np.sqrt(3.0) / 3.0


# ---------------------------------------------------------------- ramps


def ramp_numpy(t, half, w):
    """1-D plateau profile: 1 on ``|t| <= half``, 0 beyond ``half + w``.

    Returns ``(phi, dphi, d2phi)`` evaluated elementwise.
    """
    t = np.asarray(t, dtype=np.float64)
    a = np.abs(t)
    u = np.clip((a - half) / w, 0.0, 1.0)
    s = u * u * u * (u * (6.0 * u - 15.0) + 10.0)
    ds = 30.0 * u * u * (u - 1.0) ** 2
    d2s = 60.0 * u * (2.0 * u - 1.0) * (u - 1.0)
    sgn = np.where(t < 0.0, -1.0, 1.0)
    return 1.0 - s, -sgn * ds / w, -d2s / (w * w)


@njit
def _ramp_scalar(t, half, w):
    a = abs(t)
    u = (a - half) / w
    if u <= 0.0:
        return 1.0, 0.0, 0.0
    if u >= 1.0:
        return 0.0, 0.0, 0.0
    s = u * u * u * (u * (6.0 * u - 15.0) + 10.0)
    ds = 30.0 * u * u * (u - 1.0) * (u - 1.0)
    d2s = 60.0 * u * (2.0 * u - 1.0) * (u - 1.0)
    sgn = -1.0 if t < 0.0 else 1.0
    return 1.0 - s, -sgn * ds / w, -d2s / (w * w)


@njit
def _ramp_batch(t, half, w):
    n = t.shape[0]
    phi = np.empty(n)
    dphi = np.empty(n)
    d2phi = np.empty(n)
    for i in range(n):
        phi[i], dphi[i], d2phi[i] = _ramp_scalar(t[i], half, w)
    return phi, dphi, d2phi


def ramp_numba(t, half, w):
    t = np.ascontiguousarray(t, dtype=np.float64)
    shape = t.shape
    phi, dphi, d2phi = _ramp_batch(t.ravel(), float(half), float(w))
    return phi.reshape(shape), dphi.reshape(shape), d2phi.reshape(shape)


# ------------------------------------------------------ cantor membership


def membership_depth_numpy(points, lo, hi, delta, r, B, depth):
    """Deepest level whose closed cube contains each point.

    ``lo``/``hi`` are the inclusive integer ranges of the root lattice per
    axis (root centres sit at ``m * delta``).  Returns ``-1`` for points in no
    root cube, otherwise a level in ``0..depth``.
    """
    x = np.asarray(points, dtype=np.float64)
    m = np.rint(x / delta)
    y = x - m * delta
    ok = np.all((m >= lo) & (m <= hi), axis=1)
    ok &= np.all(np.abs(y) <= 0.5 * r[0], axis=1)
    out = np.where(ok, 0, -1).astype(np.int64)
    nb = 2**B
    alive = ok.copy()
    for lev in range(1, depth + 1):
        if not alive.any():
            break
        h = r[lev - 1] * 2.0**-B
        idx = np.clip(np.floor(y / h + 0.5 * nb), 0, nb - 1)
        y = y - (idx - 0.5 * (nb - 1)) * h
        inside = np.all(np.abs(y) <= 0.5 * r[lev], axis=1)
        alive &= inside
        out[alive] = lev
    return out


@njit
def _membership_depth_loop(x, lo, hi, delta, r, B, depth):
    n, k = x.shape
    out = np.empty(n, dtype=np.int64)
    nb = 2**B
    y = np.empty(k)
    for p in range(n):
        ok = True
        for d in range(k):
            m = np.rint(x[p, d] / delta)
            if m < lo[d] or m > hi[d]:
                ok = False
            y[d] = x[p, d] - m * delta
            if abs(y[d]) > 0.5 * r[0]:
                ok = False
        if not ok:
            out[p] = -1
            continue
        lev_reached = 0
        for lev in range(1, depth + 1):
            h = r[lev - 1] * 2.0**-B
            inside = True
            for d in range(k):
                idx = np.floor(y[d] / h + 0.5 * nb)
                if idx < 0.0:
                    idx = 0.0
                elif idx > nb - 1:
                    idx = nb - 1.0
                y[d] = y[d] - (idx - 0.5 * (nb - 1)) * h
                if abs(y[d]) > 0.5 * r[lev]:
                    inside = False
            if not inside:
                break
            lev_reached = lev
        out[p] = lev_reached
    return out


def membership_depth_numba(points, lo, hi, delta, r, B, depth):
    x = np.ascontiguousarray(points, dtype=np.float64)
    return _membership_depth_loop(
        x,
        np.asarray(lo, dtype=np.float64),
        np.asarray(hi, dtype=np.float64),
        float(delta),
        np.asarray(r, dtype=np.float64),
        int(B),
        int(depth),
    )


# ---------------------------------------------------- lusin point kernel


def lusin_eval_numpy(y, depth, child_off, dA, a_top, z_next, has_next, r, rho):
    """Evaluate ``u`` and ``Du`` for points given in cube-relative form.

    Per point ``p`` with deepest containing level ``m = depth[p]``:

    * ``y[p]`` is the offset from the level-``m`` cube centre,
    * ``child_off[p, l]`` is the offset of the level-``l`` ancestor from its
      parent (used for ``l = 1..m``),
    * ``dA[p, l]`` is ``a_l - a_{l-1}`` along the path (``l = 1..m``) and
      ``dA[p, m + 1]`` the increment of the nearest level-``m+1`` child,
    * ``a_top[p]`` is ``a_m`` and ``z_next[p]`` the offset of the point from
      the nearest level-``m+1`` centre (kept separately from ``y`` so thin
      transition bands stay resolved).

    Inside level-``m`` every cutoff up to ``m`` is identically one, so
    ``Du = a_m`` plus the transition term of the single level-``m+1``
    support that may contain the point.
    """
    npts, k = y.shape
    nout = a_top.shape[1]
    u = np.zeros((npts, nout))
    du = a_top.copy()
    maxd = int(depth.max()) if npts else 0
    s = y.copy()
    for lev in range(maxd, 0, -1):
        sel = depth >= lev
        u[sel] += np.einsum("pij,pj->pi", dA[sel, lev], s[sel])
        s[sel] += child_off[sel, lev]
    nxt = np.flatnonzero(has_next)
    if nxt.size:
        m = depth[nxt]
        z = z_next[nxt]
        half = 0.5 * r[m + 1]
        w = 0.25 * rho[m + 1]
        phi, dphi, _ = ramp_numpy(z, half[:, None], w[:, None])
        sig = np.prod(phi, axis=1)
        grad = np.empty_like(z)
        for d in range(k):
            others = np.prod(np.delete(phi, d, axis=1), axis=1)
            grad[:, d] = dphi[:, d] * others
        da = dA[nxt, m + 1]
        lin = np.einsum("pij,pj->pi", da, z)
        u[nxt] += sig[:, None] * lin
        du[nxt] += sig[:, None, None] * da + lin[:, :, None] * grad[:, None, :]
    return u, du


@njit
def _lusin_eval_loop(y, depth, child_off, dA, a_top, z_next, has_next, r, rho):
    npts, k = y.shape
    nout = a_top.shape[1]
    u = np.zeros((npts, nout))
    du = a_top.copy()
    s = np.empty(k)
    phi = np.empty(k)
    dphi = np.empty(k)
    z = np.empty(k)
    for p in range(npts):
        m = depth[p]
        for d in range(k):
            s[d] = y[p, d]
        for lev in range(m, 0, -1):
            for i in range(nout):
                acc = 0.0
                for d in range(k):
                    acc += dA[p, lev, i, d] * s[d]
                u[p, i] += acc
            for d in range(k):
                s[d] += child_off[p, lev, d]
        if has_next[p]:
            half = 0.5 * r[m + 1]
            w = 0.25 * rho[m + 1]
            sig = 1.0
            for d in range(k):
                z[d] = z_next[p, d]
                phi[d], dphi[d], _ = _ramp_scalar(z[d], half, w)
                sig *= phi[d]
            for i in range(nout):
                lin = 0.0
                for d in range(k):
                    lin += dA[p, m + 1, i, d] * z[d]
                u[p, i] += sig * lin
                for d in range(k):
                    g = dphi[d]
                    for e in range(k):
                        if e != d:
                            g *= phi[e]
                    du[p, i, d] += sig * dA[p, m + 1, i, d] + lin * g
    return u, du


def lusin_eval_numba(y, depth, child_off, dA, a_top, z_next, has_next, r, rho):
    return _lusin_eval_loop(
        np.ascontiguousarray(y, dtype=np.float64),
        np.ascontiguousarray(depth, dtype=np.int64),
        np.ascontiguousarray(child_off, dtype=np.float64),
        np.ascontiguousarray(dA, dtype=np.float64),
        np.ascontiguousarray(a_top, dtype=np.float64),
        np.ascontiguousarray(z_next, dtype=np.float64),
        np.ascontiguousarray(has_next, dtype=np.bool_),
        np.asarray(r, dtype=np.float64),
        np.asarray(rho, dtype=np.float64),
    )


if USE_NUMBA:
    ramp = ramp_numba
    membership_depth = membership_depth_numba
    lusin_eval = lusin_eval_numba
else:
    ramp = ramp_numpy
    membership_depth = membership_depth_numpy
    lusin_eval = lusin_eval_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
