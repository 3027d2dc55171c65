"""Layered functions whose gradient is prescribed on a Cantor-type set.

The function is built level by level::

    u_{i+1} = u_i + sum_Q sigma_Q (a_Q - a_{parent(Q)}) (x - centre(Q))

over the level-``i+1`` cubes ``Q``, with ``a_Q = F(centre(Q), u_i(centre(Q)))``.
Inside a cube of the deepest level the cutoffs of all enclosing cubes are
identically one, so ``Du`` telescopes to ``a_Q`` there.

Coefficients are computed lazily and memoised by cube address: a scaffold
with ``B = 10`` has ``2^120`` cubes per root at level 6, so only the cubes
actually visited by an evaluation are ever materialised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .geometry import Anchor, CantorScaffold, BoxDomain


# ----------------------------------------------------------------- datum


@dataclass
class GradientDatum:
    """``F(x, u)``: a linear map ``R^k -> R^m`` for each ``x`` in ``R^k``, ``u`` in ``R^m``.

    ``func`` takes ``X`` of shape ``(n, k)`` and ``U`` of shape ``(n, m)`` and
    returns ``(n, m, k)``.  ``M1``/``M2`` are the recorded sup and Lipschitz
    bounds on ``K x [-1, 1]^m``.
    """

    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    k: int
    m: int
    M1: float
    M2: float
    name: str = "user"
    K: BoxDomain | None = None

    def __call__(self, x, u):
        X = np.atleast_2d(np.asarray(x, dtype=float))
        U = np.atleast_2d(np.asarray(u, dtype=float))
        out = np.asarray(self.func(X, U), dtype=float)
        return out[0] if np.ndim(x) == 1 else out

    def check_bounds(self, rng: np.random.Generator, n: int = 10_000):
        """Largest sampled operator norm and difference quotient on ``K x [-1,1]^m``."""
        if self.K is None:
            raise ValueError("datum has no recorded set K")
        x = self.K.sample(rng, n)
        u = rng.uniform(-1.0, 1.0, (n, self.m))
        x2 = self.K.sample(rng, n)
        u2 = rng.uniform(-1.0, 1.0, (n, self.m))
        f1, f2 = self(x, u), self(x2, u2)
        sup = float(np.max(np.linalg.norm(f1, ord=2, axis=(1, 2))))
        dist = np.sqrt(np.sum((x - x2) ** 2, axis=1) + np.sum((u - u2) ** 2, axis=1))
        lip = float(np.max(np.linalg.norm(f1 - f2, ord=2, axis=(1, 2)) / dist))
        return sup, lip


def _box_radius(K: BoxDomain) -> float:
    corners = np.maximum(np.abs(np.array(K.lo)), np.abs(np.array(K.hi)))
    return float(np.linalg.norm(corners))


def heisenberg_datum(K: BoxDomain | None = None) -> GradientDatum:
    """Graph datum of the first Heisenberg distribution: ``F(x, u) = (-2 x_2, 2 x_1)``."""
    K = K or BoxDomain.cube(2)

    def func(X, U):
        return np.stack([-2.0 * X[:, 1], 2.0 * X[:, 0]], axis=1)[:, None, :]

    return GradientDatum(func, 2, 1, 2.0 * _box_radius(K), 2.0, "heisenberg", K)


def constant_datum(A, K: BoxDomain | None = None) -> GradientDatum:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, k = A.shape
    K = K or BoxDomain.cube(k)

    def func(X, U):
        return np.broadcast_to(A, (X.shape[0], m, k)).copy()

    return GradientDatum(func, k, m, float(np.linalg.norm(A, ord=2)), 0.0, "constant", K)


def zero_datum(k: int, m: int = 1, K: BoxDomain | None = None) -> GradientDatum:
    return constant_datum(np.zeros((m, k)), K)


# ---------------------------------------------------------------- cutoff


@dataclass(frozen=True)
class CutoffProfile:
    """Tensor product of 1-D quintic-smoothstep plateaus.

    Equal to one on the inner cube, zero outside the outer cube whose side is
    ``inner_side + rho / 2``; the ramp width per face is ``w = rho / 4``.
    """

    center: np.ndarray
    inner_side: float
    rho: float
    c1: float = kernels.RAMP_C1
    c2: float = kernels.RAMP_C2

    @property
    def width(self) -> float:
        return 0.25 * self.rho

    @property
    def outer_side(self) -> float:
        return self.inner_side + 0.5 * self.rho

    def _parts(self, x):
        z = np.atleast_2d(np.asarray(x, dtype=float)) - self.center
        return kernels.ramp_numpy(z, 0.5 * self.inner_side, self.width)

    def __call__(self, x):
        phi, _, _ = self._parts(x)
        return np.prod(phi, axis=1)

    def grad(self, x):
        phi, dphi, _ = self._parts(x)
        k = phi.shape[1]
        out = np.empty_like(phi)
        for d in range(k):
            out[:, d] = dphi[:, d] * np.prod(np.delete(phi, d, axis=1), axis=1)
        return out

    def hessian(self, x):
        phi, dphi, d2phi = self._parts(x)
        n, k = phi.shape
        H = np.empty((n, k, k))
        for a in range(k):
            for b in range(k):
                fac = d2phi[:, a] if a == b else dphi[:, a] * dphi[:, b]
                rest = [d for d in range(k) if d not in (a, b)]
                H[:, a, b] = fac * (np.prod(phi[:, rest], axis=1) if rest else 1.0)
        return H

    def grad_bound(self) -> float:
        return len(self.center) * self.c1 / self.width

    def hessian_bound(self) -> float:
        return len(self.center) ** 2 * max(self.c1**2, self.c2) / self.width**2


def make_cutoff(inner_center, inner_side: float, rho: float) -> CutoffProfile:
    if not inner_side > 0 or not rho > 0:
        raise ValueError("inner_side and rho must be positive")
    return CutoffProfile(np.asarray(inner_center, dtype=float), float(inner_side), float(rho))


# -------------------------------------------------------------- resolution


@dataclass
class Resolved:
    """Points located in the cube hierarchy, ready for the kernel."""

    lev: np.ndarray  # deepest containing level (-1 outside every root)
    root: np.ndarray
    digits: np.ndarray  # (n, depth, k); level l at column l - 1
    y: np.ndarray  # offset from the level-``lev`` centre
    z: np.ndarray  # offset from the nearest level-``lev + 1`` centre
    has_next: np.ndarray


def _offsets(sc: CantorScaffold, level: int, digits: np.ndarray) -> np.ndarray:
    return (digits - 0.5 * (sc.nb - 1)) * (sc.r[level - 1] * 2.0**-sc.B)


def _nearest(sc: CantorScaffold, level: int, y: np.ndarray):
    h = sc.r[level - 1] * 2.0**-sc.B
    d = np.clip(np.floor(y / h + 0.5 * sc.nb), 0, sc.nb - 1).astype(np.int64)
    return d, y - (d - 0.5 * (sc.nb - 1)) * h


def _locate_abs(sc: CantorScaffold, x: np.ndarray):
    m = np.rint(x / sc.delta)
    y = x - m * sc.delta
    lo, hi = np.array(sc.lattice_lo), np.array(sc.lattice_hi)
    ok = np.all((m >= lo) & (m <= hi), axis=1) & np.all(np.abs(y) <= 0.5 * sc.r[0], axis=1)
    rel = np.clip(m - lo, 0, np.array(sc.lattice_shape) - 1).astype(np.int64)
    root = np.ravel_multi_index(tuple(rel.T), sc.lattice_shape) if len(x) else np.zeros(0, np.int64)
    return np.where(ok, 0, -1), np.asarray(root, dtype=np.int64), y


def resolve(sc: CantorScaffold, root, digits, y, depth: int) -> Resolved:
    """Locate points given relative to a common-level cube address.

    ``digits`` has shape ``(n, L, k)``; ``L = 0`` with ``root = None`` means
    ``y`` holds absolute coordinates.  Offsets that lie outside their anchor
    cube are walked up the hierarchy, keeping the precise offset from the
    child they left so that thin transition bands stay resolved.
    """
    y = np.array(y, dtype=float, copy=True)
    n, k = y.shape
    L = digits.shape[1] if digits is not None else 0
    dig = np.zeros((n, max(depth, 1), k), dtype=np.int64)
    z = np.zeros((n, k))
    has_next = np.zeros(n, dtype=bool)
    asc = np.zeros(n, dtype=bool)
    if root is None:
        lev, root, y = _locate_abs(sc, y)
    else:
        root = np.array(root, dtype=np.int64, copy=True)
        for l in range(L, depth, -1):
            y += _offsets(sc, l, digits[:, l - 1])
        L = min(L, depth)
        if L:
            dig[:, :L] = digits[:, :L]
        lev = np.full(n, L, dtype=np.int64)
        active = np.ones(n, dtype=bool)
        for l in range(L, 0, -1):
            out = active & np.any(np.abs(y) > 0.5 * sc.r[l], axis=1)
            z[out] = y[out]
            y[out] += _offsets(sc, l, dig[out, l - 1])
            lev[out] = l - 1
            asc |= out
            active = out
        out0 = active & np.any(np.abs(y) > 0.5 * sc.r[0], axis=1)
        if out0.any():
            x = sc.root_centers()[root[out0]] + y[out0]
            lv, rt, yy = _locate_abs(sc, x)
            lev[out0], root[out0], y[out0] = lv, rt, yy
            asc[out0] = False
    # points that walked up: keep the exact offset when the nearest child is
    # still the one they left, otherwise they belong to a sibling and descend
    up = np.flatnonzero(asc & (lev >= 0))
    if up.size:
        m = lev[up]
        for l in np.unique(m):
            sel = up[m == l]
            d, _ = _nearest(sc, l + 1, y[sel])
            same = np.all(d == dig[sel, l], axis=1)
            asc[sel[~same]] = False
        has_next[asc] = True
    still = (~asc) & (lev >= 0)
    for l in range(1, depth + 1):
        act = still & (lev == l - 1)
        if not act.any():
            continue
        d, zz = _nearest(sc, l, y[act])
        inside = np.all(np.abs(zz) <= 0.5 * sc.r[l], axis=1)
        idx = np.flatnonzero(act)
        dig[idx, l - 1] = d
        go, stop = idx[inside], idx[~inside]
        y[go] = zz[inside]
        lev[go] = l
        z[stop] = zz[~inside]
        has_next[stop] = True
        still[stop] = False
    has_next &= lev < depth
    return Resolved(lev, root, dig, y, z, has_next)


# ---------------------------------------------------------------- function


def _path_key(sc: CantorScaffold, root: int, digits: np.ndarray) -> tuple:
    idx = np.ravel_multi_index(tuple(digits.T), (sc.nb,) * sc.k) if len(digits) else []
    return (int(root),) + tuple(int(v) for v in np.atleast_1d(idx))


class LusinFunction:
    """Lazily evaluated layered function on a scaffold."""

    def __init__(self, F: GradientDatum, scaffold: CantorScaffold, depth: int, eta: float | None = None):
        if depth > scaffold.depth:
            raise ValueError("depth exceeds scaffold depth")
        if F.k != scaffold.k:
            raise ValueError("datum and scaffold dimensions differ")
        self.F = F
        self.scaffold = scaffold
        self.depth = int(depth)
        self.eta = eta
        self._a: dict[tuple, np.ndarray] = {}

    @property
    def k(self) -> int:
        return self.F.k

    @property
    def m(self) -> int:
        return self.F.m

    # --- coefficients

    def coefficient(self, path: Sequence[int]) -> np.ndarray:
        """``a_Q`` for the cube ``path`` (zero for root cubes)."""
        path = tuple(int(p) for p in path)
        if len(path) <= 1:
            return np.zeros((self.m, self.k))
        hit = self._a.get(path)
        if hit is not None:
            return hit
        sc = self.scaffold
        level = len(path) - 1
        A = [np.zeros((self.m, self.k))] + [self.coefficient(path[: j + 1]) for j in range(1, level)]
        # u_{level-1} at the centre: every enclosing cutoff equals one there
        s = np.zeros(self.k)
        u = np.zeros(self.m)
        for j in range(level - 1, 0, -1):
            s = s + sc.child_offset(j + 1, path[j + 1])
            u = u + (A[j] - A[j - 1]) @ s
        a = np.asarray(self.F(sc.cube_center(path), u), dtype=float).reshape(self.m, self.k)
        self._a[path] = a
        return a

    def cached_levels(self) -> dict:
        out: dict[int, dict] = {}
        for path, a in self._a.items():
            out.setdefault(len(path) - 1, {})[path] = a
        return out

    # --- evaluation

    def _keys(self, rows: np.ndarray, l: int) -> list:
        """Cube addresses for rows ``(root, digits of levels 1..l)``."""
        sc = self.scaffold
        k = self.k
        cols = [rows[:, 0]]
        for j in range(l):
            cols.append(np.ravel_multi_index(tuple(rows[:, 1 + j * k : 1 + (j + 1) * k].T), (sc.nb,) * k))
        return [tuple(r) for r in np.stack(cols, axis=1).tolist()]

    def _coefficients_batch(self, rows: np.ndarray, l: int) -> np.ndarray:
        """``a_Q`` for many level-``l`` cubes at once (parents must be cached)."""
        keys = self._keys(rows, l)
        out = np.empty((len(keys), self.m, self.k))
        missing = [i for i, key in enumerate(keys) if key not in self._a]
        for i, key in enumerate(keys):
            if key in self._a:
                out[i] = self._a[key]
        if not missing:
            return out
        sc = self.scaffold
        k = self.k
        sub = rows[missing]
        mk = [keys[i] for i in missing]
        digits = sub[:, 1:].reshape(len(sub), l, k)
        A = [np.zeros((len(sub), self.m, k))]
        for j in range(1, l):
            A.append(np.stack([self.coefficient(key[: j + 1]) for key in mk]))
        s = np.zeros((len(sub), k))
        u = np.zeros((len(sub), self.m))
        for j in range(l - 1, 0, -1):
            s = s + _offsets(sc, j + 1, digits[:, j])
            u = u + np.einsum("pij,pj->pi", A[j] - A[j - 1], s)
        off = np.zeros((len(sub), k))
        for j in range(l, 0, -1):
            off = off + _offsets(sc, j, digits[:, j - 1])
        centers = sc.root_centers()[sub[:, 0]] + off
        vals = np.asarray(self.F.func(centers, u), dtype=float).reshape(len(sub), self.m, k)
        for i, key, a in zip(missing, mk, vals):
            self._a[key] = a
            out[i] = a
        return out

    def _gather(self, res: Resolved, depth: int):
        sc = self.scaffold
        n, k = res.y.shape
        m = self.m
        A = np.zeros((n, depth + 2, m, k))
        child_off = np.zeros((n, depth + 2, k))
        for l in range(1, depth + 1):
            need = (res.lev >= l) | (res.has_next & (res.lev == l - 1))
            idx = np.flatnonzero(need)
            if idx.size == 0:
                continue
            rows = np.concatenate([res.root[idx, None], res.digits[idx, :l].reshape(idx.size, l * k)], axis=1)
            uniq, inv = np.unique(rows, axis=0, return_inverse=True)
            coefs = self._coefficients_batch(uniq, l)
            A[idx, l] = coefs[inv.ravel()]
            inside = idx[res.lev[idx] >= l]
            child_off[inside, l] = _offsets(sc, l, res.digits[inside, l - 1])
        dA = np.zeros_like(A)
        dA[:, 1:] = A[:, 1:] - A[:, :-1]
        lev = np.maximum(res.lev, 0)
        a_top = A[np.arange(n), lev]
        return child_off, dA, a_top

    def eval_resolved(self, res: Resolved, depth: int):
        n, k = res.y.shape
        u = np.zeros((n, self.m))
        du = np.zeros((n, self.m, k))
        ok = res.lev >= 0
        if not ok.any():
            return u, du
        sub = Resolved(res.lev[ok], res.root[ok], res.digits[ok], res.y[ok], res.z[ok], res.has_next[ok])
        child_off, dA, a_top = self._gather(sub, depth)
        uu, dd = kernels.lusin_eval(
            sub.y, sub.lev, child_off, dA, a_top, sub.z, sub.has_next, self.scaffold.r, self.scaffold.rho
        )
        u[ok], du[ok] = uu, dd
        return u, du

    def evaluate(self, points=None, *, anchors: Sequence[Anchor] | None = None, depth: int | None = None):
        """``(u, Du)`` at absolute points or at anchors; shapes ``(n, m)`` and ``(n, m, k)``."""
        depth = self.depth if depth is None else int(depth)
        if anchors is None:
            x = np.atleast_2d(np.asarray(points, dtype=float))
            res = resolve(self.scaffold, None, None, x, depth)
            return self.eval_resolved(res, depth)
        return self.evaluate_anchors(anchors, depth=depth)

    def evaluate_anchors(self, anchors: Sequence[Anchor], depth: int | None = None):
        depth = self.depth if depth is None else int(depth)
        sc = self.scaffold
        n = len(anchors)
        u = np.zeros((n, self.m))
        du = np.zeros((n, self.m, self.k))
        groups: dict[int, list] = {}
        for i, a in enumerate(anchors):
            groups.setdefault(len(a.path), []).append(i)
        for plen, idx in groups.items():
            y = np.array([anchors[i].offset for i in idx], dtype=float)
            if plen == 0:
                res = resolve(sc, None, None, y, depth)
            else:
                root = np.array([anchors[i].path[0] for i in idx])
                digits = np.array(
                    [[sc.child_digits(c) for c in anchors[i].path[1:]] for i in idx], dtype=np.int64
                ).reshape(len(idx), plen - 1, self.k)
                res = resolve(sc, root, digits, y, depth)
            uu, dd = self.eval_resolved(res, depth)
            u[idx], du[idx] = uu, dd
        return u, du

    def evaluate_batch(self, root, digits, y, depth: int | None = None):
        """Vectorised anchors sharing one address length (``digits``: ``(n, L, k)``)."""
        depth = self.depth if depth is None else int(depth)
        res = resolve(self.scaffold, root, digits, y, depth)
        return self.eval_resolved(res, depth)

    def __call__(self, x):
        return self.evaluate(x)[0]

    def grad(self, x):
        return self.evaluate(x)[1]

    # --- export

    def to_dict(self, scaffold_ref: str | None = None) -> dict:
        levels = [
            {"cube_path": list(path), "a": [float(v) for v in a.ravel()]}
            for path, a in sorted(self._a.items(), key=lambda kv: (len(kv[0]), kv[0]))
        ]
        return {
            "scaffold_ref": scaffold_ref,
            "depth": self.depth,
            "levels": levels,
            "cutoff_constants": {"c1": kernels.RAMP_C1, "c2": kernels.RAMP_C2},
            "datum": {"name": self.F.name, "k": self.k, "m": self.m, "M1": self.F.M1, "M2": self.F.M2},
        }

    def load_coefficients(self, levels: list) -> None:
        for entry in levels:
            self._a[tuple(entry["cube_path"])] = np.asarray(entry["a"], dtype=float).reshape(self.m, self.k)


# ------------------------------------------------------------------ build


def smallness_bound(F: GradientDatum, eta: float) -> float:
    """Largest admissible ``delta`` for target sup norm ``eta``."""
    k = F.k
    M1, M2 = F.M1, max(F.M2, 1e-300)
    return eta / (10.0 * M2 * k**1.5 * (2.0 + 12.0 * M1 * math.pi**2 * k**1.5 + 2.0 * M1))


def minimal_eta(F: GradientDatum, delta: float) -> float:
    """Smallest ``eta`` for which ``delta`` passes :func:`smallness_bound`."""
    return delta / smallness_bound(F, 1.0)


def build_lusin(F: GradientDatum, scaffold: CantorScaffold, N: int, eta: float) -> LusinFunction:
    """Set up ``u_N``; coefficients are produced on demand."""
    if N > scaffold.depth:
        raise ValueError("depth exceeds scaffold depth")
    if F.M2 > 0 and scaffold.delta > smallness_bound(F, eta) * (1 + 1e-12):
        raise ValueError(
            f"delta={scaffold.delta} too large for eta={eta}: need delta <= {smallness_bound(F, eta)!r}"
        )
    return LusinFunction(F, scaffold, N, eta)


def sup_bound(u: LusinFunction) -> float:
    """``4 M1 sqrt(k) sum_{1<=j<=N} r_j``."""
    return 4.0 * u.F.M1 * math.sqrt(u.k) * float(np.sum(u.scaffold.r[1 : u.depth + 1]))


def residual_constant(F: GradientDatum) -> float:
    return 2.0 * F.M2 * math.sqrt(F.k) * (F.M2 + F.M1 + 2.0)


def increment_constant(F: GradientDatum) -> float:
    c = max(1.0, kernels.RAMP_C1, kernels.RAMP_C2)
    return 16.0 * F.k**2 * (F.M1 + 1.0) * F.M2 * c


def residual(u: LusinFunction, F: GradientDatum, x=None, *, anchors=None) -> np.ndarray:
    """Operator norm of ``Du(x) - F(x, u(x))``."""
    if anchors is not None:
        val, grad = u.evaluate_anchors(anchors)
        xa = np.array([u.scaffold.absolute(a) for a in anchors])
    else:
        xa = np.atleast_2d(np.asarray(x, dtype=float))
        val, grad = u.evaluate(xa)
    diff = grad - F(xa, val)
    return np.linalg.norm(diff, ord=2, axis=(1, 2))


# ------------------------------------------------------------ diagnostics


def band_anchors(sc: CantorScaffold, level: int, n: int, rng: np.random.Generator, band_fraction: float = 0.5):
    """Random points in level-``level`` cutoff supports, anchored at the cube.

    A ``band_fraction`` share lands in the transition shell, the rest
    anywhere in the support.
    """
    r, w = sc.r[level], 0.25 * sc.rho[level]
    k = sc.k
    y = rng.uniform(-0.5 * r - w, 0.5 * r + w, (n, k))
    nb = int(round(band_fraction * n))
    if nb:
        axis = rng.integers(0, k, nb)
        sign = rng.choice([-1.0, 1.0], nb)
        y[np.arange(nb), axis] = sign * (0.5 * r + w * rng.random(nb))
    paths = [sc.random_path(level, rng) for _ in range(n)]
    return [Anchor(p, y[i]) for i, p in enumerate(paths)]


@dataclass
class IncrementRow:
    level: int
    u_inc: float
    du_inc: float
    u_bound: float
    du_bound: float
    samples: int


def level_increment_norms(u: LusinFunction, samples: int = 10_000, seed: int = 0) -> list:
    """Sampled sup norms of ``u_{i+1} - u_i`` and ``Du_{i+1} - Du_i`` for ``i = 0..N-1``.

    Each increment is a sum over disjoint supports, so its sup is the sup of
    one term, sampled inside random level-``i+1`` supports with half the
    points in the transition shell.
    """
    sc = u.scaffold
    rng = np.random.default_rng(seed)
    C = increment_constant(u.F)
    rows = []
    for i in range(u.depth):
        lev = i + 1
        anchors = band_anchors(sc, lev, samples, rng)
        r, rho = sc.r[lev], sc.rho[lev]
        z = np.array([a.offset for a in anchors])
        cut = CutoffProfile(np.zeros(sc.k), r, rho)
        sig = cut(z)
        dsig = cut.grad(z)
        da = np.stack([u.coefficient(a.path) - u.coefficient(a.path[:-1]) for a in anchors])
        lin = np.einsum("pij,pj->pi", da, z)
        du_term = sig[:, None, None] * da + lin[:, :, None] * dsig[:, None, :]
        rows.append(
            IncrementRow(
                i,
                float(np.max(np.linalg.norm(sig[:, None] * lin, axis=1))),
                float(np.max(np.linalg.norm(du_term, ord=2, axis=(1, 2)))),
                4.0 * u.F.M1 * math.sqrt(sc.k) * r,
                C * (sc.r[i] ** 2 / rho + sc.r[i]),
                samples,
            )
        )
    return rows


@dataclass
class SummabilityReport:
    ratio: float
    poly: float
    summable: bool


def _series_report(sched, a: float, b: float, c: float) -> SummabilityReport:
    """Ratio test for ``sum_j 2^{B k a j} r_j^b rho_{j+1}^c``."""
    B, k = sched.B, sched.k
    if sched.regime in ("sobolev", "extremal"):
        rr, pr, pi_ = 2.0**-B, 2.0 ** (-B / (1.0 - sched.s)), 2.0 / (1.0 - sched.s)
    elif sched.regime == "dimension":
        rr = pr = sched.lam * 2.0**-B
        pi_ = 0.0
    else:
        return SummabilityReport(0.0, 0.0, True)
    ratio = 2.0 ** (B * k * a) * rr**b * pr**c
    poly = pi_ * c
    if ratio < 1.0 - 1e-12:
        ok = True
    elif ratio > 1.0 + 1e-12:
        ok = False
    else:
        ok = poly > 1.0
    return SummabilityReport(ratio, poly, ok)


def c1_summability(sched) -> SummabilityReport:
    """Whether ``sum_j r_j^2 / rho_{j+1}`` converges (uniform convergence of ``Du``)."""
    return _series_report(sched, 0.0, 2.0, -1.0)


def w1q_summability(sched, q: float) -> SummabilityReport:
    """Whether ``sum_j 2^{Bkj} r_j^{2q+k-1} rho_{j+1}^{1-q}`` converges."""
    return _series_report(sched, 1.0, 2.0 * q + sched.k - 1.0, 1.0 - q)
