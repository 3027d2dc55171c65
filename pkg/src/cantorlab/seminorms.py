"""Monte Carlo estimators for fractional seminorms and related quantities.

The Gagliardo double integral is written in polar form around ``x``::

    int_Omega dx int_{S^{n-1}} dtheta int_0^inf 1[x + t theta in Omega]
        |f(x) - f(x + t theta)|^p  t^{-1-sp} dt

and the radial integral is split into dyadic shells ``[diam 2^-j-1, diam 2^-j]``
for ``j < 30``.  Inside a shell ``t`` is drawn from the density proportional
to ``t^{-1-sp}``, so every sample carries the same shell weight and the
singular kernel never appears in the sample values.  The part below the last
shell is dropped; estimates are therefore lower bounds, flagged as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import BallDomain, BoxDomain, CantorScaffold

N_SHELLS = 30
CHUNK = 500_000


# ---------------------------------------------------------------- samplers


def sphere_measure(n: int) -> float:
    """Surface measure of the unit sphere in ``R^n`` (2 for ``n = 1``)."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def random_directions(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    if n == 1:
        return rng.choice([-1.0, 1.0], size)[:, None]
    g = rng.standard_normal((size, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


@dataclass
class FieldSampler:
    """A function on a declared domain.

    ``func`` maps ``(N, k)`` points to ``(N,)`` or ``(N, d)`` values.  The
    optional ``pair_sampler(t, n, rng)`` returns ``(gx, gy, dist)`` for pairs
    at separation in ``[t, 2t)``; fields with fine structure (like the
    gradient of a layered construction) supply one so that pairs land where
    the structure is.
    """

    func: Callable[[np.ndarray], np.ndarray]
    domain: BoxDomain | BallDomain
    kind: str = "function"
    pair_sampler: Callable | None = None

    def __call__(self, x) -> np.ndarray:
        out = np.asarray(self.func(np.atleast_2d(np.asarray(x, dtype=float))), dtype=float)
        if self.kind == "indicator" and not np.all((out == 0) | (out == 1)):
            raise ValueError("indicator sampler returned values outside {0, 1}")
        return out

    def pair_values(self, t: float, n: int, rng: np.random.Generator):
        if self.pair_sampler is not None:
            return self.pair_sampler(t, n, rng)
        k = self.domain.k
        x = self.domain.sample(rng, 4 * n)
        dist = t * (1.0 + rng.random(4 * n))
        y = x + dist[:, None] * random_directions(rng, 4 * n, k)
        keep = np.flatnonzero(self.domain.contains(y))[:n]
        return self(x[keep]), self(y[keep]), dist[keep]


def _diff_norm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = a - b
    return np.abs(d) if d.ndim == 1 else np.linalg.norm(d.reshape(len(d), -1), axis=1)


# ------------------------------------------------------------ stratified core


@dataclass
class _Strata:
    means: np.ndarray  # (nshells, c)
    covs: np.ndarray  # (nshells, c, c) covariance of the shell mean
    counts: np.ndarray


class _Proposal:
    """Defensive mixture for ``x``: uniform on the domain plus boxes around earlier hits.

    The uniform part keeps the density positive wherever the integrand can
    be, so weighting by ``1 / q(x)`` stays unbiased whatever the centres are.
    """

    def __init__(self, domain, centers=None, half=0.0, beta: float = 0.5):
        self.domain = domain
        self.centers = None if centers is None or len(centers) == 0 else np.asarray(centers)
        self.half = half
        self.beta = beta if self.centers is not None else 0.0

    def sample(self, rng, n):
        x = self.domain.sample(rng, n)
        if self.centers is None:
            return x
        local = rng.random(n) < self.beta
        m = int(local.sum())
        c = self.centers[rng.integers(0, len(self.centers), m)]
        x[local] = c + rng.uniform(-self.half, self.half, c.shape)
        return x

    def inv_density(self, x):
        base = (1.0 - self.beta) / self.domain.volume
        if self.centers is None:
            return np.full(len(x), 1.0 / base)
        hits = np.zeros(len(x))
        for c in self.centers:
            hits += np.all(np.abs(x - c) <= self.half, axis=1)
        dens = base + self.beta * hits / (len(self.centers) * (2.0 * self.half) ** x.shape[1])
        return 1.0 / dens


def _stratified(integrand, domain, sp: float, budget: int, seed: int, dir_fn, sigma: float, n_shells: int = N_SHELLS, max_centers: int = 32):
    """Shell-stratified estimate of ``int int integrand`` in polar form.

    ``integrand(x, y)`` returns ``(N, c)`` values (zero where ``y`` leaves the
    domain); column 0 drives the Neyman allocation.  A pilot phase of one
    eighth of the budget runs shell by shell from coarse to fine: it sets the
    per-shell standard deviations, and the pilot hits of each shell seed the
    ``x`` proposal of the next one, so fine shells concentrate on the places
    where the integrand lives (e.g. near a jump).  The main phase (the only
    one used in the estimate) gives every shell at least
    ``budget / (4 n_shells)`` samples and spreads the rest proportionally.
    """
    if budget < 8 * n_shells:
        raise ValueError(f"budget must be at least {8 * n_shells}")
    diam = domain.diam
    hi = diam * 2.0 ** -np.arange(n_shells)
    lo = hi / 2.0
    K = sigma * (lo ** (-sp) - hi ** (-sp)) / sp

    def draw(j, prop, n, tag):
        rng = np.random.default_rng([seed, j] + list(tag))
        x = prop.sample(rng, n)
        u = rng.random(n)
        t = (lo[j] ** (-sp) - u * (lo[j] ** (-sp) - hi[j] ** (-sp))) ** (-1.0 / sp)
        y = x + t[:, None] * dir_fn(rng, n)
        inside = domain.contains(x)
        w = np.zeros(n)
        w[inside] = K[j] * prop.inv_density(x[inside])
        vals = np.zeros((n, 0))
        if inside.any():
            v = np.atleast_2d(integrand(x[inside], y[inside]).T).T
            vals = np.zeros((n, v.shape[1]))
            vals[inside] = v
        else:
            vals = np.zeros((n, np.atleast_2d(integrand(x[:1], y[:1]).T).T.shape[1]))
        return w[:, None] * vals, x

    n0 = max(2, budget // (8 * n_shells))
    std = np.empty(n_shells)
    props = []
    prop = _Proposal(domain)
    for j in range(n_shells):
        props.append(prop)
        w, x = draw(j, prop, n0, (0,))
        std[j] = w[:, 0].std()
        hit = np.flatnonzero(w[:, 0] != 0)
        if hit.size and j + 1 < n_shells:
            rng = np.random.default_rng([seed, j, 2])
            pick = rng.choice(hit, min(max_centers, hit.size), replace=False)
            prop = _Proposal(domain, x[pick], hi[j] + hi[j + 1])
    floor = budget // (4 * n_shells)
    extra = budget - n_shells * n0 - n_shells * floor
    if std.sum() > 0:
        alloc = floor + np.floor(extra * std / std.sum()).astype(int)
    else:
        alloc = np.full(n_shells, floor + extra // n_shells)
    alloc = np.maximum(alloc, 2)
    means, covs = [], []
    for j in range(n_shells):
        n = int(alloc[j])
        s1 = None
        s2 = None
        done = 0
        chunk_id = 0
        while done < n:
            m = min(CHUNK, n - done)
            w, _ = draw(j, props[j], m, (1, chunk_id))
            s1 = w.sum(axis=0) if s1 is None else s1 + w.sum(axis=0)
            s2 = w.T @ w if s2 is None else s2 + w.T @ w
            done += m
            chunk_id += 1
        mean = s1 / n
        cov = (s2 / n - np.outer(mean, mean)) * n / max(n - 1, 1)
        means.append(mean)
        covs.append(cov / n)
    return _Strata(np.array(means), np.array(covs), alloc)


def _indicator_pairs(f: FieldSampler, p: float):
    dom = f.domain

    def integrand(x, y):
        inside = dom.contains(y)
        out = np.zeros(len(x))
        if inside.any():
            out[inside] = _diff_norm(f(x[inside]), f(y[inside])) ** p
        return out

    return integrand


# ---------------------------------------------------------------- estimates


@dataclass
class SeminormEstimate:
    value: float
    stderr: float
    power: float
    power_stderr: float
    budget: int
    seed: int
    s: float
    p: float
    shell_counts: list = field(default_factory=list)
    truncated: bool = True
    quantity: str = "seminorm"

    def row(self) -> dict:
        return {
            "quantity": self.quantity,
            "s": self.s,
            "p": self.p,
            "value": self.value,
            "stderr": self.stderr,
            "budget": self.budget,
            "seed": self.seed,
        }


def _root(power: float, se: float, p: float):
    if power <= 0:
        return 0.0, 0.0
    val = power ** (1.0 / p)
    return val, se * val / (p * power)


def fractional_seminorm(f: FieldSampler, s: float, p: float, budget: int, seed: int, n_shells: int = N_SHELLS) -> SeminormEstimate:
    """Stratified Monte Carlo estimate of ``[f]_{W^{s,p}(Omega)}``.

    The ``p``-th power is estimated without bias over the retained shells;
    the reported value is its ``p``-th root with a delta-method error.
    """
    if not 0.0 < s < 1.0:
        raise ValueError("s must lie in (0, 1)")
    if not 1.0 <= p < math.inf:
        raise ValueError("p must lie in [1, inf)")
    if budget <= 0:
        raise ValueError("budget must be positive")
    k = f.domain.k
    st = _stratified(
        _indicator_pairs(f, p), f.domain, s * p, budget, seed, lambda rng, n: random_directions(rng, n, k), sphere_measure(k), n_shells
    )
    power = float(st.means[:, 0].sum())
    pse = float(math.sqrt(max(st.covs[:, 0, 0].sum(), 0.0)))
    val, se = _root(power, pse, p)
    return SeminormEstimate(val, se, power, pse, budget, seed, s, p, [int(c) for c in st.counts])


def half_interval_seminorm(s: float) -> float:
    """Closed form of ``[1_(0,1/2)]_{W^{s,1}(0,1)}``."""
    return 2.0 * (2.0**s - 1.0) / (s * (1.0 - s))


# ------------------------------------------------------------- graph seminorm


@dataclass
class GraphComparison:
    ratio: float
    stderr: float
    lipschitz: float
    window: tuple
    base: float
    graph: float

    @property
    def in_window(self) -> bool:
        lo, hi = self.window
        return lo - 3 * self.stderr <= self.ratio <= hi + 3 * self.stderr


@dataclass
class GraphMap:
    """A graph ``x -> (x, u(x))`` given by value and Jacobian callables."""

    value: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]

    def evaluate(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        v = np.asarray(self.value(x), dtype=float).reshape(len(x), -1)
        g = np.asarray(self.jacobian(x), dtype=float).reshape(len(x), v.shape[1], x.shape[1])
        return v, g


def affine_graph(A, b=None) -> GraphMap:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.zeros(A.shape[0]) if b is None else np.asarray(b, dtype=float)
    return GraphMap(lambda x: x @ A.T + b, lambda x: np.broadcast_to(A, (len(x),) + A.shape))


def graph_seminorm_compare(u, f: FieldSampler, s: float, p: float, budget: int, seed: int) -> GraphComparison:
    """Ratio of the seminorm of ``f`` transported to the graph of ``u`` to the base seminorm.

    Both integrals use the same pairs: the graph integrand carries the area
    factors ``J(x) J(y)`` and the distance ratio ``(|x-y| / |X-Y|)^{sp+k}``.
    Compared on ``p``-th powers.
    """
    k = f.domain.k
    lips = [0.0]

    def jac_area(g):
        G = np.einsum("nmi,nmj->nij", g, g) + np.eye(k)
        return np.sqrt(np.linalg.det(G))

    def integrand(x, y):
        inside = f.domain.contains(y)
        out = np.zeros((len(x), 2))
        if not inside.any():
            return out
        xi, yi = x[inside], y[inside]
        diff = _diff_norm(f(xi), f(yi)) ** p
        ux, gx = u.evaluate(xi)
        uy, gy = u.evaluate(yi)
        lips[0] = max(lips[0], float(np.max(np.linalg.norm(gx, ord=2, axis=(1, 2)))))
        d0 = np.linalg.norm(xi - yi, axis=1)
        d1 = np.sqrt(d0**2 + np.sum((ux - uy) ** 2, axis=1))
        out[inside, 0] = diff
        out[inside, 1] = diff * (d0 / d1) ** (s * p + k) * jac_area(gx) * jac_area(gy)
        return out

    st = _stratified(integrand, f.domain, s * p, budget, seed, lambda rng, n: random_directions(rng, n, k), sphere_measure(k))
    tb, tg = st.means.sum(axis=0)
    if tb <= 0:
        raise ValueError("base seminorm vanished; ratio undefined")
    ratio = tg / tb
    var = float(np.sum(st.covs[:, 1, 1] - 2 * ratio * st.covs[:, 0, 1] + ratio**2 * st.covs[:, 0, 0])) / tb**2
    L = lips[0]
    if not math.isfinite(L):
        raise ValueError("non-finite Lipschitz estimate")
    m = np.asarray(u.evaluate(np.zeros((1, k)))[0]).shape[1]
    window = ((1.0 + L**2) ** (-(s * p + k) / 2.0), (k + m) * (1.0 + L**2))
    return GraphComparison(float(ratio), math.sqrt(max(var, 0.0)), L, window, float(tb), float(tg))


# -------------------------------------------------------------------- Hoelder


@dataclass
class HolderResult:
    alpha: float
    scales: np.ndarray
    sups: np.ndarray
    slope: float
    pairs_per_scale: int
    seed: int

    @property
    def growth(self) -> float:
        """Rate at which the scale-wise sup grows as the scale shrinks."""
        return -self.slope

    def rows(self) -> list:
        return [{"t": float(t), "sup": float(v)} for t, v in zip(self.scales, self.sups)]


def holder_pairs(g: FieldSampler, scales: Sequence[float], pairs_per_scale: int, seed: int):
    """Per-scale ``(|g(x)-g(y)|, |x-y|)`` samples, reusable across exponents."""
    out = []
    for i, t in enumerate(scales):
        rng = np.random.default_rng([seed, i])
        gx, gy, dist = g.pair_values(float(t), pairs_per_scale, rng)
        keep = (dist >= t) & (dist < 2 * t)
        out.append((_diff_norm(np.asarray(gx)[keep], np.asarray(gy)[keep]), dist[keep]))
    return out


def holder_from_pairs(pairs, alpha: float, scales, pairs_per_scale: int = 0, seed: int = 0) -> HolderResult:
    sups = np.array([float(np.max(d / r**alpha)) if len(d) else 0.0 for d, r in pairs])
    scales = np.asarray(scales, dtype=float)
    ok = sups > 0
    slope = float(np.polyfit(np.log(scales[ok]), np.log(sups[ok]), 1)[0]) if ok.sum() >= 2 else math.nan
    return HolderResult(alpha, scales, sups, slope, pairs_per_scale, seed)


def holder_estimate(g: FieldSampler, alpha: float, scales: Sequence[float], pairs_per_scale: int, seed: int) -> HolderResult:
    """Scale-wise sup of ``|g(x)-g(y)| / |x-y|^alpha`` over pairs with ``|x-y|`` in ``[t, 2t)``.

    ``slope`` is the least-squares slope of ``log sup`` against ``log t``:
    near zero or positive when the seminorm is finite, negative when the
    quotient blows up at small scales.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if len(scales) == 0:
        raise ValueError("empty scale list")
    pairs = holder_pairs(g, scales, pairs_per_scale, seed)
    return holder_from_pairs(pairs, alpha, scales, pairs_per_scale, seed)


def lusin_gradient_sampler(u, band_fraction: float = 0.7) -> FieldSampler:
    """``Du`` of a layered function with a pair sampler aimed at its transition shells.

    A ``band_fraction`` share of pairs starts in the ramp of a random cube at a
    random level and steps along the face normal; the rest start anywhere in a
    random cutoff support and step in a random direction.  Points are
    anchored at the cube, so separations far below absolute float resolution
    are represented exactly.
    """
    sc = u.scaffold
    k = sc.k

    def pairs(t, n, rng):
        levels = rng.integers(1, u.depth + 1, n)
        gx = np.zeros((n, u.m * k))
        gy = np.zeros((n, u.m * k))
        dist = np.zeros(n)
        for lev in np.unique(levels):
            idx = np.flatnonzero(levels == lev)
            m = idx.size
            r, w = sc.r[lev], 0.25 * sc.rho[lev]
            root = rng.integers(0, sc.card_L1, m)
            digits = rng.integers(0, sc.nb, (m, lev, k))
            x = rng.uniform(-0.5 * r - w, 0.5 * r + w, (m, k))
            step = t * (1.0 + rng.random(m))
            dirs = random_directions(rng, m, k)
            band = rng.random(m) < band_fraction
            nb_ = int(band.sum())
            if nb_:
                axis = rng.integers(0, k, nb_)
                sign = rng.choice([-1.0, 1.0], nb_)
                bi = np.flatnonzero(band)
                x[bi, axis] = sign * (0.5 * r + w * rng.random(nb_))
                d = np.zeros((nb_, k))
                d[np.arange(nb_), axis] = rng.choice([-1.0, 1.0], nb_)
                dirs[bi] = d
            y = x + step[:, None] * dirs
            _, dx = u.evaluate_batch(root, digits, x)
            _, dy = u.evaluate_batch(root, digits, y)
            gx[idx] = dx.reshape(m, -1)
            gy[idx] = dy.reshape(m, -1)
            dist[idx] = np.linalg.norm(y - x, axis=1)
        return gx, gy, dist

    return FieldSampler(lambda x: u.evaluate(x)[1].reshape(len(x), -1), sc.domain, "gradient-field", pairs)


# -------------------------------------------------------------- box counting


@dataclass
class DimensionFit:
    slope: float
    levels: list
    log_counts: list
    log_inv_eps: list


def box_dimension_estimate(scaffold: CantorScaffold, levels: Sequence[int]) -> DimensionFit:
    """Slope of ``log N(r_i)`` against ``log(1/r_i)`` using exact cube counts."""
    levels = list(levels)
    if len(levels) < 3:
        raise ValueError("need at least three levels")
    if max(levels) > scaffold.depth:
        raise ValueError("level exceeds scaffold depth")
    logN = [math.log(scaffold.card_L1) + scaffold.B * scaffold.k * i * math.log(2.0) for i in levels]
    loge = [-math.log(scaffold.r[i]) for i in levels]
    slope = float(np.polyfit(loge, logN, 1)[0])
    return DimensionFit(slope, levels, logN, loge)


# --------------------------------------------------------------- superdensity


@dataclass
class SuperdensityProfile:
    radii: np.ndarray
    ratios: np.ndarray
    stderr: np.ndarray
    exponent: float
    slope: float | None
    samples: int
    seed: int


def one_star(n: int, s: float) -> float:
    return n / (n - s)


def superdensity_profile(
    oracle, x, radii: Sequence[float], b: float, s: float, samples: int = 100_000, seed: int = 0, relative: bool = False
) -> SuperdensityProfile:
    """``|B(x,r) \\ E| / r^{n + b 1*}`` per radius, by uniform sampling of the ball.

    With ``relative=True`` the oracle receives offsets from ``x`` instead of
    absolute points (needed for radii below float resolution at ``x``).
    """
    if not 0.0 <= b < s < 1.0:
        raise ValueError("need 0 <= b < s < 1")
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0):
        raise ValueError("radii must be positive")
    x = np.asarray(x, dtype=float)
    n = len(x)
    expo = n + b * one_star(n, s)
    ratios, ses = [], []
    for i, r in enumerate(radii):
        rng = np.random.default_rng([seed, i])
        off = BallDomain((0.0,) * n, r).sample(rng, samples)
        inside = np.asarray(oracle(off if relative else x + off), dtype=bool)
        frac = 1.0 - inside.mean()
        vol = BallDomain((0.0,) * n, r).volume
        ratios.append(vol * frac / r**expo)
        ses.append(vol * math.sqrt(frac * (1 - frac) / samples) / r**expo)
    ratios, ses = np.array(ratios), np.array(ses)
    pos = ratios > 0
    slope = float(np.polyfit(np.log(radii[pos]), np.log(ratios[pos]), 1)[0]) if pos.sum() >= 2 else None
    return SuperdensityProfile(radii, ratios, ses, expo, slope, samples, seed)


def cantor_oracle(scaffold: CantorScaffold, path: Sequence[int] | None = None):
    """Membership in the depth-``N`` set for offsets from the centre of cube ``path``."""
    from .lusin import resolve

    if path is None:
        return lambda pts: scaffold.depth_of(pts) >= scaffold.depth
    root = path[0]
    digits = np.array([scaffold.child_digits(c) for c in path[1:]], dtype=np.int64).reshape(len(path) - 1, scaffold.k)

    def oracle(off):
        off = np.atleast_2d(off)
        n = len(off)
        res = resolve(scaffold, np.full(n, root), np.broadcast_to(digits, (n,) + digits.shape), off, scaffold.depth)
        return res.lev >= scaffold.depth

    return oracle


def half_space_cap(r: float, h: float) -> float:
    """Area of the part of a radius-``r`` disc beyond a chord at distance ``h``."""
    if r <= h:
        return 0.0
    return r * r * math.acos(h / r) - h * math.sqrt(r * r - h * h)


# ------------------------------------------------------------------- slicing


@dataclass
class SliceRow:
    name: str
    lhs: float
    lhs_se: float
    rhs: float
    rhs_se: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs

    @property
    def ratio_se(self) -> float:
        return self.ratio * math.hypot(self.lhs_se / self.lhs, self.rhs_se / self.rhs)


def slicing_ratio(fs, s: float, p: float, direction_count: int, budget: int, seed: int, names=None):
    """Planar seminorm over the direction-averaged seminorms of line restrictions.

    For each test function returns a :class:`SliceRow` (``None`` for a
    function whose seminorm vanishes).  A universal ratio across functions
    is the slicing constant; for uniform directions it equals ``pi``.
    """
    if isinstance(fs, FieldSampler):
        fs = [fs]
    names = names or [f"f{i}" for i in range(len(fs))]
    out = []
    for f, name in zip(fs, names):
        if f.domain.k != 2:
            raise ValueError("slicing is implemented for the plane only")
        lhs = fractional_seminorm(f, s, p, budget, seed)
        if lhs.power == 0:
            out.append(None)
            continue
        per_dir = max(budget // direction_count, 8 * N_SHELLS)
        vals, vars_ = [], []
        rng = np.random.default_rng([seed, 10_000])
        for i in range(direction_count):
            ang = math.pi * (i + rng.random()) / direction_count
            th = np.array([math.cos(ang), math.sin(ang)])
            st = _stratified(
                _indicator_pairs(f, p), f.domain, s * p, per_dir, seed + 7919 * (i + 1), lambda g, n, th=th: np.broadcast_to(th, (n, 2)), 1.0
            )
            vals.append(2.0 * st.means[:, 0].sum())
            vars_.append(4.0 * st.covs[:, 0, 0].sum())
        rhs = float(np.mean(vals))
        # spread across directions dominates the per-direction noise
        rhs_se = float(math.sqrt(np.var(vals, ddof=1) / direction_count + np.sum(vars_) / direction_count**2))
        out.append(SliceRow(name, lhs.power, lhs.power_stderr, rhs, rhs_se))
    return out


# ------------------------------------------------------------------ Poincare


@dataclass
class PoincareResult:
    ratio: float
    l1: float
    seminorm: float
    seminorm_se: float


def poincare_ratio(f: Callable, R: float, alpha: float, q: float, n: int = 1, budget: int = 400_000, seed: int = 0):
    """``||f||_{L^1(B_R)} / (R^{n(1-1/q)+alpha} [f]_{W^{alpha,q}(B_R)})`` or ``None`` when ``f = 0``."""
    if alpha * q <= n:
        raise ValueError("need alpha * q > n")
    ball = BallDomain((0.0,) * n, R)
    rng = np.random.default_rng([seed, 99])
    sphere = R * random_directions(rng, 1000, n)
    if np.max(np.abs(np.asarray(f(sphere), dtype=float))) > 1e-8:
        raise ValueError("f does not vanish on the sphere")
    pts = ball.sample(rng, max(budget // 4, 1000))
    l1 = ball.volume * float(np.mean(np.abs(np.asarray(f(pts), dtype=float))))
    sem = fractional_seminorm(FieldSampler(f, ball), alpha, q, budget, seed)
    if sem.value == 0.0:
        return None
    return PoincareResult(l1 / (R ** (n * (1 - 1 / q) + alpha) * sem.value), l1, sem.value, sem.stderr)
