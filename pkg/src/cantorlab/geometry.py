"""Multi-scale cube families and the Cantor-type compact they cut out.

A :class:`CantorScaffold` starts from the cubes of side ``delta`` centred on
the lattice ``(delta Z)^k`` that fit inside a box.  Each cube at level
``i - 1`` carries a centred ``2^B``-per-axis grid of children with spacing
``2^-B r_{i-1}`` and side ``r_i = 2^-B r_{i-1} - rho_i``, so neighbouring
siblings are separated by exactly ``rho_i``.

Deep cubes are far below double-precision resolution of absolute
coordinates (``r_6`` is around ``delta * 2^-60`` for ``B = 10``), so points
can be given as an :class:`Anchor`: a cube address together with an offset
from that cube's centre.  All deep computations run on such local offsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import special

from . import kernels

SERIES_TOL = 1e-12
REGIMES = ("sobolev", "dimension", "extremal", "custom")


class ScheduleError(ValueError):
    """Invalid schedule parameters."""


class ScheduleExhausted(ScheduleError):
    """Side lengths became non-positive before the requested depth."""


class EmptyLattice(ValueError):
    """No root cube fits in the domain."""


# ------------------------------------------------------------------ domain


@dataclass(frozen=True)
class BoxDomain:
    """Open axis-aligned box ``prod_d (lo_d, hi_d)``."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != len(hi) or len(lo) < 1:
            raise ValueError("lo and hi must have the same positive length")
        if any(h <= l for l, h in zip(lo, hi)):
            raise ValueError("every interval needs positive length")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, k: int, lo: float = 0.0, hi: float = 1.0) -> "BoxDomain":
        return cls((lo,) * k, (hi,) * k)

    @property
    def k(self) -> int:
        return len(self.lo)

    @property
    def widths(self) -> np.ndarray:
        return np.array(self.hi) - np.array(self.lo)

    @property
    def volume(self) -> float:
        return float(np.prod(self.widths))

    @property
    def diam(self) -> float:
        return float(np.linalg.norm(self.widths))

    def contains(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.all((x > np.array(self.lo)) & (x < np.array(self.hi)), axis=1)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.array(self.lo) + rng.random((n, self.k)) * self.widths

    def to_dict(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}


@dataclass(frozen=True)
class BallDomain:
    """Open Euclidean ball ``B(center, radius)``."""

    center: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def k(self) -> int:
        return len(self.center)

    @property
    def volume(self) -> float:
        n = self.k
        return math.pi ** (n / 2) / math.gamma(n / 2 + 1) * self.radius**n

    @property
    def diam(self) -> float:
        return 2.0 * self.radius

    def contains(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.sum((x - np.array(self.center)) ** 2, axis=1) < self.radius**2

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        g = rng.standard_normal((n, self.k))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        rad = self.radius * rng.random(n) ** (1.0 / self.k)
        return np.array(self.center) + g * rad[:, None]

    def to_dict(self) -> dict:
        return {"center": list(self.center), "radius": self.radius}


# ---------------------------------------------------------------- schedule


@dataclass(frozen=True)
class RhoSchedule:
    """Gap widths ``rho_j`` for ``j >= 0`` with a closed-form evaluator.

    ``rho_0`` is zero except in the dimension regime, where it equals
    ``delta (1 - lam)`` and encodes the shrunken root cubes of side
    ``delta * lam``.  The ``custom`` regime holds an explicit finite list
    ``rho_1, rho_2, ...`` followed by zeros.
    """

    regime: str
    k: int
    B: int
    delta: float
    param: float | None = None
    values: tuple = ()

    @property
    def lam(self) -> float | None:
        if self.regime != "dimension":
            return None
        return 2.0 ** (-self.B * (self.k - self.param) / self.param)

    @property
    def s(self) -> float | None:
        if self.regime == "sobolev":
            return float(self.param)
        if self.regime == "extremal":
            return 0.0
        return None

    @property
    def r0(self) -> float:
        return self.delta - self.rho(0)

    def log2_rho(self, j: int) -> float:
        """``log2(rho_j)``; ``-inf`` for a zero gap.  Safe for large ``j``."""
        if self.regime in ("sobolev", "extremal"):
            if j == 0:
                return -math.inf
            s = self.s
            return (math.log2(3.0 * self.delta / math.pi**2) - 2.0 * math.log2(j) - self.B * j) / (1.0 - s)
        if self.regime == "dimension":
            lam = self.lam
            if lam == 1.0:
                return -math.inf
            return math.log2(self.delta * (1.0 - lam)) + j * (math.log2(lam) - self.B)
        if j == 0 or j > len(self.values) or self.values[j - 1] == 0.0:
            return -math.inf
        return math.log2(self.values[j - 1])

    def rho(self, j: int) -> float:
        if self.regime == "dimension" and j >= 0:
            lam = self.lam
            return self.delta * (1.0 - lam) * lam**j * 2.0 ** (-self.B * j)
        lg = self.log2_rho(j)
        return 0.0 if lg == -math.inf else 2.0**lg

    def rhos(self, n: int) -> np.ndarray:
        """``rho_0 .. rho_{n-1}``."""
        return np.array([self.rho(j) for j in range(n)])

    def term_ratio(self, power: float = 1.0) -> tuple[float, float]:
        """Asymptotics of ``2^{Bj} rho_j^power`` as ``(ratio, poly)``.

        The terms behave like ``C * ratio^j * j^-poly``.  Used for ratio tests.
        """
        if self.regime in ("sobolev", "extremal"):
            e = power / (1.0 - self.s)
            return 2.0 ** (self.B * (1.0 - e)), 2.0 * e
        if self.regime == "dimension":
            return 2.0**self.B * (self.lam * 2.0**-self.B) ** power, 0.0
        return 0.0, 0.0

    def diverges(self, power: float = 1.0) -> bool:
        """Whether ``sum_j 2^{Bj} rho_j^power`` diverges."""
        ratio, poly = self.term_ratio(power)
        if ratio > 1.0 + 1e-15:
            return True
        if ratio < 1.0 - 1e-15:
            return False
        return poly <= 1.0

    def series(self, power: float = 1.0, n_max: int | None = None, tol: float = SERIES_TOL):
        """Partial sum of ``2^{Bj} rho_j^power`` for ``j = 0..``.

        Without ``n_max`` terms are added until they fall below ``tol * delta``
        (returns the sum and ``converged=True``) or until divergence is
        established by the ratio test.  Returns ``(value, n_terms, converged)``.
        """
        if self.regime == "custom":
            terms = [
                2.0 ** (self.B * j) * v**power
                for j, v in enumerate(self.values, start=1)
                if v > 0 and (n_max is None or j <= n_max)
            ]
            return float(sum(terms)), len(terms), True
        if n_max is None and self.diverges(power):
            return math.inf, 0, False
        ratio, poly = self.term_ratio(power)
        if n_max is None and self.regime in ("sobolev", "extremal") and abs(ratio - 1.0) < 1e-15:
            # pure power series C * j^-poly: sum it with the zeta function
            coef = 2.0 ** (power * math.log2(3.0 * self.delta / math.pi**2) / (1.0 - self.s))
            return coef * float(special.zeta(poly)), 0, True
        total = 0.0
        j = 0
        limit = n_max if n_max is not None else 1_000_000
        converged = False
        while j <= limit:
            lg = self.log2_rho(j)
            term = 0.0 if lg == -math.inf else 2.0 ** (self.B * j + power * lg)
            total += term
            j += 1
            if n_max is None and j > 1 and term < tol * self.delta:
                converged = True
                break
        return total, j, converged or n_max is not None

    def to_dict(self) -> dict:
        out = {"regime": self.regime, "k": self.k, "B": self.B, "delta": self.delta, "param": self.param}
        if self.regime == "custom":
            out["values"] = list(self.values)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "RhoSchedule":
        return make_schedule(d["regime"], d["k"], d["B"], d["delta"], d.get("param"), values=d.get("values"))


def make_schedule(regime: str, k: int, B: int, delta: float, param: float | None = None, values=None) -> RhoSchedule:
    """Validate parameters and return the schedule.

    ``param`` is ``s`` for ``sobolev``, the target dimension ``d`` for
    ``dimension`` and unused for ``extremal``.  ``custom`` takes ``values``.
    """
    if regime not in REGIMES:
        raise ScheduleError(f"unknown regime {regime!r}")
    k, B, delta = int(k), int(B), float(delta)
    if k < 1 or B < 1:
        raise ScheduleError("k and B must be positive")
    if not delta > 0:
        raise ScheduleError("delta must be positive")
    if regime == "sobolev":
        if param is None:
            raise ScheduleError("sobolev regime needs s")
        if not 0.0 <= float(param) < 0.5:
            raise ScheduleError("sobolev regime needs 0 <= s < 1/2")
        if B < 10:
            raise ScheduleError("sobolev regime needs B >= 10")
        return RhoSchedule(regime, k, B, delta, float(param))
    if regime == "extremal":
        if param not in (None, 0, 0.0):
            raise ScheduleError("extremal regime takes no parameter")
        if B < 10:
            raise ScheduleError("extremal regime needs B >= 10")
        return RhoSchedule(regime, k, B, delta, 0.0)
    if regime == "dimension":
        if param is None:
            raise ScheduleError("dimension regime needs d")
        if not 0.0 < float(param) < k:
            raise ScheduleError("dimension regime needs 0 < d < k")
        return RhoSchedule(regime, k, B, delta, float(param))
    if param is not None:
        raise ScheduleError("custom regime takes explicit values, not a parameter")
    vals = tuple(float(v) for v in (values or ()))
    if any(v < 0 for v in vals):
        raise ScheduleError("gap widths must be non-negative")
    return RhoSchedule(regime, k, B, delta, None, vals)


def side_lengths(schedule: RhoSchedule, N: int) -> np.ndarray:
    """``r_0 .. r_N`` by the recursion ``r_i = 2^-B r_{i-1} - rho_i``.

    In the dimension regime the recursion cancels catastrophically when
    ``lam`` is small (each step loses a factor ``1/lam`` of relative
    accuracy), so the equivalent product ``delta lam^{i+1} 2^{-Bi}`` is used.
    """
    r = np.empty(N + 1)
    if schedule.regime == "dimension":
        lam, B = schedule.lam, schedule.B
        return np.array([schedule.delta * lam ** (i + 1) * 2.0 ** (-B * i) for i in range(N + 1)])
    r[0] = schedule.r0
    scale = 2.0**-schedule.B
    for i in range(1, N + 1):
        r[i] = scale * r[i - 1] - schedule.rho(i)
        if not r[i] > 0:
            raise ScheduleExhausted(f"schedule exhausted: r_{i} = {r[i]!r} <= 0")
    return r


def side_lengths_closed(schedule: RhoSchedule, N: int) -> np.ndarray:
    """``(delta - sum_{j<=i} 2^{Bj} rho_j) / 2^{Bi}``, the non-recursive form."""
    out = np.empty(N + 1)
    acc = 0.0
    for i in range(N + 1):
        acc += 2.0 ** (schedule.B * i) * schedule.rho(i)
        out[i] = (schedule.delta - acc) / 2.0 ** (schedule.B * i)
    return out


def theoretical_dimension(schedule: RhoSchedule) -> float:
    """Similarity dimension ``Bk / (B - log2 lam)`` of the dimension regime."""
    if schedule.regime != "dimension":
        raise ScheduleError("theoretical dimension is defined for the dimension regime only")
    return schedule.B * schedule.k / (schedule.B - math.log2(schedule.lam))


@dataclass
class BoundResult:
    value: float
    series: float
    n_terms: int
    converged: bool
    diverges: bool
    tol: float = SERIES_TOL


def indicator_seminorm_bound(schedule: RhoSchedule, s: float, N: int | None = None, domain: BoxDomain | None = None) -> BoundResult:
    """``|Omega| + sum_{j<=N} 2^{Bj} rho_j^(1-s)`` with tail diagnostics.

    With ``N=None`` the series is summed until its terms drop below
    ``1e-12 * delta``.  ``diverges`` comes from a ratio test on the closed
    form; the returned value is then the finite partial sum up to ``N``.
    """
    if not 0.0 < s < 1.0:
        raise ValueError("s must lie in (0, 1)")
    vol = domain.volume if domain is not None else 0.0
    div = schedule.diverges(1.0 - s)
    if div:
        n = 60 if N is None else N
        val, n_terms, _ = schedule.series(1.0 - s, n_max=n)
        return BoundResult(vol + val, val, n_terms, False, True)
    if N is None:
        val, n_terms, conv = schedule.series(1.0 - s)
    else:
        val, n_terms, _ = schedule.series(1.0 - s, n_max=N)
        lg = schedule.log2_rho(N)
        last = 0.0 if lg == -math.inf else 2.0 ** (schedule.B * N + (1.0 - s) * lg)
        conv = last < SERIES_TOL * schedule.delta
    return BoundResult(vol + val, val, n_terms, conv, False)


# ----------------------------------------------------------------- anchors


@dataclass(frozen=True)
class Anchor:
    """A point written as ``centre(path) + offset``.

    ``path = (root_index, c_1, ..., c_L)`` addresses a level-``L`` cube with
    row-major child indices; an empty path means ``offset`` is absolute.
    """

    path: tuple
    offset: np.ndarray = field(compare=False)

    @property
    def level(self) -> int:
        return len(self.path) - 1


# ---------------------------------------------------------------- scaffold


@dataclass(frozen=True, eq=False)
class CantorScaffold:
    schedule: RhoSchedule
    domain: BoxDomain
    depth: int
    r: np.ndarray
    rho: np.ndarray
    lattice_lo: tuple
    lattice_hi: tuple

    @property
    def k(self) -> int:
        return self.schedule.k

    @property
    def B(self) -> int:
        return self.schedule.B

    @property
    def delta(self) -> float:
        return self.schedule.delta

    @property
    def nb(self) -> int:
        return 2**self.schedule.B

    @property
    def lattice_shape(self) -> tuple:
        return tuple(h - l + 1 for l, h in zip(self.lattice_lo, self.lattice_hi))

    @property
    def card_L1(self) -> int:
        return int(np.prod(self.lattice_shape))

    def count(self, level: int) -> int:
        return self.card_L1 * 2 ** (self.B * self.k * level)

    # --- addressing

    def root_coords(self, index: int) -> np.ndarray:
        return np.array(np.unravel_index(index, self.lattice_shape)) + np.array(self.lattice_lo)

    def root_centers(self) -> np.ndarray:
        grids = [np.arange(l, h + 1) for l, h in zip(self.lattice_lo, self.lattice_hi)]
        mesh = np.meshgrid(*grids, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1) * self.delta

    def root_center(self, index: int) -> np.ndarray:
        return self.root_coords(index) * self.delta

    def root_index(self, coords) -> int:
        rel = tuple(int(c) - l for c, l in zip(coords, self.lattice_lo))
        return int(np.ravel_multi_index(rel, self.lattice_shape))

    def child_digits(self, idx: int) -> np.ndarray:
        return np.array(np.unravel_index(int(idx), (self.nb,) * self.k))

    def child_index(self, digits) -> int:
        return int(np.ravel_multi_index(tuple(int(d) for d in digits), (self.nb,) * self.k))

    def child_offset(self, level: int, idx) -> np.ndarray:
        """Offset of child ``idx`` (index or digit vector) from its parent's centre."""
        digits = self.child_digits(idx) if np.isscalar(idx) else np.asarray(idx)
        h = self.r[level - 1] * 2.0**-self.B
        return (digits - 0.5 * (self.nb - 1)) * h

    def path_offset(self, path: Sequence[int], start: int = 0) -> np.ndarray:
        """Offset of cube ``path`` from its level-``start`` ancestor, summed finest first."""
        off = np.zeros(self.k)
        for lev in range(len(path) - 1, start, -1):
            off = off + self.child_offset(lev, path[lev])
        return off

    def cube_center(self, path: Sequence[int]) -> np.ndarray:
        """Absolute centre (lossy below ``~1e-16 * delta``)."""
        return self.root_center(path[0]) + self.path_offset(path)

    def absolute(self, anchor: Anchor) -> np.ndarray:
        if not anchor.path:
            return np.asarray(anchor.offset, dtype=float)
        return self.cube_center(anchor.path) + np.asarray(anchor.offset, dtype=float)

    # --- membership

    def depth_of(self, x) -> np.ndarray:
        """Deepest level (``-1`` if none) whose closed cube contains each point."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return kernels.membership_depth(x, self.lattice_lo, self.lattice_hi, self.delta, self.r, self.B, self.depth)

    def membership(self, x, level: int):
        """Whether ``x`` lies in a closed cube of ``level``."""
        if level > self.depth:
            raise ValueError("level exceeds scaffold depth")
        x = np.asarray(x, dtype=float)
        res = self.depth_of(x) >= level
        return bool(res[0]) if x.ndim == 1 else res

    def nearest_child(self, level: int, y: np.ndarray):
        """Digits of the level-``level`` child whose grid cell holds ``y``.

        ``y`` is relative to the parent centre; the second return is ``y``
        relative to that child's centre.
        """
        h = self.r[level - 1] * 2.0**-self.B
        digits = np.clip(np.floor(y / h + 0.5 * self.nb), 0, self.nb - 1).astype(np.int64)
        return digits, y - (digits - 0.5 * (self.nb - 1)) * h

    def locate(self, x) -> Anchor:
        """Anchor of ``x`` at its deepest containing cube (absolute if none)."""
        x = np.asarray(x, dtype=float)
        m = np.rint(x / self.delta)
        y = x - m * self.delta
        if np.any(m < self.lattice_lo) or np.any(m > self.lattice_hi) or np.any(np.abs(y) > 0.5 * self.r[0]):
            return Anchor((), x.copy())
        path = [self.root_index(m)]
        for lev in range(1, self.depth + 1):
            digits, z = self.nearest_child(lev, y)
            if np.any(np.abs(z) > 0.5 * self.r[lev]):
                break
            path.append(self.child_index(digits))
            y = z
        return Anchor(tuple(path), y)

    def normalize(self, anchor: Anchor) -> Anchor:
        """Re-anchor at the deepest cube containing the point."""
        if not anchor.path:
            return self.locate(anchor.offset)
        path = list(anchor.path)
        y = np.asarray(anchor.offset, dtype=float)
        while path and np.any(np.abs(y) > 0.5 * self.r[len(path) - 1]):
            lev = len(path) - 1
            if lev == 0:
                return self.locate(self.root_center(path[0]) + y)
            y = y + self.child_offset(lev, path[-1])
            path.pop()
        for lev in range(len(path), self.depth + 1):
            digits, z = self.nearest_child(lev, y)
            if np.any(np.abs(z) > 0.5 * self.r[lev]):
                break
            path.append(self.child_index(digits))
            y = z
        return Anchor(tuple(path), y)

    # --- random addresses

    def random_path(self, level: int, rng: np.random.Generator) -> tuple:
        path = [int(rng.integers(self.card_L1))]
        path += [int(v) for v in rng.integers(0, self.nb**self.k, size=level)]
        return tuple(path)

    def sample_paths(self, level: int, n: int, rng: np.random.Generator) -> list:
        return [self.random_path(level, rng) for _ in range(n)]

    # --- measure

    def measure(self, level: int) -> float:
        """Exact Lebesgue measure of the level-``level`` union."""
        if level > self.depth:
            raise ValueError("level exceeds scaffold depth")
        return self.card_L1 * (2.0 ** (self.B * level) * self.r[level]) ** self.k

    def measure_limit(self) -> tuple[float, bool]:
        """``Card(L1) (delta - sum_j 2^{Bj} rho_j)^k`` and the convergence flag."""
        if self.schedule.regime == "dimension":
            # the gaps sum to delta exactly: sum_j 2^{Bj} rho_j is geometric
            return 0.0, True
        total, _, conv = self.schedule.series(1.0)
        if not math.isfinite(total):
            return 0.0, False
        base = max(self.delta - total, 0.0)
        return self.card_L1 * base**self.k, conv

    def measure_difference(self, level: int) -> float:
        """``Card 2^{Bki} (r_i^k - 2^{Bk} r_{i+1}^k)``, the mass removed at ``level + 1``."""
        i = level
        return self.card_L1 * 2.0 ** (self.B * self.k * i) * (
            self.r[i] ** self.k - 2.0 ** (self.B * self.k) * self.r[i + 1] ** self.k
        )

    # --- one-dimensional cross sections

    def full_cover(self, level: int) -> float:
        """Length of a level-``level`` interval surviving to the scaffold depth."""
        return 2.0 ** (self.B * (self.depth - level)) * self.r[self.depth]

    def _cover(self, level: int, a: float, b: float) -> float:
        half = 0.5 * self.r[level]
        a, b = max(a, -half), min(b, half)
        if b <= a:
            return 0.0
        if level == self.depth:
            return b - a
        if a == -half and b == half:
            return self.full_cover(level)
        h = self.r[level] * 2.0**-self.B
        nb = self.nb
        i_lo = int(min(max(math.floor(a / h + 0.5 * nb), 0), nb - 1))
        i_hi = int(min(max(math.floor(b / h + 0.5 * nb), 0), nb - 1))
        c_lo = (i_lo - 0.5 * (nb - 1)) * h
        total = self._cover(level + 1, a - c_lo, b - c_lo)
        if i_hi > i_lo:
            c_hi = (i_hi - 0.5 * (nb - 1)) * h
            total += self._cover(level + 1, a - c_hi, b - c_hi)
            total += (i_hi - i_lo - 1) * self.full_cover(level + 1)
        return total

    def axis_path(self, path: Sequence[int], axis: int) -> tuple:
        """Project a cube address onto one axis: ``(lattice coord, digit_1, ...)``."""
        out = [int(self.root_coords(path[0])[axis])]
        out += [int(self.child_digits(c)[axis]) for c in path[1:]]
        return tuple(out)

    def _axis_offset(self, apath, lev: int) -> float:
        h = self.r[lev - 1] * 2.0**-self.B
        return (apath[lev] - 0.5 * (self.nb - 1)) * h

    def cover_1d(self, axis: int, apath: Sequence[int], a: float, b: float) -> float:
        """Exact length of ``[a, b]`` inside the depth-``N`` set along one axis.

        ``a`` and ``b`` are offsets from the centre of the cube addressed by
        the axis path ``apath`` (see :meth:`axis_path`).  The computation is
        interval arithmetic on the nested grid, so it stays exact for
        intervals far below absolute float resolution.
        """
        apath = list(apath)
        lev = len(apath) - 1
        while lev > 0 and (a < -0.5 * self.r[lev] or b > 0.5 * self.r[lev]):
            off = self._axis_offset(apath, lev)
            a, b = a + off, b + off
            lev -= 1
        if lev > 0:
            return self._cover(lev, a, b)
        c = apath[0] * self.delta
        lo_abs, hi_abs = c + a, c + b
        total = 0.0
        for m in range(self.lattice_lo[axis], self.lattice_hi[axis] + 1):
            cm = m * self.delta
            if cm + 0.5 * self.r[0] < lo_abs or cm - 0.5 * self.r[0] > hi_abs:
                continue
            total += self._cover(0, a + c - cm, b + c - cm)
        return total

    def contains_1d(self, axis: int, apath: Sequence[int], t: float) -> bool:
        """Whether the coordinate ``t`` (relative to ``apath``) survives to depth ``N``."""
        apath = list(apath)
        lev = len(apath) - 1
        while lev > 0 and abs(t) > 0.5 * self.r[lev]:
            t = t + self._axis_offset(apath, lev)
            lev -= 1
        if lev == 0:
            x = apath[0] * self.delta + t
            m = round(x / self.delta)
            if not self.lattice_lo[axis] <= m <= self.lattice_hi[axis]:
                return False
            t = x - m * self.delta
            if abs(t) > 0.5 * self.r[0]:
                return False
        for nxt in range(lev + 1, self.depth + 1):
            h = self.r[nxt - 1] * 2.0**-self.B
            d = min(max(math.floor(t / h + 0.5 * self.nb), 0), self.nb - 1)
            t = t - (d - 0.5 * (self.nb - 1)) * h
            if abs(t) > 0.5 * self.r[nxt]:
                return False
        return True

    # --- export

    def to_dict(self) -> dict:
        return {
            "schedule": self.schedule.to_dict(),
            "depth": self.depth,
            "card_L1": self.card_L1,
            "r": [float(v) for v in self.r],
            "measure": [self.measure(i) for i in range(self.depth + 1)],
            "domain": self.domain.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CantorScaffold":
        sched = RhoSchedule.from_dict(d["schedule"])
        dom = BoxDomain(tuple(d["domain"]["lo"]), tuple(d["domain"]["hi"]))
        return build_scaffold(dom, sched, int(d["depth"]))


def root_lattice(domain: BoxDomain, delta: float) -> tuple[tuple, tuple]:
    """Inclusive per-axis ranges of ``m`` with ``Q(m delta, delta)`` inside the open box."""
    lo_idx, hi_idx = [], []
    for lo, hi in zip(domain.lo, domain.hi):
        cand = range(math.floor(lo / delta) - 1, math.ceil(hi / delta) + 2)
        ok = [m for m in cand if m * delta - 0.5 * delta > lo and m * delta + 0.5 * delta < hi]
        if not ok:
            raise EmptyLattice(f"no cube of side {delta} fits in ({lo}, {hi})")
        lo_idx.append(min(ok))
        hi_idx.append(max(ok))
    return tuple(lo_idx), tuple(hi_idx)


def build_scaffold(domain: BoxDomain, schedule: RhoSchedule, N: int) -> CantorScaffold:
    """Root lattice, side lengths and gaps down to level ``N``."""
    if domain.k != schedule.k:
        raise ValueError("domain and schedule dimensions differ")
    if N < 0:
        raise ValueError("depth must be non-negative")
    lo, hi = root_lattice(domain, schedule.delta)
    r = side_lengths(schedule, N)
    rho = schedule.rhos(N + 2)
    return CantorScaffold(schedule, domain, int(N), r, rho, lo, hi)


def membership(scaffold: CantorScaffold, x, level: int):
    return scaffold.membership(x, level)


def measure(scaffold: CantorScaffold, level: int) -> float:
    return scaffold.measure(level)


def iter_level_centers(scaffold: CantorScaffold, level: int) -> Iterable[np.ndarray]:
    """All absolute centres at ``level`` (only sensible for small counts)."""
    if scaffold.count(level) > 5_000_000:
        raise ValueError("too many cubes to enumerate")
    centers = scaffold.root_centers()
    for lev in range(1, level + 1):
        h = scaffold.r[lev - 1] * 2.0**-scaffold.B
        grid1 = (np.arange(scaffold.nb) - 0.5 * (scaffold.nb - 1)) * h
        mesh = np.meshgrid(*([grid1] * scaffold.k), indexing="ij")
        offs = np.stack([m.ravel() for m in mesh], axis=1)
        centers = (centers[:, None, :] + offs[None, :, :]).reshape(-1, scaffold.k)
    yield from centers
