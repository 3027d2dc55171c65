"""Stokes' theorem on rectangles and boundary-escape probes at Cantor points.

Circulations and curl fluxes use Gauss-Legendre rules (per side, and tensor
rules on the rectangle).  Escape measures, the length of the part of a square's
boundary that leaves a set ``E``, come either from dense sampling against a
membership oracle or, for Cantor sets built by a scaffold, from exact interval
arithmetic on the product structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .geometry import CantorScaffold


@dataclass
class RectangleProbe:
    """Rectangle ``center + a v + b v_perp`` with ``|a| <= h1``, ``|b| <= h2``."""

    center: np.ndarray
    direction: np.ndarray
    half_sides: tuple
    order: int = 8
    orientation: int = 1

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float)
        self.direction = np.asarray(self.direction, dtype=float)
        if abs(np.linalg.norm(self.direction) - 1.0) > 1e-12:
            raise ValueError("direction must be a unit vector")
        if min(self.half_sides) <= 0:
            raise ValueError("side lengths must be positive")
        if self.order < 2:
            raise ValueError("quadrature order must be at least 2")

    @classmethod
    def square(cls, center, r: float, order: int = 8) -> "RectangleProbe":
        """Axis-parallel square of side ``2r``."""
        return cls(np.asarray(center, dtype=float), np.array([1.0, 0.0]), (r, r), order)

    @property
    def normal(self) -> np.ndarray:
        v = self.direction
        return np.array([-v[1], v[0]])

    @property
    def area(self) -> float:
        return 4.0 * self.half_sides[0] * self.half_sides[1]

    def corners(self) -> np.ndarray:
        h1, h2 = self.half_sides
        v, w = self.direction, self.normal
        c = self.center
        pts = [c - h1 * v - h2 * w, c + h1 * v - h2 * w, c + h1 * v + h2 * w, c - h1 * v + h2 * w]
        return np.array(pts)

    def sides(self) -> list:
        """The four sides as ``(start, end)`` pairs, counterclockwise."""
        c = self.corners()
        return [(c[i], c[(i + 1) % 4]) for i in range(4)]

    def reversed(self) -> "RectangleProbe":
        return RectangleProbe(self.center, self.direction, self.half_sides, self.order, -self.orientation)

    def split(self) -> tuple:
        """Two halves along the chord through the centre parallel to ``v_perp``."""
        h1, h2 = self.half_sides
        v = self.direction
        a = RectangleProbe(self.center - 0.5 * h1 * v, v, (0.5 * h1, h2), self.order, self.orientation)
        b = RectangleProbe(self.center + 0.5 * h1 * v, v, (0.5 * h1, h2), self.order, self.orientation)
        return a, b


@dataclass
class OneForm:
    """``g = g_1 dx_1 + g_2 dx_2`` with an optional pointwise curl.

    ``jacobian(x)`` (shape ``(2, 2)``, ``J[i, j] = d g_i / d x_j``) is optional
    and lets probes evaluate a linear form at offsets from a base point,
    which matters for rectangles far below float resolution.
    """

    func: Callable[[np.ndarray], np.ndarray]
    curl: Callable[[np.ndarray], np.ndarray] | None = None
    tag: str = "smooth"
    jacobian: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.asarray(self.func(x), dtype=float).reshape(len(x), 2)
        if not np.all(np.isfinite(out)):
            raise FloatingPointError("one-form evaluated to a non-finite value")
        return out

    def linearized(self, base) -> "OneForm":
        """First-order expansion at ``base``, evaluated on offsets (constant term dropped)."""
        if self.jacobian is None:
            raise ValueError("form has no jacobian")
        J = np.asarray(self.jacobian(np.asarray(base, dtype=float)), dtype=float)
        tr = J[1, 0] - J[0, 1]
        return OneForm(lambda y: y @ J.T, lambda y: np.full(len(y), tr), "linear", lambda y: J)


def exact_form(grad_phi: Callable) -> OneForm:
    return OneForm(grad_phi, lambda x: np.zeros(len(x)), "exact")


def heisenberg_form() -> OneForm:
    """``(M_11, M_12) = (-2 x_2, 2 x_1)``, curl 4."""
    J = np.array([[0.0, -2.0], [2.0, 0.0]])
    return OneForm(
        lambda x: np.stack([-2.0 * x[:, 1], 2.0 * x[:, 0]], axis=1),
        lambda x: np.full(len(x), 4.0),
        "heisenberg",
        lambda x: J,
    )


def monomial_form(a: int, b: int, j: int) -> OneForm:
    """``x_1^a x_2^b dx_j`` (``j`` in {1, 2}) with its exact curl."""

    def func(x):
        out = np.zeros((len(x), 2))
        out[:, j - 1] = x[:, 0] ** a * x[:, 1] ** b
        return out

    def curl(x):
        if j == 2:
            return a * x[:, 0] ** max(a - 1, 0) * x[:, 1] ** b if a else np.zeros(len(x))
        return -(b * x[:, 0] ** a * x[:, 1] ** max(b - 1, 0)) if b else np.zeros(len(x))

    return OneForm(func, curl, f"monomial({a},{b},{j})")


# ----------------------------------------------------------------- integrals


def circulation(g: OneForm, P: RectangleProbe, panels: int = 1) -> float:
    """Composite Gauss-Legendre line integral of ``g`` around ``P``."""
    xi, w = leggauss(P.order)
    total = 0.0
    for a, b in P.sides():
        edge = b - a
        for i in range(panels):
            pa = a + edge * (i / panels)
            pts = pa + np.outer((xi + 1.0) / (2.0 * panels), edge)
            vals = g(pts) @ edge
            total += float(np.dot(w, vals)) / (2.0 * panels)
    return P.orientation * total


def curl_flux(g: OneForm, P: RectangleProbe, panels: int = 1) -> float:
    """Tensor Gauss-Legendre integral of ``curl g`` over ``P``."""
    if g.curl is None:
        raise ValueError("one-form has no curl evaluator")
    xi, w = leggauss(P.order)
    nodes = np.concatenate([(xi + 2 * i + 1) / panels - 1.0 for i in range(panels)])
    wts = np.tile(w, panels) / panels
    A, Bn = np.meshgrid(nodes, nodes, indexing="ij")
    h1, h2 = P.half_sides
    pts = P.center + np.outer(A.ravel() * h1, P.direction) + np.outer(Bn.ravel() * h2, P.normal)
    W = np.outer(wts, wts).ravel()
    vals = np.asarray(g.curl(pts), dtype=float)
    return P.orientation * float(np.dot(W, vals)) * h1 * h2


def stokes_residual(g: OneForm, P: RectangleProbe, panels: int = 1) -> float:
    return abs(circulation(g, P, panels) - curl_flux(g, P, panels))


# ------------------------------------------------------------ boundary escape


@dataclass
class EscapeScan:
    radii: np.ndarray
    measures: np.ndarray
    offsets: np.ndarray
    exponent: float | None
    mode: str

    def rows(self) -> list:
        out = []
        for i, (r, m) in enumerate(zip(self.radii, self.measures)):
            fit = _fit_exponent(self.radii[: i + 1], self.measures[: i + 1])
            out.append({"r": float(r), "escape_measure": float(m), "exponent_fit_so_far": fit, "mode": self.mode})
        return out


def _fit_exponent(radii, measures) -> float | None:
    radii, measures = np.asarray(radii, float), np.asarray(measures, float)
    pos = measures > 0
    if pos.sum() < 2:
        return None
    return float(np.polyfit(np.log(radii[pos]), np.log(measures[pos]), 1)[0])


def _sampled_escape(oracle, P: RectangleProbe, n_per_side: int) -> float:
    total = 0.0
    u = (np.arange(n_per_side) + 0.5) / n_per_side
    for a, b in P.sides():
        pts = a + np.outer(u, b - a)
        out = ~np.asarray(oracle(pts), dtype=bool)
        total += np.linalg.norm(b - a) * out.mean()
    return float(total)


def boundary_escape_scan(oracle, x, v, radii: Sequence[float], n_per_side: int = 10_000, offsets=None) -> EscapeScan:
    """Sampling mode: ``H^1(boundary \\ E)`` for squares of side ``2r`` around ``x``.

    ``offsets`` (shape ``(n, 2)``, in units of ``r``) shifts the centre; the
    minimum over offsets is kept per radius.
    """
    radii = np.asarray(radii, dtype=float)
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    offsets = np.zeros((1, 2)) if offsets is None else np.atleast_2d(offsets)
    meas, best = [], []
    for r in radii:
        vals = [_sampled_escape(oracle, RectangleProbe(x + r * o, v, (r, r)), n_per_side) for o in offsets]
        i = int(np.argmin(vals))
        meas.append(vals[i])
        best.append(offsets[i] * r)
    meas = np.array(meas)
    return EscapeScan(radii, meas, np.array(best), _fit_exponent(radii, meas), "sampling")


def square_escape_exact(scaffold: CantorScaffold, path: Sequence[int], r: float, offset=(0.0, 0.0)) -> float:
    """Exact ``H^1`` of the boundary of a square outside the depth-``N`` set.

    The square has side ``2r`` and is centred at ``offset`` from the centre
    of cube ``path``.  Each side is parallel to an axis, so by the product
    structure it either misses the set entirely (its fixed coordinate fails
    the 1-D membership) or meets it in a 1-D Cantor cross-section.
    """
    if scaffold.k != 2:
        raise ValueError("exact escape is implemented in the plane")
    ax = [scaffold.axis_path(path, a) for a in range(2)]
    o = np.asarray(offset, dtype=float)
    total = 0.0
    for axis in range(2):  # sides parallel to ``axis``
        other = 1 - axis
        a, b = o[axis] - r, o[axis] + r
        for sgn in (-1.0, 1.0):
            t = o[other] + sgn * r
            covered = scaffold.cover_1d(axis, ax[axis], a, b) if scaffold.contains_1d(other, ax[other], t) else 0.0
            total += 2.0 * r - covered
    return total


def boundary_escape_exact(
    scaffold: CantorScaffold, path: Sequence[int], radii: Sequence[float], n_offsets: int = 32, spread: float = 0.2, seed: int = 0
) -> EscapeScan:
    """Exact mode with a best-offset search over ``n_offsets`` centre shifts of size ``<= spread r``.

    The unshifted square is always among the candidates.
    """
    radii = np.asarray(radii, dtype=float)
    rng = np.random.default_rng(seed)
    unit = np.vstack([np.zeros((1, 2)), rng.uniform(-spread, spread, (n_offsets - 1, 2))])
    meas, best = [], []
    for r in radii:
        vals = [square_escape_exact(scaffold, path, r, r * o) for o in unit]
        i = int(np.argmin(vals))
        meas.append(vals[i])
        best.append(unit[i] * r)
    meas = np.array(meas)
    return EscapeScan(radii, meas, np.array(best), _fit_exponent(radii, meas), "exact")


# -------------------------------------------------------------------- witness


@dataclass
class WitnessRow:
    r: float
    circulation: float
    flux: float
    ratio: float
    sampled_circulation: float
    escape_measure: float | None = None

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "circulation": self.circulation,
            "sampled_circulation": self.sampled_circulation,
            "flux": self.flux,
            "ratio": self.ratio,
            "escape_measure": None if self.escape_measure is None else float(self.escape_measure),
        }


@dataclass
class WitnessRecord:
    rows: list = field(default_factory=list)
    escape_exponent: float | None = None
    mode: str = "absolute"

    def as_dict(self) -> dict:
        return {"mode": self.mode, "escape_exponent": self.escape_exponent, "rows": [r.as_dict() for r in self.rows]}


def locality_witness(
    m: OneForm,
    radii: Sequence[float],
    *,
    u=None,
    scaffold: CantorScaffold | None = None,
    path: Sequence[int] | None = None,
    x=None,
    vanish: bool = False,
    order: int = 8,
    panels: int = 4,
) -> WitnessRecord:
    """Circulation of ``h = m - du`` over squares of side ``2r`` against the flux of ``curl m``.

    ``u`` is a scalar tangent graph over the plane (or ``None`` for ``h = m``);
    ``vanish=True`` models a datum integrable on the whole square (``h = 0``).
    With ``path`` the squares are centred at that cube of ``scaffold``, points
    are handled as offsets (so radii far below float resolution work) and
    the exact escape measure is attached to each row.  ``ratio`` is the
    circulation divided by the area of the square.

    ``u`` is smooth at finite depth, so ``du`` circulates to zero exactly and
    the circulation of ``h`` equals that of ``m``.  ``sampled_circulation``
    is the Gauss-Legendre value of ``h`` at its nodes: the nodes almost
    always fall where ``h`` vanishes, so the gap between the two columns is
    the mass carried by the thin part of the boundary outside the set.
    """
    if m.curl is None:
        raise ValueError("one-form has no curl evaluator")
    if u is not None and scaffold is not None and u.scaffold is not scaffold:
        raise ValueError("graph and set come from different scaffolds")
    if u is not None and scaffold is None:
        scaffold = u.scaffold
    relative = path is not None
    if relative:
        if scaffold is None:
            raise ValueError("path given without a scaffold")
        base = scaffold.cube_center(path)
        form = m.linearized(base)
        center = np.zeros(2)
        root = path[0]
        digits = np.array([scaffold.child_digits(c) for c in path[1:]], dtype=np.int64).reshape(len(path) - 1, 2)
    else:
        form = m
        center = np.asarray(x, dtype=float)

    def du(pts):
        if relative:
            n = len(pts)
            _, g = u.evaluate_batch(np.full(n, root), np.broadcast_to(digits, (n,) + digits.shape), pts)
            _, g0 = u.evaluate_batch(np.full(1, root), digits[None], np.zeros((1, 2)))
            return (g - g0).reshape(n, 2)
        return u.evaluate(pts)[1].reshape(len(pts), 2)

    if vanish:
        h = OneForm(lambda y: np.zeros((len(y), 2)), lambda y: np.zeros(len(y)), "zero")
    elif u is None:
        h = form
    else:
        h = OneForm(lambda y: form(y) - du(y), None, "residual")
    rec = WitnessRecord(mode="anchored" if relative else "absolute")
    for r in radii:
        P = RectangleProbe.square(center, float(r), order)
        sampled = circulation(h, P, panels)
        circ = 0.0 if vanish else circulation(form, P, panels)
        flux = curl_flux(form, P)
        esc = square_escape_exact(scaffold, path, float(r)) if relative else None
        rec.rows.append(WitnessRow(float(r), circ, flux, circ / P.area, sampled, esc))
    if relative:
        rec.escape_exponent = _fit_exponent([w.r for w in rec.rows], [w.escape_measure for w in rec.rows])
    return rec
