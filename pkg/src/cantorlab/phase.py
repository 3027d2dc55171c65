"""Classification of ``(s, alpha, q)`` into rigidity and counterexample regions.

The threshold is ``tau(s, q) = 1 - (2 - 1/q) s`` with ``1/inf = 0``.  Above it
(with ``s <= 1/2``) tangency sets of positive measure are ruled out; below it
(with ``s < 1/2``) they exist.  For ``s > 1/2`` rigidity holds for every
``alpha``.  Points on the threshold, and ``s = 1/2`` under it, stay open.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FROBENIUS = "frobenius"
COUNTEREXAMPLE = "counterexample"
OPEN = "boundary-open"
TOL = 1e-12


def parse_q(q) -> float:
    """Accept a number or the token ``"inf"``."""
    if isinstance(q, str):
        if q.strip().lower() in ("inf", "infinity"):
            return math.inf
        q = float(q)
    return float(q)


def inv_q(q) -> float:
    q = parse_q(q)
    return 0.0 if math.isinf(q) else 1.0 / q


def tau(s: float, q) -> float:
    return 1.0 - (2.0 - inv_q(q)) * s


def tau_zero(q) -> float:
    """Where the threshold crosses zero: ``q / (2q - 1)`` (``1/2`` for ``q = inf``)."""
    return 1.0 / (2.0 - inv_q(q))


@dataclass(frozen=True)
class PhasePoint:
    s: float
    alpha: float
    q: float
    tau: float
    label: str

    def as_dict(self) -> dict:
        return {"s": self.s, "alpha": self.alpha, "q": "inf" if math.isinf(self.q) else self.q, "tau": self.tau, "label": self.label}


def classify(s: float, alpha: float, q, tol: float = TOL) -> PhasePoint:
    q = parse_q(q)
    if not 0.0 <= s < 1.0:
        raise ValueError("s must lie in [0, 1)")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if not q >= 1.0:
        raise ValueError("q must lie in [1, inf]")
    t = tau(s, q)
    if s > 0.5:
        label = FROBENIUS
    elif s == 0.0:
        # the extremal construction covers every alpha < 1
        label = COUNTEREXAMPLE
    elif abs(alpha - t) <= tol:
        label = OPEN
    elif alpha > t:
        label = FROBENIUS
    elif s < 0.5:
        label = COUNTEREXAMPLE
    else:
        label = OPEN
    return PhasePoint(float(s), float(alpha), q, t, label)


@dataclass
class PhaseGrid:
    q: float
    resolution: int
    s: np.ndarray
    alpha: np.ndarray
    labels: np.ndarray  # (len(s), len(alpha))

    def rows(self) -> list:
        qv = "inf" if math.isinf(self.q) else self.q
        out = []
        for i, s in enumerate(self.s):
            t = tau(s, self.q)
            for j, a in enumerate(self.alpha):
                out.append({"s": float(s), "alpha": float(a), "q": qv, "tau": t, "label": str(self.labels[i, j])})
        return out

    def zero_crossing(self) -> float:
        """Grid estimate of where ``tau`` changes sign (right edge if it never does)."""
        t = np.array([tau(s, self.q) for s in self.s])
        neg = np.flatnonzero(t <= 0.0)
        if neg.size == 0:
            return 1.0
        i = int(neg[0])
        if i == 0:
            return float(self.s[0])
        return float(0.5 * (self.s[i - 1] + self.s[i]))

    @property
    def cell(self) -> float:
        return 1.0 / self.resolution


def figure_grid(q, resolution: int) -> PhaseGrid:
    """Cell-centred ``(s, alpha)`` grid on ``[0, 1) x (0, 1)``."""
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    q = parse_q(q)
    centres = (np.arange(resolution) + 0.5) / resolution
    labels = np.empty((resolution, resolution), dtype=object)
    for i, s in enumerate(centres):
        for j, a in enumerate(centres):
            labels[i, j] = classify(s, a, q).label
    return PhaseGrid(q, resolution, centres, centres.copy(), labels)
