"""k-plane distributions in graph form, Lie brackets and the curl obstruction.

A distribution ``V`` on ``R^n`` is stored as a matrix field ``M(x)``: the
plane at ``x`` is the graph of ``M(x): R^k -> R^{n-k}`` over the span of the
first ``k`` coordinate vectors.  Its spanning fields are
``X_i(x) = e_i + M(x) e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

FD_TOL = 1e-8


def fd_step(x) -> float:
    return 1e-5 * (1.0 + float(np.linalg.norm(x)))


@dataclass
class DistributionField:
    """Matrix field ``M`` with optional analytic Jacobian.

    ``M(x)`` returns ``(n-k, k)``; ``jac(x)`` returns ``dM[p, a, j] =
    d M_{p,a} / d x_j`` with shape ``(n-k, k, n)``.
    """

    n: int
    k: int
    M: Callable[[np.ndarray], np.ndarray]
    jac: Callable[[np.ndarray], np.ndarray] | None = None
    tag: str = "user"

    def matrix(self, x) -> np.ndarray:
        return np.asarray(self.M(np.asarray(x, dtype=float)), dtype=float).reshape(self.n - self.k, self.k)

    def jacobian(self, x, analytic: bool = True) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if analytic and self.jac is not None:
            return np.asarray(self.jac(x), dtype=float).reshape(self.n - self.k, self.k, self.n)
        h = fd_step(x)
        out = np.empty((self.n - self.k, self.k, self.n))
        for j in range(self.n):
            e = np.zeros(self.n)
            e[j] = h
            out[:, :, j] = (self.matrix(x + e) - self.matrix(x - e)) / (2.0 * h)
        return out

    def spanning_field(self, a: int) -> Callable[[np.ndarray], np.ndarray]:
        """``X_a = e_a + M e_a`` (``a`` is 1-based)."""

        def X(x):
            v = np.zeros(self.n)
            v[a - 1] = 1.0
            v[self.k :] = self.matrix(x)[:, a - 1]
            return v

        return X

    def spanning_jacobian(self, a: int, analytic: bool = True):
        def DX(x):
            J = np.zeros((self.n, self.n))
            J[self.k :, :] = self.jacobian(x, analytic)[:, a - 1, :]
            return J

        return DX

    def as_datum(self):
        """Graph datum ``F(x', u) = M((x', u))`` for :mod:`cantorlab.lusin`."""
        from .lusin import GradientDatum

        k, m = self.k, self.n - self.k

        def func(X, U):
            Z = np.concatenate([X, U], axis=1)
            return np.stack([self.matrix(z) for z in Z])

        return GradientDatum(func, k, m, np.nan, np.nan, self.tag)


def heisenberg() -> DistributionField:
    """``X = e_1 - 2 x_2 e_3``, ``Y = e_2 + 2 x_1 e_3`` on ``R^3``."""

    def M(x):
        return np.array([[-2.0 * x[1], 2.0 * x[0]]])

    def jac(x):
        J = np.zeros((1, 2, 3))
        J[0, 0, 1] = -2.0
        J[0, 1, 0] = 2.0
        return J

    return DistributionField(3, 2, M, jac, "heisenberg")


def constant_field(A, n: int | None = None) -> DistributionField:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, k = A.shape
    n = n or m + k

    def jac(x):
        return np.zeros((m, k, n))

    return DistributionField(n, k, lambda x: A.copy(), jac, "user")


# -------------------------------------------------------------- brackets


@dataclass
class VectorFieldPair:
    X: Callable[[np.ndarray], np.ndarray]
    Y: Callable[[np.ndarray], np.ndarray]
    DX: Callable[[np.ndarray], np.ndarray] | None = None
    DY: Callable[[np.ndarray], np.ndarray] | None = None

    def swapped(self) -> "VectorFieldPair":
        return VectorFieldPair(self.Y, self.X, self.DY, self.DX)


def _fd_jacobian(f, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    h = fd_step(x)
    cols = []
    for j in range(len(x)):
        e = np.zeros(len(x))
        e[j] = h
        cols.append((np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2.0 * h))
    return np.stack(cols, axis=1)


def lie_bracket(pair: VectorFieldPair, x, analytic: bool = True) -> np.ndarray:
    """``[X, Y](x) = DX(x) Y(x) - DY(x) X(x)``."""
    x = np.asarray(x, dtype=float)
    DX = pair.DX(x) if (analytic and pair.DX is not None) else _fd_jacobian(pair.X, x)
    DY = pair.DY(x) if (analytic and pair.DY is not None) else _fd_jacobian(pair.Y, x)
    return DX @ np.asarray(pair.Y(x)) - DY @ np.asarray(pair.X(x))


def spanning_pair(V: DistributionField, a: int, b: int, analytic: bool = True) -> VectorFieldPair:
    return VectorFieldPair(
        V.spanning_field(a), V.spanning_field(b), V.spanning_jacobian(a, analytic), V.spanning_jacobian(b, analytic)
    )


def involutivity_defect(V: DistributionField, x, a: int, b: int, p: int, analytic: bool = True) -> float:
    """``d_a M_{p,b} - d_b M_{p,a}`` at ``x`` (indices are 1-based)."""
    if not (1 <= a <= V.k and 1 <= b <= V.k and 1 <= p <= V.n - V.k):
        raise IndexError("index out of range")
    J = V.jacobian(x, analytic)
    return float(J[p - 1, b - 1, a - 1] - J[p - 1, a - 1, b - 1])


def noninvolutivity_certificate(V: DistributionField, x, tol: float = FD_TOL, analytic: bool = True):
    """``(a, b, p, value)`` maximising ``|defect|`` over ``a < b``, or ``None``."""
    best = None
    for a in range(1, V.k + 1):
        for b in range(a + 1, V.k + 1):
            for p in range(1, V.n - V.k + 1):
                val = involutivity_defect(V, x, a, b, p, analytic)
                if abs(val) > tol and (best is None or abs(val) > abs(best[3])):
                    best = (a, b, p, val)
    return best


@dataclass
class TangencyResult:
    ok: bool
    gap: float
    graph_point: np.ndarray


def tangency_check(u, V: DistributionField, x=None, tol: float = 1e-6, *, anchor=None) -> TangencyResult:
    """Compare ``Du(x)`` with ``M((x, u(x)))`` in operator norm.

    ``u`` is a :class:`~cantorlab.lusin.LusinFunction` or any callable
    returning ``(value, gradient)`` for a point.
    """
    if anchor is not None:
        val, grad = u.evaluate_anchors([anchor])
        xa = u.scaffold.absolute(anchor)
    elif hasattr(u, "evaluate"):
        xa = np.asarray(x, dtype=float)
        val, grad = u.evaluate(xa[None])
    else:
        xa = np.asarray(x, dtype=float)
        v, g = u(xa)
        val, grad = np.atleast_2d(v), np.asarray(g, dtype=float).reshape(1, V.n - V.k, V.k)
    z = np.concatenate([xa, val[0]])
    gap = float(np.linalg.norm(grad[0] - V.matrix(z), ord=2))
    return TangencyResult(gap <= tol, gap, z)


# ------------------------------------------------------------ polynomial


def polynomial_field(spec: dict, n: int, k: int) -> DistributionField:
    """Matrix field from ``{entries: [{p, a, monomials: [{coeff, exponents}]}]}``.

    ``p`` (1-based, ``1..n-k``) and ``a`` (``1..k``) select ``M_{p,a}``;
    ``exponents`` has one entry per ambient coordinate.
    """
    m = n - k
    terms = []
    for ent in spec["entries"]:
        p, a = int(ent["p"]), int(ent["a"])
        if not (1 <= p <= m and 1 <= a <= k):
            raise ValueError("entry index out of range")
        for mono in ent["monomials"]:
            ex = np.asarray(mono["exponents"], dtype=int)
            if ex.shape != (n,) or np.any(ex < 0):
                raise ValueError("exponents must be n non-negative integers")
            terms.append((p - 1, a - 1, float(mono["coeff"]), ex))

    def M(x):
        out = np.zeros((m, k))
        for p, a, c, ex in terms:
            out[p, a] += c * np.prod(x**ex)
        return out

    def jac(x):
        out = np.zeros((m, k, n))
        for p, a, c, ex in terms:
            for j in range(n):
                if ex[j] == 0:
                    continue
                e2 = ex.copy()
                e2[j] -= 1
                out[p, a, j] += c * ex[j] * np.prod(x**e2)
        return out

    return DistributionField(n, k, M, jac, "user")
