"""Independent reference implementations used as test oracles."""

import math

import mpmath as mp
import numpy as np


def smoothstep_plateau(t, half, w):
    a = abs(t)
    u = (a - half) / w
    if u <= 0:
        return mp.mpf(1)
    if u >= 1:
        return mp.mpf(0)
    return 1 - u**3 * (10 - 15 * u + 6 * u**2)


class MpLayered:
    """High-precision evaluation of a layered function with Heisenberg coefficients.

    Points are given as ``(path, offset)``.  The geometry reuses the float
    child offsets (that is how a cube address is defined), but the sum, the
    cutoffs and the coefficients ``a = (-2 x_2, 2 x_1)`` at cube centres are
    computed here from scratch in multiprecision.
    """

    def __init__(self, sc, depth, dps=80):
        self.sc = sc
        self.depth = depth
        self.dps = dps
        self.r = [mp.mpf(float(v)) for v in sc.r]
        self.rho = [mp.mpf(float(v)) for v in sc.rho]

    def _offset(self, level, digits):
        nb = self.sc.nb
        h = float(self.sc.r[level - 1]) * 2.0 ** -self.sc.B
        return [mp.mpf(float((d - 0.5 * (nb - 1)) * h)) for d in digits]

    def _a(self, centre):
        return [-2 * centre[1], 2 * centre[0]]

    def position(self, path, offset):
        with mp.workdps(self.dps):
            root = [mp.mpf(float(v)) for v in self.sc.root_center(path[0])]
            x = [mp.mpf(0)] * self.sc.k
            for lev, c in enumerate(path[1:], start=1):
                off = self._offset(lev, self.sc.child_digits(c))
                x = [a + b for a, b in zip(x, off)]
            x = [a + mp.mpf(float(b)) for a, b in zip(x, offset)]
            return root, x

    def value(self, root, x):
        """``u`` at ``root + x`` (``x`` relative to the root centre)."""
        sc = self.sc
        k, nb = sc.k, sc.nb
        with mp.workdps(self.dps):
            if any(abs(v) > self.r[0] / 2 for v in x):
                return mp.mpf(0)
            parent = [mp.mpf(0)] * k
            a_parent = [mp.mpf(0)] * k
            total = mp.mpf(0)
            for lev in range(1, self.depth + 1):
                h = self.r[lev - 1] / 2**sc.B
                digits = [int(min(max(mp.floor((x[j] - parent[j]) / h + mp.mpf(nb) / 2), 0), nb - 1)) for j in range(k)]
                off = self._offset(lev, digits)
                child = [p + o for p, o in zip(parent, off)]
                z = [x[j] - child[j] for j in range(k)]
                sig = mp.mpf(1)
                for j in range(k):
                    sig *= smoothstep_plateau(z[j], self.r[lev] / 2, self.rho[lev] / 4)
                a = self._a([root[j] + child[j] for j in range(k)])
                total += sig * sum((a[j] - a_parent[j]) * z[j] for j in range(k))
                if any(abs(v) > self.r[lev] / 2 for v in z):
                    break
                parent, a_parent = child, a
            return total

    def gradient(self, root, x, step):
        with mp.workdps(self.dps):
            g = []
            for j in range(self.sc.k):
                xp = list(x)
                xm = list(x)
                xp[j] += step
                xm[j] -= step
                g.append((self.value(root, xp) - self.value(root, xm)) / (2 * step))
            return g


def half_interval_seminorm_numeric(s):
    """Double integral of the one-jump indicator done by 1-D quadrature."""
    # pairs on opposite sides of 1/2: 2 int_0^{1/2} ((1/2 - x)^{-s} - (1 - x)^{-s}) / s dx.
    # With t = 1/2 - x = v^{1/(1-s)} the endpoint singularity disappears.
    with mp.workdps(30):
        s = mp.mpf(s)
        a = 1 / (1 - s)
        sing = mp.quad(lambda v: a, [0, mp.mpf(0.5) ** (1 - s)])
        smooth = mp.quad(lambda t: (t + mp.mpf(0.5)) ** (-s), [0, 0.5])
        return float(2 * (sing - smooth) / s)


def spherical_cap_area(r, h):
    if r <= h:
        return 0.0
    return r * r * math.acos(h / r) - h * math.sqrt(r * r - h * h)


def polygon_circulation_exact(coeffs, corners):
    """Exact line integral of a polynomial form around a polygon via mpmath quadrature."""
    total = mp.mpf(0)
    n = len(corners)
    for i in range(n):
        a = np.asarray(corners[i], float)
        b = np.asarray(corners[(i + 1) % n], float)
        e = b - a

        def f(t):
            p = a + t * e
            return sum(c * p[0] ** i1 * p[1] ** i2 * e[j - 1] for (i1, i2, j), c in coeffs.items())

        total += mp.quad(f, [0, 1])
    return float(total)
