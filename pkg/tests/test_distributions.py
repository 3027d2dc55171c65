import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorlab.distributions import (
    VectorFieldPair,
    constant_field,
    heisenberg,
    involutivity_defect,
    lie_bracket,
    noninvolutivity_certificate,
    polynomial_field,
    spanning_pair,
    tangency_check,
)
from cantorlab.geometry import Anchor
from cantorlab.lusin import residual_constant


def symbolic_heisenberg_bracket():
    """``DX(Y) - DY(X)`` for ``X = e1 - 2 x2 e3``, ``Y = e2 + 2 x1 e3`` done by sympy."""
    x = sp.symbols("x1:4")
    X = sp.Matrix([1, 0, -2 * x[1]])
    Y = sp.Matrix([0, 1, 2 * x[0]])
    br = X.jacobian(x) * Y - Y.jacobian(x) * X
    return sp.lambdify([x], br, "numpy")


coords = st.floats(-3, 3, allow_nan=False)


def test_heisenberg_matrix():
    V = heisenberg()
    np.testing.assert_array_equal(V.matrix(np.zeros(3)), np.zeros((1, 2)))
    assert np.array_equal(V.spanning_field(2)(np.array([1.0, 0.0, 0.0])), [0.0, 1.0, 2.0])
    np.testing.assert_allclose(V.matrix([0.5, -0.25, 0.0]), [[0.5, 1.0]])


@settings(max_examples=50, deadline=None)
@given(coords, coords, coords)
def test_bracket_matches_symbolic(a, b, c):
    x = np.array([a, b, c])
    ref = np.asarray(symbolic_heisenberg_bracket()(x), dtype=float).ravel()
    V = heisenberg()
    np.testing.assert_array_equal(lie_bracket(spanning_pair(V, 1, 2), x), ref)
    fd = lie_bracket(spanning_pair(V, 1, 2, analytic=False), x, analytic=False)
    assert np.max(np.abs(fd - ref)) <= 1e-8
    np.testing.assert_allclose(ref, [0, 0, -4])


def test_bracket_antisymmetric_and_bilinear(rng):
    f = lambda x: np.array([np.sin(x[0]) * x[1], x[2] ** 2, np.exp(0.1 * x[0])])
    g = lambda x: np.array([x[1] * x[2], np.cos(x[0]), x[0] ** 3])
    pair = VectorFieldPair(f, g)
    for _ in range(20):
        x = rng.uniform(-1, 1, 3)
        b1 = lie_bracket(pair, x)
        b2 = lie_bracket(pair.swapped(), x)
        assert np.max(np.abs(b1 + b2)) <= 1e-10
        scaled = VectorFieldPair(lambda y: 3.0 * f(y), g)
        np.testing.assert_allclose(lie_bracket(scaled, x), 3.0 * b1, rtol=1e-6, atol=1e-8)
        assert np.max(np.abs(lie_bracket(VectorFieldPair(f, f), x))) <= 1e-10


def test_constant_fields_commute():
    c = lambda x: np.array([1.0, 2.0, 3.0])
    d = lambda x: np.array([0.0, -1.0, 0.5])
    assert np.all(lie_bracket(VectorFieldPair(c, d), np.ones(3)) == 0)


def test_involutivity_defect(rng):
    V = heisenberg()
    for _ in range(10):
        x = rng.uniform(-2, 2, 3)
        assert involutivity_defect(V, x, 1, 2, 1) == 4.0
        assert involutivity_defect(V, x, 2, 1, 1) == -4.0
        assert abs(involutivity_defect(V, x, 1, 2, 1, analytic=False) - 4.0) <= 1e-8
    W = constant_field([[1.0, 2.0], [3.0, -1.0]])
    for a in (1, 2):
        for b in (1, 2):
            for p in (1, 2):
                assert involutivity_defect(W, np.zeros(4), a, b, p) == 0.0
    with pytest.raises(IndexError):
        involutivity_defect(V, np.zeros(3), 1, 3, 1)


def test_horizontal_bracket_is_curl_pattern(rng):
    # at the origin M = 0, so the vertical bracket component is minus the curl defect
    V = heisenberg()
    br = lie_bracket(spanning_pair(V, 1, 2), np.zeros(3))
    assert br[2] == -involutivity_defect(V, np.zeros(3), 1, 2, 1)
    for _ in range(1000):
        x = rng.uniform(-1, 1, 3)
        fd = lie_bracket(spanning_pair(V, 1, 2, analytic=False), x, analytic=False)
        assert np.max(np.abs(fd[:2])) <= 1e-8


def test_analytic_jacobian_matches_fd(rng):
    spec = {
        "entries": [
            {"p": 1, "a": 1, "monomials": [{"coeff": 1.5, "exponents": [2, 1, 0]}]},
            {"p": 1, "a": 2, "monomials": [{"coeff": -0.5, "exponents": [0, 3, 1]}, {"coeff": 2.0, "exponents": [1, 0, 0]}]},
        ]
    }
    fields = [heisenberg(), polynomial_field(spec, 3, 2)]
    for V in fields:
        for _ in range(50):
            x = rng.uniform(-1, 1, 3)
            J, Jfd = V.jacobian(x), V.jacobian(x, analytic=False)
            assert np.max(np.abs(J - Jfd)) <= 1e-6 * max(1.0, np.max(np.abs(J)))


def test_certificates():
    assert noninvolutivity_certificate(heisenberg(), np.zeros(3)) == (1, 2, 1, 4.0)
    assert noninvolutivity_certificate(constant_field(np.zeros((1, 2))), np.zeros(3)) is None
    # M is the gradient row of x1 x2, a curl-free field
    hess = {"entries": [{"p": 1, "a": 1, "monomials": [{"coeff": 1.0, "exponents": [0, 1, 0]}]},
                        {"p": 1, "a": 2, "monomials": [{"coeff": 1.0, "exponents": [1, 0, 0]}]}]}
    V = polynomial_field(hess, 3, 2)
    for x in (np.zeros(3), np.array([0.3, -1.2, 2.0])):
        assert noninvolutivity_certificate(V, x) is None
        assert noninvolutivity_certificate(V, x, analytic=False) is None


def test_polynomial_field_validation():
    with pytest.raises(ValueError):
        polynomial_field({"entries": [{"p": 2, "a": 1, "monomials": []}]}, 3, 2)
    with pytest.raises(ValueError):
        polynomial_field({"entries": [{"p": 1, "a": 1, "monomials": [{"coeff": 1, "exponents": [1, 0]}]}]}, 3, 2)


def test_tangency_simple_cases():
    V = heisenberg()
    zero = lambda x: (np.zeros(1), np.zeros((1, 2)))
    assert not tangency_check(zero, V, np.array([0.5, 0.5]), 1e-6).ok
    res = tangency_check(zero, V, np.zeros(2), 1e-6)
    assert res.ok
    np.testing.assert_array_equal(res.graph_point, np.zeros(3))


def test_tangency_density_at_centres(heisenberg_build, rng):
    u, F = heisenberg_build
    sc = u.scaffold
    V = heisenberg()
    tol = 2 * residual_constant(F) * sc.r[6]
    anchors = [Anchor(sc.random_path(6, rng), np.zeros(2)) for _ in range(300)]
    assert all(tangency_check(u, V, anchor=a, tol=tol).ok for a in anchors)
