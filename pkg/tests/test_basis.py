"""Basis evaluation: recurrence correctness, derivatives, boundary values."""

import numpy as np
import pytest

from lagssm import ArgumentError, BasisSpec, boundary_values, eval_phi, eval_phi_all, eval_phi_deriv
from lagssm.basis import phi_deriv_matrix, phi_matrix
from lagssm.quadrature import QuadratureConfig, integrate

SQRT3 = np.sqrt(3.0)
SQRT5 = np.sqrt(5.0)


def legendre_monomial(n, x):
    """Hand-expanded P_n for n <= 5, the independent low-order oracle."""
    return {
        0: lambda x: np.ones_like(x),
        1: lambda x: x,
        2: lambda x: (3 * x**2 - 1) / 2,
        3: lambda x: (5 * x**3 - 3 * x) / 2,
        4: lambda x: (35 * x**4 - 30 * x**2 + 3) / 8,
        5: lambda x: (63 * x**5 - 70 * x**3 + 15 * x) / 8,
    }[n](x)


class TestEvalPhi:
    def test_constant_mode(self):
        spec = BasisSpec(n_basis=4)
        assert eval_phi(spec, 0, 0.3) == 1.0

    def test_boundary_first_mode(self):
        spec = BasisSpec(n_basis=4)
        assert eval_phi(spec, 1, 1.0) == pytest.approx(SQRT3, abs=1e-14)

    def test_second_mode_midpoint(self):
        # phi_2(0.5) = sqrt(5) P_2(0) = -sqrt(5)/2
        spec = BasisSpec(n_basis=4)
        assert eval_phi(spec, 2, 0.5) == pytest.approx(-SQRT5 / 2, abs=1e-14)

    def test_matches_monomial_forms(self):
        """Recurrence agrees with expanded monomials for n <= 5, z in [-2, 2]."""
        spec = BasisSpec(n_basis=6)
        rng = np.random.default_rng(7)
        z = rng.uniform(-2.0, 2.0, size=100)
        for n in range(6):
            expect = np.sqrt(2 * n + 1) * legendre_monomial(n, 2 * z - 1)
            got = np.array([eval_phi(spec, n, zi) for zi in z])
            np.testing.assert_allclose(got, expect, rtol=1e-13, atol=1e-13)

    def test_index_out_of_range(self):
        spec = BasisSpec(n_basis=3)
        with pytest.raises(ArgumentError):
            eval_phi(spec, 3, 0.5)
        with pytest.raises(ArgumentError):
            eval_phi(spec, -1, 0.5)


class TestEvalPhiDeriv:
    def test_constant_mode_derivative(self):
        spec = BasisSpec(n_basis=2)
        assert eval_phi_deriv(spec, 0, 0.7) == 0.0

    def test_linear_mode_derivative(self):
        spec = BasisSpec(n_basis=2)
        for z in (0.0, 0.3, 1.0, 1.7):
            assert eval_phi_deriv(spec, 1, z) == pytest.approx(2 * SQRT3, abs=1e-13)

    def test_finite_difference_single(self):
        spec = BasisSpec(n_basis=6)
        h = 1e-6
        fd = (eval_phi(spec, 5, 0.42 + h) - eval_phi(spec, 5, 0.42 - h)) / (2 * h)
        assert eval_phi_deriv(spec, 5, 0.42) == pytest.approx(fd, abs=1e-6)

    def test_finite_difference_sweep(self):
        """Central differences confirm the derivative for n < 32 on (0.05, 0.95)."""
        spec = BasisSpec(n_basis=32)
        h = 1e-6
        for z in np.linspace(0.05, 0.95, 19):
            for n in range(0, 32, 3):
                fd = (eval_phi(spec, n, z + h) - eval_phi(spec, n, z - h)) / (2 * h)
                assert abs(eval_phi_deriv(spec, n, z) - fd) <= 1e-6

    def test_endpoint_limits(self):
        # At z = 1 (x = 1) the ratio form switches to its limit n(n+1)/2.
        spec = BasisSpec(n_basis=12)
        for n in range(12):
            expect = np.sqrt(2 * n + 1) * n * (n + 1)
            assert eval_phi_deriv(spec, n, 1.0) == pytest.approx(expect, rel=1e-13)
            expect0 = (-1.0) ** (n - 1) * np.sqrt(2 * n + 1) * n * (n + 1)
            assert eval_phi_deriv(spec, n, 0.0) == pytest.approx(expect0, rel=1e-13)

    def test_index_out_of_range(self):
        spec = BasisSpec(n_basis=3)
        with pytest.raises(ArgumentError):
            eval_phi_deriv(spec, 5, 0.5)


class TestEvalPhiAll:
    def test_boundary_pair(self):
        spec = BasisSpec(n_basis=2)
        np.testing.assert_allclose(eval_phi_all(spec, 1.0), [1.0, SQRT3], atol=1e-14)

    def test_single_mode(self):
        spec = BasisSpec(n_basis=1)
        np.testing.assert_array_equal(eval_phi_all(spec, 0.123), [1.0])

    def test_bit_identical_to_scalar(self):
        spec = BasisSpec(n_basis=4)
        z = 0.5
        all_vals = eval_phi_all(spec, z)
        for n in range(4):
            assert all_vals[n] == eval_phi(spec, n, z)


class TestBoundaryValues:
    def test_small(self):
        np.testing.assert_allclose(
            boundary_values(BasisSpec(n_basis=3)), [1.0, SQRT3, SQRT5], atol=1e-15
        )

    def test_single(self):
        np.testing.assert_array_equal(boundary_values(BasisSpec(n_basis=1)), [1.0])

    def test_large(self):
        vals = boundary_values(BasisSpec(n_basis=64))
        assert vals[63] == pytest.approx(np.sqrt(127.0), abs=0)

    def test_boundary_identity(self):
        """eval_phi at z=1 equals the closed form exactly."""
        spec = BasisSpec(n_basis=16)
        vals = boundary_values(spec)
        for n in range(16):
            assert eval_phi(spec, n, 1.0) == vals[n]


class TestVectorizedStacks:
    def test_phi_matrix_matches_scalar(self):
        spec = BasisSpec(n_basis=8)
        z = np.array([0.01, 0.25, 0.5, 0.99, 1.0, 1.05])
        mat = phi_matrix(spec, z)
        for j, zj in enumerate(z):
            np.testing.assert_array_equal(mat[:, j], eval_phi_all(spec, zj))

    def test_phi_deriv_matrix_matches_scalar(self):
        spec = BasisSpec(n_basis=16)
        z = np.linspace(0.05, 0.95, 7)
        mat = phi_deriv_matrix(spec, z)
        for j, zj in enumerate(z):
            for n in range(16):
                assert mat[n, j] == pytest.approx(eval_phi_deriv(spec, n, zj), rel=1e-12, abs=1e-12)


def test_orthonormality():
    """Quadrature Gram matrix of the first 64 modes is the identity to 1e-12."""
    spec = BasisSpec(n_basis=64)
    cfg = QuadratureConfig()
    for n, m in [(0, 0), (5, 5), (63, 63), (0, 1), (7, 40), (62, 63)]:
        val = integrate(lambda z: eval_phi(spec, n, z) * eval_phi(spec, m, z), 0.0, 1.0, cfg)
        assert abs(val - (1.0 if n == m else 0.0)) <= 1e-12


def test_spec_validation():
    with pytest.raises(ArgumentError):
        BasisSpec(n_basis=0)
    with pytest.raises(ArgumentError):
        BasisSpec(n_basis=257)
    with pytest.raises(ArgumentError):
        BasisSpec(n_basis=4, family="fourier")
