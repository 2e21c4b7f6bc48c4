"""Tensor storage, contraction algebra, force derivatives, modal transform."""

import numpy as np
import pytest

import romlab as rl
from romlab.errors import DecompositionError, DimensionMismatchError, SymmetryError
from romlab.tensors import spd_failure_index

from helpers import (
    fd_jacobian,
    loop_contract_cubic,
    loop_contract_quad,
    random_symmetric_model,
)


class TestContraction:
    def test_single_entry_quad(self):
        G = rl.QuadTensor(1, [(0, 0, 0, 2.0)])
        np.testing.assert_allclose(rl.contract_quad(G, [3.0], [3.0]), [18.0])

    def test_empty_quad_is_zero(self):
        G = rl.QuadTensor(3)
        np.testing.assert_allclose(rl.contract_quad(G, np.ones(3), np.ones(3)), 0.0)

    def test_quad_matches_loop_oracle(self):
        rng = np.random.default_rng(11)
        entries = [
            (int(p), int(i), int(j), float(v))
            for p, i, j, v in zip(
                rng.integers(0, 4, 30),
                rng.integers(0, 4, 30),
                rng.integers(0, 4, 30),
                rng.standard_normal(30),
            )
        ]
        G = rl.QuadTensor(4, entries)
        u, v = rng.standard_normal(4), rng.standard_normal(4)
        np.testing.assert_allclose(
            rl.contract_quad(G, u, v), loop_contract_quad(entries, u, v, 4), atol=1e-14
        )

    def test_single_entry_cubic(self):
        H = rl.CubicTensor(1, [(0, 0, 0, 0, 1.0)])
        np.testing.assert_allclose(rl.contract_cubic(H, [2.0], [2.0], [2.0]), [8.0])

    def test_cubic_matches_loop_oracle(self):
        rng = np.random.default_rng(12)
        entries = [
            (int(p), int(i), int(j), int(k), float(v))
            for p, i, j, k, v in zip(
                rng.integers(0, 3, 40),
                rng.integers(0, 3, 40),
                rng.integers(0, 3, 40),
                rng.integers(0, 3, 40),
                rng.standard_normal(40),
            )
        ]
        H = rl.CubicTensor(3, entries)
        u, v, w = (rng.standard_normal(3) for _ in range(3))
        np.testing.assert_allclose(
            rl.contract_cubic(H, u, v, w),
            loop_contract_cubic(entries, u, v, w, 3),
            atol=1e-14,
        )

    def test_dimension_mismatch(self):
        G = rl.QuadTensor(2, [(0, 0, 0, 1.0)])
        with pytest.raises(DimensionMismatchError):
            rl.contract_quad(G, np.ones(3), np.ones(2))

    def test_index_out_of_range(self):
        with pytest.raises(DimensionMismatchError):
            rl.QuadTensor(2, [(0, 0, 2, 1.0)])

    def test_duplicate_entries_coalesce(self):
        G = rl.QuadTensor(2, [(0, 0, 1, 1.0), (0, 0, 1, 2.0)])
        assert G.entries == [(0, 0, 1, 3.0)]

    def test_symmetrized_preserves_equal_vector_contraction(self):
        rng = np.random.default_rng(13)
        entries = [
            (int(p), int(i), int(j), float(v))
            for p, i, j, v in zip(
                rng.integers(0, 3, 25),
                rng.integers(0, 3, 25),
                rng.integers(0, 3, 25),
                rng.standard_normal(25),
            )
        ]
        G = rl.QuadTensor(3, entries)
        Gs = G.symmetrized()
        for _ in range(5):
            u = rng.standard_normal(3)
            np.testing.assert_allclose(
                rl.contract_quad(G, u, u), rl.contract_quad(Gs, u, u), atol=1e-13
            )

    def test_folded_convention_mapping(self):
        # folded input stores the X1*X2 coefficient once; symmetrizing splits
        # it evenly over both orderings (g_12 = g_21 = c/2)
        G = rl.QuadTensor(2, [(0, 0, 1, 2.0)])
        Gs = G.symmetrized()
        d = Gs.as_dict()
        assert d[(0, 0, 1)] == d[(0, 1, 0)] == 1.0


class TestSymmetryFlag:
    def test_potential_symmetric_accepted(self):
        rl.QuadTensor(
            2, [(0, 0, 1, 1.0), (0, 1, 0, 1.0), (1, 0, 0, 1.0)], potential_symmetric=True
        )

    def test_asymmetric_rejected(self):
        with pytest.raises(SymmetryError):
            rl.QuadTensor(2, [(0, 0, 1, 1.0)], potential_symmetric=True)

    def test_shell_model_is_potential_symmetric(self):
        m = rl.shell_model(1.0, 2.5)
        assert m.G.is_potential_symmetric()
        assert m.H.is_potential_symmetric()


class TestForce:
    def test_rest_position(self):
        m = rl.shell_model(1.0, 2.0)
        np.testing.assert_allclose(rl.force(m, np.zeros(2)), 0.0)

    def test_linear_only(self):
        m = rl.StructuralModel(
            M=np.eye(2),
            K=np.array([[2.0, -1.0], [-1.0, 2.0]]),
            G=rl.QuadTensor(2),
            H=rl.CubicTensor(2),
        )
        u = np.array([0.3, -0.2])
        np.testing.assert_allclose(rl.force(m, u), m.K @ u)

    def test_shell_hand_evaluation(self):
        # hand evaluation of the printed 2-dof polynomial at X = (0.1, 0.1),
        # omega1 = 1, omega2 = 2: F1 = 0.165, F2 = 0.495
        m = rl.shell_model(1.0, 2.0)
        u = np.array([0.1, 0.1])
        f1 = 0.1 + 0.5 * (3 * 0.01 + 0.01) + 4.0 * 0.01 + 2.5 * 0.1 * 0.02
        f2 = 0.4 + 2.0 * (3 * 0.01 + 0.01) + 1.0 * 0.01 + 2.5 * 0.1 * 0.02
        np.testing.assert_allclose(rl.force(m, u), [f1, f2], rtol=1e-14)


class TestDerivatives:
    def test_jacobian_at_origin_is_k(self):
        m = rl.shell_model(1.0, 3.0)
        np.testing.assert_allclose(rl.jacobian(m, np.zeros(2)), m.K)

    def test_jacobian_matches_finite_differences(self):
        rng = np.random.default_rng(21)
        m = random_symmetric_model(4, rng)
        u = rng.standard_normal(4)
        u *= 1.0 / max(1.0, np.linalg.norm(u))
        J = rl.jacobian(m, u)
        J_fd = fd_jacobian(lambda x: rl.force(m, x), u)
        np.testing.assert_allclose(J, J_fd, rtol=1e-6, atol=1e-8)

    def test_jacobian_requires_symmetry(self):
        m = rl.StructuralModel(
            M=np.eye(2),
            K=np.eye(2),
            G=rl.QuadTensor(2, [(0, 0, 1, 1.0)]),
            H=rl.CubicTensor(2),
        )
        with pytest.raises(SymmetryError):
            rl.jacobian(m, np.zeros(2))

    def test_hessian_at_origin_is_2g(self):
        m = rl.shell_model(1.0, 2.0)
        Hs = rl.hessian_action(m, np.zeros(2))
        np.testing.assert_allclose(Hs.dense(), 2.0 * m.G.dense(), atol=1e-14)

    def test_hessian_matches_fd_of_jacobian(self):
        rng = np.random.default_rng(22)
        m = random_symmetric_model(3, rng)
        u = 0.3 * rng.standard_normal(3)
        Hs = rl.hessian_action(m, u).dense()
        h = 1e-6
        for q in range(3):
            up, um = u.copy(), u.copy()
            up[q] += h
            um[q] -= h
            d = (rl.jacobian(m, up) - rl.jacobian(m, um)) / (2 * h)
            np.testing.assert_allclose(Hs[:, :, q], d, rtol=1e-5, atol=1e-7)


class TestModalTransform:
    def test_identity_basis_keeps_tensors(self):
        m = rl.shell_model(1.0, 2.0)
        modal = rl.to_modal(m, np.eye(2), np.array([1.0, 2.0]))
        np.testing.assert_allclose(modal.gd(), m.G.dense(), atol=1e-14)
        np.testing.assert_allclose(modal.hd(), m.H.dense(), atol=1e-14)

    def test_modal_linear_part_diagonal(self):
        rng = np.random.default_rng(23)
        m = random_symmetric_model(3, rng)
        modal = rl.solve_modes(m)
        d = modal.phi.T @ m.K @ modal.phi
        np.testing.assert_allclose(d, np.diag(modal.omega**2), atol=1e-10)

    def test_round_trip_force(self):
        # modal force field equals Phi^T F(Phi X) at matched coordinates
        rng = np.random.default_rng(24)
        m = random_symmetric_model(3, rng)
        modal = rl.solve_modes(m)
        for _ in range(4):
            X = 0.5 * rng.standard_normal(3)
            f_modal = (
                modal.omega**2 * X
                + rl.contract_quad(modal.g, X, X)
                + rl.contract_cubic(modal.h, X, X, X)
            )
            f_phys = modal.phi.T @ rl.force(m, modal.phi @ X)
            np.testing.assert_allclose(f_modal, f_phys, atol=1e-12 * max(1, np.abs(f_phys).max()))

    def test_rejects_unnormalized_basis(self):
        m = rl.shell_model(1.0, 2.0)
        with pytest.raises(DimensionMismatchError):
            rl.to_modal(m, 2.0 * np.eye(2), np.array([1.0, 2.0]))


class TestStructuralModelValidation:
    def test_non_spd_mass_rejected(self):
        with pytest.raises(DecompositionError):
            rl.StructuralModel(
                M=np.array([[1.0, 2.0], [2.0, 1.0]]),
                K=np.eye(2),
                G=rl.QuadTensor(2),
                H=rl.CubicTensor(2),
            )

    def test_spd_failure_index_points_at_minor(self):
        A = np.diag([1.0, 1.0, -1.0])
        assert spd_failure_index(A) == 2

    def test_energy_conserved_quantities_gradient(self):
        # d/du of the stored potential equals the restoring force
        rng = np.random.default_rng(25)
        m = random_symmetric_model(3, rng)
        u = 0.3 * rng.standard_normal(3)
        g = fd_jacobian(
            lambda x: np.array([rl.energy(m, x, np.zeros(3))]), u, h=1e-6
        )[0]
        np.testing.assert_allclose(g, rl.force(m, u), rtol=1e-6, atol=1e-8)
