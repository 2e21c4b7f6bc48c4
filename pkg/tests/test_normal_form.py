"""Normal-form coefficients, mapping, reduced dynamics, resonance handling."""

import numpy as np
import pytest

import romlab as rl
from romlab.errors import ResonanceError

from helpers import nf_composed_residual, random_symmetric_model


def _shell_modal(rho):
    m = rl.shell_model(1.0, rho)
    return rl.solve_modes(m)


class TestCoefficients:
    def test_zero_quadratic_tensor(self):
        m = rl.StructuralModel(
            M=np.eye(2),
            K=np.diag([1.0, 100.0]),
            G=rl.QuadTensor(2),
            H=rl.CubicTensor(2, [(0, 0, 0, 0, 1.0)], potential_symmetric=True),
        )
        modal = rl.solve_modes(m)
        co = rl.nf_coefficients(modal, 0, order=3)
        for arr in (co.a, co.b, co.gamma, co.A, co.B, co.r, co.u, co.mu, co.nu):
            np.testing.assert_allclose(arr, 0.0, atol=1e-14)

    def test_shell_slave_quadratic_value(self):
        # a^2_11 = g (2 wp^2 - ws^2) / (-ws^2 (4 wp^2 - ws^2)) at rho = 10
        modal = _shell_modal(10.0)
        co = rl.nf_coefficients(modal, 0)
        expected = 50.0 * (2.0 - 100.0) / (-100.0 * (4.0 - 100.0))
        np.testing.assert_allclose(co.a[1], expected, rtol=1e-13)
        assert co.a[1] == pytest.approx(-0.51042, abs=5e-6)

    def test_b_denominator_inversion(self):
        # b * (-ws^2 (4wp^2 - ws^2)) / 2 recovers g^s_pp identically
        rng = np.random.default_rng(51)
        for _ in range(5):
            m = random_symmetric_model(4, rng)
            modal = rl.solve_modes(m)
            co = rl.nf_coefficients(modal, 0, guard=1e-4)
            om2 = modal.omega**2
            recovered = co.b * (-om2 * (4 * om2[0] - om2)) / 2.0
            np.testing.assert_allclose(recovered, modal.gd()[:, 0, 0], rtol=1e-10)

    def test_master_entries(self):
        # a^p = -g/(3wp^2), b^p = -2g/(3wp^4), gamma^p = 2g/(3wp^2)
        modal = _shell_modal(10.0)
        co = rl.nf_coefficients(modal, 0)
        g = modal.gd()[0, 0, 0]
        np.testing.assert_allclose(co.a[0], -g / 3.0, rtol=1e-13)
        np.testing.assert_allclose(co.b[0], -2.0 * g / 3.0, rtol=1e-13)
        np.testing.assert_allclose(co.gamma[0], 2.0 * g / 3.0, rtol=1e-13)

    def test_third_order_zero_at_master(self):
        modal = _shell_modal(10.0)
        co = rl.nf_coefficients(modal, 0, order=3)
        assert co.r[0] == co.u[0] == co.mu[0] == co.nu[0] == 0.0

    def test_printed_duplicate_u_mu(self):
        modal = _shell_modal(10.0)
        co = rl.nf_coefficients(modal, 0, order=3)
        np.testing.assert_allclose(co.u[1], co.mu[1], rtol=0)


class TestResonances:
    def test_no_resonance_far_apart(self):
        modal = _shell_modal(10.0)
        rep = rl.detect_resonances(modal, 0, guard=0.05)
        assert not rep.pairs

    def test_two_to_one_flagged(self):
        modal = _shell_modal(2.01)
        rep = rl.detect_resonances(modal, 0, guard=0.05)
        assert len(rep.pairs) == 1
        pair = rep.pairs[0]
        assert pair.kind == "two_to_one" and pair.slave == 1
        assert pair.detuning == pytest.approx(0.01, rel=1e-9)

    def test_one_to_one_flagged_with_wide_guard(self):
        modal = _shell_modal(1.25)
        kinds = rl.detect_resonances(modal, 0, guard=0.3).kinds()
        assert "one_to_one" in kinds

    def test_order2_blocked_by_two_to_one(self):
        modal = _shell_modal(1.98)
        with pytest.raises(ResonanceError) as err:
            rl.nf_coefficients(modal, 0, order=2)
        assert err.value.report.pairs

    def test_order3_blocked_by_one_to_one(self):
        modal = _shell_modal(1.02)
        rl.nf_coefficients(modal, 0, order=2)  # fine at order 2
        with pytest.raises(ResonanceError):
            rl.nf_coefficients(modal, 0, order=3)

    def test_force_overrides_guard(self):
        modal = _shell_modal(1.98)
        co = rl.nf_coefficients(modal, 0, order=2, force=True)
        assert np.all(np.isfinite(co.a))


class TestMap:
    def test_origin_fixed(self):
        modal = _shell_modal(2.5)
        co = rl.nf_coefficients(modal, 0)
        X, Y = rl.nf_map(co, 0.0, 0.0)
        np.testing.assert_allclose(X, 0.0, atol=1e-15)
        np.testing.assert_allclose(Y, 0.0, atol=1e-15)

    def test_orders_differ_only_in_slaves(self):
        modal = _shell_modal(10.0)
        co2 = rl.nf_coefficients(modal, 0, order=2)
        co3 = rl.nf_coefficients(modal, 0, order=3)
        X2, Y2 = rl.nf_map(co2, 0.21, 0.13)
        X3, Y3 = rl.nf_map(co3, 0.21, 0.13)
        assert X2[0] == X3[0] and Y2[0] == Y3[0]
        assert X2[1] != X3[1]  # cubic slave terms present at order 3

    def test_manifold_cut_parabola(self):
        # at zero master velocity the slave displacement is a^2_11 R^2
        modal = _shell_modal(1.25)
        co = rl.nf_coefficients(modal, 0, order=2)
        for r in (0.05, 0.1, 0.2):
            X, _ = rl.nf_map(co, r, 0.0)
            np.testing.assert_allclose(X[1], co.a[1] * r * r, rtol=1e-13)

    def test_grid_broadcast(self):
        modal = _shell_modal(2.5)
        co = rl.nf_coefficients(modal, 0)
        R = np.linspace(-0.2, 0.2, 7)
        S = np.zeros(7)
        X, Y = rl.nf_map(co, R, S)
        assert X.shape == (2, 7)
        np.testing.assert_allclose(X[0], R + co.a[0] * R**2, rtol=1e-13)


class TestReducedDynamics:
    def test_structure(self):
        modal = _shell_modal(10.0)
        co = rl.nf_coefficients(modal, 0)
        osc = rl.nf_reduced_dynamics(co, modal)
        assert osc.c1 == osc.c2 == osc.c3 == osc.c6 == 0.0
        assert osc.method == rl.NF

    def test_pure_duffing_limit(self):
        m = rl.StructuralModel(
            M=np.eye(2),
            K=np.diag([1.0, 9.0]),
            G=rl.QuadTensor(2),
            H=rl.CubicTensor(2, [(0, 0, 0, 0, 0.7)], potential_symmetric=True),
        )
        modal = rl.solve_modes(m)
        osc = rl.nf_reduced_dynamics(rl.nf_coefficients(modal, 0), modal)
        assert osc.c4 == pytest.approx(0.7) and osc.c5 == 0.0

    def test_table_row_closed_form(self):
        # C4 = h - sum_s 2 g^2 (ws^2 - 2wp^2) / (ws^2 (ws^2 - 4wp^2)),
        # C5 = sum_s 4 wp^2 g^2 / (ws^2 (ws^2 - 4wp^2)), sums over all s
        modal = _shell_modal(10.0)
        osc = rl.nf_reduced_dynamics(rl.nf_coefficients(modal, 0), modal)
        gd, om2 = modal.gd(), modal.omega**2
        c4 = modal.hd()[0, 0, 0, 0] - sum(
            2 * gd[s, 0, 0] ** 2 * (om2[s] - 2) / (om2[s] * (om2[s] - 4))
            for s in range(2)
        )
        c5 = sum(4 * gd[s, 0, 0] ** 2 / (om2[s] * (om2[s] - 4)) for s in range(2))
        np.testing.assert_allclose([osc.c4, osc.c5], [c4, c5], rtol=1e-12)

    def test_reduced_dynamics_independent_of_order(self):
        modal = _shell_modal(10.0)
        o2 = rl.nf_reduced_dynamics(rl.nf_coefficients(modal, 0, order=2), modal)
        o3 = rl.nf_reduced_dynamics(rl.nf_coefficients(modal, 0, order=3), modal)
        assert o2.coefficients() == o3.coefficients()


class TestQuadraticCancellation:
    @pytest.mark.parametrize("make_modal", [
        lambda: rl.solve_modes(rl.flat_beam_model(10.0)),
        lambda: rl.solve_modes(rl.flat_beam_model(2.5)),
        lambda: _shell_modal(10.0),
        lambda: _shell_modal(2.5),
    ])
    def test_master_quadratics_vanish(self, make_modal):
        # exact monomial collection of the composed master equation: the
        # R^2, S^2 and RS coefficients must cancel
        modal = make_modal()
        co = rl.nf_coefficients(modal, 0, order=2)
        res = nf_composed_residual(modal, co)
        master = res[0]
        scale = max(np.abs(modal.gd()).max(), 1.0)
        for mono in ((2, 0), (0, 2), (1, 1)):
            assert abs(master.coefficient(*mono)) < 1e-10 * scale

    def test_slave_quadratics_vanish_too(self):
        modal = _shell_modal(10.0)
        co = rl.nf_coefficients(modal, 0, order=2)
        res = nf_composed_residual(modal, co)
        scale = np.abs(modal.gd()).max()
        for mono in ((2, 0), (0, 2), (1, 1)):
            assert abs(res[1].coefficient(*mono)) < 1e-10 * scale

    def test_sampled_point_ratio(self):
        # composed residual decays like the cube of the amplitude
        modal = _shell_modal(2.5)
        co = rl.nf_coefficients(modal, 0, order=2)
        res = nf_composed_residual(modal, co)

        def eval_poly(poly, r, s):
            return sum(c * r**i * s**j for (i, j), c in poly.items())

        r1 = abs(eval_poly(res[0], 1e-2, 1e-2))
        r2 = abs(eval_poly(res[0], 5e-3, 5e-3))
        assert r2 / r1 < 0.2  # cubic scaling gives 1/8


class TestInvarianceDefect:
    def test_third_order_contact_on_flat_model(self):
        # trajectories launched on the order-2 manifold stay within an
        # O(a^3) defect: halving the amplitude shrinks it by >= 6x
        m = rl.flat_beam_model(2.5)
        modal = rl.solve_modes(m)
        co = rl.nf_coefficients(modal, 0, order=2)
        system = rl.ModalSystem(modal)

        def defect(a):
            X0, Y0 = rl.nf_map(co, a, 0.0)
            t, x, v = rl.integrate(system, X0, Y0, 2 * np.pi, 2 * np.pi / 2000)
            d = 0.0
            for k in range(x.shape[1]):
                Xp, Yp = rl.nf_map(co, x[0, k], v[0, k])
                d += np.hypot(x[1, k] - Xp[1], (v[1, k] - Yp[1]) / modal.omega[1])
            return d / x.shape[1]

        d1, d2 = defect(0.05), defect(0.025)
        assert d2 / d1 <= 1.0 / 6.0
