"""Benchmark model construction and JSON ingestion."""

import json

import numpy as np
import pytest

import romlab as rl
from romlab.errors import DimensionMismatchError, ModelFormatError
from romlab.models import flat_beam_from_continuum, model_from_dict, model_to_dict


class TestFlatBeam:
    def test_parameter_choice(self):
        m = rl.flat_beam_model(10.0, D=2.67, Gbar=0.63)
        assert m.K[1, 1] == pytest.approx(100.0)
        assert m.H.dense()[0, 0, 0, 0] == pytest.approx(2.67)

    def test_uncoupled_when_gbar_zero(self):
        m = rl.flat_beam_model(3.0, Gbar=0.0)
        assert m.G.nnz == 0

    def test_no_master_self_quadratic(self):
        m = rl.flat_beam_model(5.0)
        assert m.G.dense()[0, 0, 0] == 0.0

    def test_full_sum_entries(self):
        m = rl.flat_beam_model(4.0, Gbar=0.5)
        gd = m.G.dense()
        c = 0.5 * 4.0
        assert gd[0, 0, 1] == gd[0, 1, 0] == gd[1, 0, 0] == c

    def test_rejects_nonpositive_rho(self):
        with pytest.raises(DimensionMismatchError):
            rl.flat_beam_model(-1.0)


class TestContinuumReduction:
    def test_beta_root(self):
        p = flat_beam_from_continuum(0.1)
        assert abs(np.cos(p.beta) * np.cosh(p.beta) - 1.0) < 1e-8
        assert p.beta == pytest.approx(4.7300, abs=1e-4)

    def test_galerkin_integral_symmetry(self):
        p = flat_beam_from_continuum(0.05)
        assert p.G_raw == pytest.approx(p.C_raw, abs=1e-6)

    def test_printed_coefficients(self):
        p = flat_beam_from_continuum(0.1)
        assert p.G_raw == pytest.approx(1.23, abs=0.01)
        assert p.C_raw == pytest.approx(1.23, abs=0.01)
        assert p.D == pytest.approx(2.67, abs=0.01)

    def test_slenderness_relation(self):
        for sigma in (0.02, 0.05, 0.1, 0.2):
            p = flat_beam_from_continuum(sigma)
            assert p.rho == pytest.approx(1.95 / sigma, rel=5e-3)

    def test_gbar_scaling_chain(self):
        # Gbar = G beta^2 / (4 pi sqrt(12)) lands on the rounded 0.63 default
        p = flat_beam_from_continuum(0.1)
        expected = p.G_raw * p.beta**2 / (4 * np.pi * np.sqrt(12))
        assert p.Gbar == pytest.approx(expected, rel=1e-12)
        assert p.Gbar == pytest.approx(0.63, abs=0.005)

    def test_sigma_bounds(self):
        with pytest.raises(DimensionMismatchError):
            flat_beam_from_continuum(1.5)


class TestShell:
    def test_symmetric_under_coordinate_swap(self):
        m = rl.shell_model(1.0, 1.0)
        gd = m.G.dense()
        np.testing.assert_allclose(gd[0], gd[1].T @ np.eye(2), atol=1e-14)
        np.testing.assert_allclose(gd[0, 0, 0], gd[1, 1, 1])
        hd = m.H.dense()
        np.testing.assert_allclose(hd[0, 0, 0, 0], hd[1, 1, 1, 1])

    def test_printed_entries_at_rho_10(self):
        m = rl.shell_model(1.0, 10.0)
        gd = m.G.dense()
        assert gd[1, 0, 0] == pytest.approx(50.0)
        assert gd[0, 0, 0] == pytest.approx(1.5)

    def test_potential_symmetry(self):
        m = rl.shell_model(1.0, 2.5)
        assert m.G.is_potential_symmetric() and m.H.is_potential_symmetric()

    def test_eom_matches_printed_polynomial(self):
        # both equations evaluated against the closed-form restoring force
        w1, w2 = 1.0, 2.5
        m = rl.shell_model(w1, w2)
        for X in ([0.1, -0.2], [0.31, 0.17]):
            X1, X2 = X
            f1 = (
                w1**2 * X1
                + w1**2 / 2 * (3 * X1**2 + X2**2)
                + w2**2 * X1 * X2
                + (w1**2 + w2**2) / 2 * X1 * (X1**2 + X2**2)
            )
            f2 = (
                w2**2 * X2
                + w2**2 / 2 * (3 * X2**2 + X1**2)
                + w1**2 * X1 * X2
                + (w1**2 + w2**2) / 2 * X2 * (X1**2 + X2**2)
            )
            np.testing.assert_allclose(rl.force(m, np.array(X)), [f1, f2], rtol=1e-13)


class TestFileFormat:
    def test_round_trip_identity(self, tmp_path):
        m = rl.shell_model(1.0, 3.0)
        path = tmp_path / "shell.json"
        rl.save_model(m, path)
        m2 = rl.load_model(path)
        assert m2.G.entries == m.G.entries
        assert m2.H.entries == m.H.entries
        np.testing.assert_array_equal(m2.K, m.K)
        np.testing.assert_array_equal(m2.M, m.M)

    def test_non_spd_mass_reports_minor(self):
        doc = {
            "n": 2,
            "mass": [1.0, 2.0, 2.0, 1.0],
            "stiffness": [1.0, 0.0, 0.0, 1.0],
        }
        with pytest.raises(ModelFormatError, match="leading minor 2"):
            model_from_dict(doc)

    def test_bad_entry_reports_location(self):
        doc = {
            "n": 2,
            "mass": "identity",
            "stiffness": [1.0, 0.0, 0.0, 1.0],
            "quadratic": [[0, 0, 5, 1.0]],
        }
        with pytest.raises(ModelFormatError, match="entry 0"):
            model_from_dict(doc)

    def test_symmetrize_option(self):
        doc = {
            "n": 2,
            "mass": "identity",
            "stiffness": [1.0, 0.0, 0.0, 4.0],
            "quadratic": [[0, 0, 1, 2.0]],
            "symmetrize": True,
        }
        m = model_from_dict(doc)
        d = m.G.as_dict()
        assert d[(0, 0, 1)] == d[(0, 1, 0)] == 1.0

    def test_backbone_deterministic_through_round_trip(self, tmp_path):
        m = rl.shell_model(1.0, 10.0)
        path = tmp_path / "m.json"
        rl.save_model(m, path)
        m2 = rl.load_model(path)

        def run(model):
            modal = rl.solve_modes(model)
            osc = rl.build_rom(modal, 0, rl.NF, rl.nf_coefficients(modal, 0))
            curve = rl.backbone(osc, steps=12, max_amp=0.2)
            return curve.omegas()

        np.testing.assert_allclose(run(m), run(m2), rtol=0, atol=1e-12)

    def test_invalid_json_message(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ModelFormatError, match="invalid JSON"):
            rl.load_model(path)

    def test_model_to_dict_identity_mass_keyword(self):
        m = rl.flat_beam_model(2.0)
        assert model_to_dict(m)["mass"] == "identity"
