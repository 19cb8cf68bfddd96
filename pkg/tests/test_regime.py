"""Tests for the validity-regime checker."""

import json

import pytest

from atomlight.regime import (RegimeCheck, Scenario, check_fresnel,
                              check_fresnel_basis, check_light_series,
                              check_spin_series, fresnel_number)


def anchor_scenario(**overrides):
    params = dict(kappa=1.0, n_photons=1e8, n_atoms=1e6, optical_depth=30.0,
                  wavelength=852e-9, length=0.03, transverse_size=1e-3,
                  detuning=1e9, linewidth=3e7, density=None)
    params.update(overrides)
    return Scenario(**params)


class TestLightSeries:
    def test_anchor_passes(self):
        report = check_light_series(anchor_scenario())
        assert report.passed
        assert len(report.checks) == 3

    def test_values(self):
        report = check_light_series(anchor_scenario())
        by_name = {c.name: c for c in report.checks}
        assert by_name["kappa/sqrt(N_P)"].value == pytest.approx(1e-4)
        assert by_name["(kappa^2/OD)*(N_A/N_P)"].value == pytest.approx(
            (1.0 / 30.0) * 1e-2)

    def test_strong_coupling_fails(self):
        report = check_light_series(anchor_scenario(kappa=100.0,
                                                    n_photons=1e4))
        assert not report.passed
        assert any(c.margin < 0 for c in report.checks)


class TestSpinSeries:
    def test_anchor_passes(self):
        report = check_spin_series(anchor_scenario())
        assert report.passed
        assert len(report.checks) == 4

    def test_kappa2_over_od(self):
        report = check_spin_series(anchor_scenario(kappa=2.0))
        by_name = {c.name: c for c in report.checks}
        assert by_name["kappa^2/OD"].value == pytest.approx(4.0 / 30.0)
        assert not by_name["kappa^2/OD"].passed


class TestODConsistency:
    def test_consistent_density_passes(self):
        sc = anchor_scenario(density=30.0 / (852e-9**2 * 0.03))
        report = check_light_series(sc)
        assert report.passed
        assert len(report.checks) == 4

    def test_inconsistent_density_fails(self):
        sc = anchor_scenario(density=2.0 * 30.0 / (852e-9**2 * 0.03))
        report = check_light_series(sc)
        assert not report.passed


class TestFresnel:
    def test_anchor_value(self):
        # w = 1 mm, lambda = 852 nm, L = 3 cm: F ~ 4e4
        F = fresnel_number(852e-9, 1e-3, 0.03)
        assert F == pytest.approx(1e-6 / (852e-9 * 0.03), rel=1e-12)

    def test_large_f_passes_high_orders(self):
        F = 1e4
        checks = check_fresnel_basis(F, 100)
        assert all(c.passed for c in checks)

    def test_threshold_exact(self):
        assert check_fresnel(100.0, 4, 5).passed        # F = 10*(1+9): boundary passes
        assert not check_fresnel(100.0, 5, 5).passed    # 10*11 > 100

    def test_small_f_fails(self):
        assert not check_fresnel(5.0, 0, 0).passed


class TestReport:
    def test_json_and_table(self):
        report = check_light_series(anchor_scenario())
        payload = json.loads(report.to_json())
        assert payload["passed"] is True
        assert len(payload["checks"]) == 3
        table = report.table()
        assert "overall: pass" in table
        assert "kappa/sqrt(N_P)" in table

    def test_margin_sign(self):
        c = RegimeCheck(name="x", value=0.05, threshold=0.1, passed=True)
        assert c.margin == pytest.approx(0.05)


class TestScenarioValidation:
    def test_positivity(self):
        with pytest.raises(ValueError):
            anchor_scenario(n_atoms=0.0)
        with pytest.raises(ValueError):
            anchor_scenario(detuning=0.0)
