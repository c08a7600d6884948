import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fringelab import formulas
from fringelab.coherence import coherent_pattern, phi_grid, visibility_from_pattern
from fringelab.fock import FockState, fidelity
from fringelab.optics import CoherentField, balanced_splitter, coherent_to_fock, propagate_coherent
from fringelab.scenarios import (
    MAX_YOUNG_ORDER,
    classical_channel_model,
    fig2_csv,
    fig2_curve,
    interpolation_input,
    interpolation_scenario,
    phased_interpolation_scenario,
    prepare_interpolation_state,
    single_photon_scenario,
    surface_csv,
    visibility_surface,
    young_scenario,
)

PHIS = phi_grid()


def assert_ok(res):
    assert res.ok, res.failures()


class TestYoung:
    def test_single_photon(self):
        res = young_scenario([0, 1], PHIS)
        assert_ok(res)
        np.testing.assert_allclose(res.quantum_pattern.I_A, 0.5 * (1 + np.cos(PHIS)), atol=1e-12)

    def test_two_photons(self):
        res = young_scenario([0, 0, 1], PHIS)
        assert_ok(res)
        np.testing.assert_allclose(res.quantum_pattern.I_A, 1 + np.cos(PHIS), atol=1e-12)

    def test_truncated_coherent(self):
        cutoff = 12
        coeffs = [math.exp(-0.5) / math.sqrt(math.factorial(n)) for n in range(cutoff + 1)]
        norm = math.sqrt(math.fsum(c * c for c in coeffs))
        res = young_scenario([c / norm for c in coeffs], PHIS)
        assert_ok(res)
        assert res.parameters["N"] == pytest.approx(1.0, abs=1e-8)
        oracle = coherent_pattern(propagate_coherent(CoherentField([1.0, 0]), balanced_splitter(0, 1, 2)), PHIS)
        np.testing.assert_allclose(res.quantum_pattern.I_A, oracle.I_A, atol=1e-8)
        assert abs(res.simulated["V_extracted"] - 1) < 1e-4

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False), min_size=1, max_size=6)
           .filter(lambda c: sum(abs(x) ** 2 for x in c[1:]) > 1e-3))
    def test_universal_visibility(self, coeffs):
        c = np.array(coeffs)
        res = young_scenario(c / np.linalg.norm(c), PHIS)
        assert_ok(res)

    def test_unnormalized(self):
        with pytest.raises(ValueError):
            young_scenario([1, 1])

    def test_order_limit(self):
        with pytest.raises(ValueError):
            young_scenario([0] * (MAX_YOUNG_ORDER + 1) + [1])

    def test_vacuum_has_no_fringe(self):
        res = young_scenario([1])
        assert res.quantum_report is None
        np.testing.assert_array_equal(res.quantum_pattern.I_A, 0.0)


class TestInterpolation:
    def test_endpoints(self):
        one = interpolation_scenario(1.0, PHIS)
        assert_ok(one)
        assert one.simulated["V_Q"] == pytest.approx(1.0, abs=1e-12)
        assert one.simulated["g1_abs"] == pytest.approx(1.0, abs=1e-12)
        zero = interpolation_scenario(0.0, PHIS)
        assert_ok(zero)
        assert zero.simulated["V_Q"] == pytest.approx(0.0, abs=1e-12)
        assert zero.simulated["g1_abs"] == pytest.approx(0.0, abs=1e-12)
        assert sorted(zero.simulated["channel_pair"]) == [pytest.approx(1.0), pytest.approx(1.0)]

    def test_half(self):
        res = interpolation_scenario(0.5, PHIS)
        assert_ok(res)
        assert res.simulated["g1_abs"] == pytest.approx(0.70711, abs=1e-5)
        np.testing.assert_allclose(res.simulated["I_A"], 1 + 0.5 * np.cos(PHIS), atol=1e-12)

    def test_channel_branches(self):
        # direct expansion puts the larger intensity on channel 1
        eta = 0.3
        res = interpolation_scenario(eta, PHIS)
        i1, i2 = res.quantum_report.I1, res.quantum_report.I2
        s = math.sqrt(2 * eta * (1 - eta))
        assert i1 == pytest.approx(1 + s, abs=1e-12)
        assert i2 == pytest.approx(1 - s, abs=1e-12)

    @given(st.floats(0, 1), st.floats(0, 2 * math.pi))
    @settings(max_examples=30, deadline=None)
    def test_formulas_hold(self, eta, phi12):
        assert_ok(interpolation_scenario(eta, PHIS, phi12))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            interpolation_scenario(1.2)
        with pytest.raises(ValueError):
            interpolation_scenario(-0.1)

    def test_suppression_below_classical(self):
        for eta in np.linspace(0, 1, 21):
            res = interpolation_scenario(eta, phi_grid(91))
            assert res.simulated["V_Q"] <= res.simulated["V_C"] + 1e-12

    def test_json(self):
        data = json.loads(json.dumps(interpolation_scenario(0.4, phi_grid(5)).to_dict()))
        assert data["ok"] is True
        assert set(data["closed_form"]) == set(data["simulated"])


class TestPhased:
    def test_reduces_to_unphased(self):
        for eta in (0.0, 0.3, 1.0):
            res = phased_interpolation_scenario(eta, 0.0, PHIS)
            assert_ok(res)
            assert res.simulated["V_Q"] == pytest.approx(eta, abs=1e-12)

    def test_quarter_phase(self):
        res = phased_interpolation_scenario(0.0, math.pi / 2, PHIS)
        assert_ok(res)
        assert res.simulated["V_Q"] == pytest.approx(0.0, abs=1e-12)
        assert res.simulated["V_C"] == pytest.approx(1.0, abs=1e-12)

        res = phased_interpolation_scenario(0.5, math.pi / 2, PHIS)
        assert_ok(res)
        assert res.simulated["V_Q"] == pytest.approx(math.sqrt(0.75), abs=1e-12)
        assert res.simulated["V_C"] == pytest.approx(1.0, abs=1e-12)
        assert abs(res.simulated["V_Q_extracted"] - 0.8660) < 1e-4

    @given(st.floats(0, 1), st.floats(-math.pi, math.pi))
    @settings(max_examples=30, deadline=None)
    def test_formulas_hold(self, eta, beta):
        res = phased_interpolation_scenario(eta, beta, PHIS)
        assert_ok(res)
        assert res.simulated["V_Q"] <= res.simulated["V_C"] + 1e-12

    def test_surface(self):
        pts = visibility_surface([0.0, 0.5, 1.0], [0.0, math.pi / 2], phi_grid(181))
        assert len(pts) == 6
        assert [(p.eta, p.beta) for p in pts[:2]] == [(0.0, 0.0), (0.0, math.pi / 2)]
        text = surface_csv(pts)
        assert text.splitlines()[0].split(",")[:2] == ["eta", "beta"]
        assert len(text.splitlines()) == 7


class TestClassicalModel:
    def test_unit_amplitude(self):
        res = classical_channel_model(1.0, 0.0, PHIS)
        assert_ok(res)
        assert res.classical_pattern.I_A[0] == pytest.approx(2.0)
        assert res.classical_pattern.I_A[360] == pytest.approx(0.0, abs=1e-12)

    def test_offset_follows_phase(self):
        phi12 = 1.0
        res = classical_channel_model(0.6 - 0.2j, phi12, PHIS)
        assert_ok(res)
        est = visibility_from_pattern(res.classical_pattern.I_A, PHIS)
        assert abs(est.phi_max - phi12) <= np.diff(PHIS)[0]

    def test_matches_truncated_fock(self):
        from fringelab.coherence import scan_pattern

        alpha = 0.7
        state, neglected = coherent_to_fock(CoherentField([alpha, alpha]))
        state = state * (1 / math.sqrt(state.norm_squared))
        fock = scan_pattern(state, PHIS)
        res = classical_channel_model(alpha, 0.0, PHIS)
        np.testing.assert_allclose(fock.I_A, res.classical_pattern.I_A, atol=1e-9)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            classical_channel_model(0.0)


class TestSinglePhoton:
    @pytest.mark.parametrize("port", ["a", "b"])
    def test_ports(self, port):
        assert_ok(single_photon_scenario(port, PHIS))

    def test_bad_port(self):
        with pytest.raises(ValueError):
            single_photon_scenario("c")


class TestPreparation:
    def test_angle_zero(self):
        prep = prepare_interpolation_state(0.0)
        assert prep.success_probability == pytest.approx(0.5, abs=1e-12)
        assert fidelity(prep.state, FockState.basis(2, 0)) == pytest.approx(1.0, abs=1e-12)

    def test_angle_quarter_turn(self):
        prep = prepare_interpolation_state(math.pi / 2)
        assert prep.success_probability == pytest.approx(0.5, abs=1e-12)
        assert fidelity(prep.state, FockState.basis(1, 1)) == pytest.approx(1.0, abs=1e-12)

    @given(st.floats(0, math.pi / 2))
    @settings(max_examples=25, deadline=None)
    def test_any_angle(self, angle):
        prep = prepare_interpolation_state(angle, phi_grid(37))
        assert_ok(prep.scenario)
        target = interpolation_input(formulas.angle_to_weight(angle))
        assert fidelity(prep.state, target) == pytest.approx(1.0, abs=1e-12)

    def test_four_mode_oracle(self):
        # hand expansion of the circuit on 1_H^dag 2_V^dag at angle eta, kept branch only
        eta = 0.6
        prep = prepare_interpolation_state(eta)
        kept = {occ[:2]: a for occ, a in prep.full_state.amplitudes.items() if occ[2] == 0 and occ[3] == 0}
        assert abs(kept[(2, 0)]) == pytest.approx(math.cos(eta) / math.sqrt(2), abs=1e-12)
        assert abs(kept[(1, 1)]) == pytest.approx(math.sin(eta) / math.sqrt(2), abs=1e-12)
        # same global phase on both branches
        assert kept[(1, 1)] / kept[(2, 0)] == pytest.approx(math.tan(eta), abs=1e-12)


class TestFig2:
    def test_points(self):
        rows = fig2_curve([0.0, 0.9, 1.0])
        assert (rows[0].g1_sim, rows[0].g1_formula, rows[0].g1_classical) == (
            pytest.approx(0.0, abs=1e-12), pytest.approx(0.0, abs=1e-12), pytest.approx(1.0))
        assert rows[1].g1_sim == pytest.approx(0.9 / math.sqrt(1 - 2 * 0.9 * 0.1), abs=1e-12)
        assert rows[2].g1_sim == pytest.approx(1.0, abs=1e-12)
        assert rows[2].g1_classical == pytest.approx(1.0, abs=1e-12)

    def test_full_grid(self):
        rows = fig2_curve(np.linspace(0, 1, 101))
        assert max(abs(r.g1_sim - r.g1_formula) for r in rows) < 1e-12
        assert all(a.g1_sim <= b.g1_sim + 1e-12 for a, b in zip(rows, rows[1:]))

    def test_csv(self):
        text = fig2_csv(fig2_curve([0.0, 1.0]))
        assert text.splitlines()[0] == "eta,g1_sim,g1_formula,g1_classical"

    def test_domain(self):
        with pytest.raises(ValueError):
            fig2_curve([1.5])


def test_extraction_tolerance():
    from fringelab.scenarios import EXTRACTION_TOL, extraction_tolerance

    assert extraction_tolerance(phi_grid()) == EXTRACTION_TOL
    coarse = phi_grid(37)
    assert extraction_tolerance(coarse) > EXTRACTION_TOL
    # worst-placed sinusoid on the coarse grid still lands inside the bound
    h = coarse[1] - coarse[0]
    for v in (0.2, 0.7, 1.0):
        est = visibility_from_pattern(1 + v * np.cos(coarse - h / 2), coarse).value
        assert abs(est - v) <= extraction_tolerance(coarse)
