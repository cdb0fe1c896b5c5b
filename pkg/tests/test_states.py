import cmath
import math

import numpy as np
import pytest

from sfwm_sim import (
    DomainError,
    TwoModeState,
    UsageError,
    analyzer_coincidence,
    fringe_visibility,
    mzi_source_state,
    path_entangled_state,
    product_rail_state,
    time_bin_state,
)


def oracle_coincidence(state_amps, basis, rz_s, ry_s, rz_i, ry_i, detector=(0, 0)):
    """Brute-force 4-dim statevector oracle, coded from first principles."""

    def rz(phi):
        return [[cmath.exp(-0.5j * phi), 0.0], [0.0, cmath.exp(0.5j * phi)]]

    def ry(chi):
        return [
            [math.cos(chi / 2.0), -math.sin(chi / 2.0)],
            [math.sin(chi / 2.0), math.cos(chi / 2.0)],
        ]

    def matmul2(a, b):
        return [
            [sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)]
            for i in range(2)
        ]

    u_s = matmul2(ry(ry_s), rz(rz_s))
    u_i = matmul2(ry(ry_i), rz(rz_i))
    labels = {"A1A2": (0, 0), "A1B2": (0, 1), "B1A2": (1, 0), "B1B2": (1, 1)}
    vec = {}
    for ket, amp in zip(basis, state_amps):
        vec[labels[ket]] = amp
    ds, di = detector
    amp_out = 0.0
    for (r_s, r_i), amp in vec.items():
        amp_out += u_s[ds][r_s] * u_i[di][r_i] * amp
    return abs(amp_out) ** 2


class TestTimeBinState:
    def test_alpha_zero(self):
        state = time_bin_state(0.0)
        inv = 1.0 / math.sqrt(2.0)
        np.testing.assert_allclose(state.amplitudes, [inv, inv], atol=1e-15)

    def test_alpha_half_pi_flips_sign(self):
        state = time_bin_state(math.pi / 2.0)
        inv = 1.0 / math.sqrt(2.0)
        np.testing.assert_allclose(state.amplitudes, [inv, -inv], atol=1e-12)

    def test_norm_for_random_phases(self):
        rng = np.random.default_rng(0)
        for alpha in rng.uniform(-10, 10, 200):
            amps = time_bin_state(alpha).amplitudes
            assert abs(np.sum(np.abs(amps) ** 2) - 1.0) < 1e-12


class TestMziSourceState:
    def test_half_pi_leaves_pure_antibunch(self):
        state = mzi_source_state(math.pi / 2.0)
        assert abs(state.amplitude("2,0")) < 1e-15
        assert abs(state.amplitude("0,2")) < 1e-15
        assert abs(abs(state.amplitude("1,1")) - 1.0) < 1e-12

    def test_zero_phase_pure_bunch(self):
        state = mzi_source_state(0.0)
        assert state.amplitude("1,1") == 0.0
        assert abs(state.amplitude("2,0")) == pytest.approx(1 / math.sqrt(2), rel=1e-12)
        assert abs(state.amplitude("0,2")) == pytest.approx(1 / math.sqrt(2), rel=1e-12)

    def test_norm_identity_over_theta(self):
        # |1+e^{2it}|^2/4 + |1-e^{2it}|^2/4 = 1 for all t
        for theta in np.linspace(-2 * math.pi, 2 * math.pi, 401):
            amps = mzi_source_state(theta).amplitudes
            assert abs(np.sum(np.abs(amps) ** 2) - 1.0) < 1e-12


class TestPathEntangledState:
    def test_equal_superposition(self):
        state = path_entangled_state(0.0)
        np.testing.assert_allclose(state.amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-15)

    def test_quarter_pi_gives_relative_phase_i(self):
        state = path_entangled_state(math.pi / 4.0)
        ratio = state.amplitude("B1B2") / state.amplitude("A1A2")
        assert ratio == pytest.approx(1j, abs=1e-12)

    def test_norms(self):
        rng = np.random.default_rng(1)
        for alpha in rng.uniform(-10, 10, 100):
            amps = path_entangled_state(alpha).amplitudes
            assert abs(np.sum(np.abs(amps) ** 2) - 1.0) < 1e-12


class TestAnalyzer:
    def test_path_basis_measurement_is_flat(self):
        for alpha in np.linspace(0, 2 * math.pi, 17):
            p = analyzer_coincidence(path_entangled_state(alpha), 0.3, 0.0, -0.9, 0.0)
            assert p == pytest.approx(0.5, abs=1e-12)

    def test_matches_oracle_on_random_settings(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            alpha = rng.uniform(-math.pi, math.pi)
            angles = rng.uniform(-math.pi, math.pi, size=4)
            detector = (int(rng.integers(2)), int(rng.integers(2)))
            state = path_entangled_state(alpha)
            got = analyzer_coincidence(state, *angles, detector_pair=detector)
            want = oracle_coincidence(
                state.amplitudes, state.basis, *angles, detector=detector
            )
            assert got == pytest.approx(want, abs=1e-12)

    def test_fringe_formula(self):
        # Ry = pi/2 on both: P = (1 + cos(2 alpha + phi_s + phi_i))/4
        rng = np.random.default_rng(9)
        for _ in range(50):
            alpha, phi_s, phi_i = rng.uniform(-math.pi, math.pi, size=3)
            p = analyzer_coincidence(
                path_entangled_state(alpha), phi_s, math.pi / 2, phi_i, math.pi / 2
            )
            assert p == pytest.approx(
                0.25 * (1.0 + math.cos(2 * alpha + phi_s + phi_i)), abs=1e-12
            )

    def test_full_visibility_fringe(self):
        alphas = np.linspace(0.0, 2.0 * math.pi, 65)
        probs = [
            analyzer_coincidence(path_entangled_state(a), 0.0, math.pi / 2, 0.0, math.pi / 2)
            for a in alphas
        ]
        assert fringe_visibility(probs) == pytest.approx(1.0, abs=1e-12)

    def test_product_state_has_no_fringe(self):
        product = product_rail_state([1.0, 0.0], [1 / math.sqrt(2), 1 / math.sqrt(2)])
        probs = [
            analyzer_coincidence(product, 0.0, math.pi / 2, 0.0, math.pi / 2)
            for _ in np.linspace(0.0, 2.0 * math.pi, 33)
        ]
        assert fringe_visibility(probs) == pytest.approx(0.0, abs=1e-12)

    def test_visibility_invariant_under_global_phase(self):
        alphas = np.linspace(0.0, 2.0 * math.pi, 33)

        def sweep(global_phase: complex) -> float:
            probs = [
                analyzer_coincidence(
                    TwoModeState(
                        ("A1A2", "B1B2"),
                        path_entangled_state(a).amplitudes * global_phase,
                    ),
                    0.0,
                    math.pi / 2,
                    0.0,
                    math.pi / 2,
                )
                for a in alphas
            ]
            return fringe_visibility(probs)

        assert sweep(cmath.exp(0.31j)) == pytest.approx(sweep(1.0), abs=1e-12)

    def test_bad_detector_rejected(self):
        with pytest.raises(UsageError):
            analyzer_coincidence(path_entangled_state(0.0), 0, 0, 0, 0, detector_pair=(2, 0))

    def test_non_rail_state_rejected(self):
        with pytest.raises(UsageError):
            analyzer_coincidence(time_bin_state(0.0), 0.0, 0.0, 0.0, 0.0)


class TestValidation:
    def test_unnormalized_state_rejected(self):
        with pytest.raises(DomainError):
            TwoModeState(("a", "b"), np.array([1.0, 1.0]))

    def test_amplitude_count_mismatch_rejected(self):
        with pytest.raises(UsageError):
            TwoModeState(("a", "b", "c"), np.array([1.0, 0.0]))

    def test_visibility_of_empty_fringe_rejected(self):
        with pytest.raises(UsageError):
            fringe_visibility([])
