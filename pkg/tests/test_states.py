import math

import numpy as np
import pytest
from scipy.linalg import expm

from oracles import dense_lowering
from mzfisher import fisher
from mzfisher.fock import EPS_TAIL, CutoffError, TruncationError, moments
from mzfisher.states import (
    SpecError,
    SqueezeSpec,
    coherent_state,
    from_spec,
    noon_state,
    number_state,
    optimal_mean_input,
    optimal_split_input,
    squeezed_vacuum,
    squeezed_vacuum_amplitudes,
    twin_fock_input,
)

R_ONE = math.asinh(1.0)  # sinh^2 r = 1


def squeeze_expm_oracle(gamma, D):
    """``exp[(gamma a^2 - gamma^* a^dag^2)/2]|0>`` from the truncated generator."""
    a = dense_lowering(D)
    gen = 0.5 * (gamma * a @ a - np.conj(gamma) * a.T @ a.T)
    return expm(gen)[:, 0]


def test_number_state():
    assert number_state(0, 8).amps[0] == 1
    psi = number_state(3, 8)
    assert psi.amps[3] == 1 and np.count_nonzero(psi.amps) == 1
    with pytest.raises(CutoffError):
        number_state(8, 8)


def test_coherent_zero_is_vacuum():
    np.testing.assert_array_equal(coherent_state(0, 5).amps, [1, 0, 0, 0, 0])


def test_coherent_poisson_mean():
    psi = coherent_state(1.0, 32)
    assert moments(psi).number == pytest.approx(1.0, abs=1e-10)
    p = psi.probabilities
    np.testing.assert_allclose(p[:10], [math.exp(-1) / math.factorial(n) for n in range(10)], rtol=1e-10)


def test_coherent_truncation_error_carries_cutoff():
    with pytest.raises(TruncationError) as info:
        coherent_state(4.0, 8)
    D = info.value.required_cutoff
    assert D > 8
    coherent_state(4.0, D)
    with pytest.raises(TruncationError):
        coherent_state(4.0, D - 1)


def test_auto_cutoff_doubles():
    psi = coherent_state(4.0, 8, auto_cutoff=True)
    assert psi.cutoff in (16, 32, 64)
    assert psi.truncation_tail <= EPS_TAIL


def test_auto_cutoff_respects_cap():
    with pytest.raises(TruncationError):
        optimal_mean_input(4.0, 8, auto_cutoff=True, max_cutoff=64)


def test_squeezed_zero_is_vacuum():
    np.testing.assert_array_equal(squeezed_vacuum(0.0, 4).amps, [1, 0, 0, 0])


def test_squeezed_mean_photon_number():
    # D=40 leaves ~1e-7 of the distribution out for sinh^2 r = 1, above the 1e-10 policy
    with pytest.raises(TruncationError) as info:
        squeezed_vacuum(R_ONE, 40)
    assert info.value.required_cutoff <= 64
    psi = squeezed_vacuum(R_ONE, 64)
    assert moments(psi).number == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("r", [0.2, 0.8, 1.1])
def test_squeezed_quadratures(r):
    plus = moments(squeezed_vacuum(r, 16, auto_cutoff=True))
    minus = moments(squeezed_vacuum(-r, 16, auto_cutoff=True))
    assert plus.quad_x2 == pytest.approx(math.exp(-2 * r) / 2, abs=1e-9)
    assert plus.quad_p2 == pytest.approx(math.exp(2 * r) / 2, abs=1e-8)
    assert minus.quad_x2 == pytest.approx(plus.quad_p2, abs=1e-12)
    assert minus.quad_p2 == pytest.approx(plus.quad_x2, abs=1e-12)


@pytest.mark.parametrize("gamma", [0.3, -0.7, 1.2, 0.5 * np.exp(0.9j)])
def test_squeezed_odd_entries_exactly_zero(gamma):
    psi = squeezed_vacuum(gamma, 16, auto_cutoff=True)
    assert np.all(psi.amps[1::2] == 0)


@pytest.mark.parametrize("gamma", [0.2, -0.35, 0.3 * np.exp(2.1j)])
def test_squeezed_matches_truncated_generator_at_cutoff_40(gamma):
    psi = squeezed_vacuum(gamma, 40)
    np.testing.assert_allclose(psi.amps, squeeze_expm_oracle(gamma, 40), atol=1e-8)


@pytest.mark.parametrize("gamma", [0.5, 1.0, -1.5, 1.5 * np.exp(0.4j)])
def test_squeezed_recursion_matches_large_space_expm(gamma):
    # edge distortion of the truncated generator stays far from the first 40 entries
    oracle = squeeze_expm_oracle(gamma, 600)[:40]
    np.testing.assert_allclose(squeezed_vacuum_amplitudes(gamma, 40), oracle, atol=1e-8)


def test_twin_fock():
    np.testing.assert_array_equal(np.argwhere(twin_fock_input(2, 4).amps), [[1, 1]])
    np.testing.assert_array_equal(np.argwhere(twin_fock_input(3, 4).amps), [[2, 1]])
    np.testing.assert_array_equal(np.argwhere(twin_fock_input(3, 4, exchange=True).amps), [[1, 2]])
    np.testing.assert_array_equal(np.argwhere(twin_fock_input(0, 2).amps), [[0, 0]])
    with pytest.raises(CutoffError):
        twin_fock_input(8, 4)


def test_noon():
    s = 1 / math.sqrt(2)
    one = noon_state(1, 3).amps
    assert one[1, 0] == pytest.approx(s) and one[0, 1] == pytest.approx(s)
    two = noon_state(2, 3).amps
    assert two[2, 0] == pytest.approx(s) and two[0, 2] == pytest.approx(s)
    assert noon_state(0, 3).amps[0, 0] == 1
    with pytest.raises(ValueError):
        noon_state(0, 3, allow_vacuum=False)
    with pytest.raises(CutoffError):
        noon_state(3, 3)


def test_optimal_mean_vacuum():
    psi = optimal_mean_input(0.0, 4)
    assert psi.amps[0, 0] == 1 and np.count_nonzero(psi.amps) == 1


def test_optimal_mean_photon_split():
    psi = optimal_mean_input(2.0, 64)
    pa, pb = psi.marginal_probabilities()
    n = np.arange(psi.cutoff)
    assert n @ pa == pytest.approx(1.0, abs=1e-8)
    assert n @ pb == pytest.approx(1.0, abs=1e-8)
    assert psi.truncation_tail < EPS_TAIL
    assert fisher.qfi_variance(psi).qfi == pytest.approx(8.0, abs=1e-6)


def test_optimal_mean_amplitudes_real():
    psi = optimal_mean_input(1.5, 16, auto_cutoff=True)
    assert np.all(psi.amps.imag == 0)
    # S_a(-r) has positive amplitudes, S_b(r) alternating ones
    assert np.all(psi.amps[::2, 0].real > 0)
    assert np.all(np.sign(psi.amps[0, ::2].real) == (-1) ** np.arange(psi.cutoff // 2))


def test_optimal_split_photon_numbers():
    psi = optimal_split_input(1.0, 2.0, 20, auto_cutoff=True)
    pa, pb = psi.marginal_probabilities()
    n = np.arange(psi.cutoff)
    assert (n @ pa, n @ pb) == pytest.approx((1.0, 2.0), abs=1e-8)


def test_squeeze_spec():
    spec = SqueezeSpec.from_mean_photons(2.0, sign=-1)
    assert spec.gamma.real < 0
    assert math.sinh(spec.r) ** 2 == pytest.approx(2.0)


class TestFromSpec:
    def test_number(self):
        assert from_spec({"type": "number", "n": 2, "cutoff": 4}).amps[2] == 1

    def test_cutoff_default(self):
        assert from_spec('{"type": "number", "n": 1}', default_cutoff=6).cutoff == 6

    @pytest.mark.parametrize("alpha", [[0.5, 0.5], {"re": 0.5, "im": 0.5}])
    def test_complex_forms(self, alpha):
        psi = from_spec({"type": "coherent", "alpha": alpha, "cutoff": 24})
        assert moments(psi).mean == pytest.approx(0.5 + 0.5j, abs=1e-12)

    def test_two_mode_types(self):
        assert from_spec({"type": "twin_fock", "N": 4, "cutoff": 4}).amps[2, 2] == 1
        assert from_spec({"type": "noon", "N": 2, "cutoff": 3}).amps[2, 0] != 0
        assert from_spec({"type": "optimal_mean", "N_mean": 1, "cutoff": 64}).cutoff == 64

    @pytest.mark.parametrize(
        "spec, path",
        [
            ({"type": "number", "cutoff": 4}, "$.n"),
            ({"type": "laser", "cutoff": 4}, "$.type"),
            ({"type": "number", "n": "two", "cutoff": 4}, "$.n"),
            ({"type": "number", "n": 1.5, "cutoff": 4}, "$.n"),
            ({"type": "coherent", "alpha": [1, 2, 3], "cutoff": 4}, "$.alpha"),
            ({"type": "number", "n": 1}, "$.cutoff"),
            ({"type": "optimal_mean", "N_mean": -1, "cutoff": 4}, "$.N_mean"),
            ("[1, 2]", "$"),
            ("{not json", "$"),
        ],
    )
    def test_errors_name_the_field(self, spec, path):
        with pytest.raises(SpecError) as info:
            from_spec(spec)
        assert info.value.path == path
