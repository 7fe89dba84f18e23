import math

import numpy as np
import pytest

from oracles import random_single
from mzfisher.fisher import (
    DegenerateGridError,
    DerivativeInstabilityError,
    FisherConsistencyError,
    cfi_photon_counting,
    cfi_scan,
    max_cfi,
    moment_estimator_sensitivity,
    qcrb,
    qfi_entangled,
    qfi_product,
    qfi_variance,
)
from mzfisher.fock import FisherMethod, ModeMoments, SingleModeState, TwoModeState, moments, tensor
from mzfisher.optics import MzConvention
from mzfisher.states import (
    coherent_state,
    noon_state,
    number_state,
    optimal_mean_input,
    squeezed_vacuum,
    twin_fock_input,
)


def fock(na, nb, D=4):
    return tensor(number_state(na, D), number_state(nb, D))


def product_qfi(xi, chi):
    return qfi_product(moments(xi), moments(chi)).qfi


@pytest.mark.parametrize("N, expected", [(1, 1), (2, 4), (3, 7), (4, 12), (7, 31)])
def test_twin_fock_qfi(N, expected):
    assert qfi_variance(twin_fock_input(N, N + 1)).qfi == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("N", [1, 2, 3, 5, 9])
def test_noon_qfi_is_heisenberg(N):
    assert qfi_entangled(noon_state(N, N + 1)).qfi == pytest.approx(N * N, abs=1e-12)


def test_twin_photon_pair_is_number_difference_eigenstate():
    assert qfi_entangled(fock(1, 1)).qfi == 0


def test_moment_form_examples():
    two = moments(number_state(2, 4))
    assert qfi_product(two, two).qfi == pytest.approx(12)
    assert qfi_product(two, two).method is FisherMethod.MOMENT_FORM
    assert product_qfi(coherent_state(1.0, 32), number_state(0, 32)) == pytest.approx(1, abs=1e-10)
    psi = optimal_mean_input(2.0, 64)
    xi = SingleModeState.from_unnormalized(psi.amps[:, 0])
    chi = SingleModeState.from_unnormalized(psi.amps[0, :])
    assert product_qfi(xi, chi) == pytest.approx(8, abs=1e-6)


def test_coherent_plus_vacuum_is_shot_noise():
    psi = tensor(coherent_state(2.0, 40), number_state(0, 40))
    report = qfi_variance(psi)
    assert report.qfi == pytest.approx(4.0, abs=1e-8)
    assert report.method is FisherMethod.VARIANCE_FORM
    assert product_qfi(coherent_state(2.0, 40), number_state(0, 40)) == pytest.approx(4.0, abs=1e-8)


def test_dual_squeezed_vacua():
    assert qfi_variance(optimal_mean_input(2.0, 64)).qfi == pytest.approx(8.0, abs=1e-6)


def test_vacuum_has_no_information():
    report = qfi_variance(fock(0, 0))
    assert report.qfi == 0
    assert report.qcrb == math.inf


def test_qcrb():
    assert qcrb(4.0) == 0.25
    assert qcrb(7.0) == pytest.approx(1 / 7)
    assert qcrb(0.0) == math.inf
    assert qcrb(qfi_variance(twin_fock_input(2, 3))) == pytest.approx(0.25)


def test_report_fields():
    d = qfi_variance(twin_fock_input(2, 3)).as_dict()
    assert set(d) >= {"qfi", "qcrb", "method", "truncation_tail", "convention_note"}
    assert "N_d" in d["convention_note"]


def test_moment_form_matches_variance_form():
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(500):
        D = int(rng.integers(1, 10))
        xi, chi = random_single(rng, D), random_single(rng, D)
        var = qfi_variance(tensor(xi, chi)).qfi
        mom = product_qfi(xi, chi)
        worst = max(worst, abs(var - mom) / max(1.0, var))
    assert worst < 1e-10


@pytest.mark.parametrize(
    "xi, chi",
    [
        (coherent_state(0.8 + 0.3j, 32), squeezed_vacuum(0.5, 32)),
        (squeezed_vacuum(-0.4j, 32), coherent_state(1.1, 32)),
        (number_state(3, 32), coherent_state(-0.6j, 32)),
    ],
)
def test_moment_form_on_named_states(xi, chi):
    assert product_qfi(xi, chi) == pytest.approx(qfi_variance(tensor(xi, chi)).qfi, rel=1e-9)


def test_moment_form_rejects_complex_value():
    bad = ModeMoments(mean=0, pair=1j, pair_dag=1j, number=1, number_sq=1, quad_x2=1.5, quad_p2=1.5, truncation_tail=0)
    good = moments(squeezed_vacuum(0.5, 32))
    with pytest.raises(FisherConsistencyError):
        qfi_product(bad, good)


def test_global_phase_gauge(rng):
    xi, chi = random_single(rng, 8), random_single(rng, 8)
    rotated = SingleModeState(np.exp(0.7j) * xi.amps)
    assert product_qfi(rotated, chi) == pytest.approx(product_qfi(xi, chi), rel=1e-12)


def test_common_phase_rotation_gauge(rng):
    # rotating both modes by exp(i theta n) commutes with the whole interferometer
    xi, chi = random_single(rng, 8), random_single(rng, 8)
    n = np.arange(8)
    rot = np.exp(1.3j * n)
    before = qfi_variance(tensor(xi, chi)).qfi
    after = qfi_variance(tensor(SingleModeState(rot * xi.amps), SingleModeState(rot * chi.amps))).qfi
    assert after == pytest.approx(before, rel=1e-10)


def test_mode_exchange(rng):
    for _ in range(20):
        xi, chi = random_single(rng, 6), random_single(rng, 6)
        assert product_qfi(xi, chi) == pytest.approx(product_qfi(chi, xi), rel=1e-12)
        swapped = TwoModeState(tensor(xi, chi).amps.T)
        assert qfi_variance(swapped).qfi == pytest.approx(qfi_variance(tensor(xi, chi)).qfi, rel=1e-10)


@pytest.mark.parametrize("conv", list(MzConvention))
@pytest.mark.parametrize("phi", [0.3, 1.0, -2.5])
def test_single_photon_cfi(conv, phi):
    assert cfi_photon_counting(fock(1, 0), phi, conv) == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("phi", [0.0, 1.0])
def test_vacuum_cfi(phi):
    assert cfi_photon_counting(fock(0, 0), phi) == 0


def test_cfi_attains_qfi_for_twin_fock():
    grid = np.linspace(0.2, 2.8, 9)
    values = cfi_scan(twin_fock_input(2, 4), grid, "inverse")
    np.testing.assert_allclose(values, 4.0, atol=1e-6)


@pytest.mark.parametrize("conv", list(MzConvention))
def test_cfi_attains_qfi_for_squeezed_pair(conv):
    psi = optimal_mean_input(1.0, 64)
    phi, best = max_cfi(psi, np.linspace(-3, 3, 13), conv)
    assert best == pytest.approx(3.0, rel=1e-6)


@pytest.mark.parametrize(
    "psi",
    [
        twin_fock_input(3, 5),
        optimal_mean_input(0.5, 64),
        tensor(coherent_state(0.9, 24), squeezed_vacuum(0.4, 24)),
        tensor(number_state(2, 24), coherent_state(0.7j, 24)),
    ],
)
def test_cfi_never_exceeds_qfi(psi):
    qfi = qfi_variance(psi).qfi
    values = cfi_scan(psi, np.linspace(-3.0, 3.0, 15), "same")
    assert np.all(values <= qfi + 1e-6)


def test_huge_step_is_rejected():
    psi = optimal_mean_input(1.0, 64)
    with pytest.raises(DerivativeInstabilityError):
        cfi_photon_counting(psi, 0.4, derivative_step=0.5)


def test_nonpositive_step_rejected():
    with pytest.raises(ValueError):
        cfi_photon_counting(fock(1, 0), 0.1, derivative_step=0)


def test_estimator_vacuum_is_zero():
    phi, value = moment_estimator_sensitivity(fock(0, 0), [0.0, 0.5, 1.0])
    assert value == 0


def test_estimator_twin_fock_bounded_by_qfi():
    psi = twin_fock_input(2, 4)
    grid = np.linspace(-3, 3, 61)
    phi, value = moment_estimator_sensitivity(psi, grid, "inverse")
    assert 0 < value <= 4 + 1e-6


def test_estimator_reaches_bound_for_two_photons():
    psi = optimal_mean_input(2.0, 64)
    grid = math.pi / 2 + np.linspace(-0.05, 0.05, 21)
    phi, value = moment_estimator_sensitivity(psi, grid, "inverse")
    assert 0.99 * 8 <= value <= 8 + 1e-6


def test_estimator_is_blind_at_zero_phase():
    # N_d^2 is stationary in phi at phi = 0 for the squeezed pair, so the slope vanishes there
    psi = optimal_mean_input(2.0, 64)
    _, value = moment_estimator_sensitivity(psi, np.linspace(-0.05, 0.05, 11), "inverse")
    assert value < 0.1


def test_estimator_squeezed_pair_near_quarter_fringe():
    psi = optimal_mean_input(1.0, 64)
    grid = np.linspace(-3, 3, 61)
    phi, value = moment_estimator_sensitivity(psi, grid, "inverse")
    assert abs(abs(phi) - math.pi / 2) < 0.4
    assert value <= qfi_variance(psi).qfi + 1e-6


def test_estimator_grid_order_does_not_matter(rng):
    psi = twin_fock_input(3, 5)
    grid = np.linspace(-2.9, 2.9, 23)
    shuffled = rng.permutation(grid)
    assert moment_estimator_sensitivity(psi, grid) == moment_estimator_sensitivity(psi, shuffled)


def test_estimator_empty_grid():
    with pytest.raises(DegenerateGridError):
        moment_estimator_sensitivity(fock(1, 0), [])
