"""Quantum and classical Fisher information for the differential phase.

Convention: the phase generator is ``N_d / 2`` (``phi_1 = -phi_2 = phi_d/2``),
so for a pure state the QFI is ``Var(N_d)`` evaluated after the first beam
splitter, with no extra factor of 4.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .fock import (
    FisherMethod,
    FisherReport,
    ModeMoments,
    TwoModeState,
    differenced_number_moments,
)
from .optics import MachZehnder, MzConvention, beam_splitter_apply

CONVENTION_NOTE = "F = Var(N_d) after the first beam splitter; N_d = a^dag a - b^dag b; phi_1 = -phi_2 = phi_d/2"
QFI_CLAMP = 1e-10
IMAG_TOL = 1e-10
P_FLOOR = 1e-14
VAR_FLOOR = 1e-14
RICHARDSON_RTOL = 1e-4


class FisherConsistencyError(ArithmeticError):
    """The moment-form Fisher information came out with a non-negligible imaginary part."""


class DerivativeInstabilityError(ArithmeticError):
    pass


class DegenerateGridError(ValueError):
    pass


def _clamp(value: float) -> float:
    if -QFI_CLAMP < value < 0:
        return 0.0
    return value


def _variance_report(state: TwoModeState) -> FisherReport:
    mean, mean_sq = differenced_number_moments(state)
    return FisherReport(
        qfi=_clamp(mean_sq - mean * mean),
        method=FisherMethod.VARIANCE_FORM,
        truncation_tail=state.truncation_tail,
        convention_note=CONVENTION_NOTE,
    )


def qfi_variance(state: TwoModeState) -> FisherReport:
    """QFI of an input state: the variance of ``N_d`` in ``B|input>``."""
    return _variance_report(beam_splitter_apply(state))


def qfi_entangled(post_bs_state: TwoModeState) -> FisherReport:
    """QFI of a state that is already past the first beam splitter (no ``B`` applied)."""
    return _variance_report(post_bs_state)


def qfi_product_value(ma: ModeMoments, mb: ModeMoments) -> complex:
    """Moment-form Fisher information of a product input, before any realness check."""
    return (
        2 * ma.number * mb.number
        + ma.number
        + mb.number
        - ma.pair_dag * mb.pair
        - ma.pair * mb.pair_dag
        - 2 * abs(ma.mean) ** 2 * abs(mb.mean) ** 2
        + ma.mean.conjugate() ** 2 * mb.mean**2
        + ma.mean**2 * mb.mean.conjugate() ** 2
    )


def qfi_product(ma: ModeMoments, mb: ModeMoments) -> FisherReport:
    """QFI of ``|xi> (x) |chi>`` from the single-mode moments alone."""
    value = qfi_product_value(ma, mb)
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise FisherConsistencyError(f"moment-form QFI has imaginary part {value.imag!r}")
    tail = 1.0 - (1.0 - ma.truncation_tail) * (1.0 - mb.truncation_tail)
    return FisherReport(
        qfi=_clamp(value.real),
        method=FisherMethod.MOMENT_FORM,
        truncation_tail=tail,
        convention_note=CONVENTION_NOTE,
    )


def qcrb(report: FisherReport | float) -> float:
    """Smallest phase variance any unbiased estimator can reach from one copy."""
    qfi = report.qfi if isinstance(report, FisherReport) else float(report)
    return 1.0 / qfi if qfi > 0 else float("inf")


def _derivative(f, phi: float, step: float):
    # five-point central difference, exact for polynomials up to degree 4
    return (f(phi - 2 * step) - 8 * f(phi - step) + 8 * f(phi + step) - f(phi + 2 * step)) / (12 * step)


def _cfi_at(mz: MachZehnder, phi: float, step: float, p_floor: float) -> float:
    p0 = mz.probabilities(phi)
    keep = p0 > p_floor
    dp = _derivative(mz.probabilities, phi, step)
    return float(np.sum(dp[keep] ** 2 / p0[keep]))


def _cfi_checked(mz: MachZehnder, phi: float, step: float, p_floor: float) -> float:
    coarse = _cfi_at(mz, phi, step, p_floor)
    fine = _cfi_at(mz, phi, step / 2, p_floor)
    if abs(coarse - fine) > RICHARDSON_RTOL * max(abs(coarse), 1e-8):
        raise DerivativeInstabilityError(
            f"CFI at phi={phi!r} changes from {coarse!r} to {fine!r} when halving step {step!r}"
        )
    return coarse


def cfi_photon_counting(
    state: TwoModeState,
    phi_d: float,
    conv: MzConvention | str = MzConvention.INVERSE_B,
    derivative_step: float = 1e-4,
    p_floor: float = P_FLOOR,
) -> float:
    """Classical Fisher information of photon counting behind the second beam splitter.

    ``sum (dp/dphi)^2 / p`` over outcomes with ``p > p_floor``; the derivative
    is a five-point central difference, validated against half the step.
    """
    if derivative_step <= 0:
        raise ValueError("derivative_step must be positive")
    return _cfi_checked(MachZehnder(state, conv), phi_d, derivative_step, p_floor)


def cfi_scan(
    state: TwoModeState,
    phi_grid: Sequence[float],
    conv: MzConvention | str = MzConvention.INVERSE_B,
    derivative_step: float = 1e-4,
    p_floor: float = P_FLOOR,
) -> np.ndarray:
    """CFI at every grid phase; each point is computed independently."""
    mz = MachZehnder(state, conv)
    return np.array([_cfi_checked(mz, float(phi), derivative_step, p_floor) for phi in phi_grid])


def max_cfi(
    state: TwoModeState,
    phi_grid: Sequence[float],
    conv: MzConvention | str = MzConvention.INVERSE_B,
    derivative_step: float = 1e-4,
) -> tuple[float, float]:
    """Return ``(best_phi, best_cfi)`` over the grid."""
    values = cfi_scan(state, phi_grid, conv, derivative_step)
    i = int(np.argmax(values))
    return float(phi_grid[i]), float(values[i])


def moment_estimator_sensitivity(
    state: TwoModeState,
    phi_grid: Sequence[float],
    conv: MzConvention | str = MzConvention.INVERSE_B,
    derivative_step: float = 1e-4,
) -> tuple[float, float]:
    """Best inverse error of estimating ``phi_d`` from the mean of ``N_d^2``.

    At each phase ``S = (d<N_d^2>/dphi)^2 / Var(N_d^2)`` on the output
    photon counts. Points where ``Var(N_d^2)`` is below ``VAR_FLOOR`` are
    skipped, except where the signal slope vanishes too; there the observable
    carries no information and ``S = 0``.

    Returns:
        ``(best_phi, inverse_variance)``.
    """
    if len(phi_grid) == 0:
        raise DegenerateGridError("empty phase grid")
    mz = MachZehnder(state, conv)
    n = np.arange(mz.cutoff, dtype=float)
    nd2 = (n[:, None] - n[None, :]) ** 2

    def signal(phi):
        return float(np.sum(nd2 * mz.probabilities(phi)))

    best_phi, best = None, -np.inf
    # sorted so ties resolve to the smallest phase whatever the input order
    for phi in sorted(float(x) for x in phi_grid):
        p = mz.probabilities(phi)
        mean = float(np.sum(nd2 * p))
        var = float(np.sum(p * (nd2 - mean) ** 2))
        slope = _derivative(signal, phi, derivative_step)
        if var < VAR_FLOOR:
            if slope * slope > VAR_FLOOR:
                continue
            value = 0.0
        else:
            value = slope * slope / var
        if value > best:
            best_phi, best = phi, value
    if best_phi is None:
        raise DegenerateGridError("Var(N_d^2) vanishes at every grid point")
    return best_phi, best
