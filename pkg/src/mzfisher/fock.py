"""Truncated Fock-space value types and single/two-mode expectation values.

A single mode is stored as a dense amplitude vector over ``|0>, ..., |D-1>``;
a pair of modes as a ``D x D`` grid indexed ``(n_a, n_b)``. All containers are
immutable: the underlying arrays are marked read-only after construction.

The differenced number operator is ``N_d = a^dag a - b^dag b``. Its sign only
matters for the mean; every Fisher quantity depends on the variance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

NORM_TOL = 1e-12
EPS_TAIL = 1e-10


class FockError(ValueError):
    """Base class for invalid truncated-Fock-space input."""


class DimensionError(FockError):
    pass


class CutoffError(FockError):
    pass


class NormalizationError(FockError):
    pass


class TruncationError(FockError):
    """The requested cutoff leaves more probability outside the basis than allowed."""

    def __init__(self, message: str, tail: float, required_cutoff: int | None = None):
        super().__init__(message)
        self.tail = tail
        self.required_cutoff = required_cutoff


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=np.complex128, copy=True)
    out.flags.writeable = False
    return out


def _check_norm(amps: np.ndarray) -> None:
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if abs(norm2 - 1.0) > NORM_TOL:
        raise NormalizationError(f"state has squared norm {norm2!r}, expected 1")


@dataclass(frozen=True, eq=False)
class SingleModeState:
    """Pure state of one bosonic mode in a truncated number basis.

    ``truncation_tail`` is the probability mass the constructor had to drop
    beyond the cutoff (0 for states with finite support).
    """

    amps: np.ndarray
    truncation_tail: float = 0.0

    def __post_init__(self):
        amps = _frozen(self.amps)
        if amps.ndim != 1 or amps.size == 0:
            raise DimensionError(f"expected a nonempty 1-D amplitude vector, got shape {amps.shape}")
        _check_norm(amps)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_unnormalized(cls, amps, truncation_tail: float = 0.0) -> SingleModeState:
        amps = np.asarray(amps, dtype=np.complex128)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(amps / norm, truncation_tail)

    @property
    def cutoff(self) -> int:
        return self.amps.size

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def tail_mass(self, k: int) -> float:
        """Probability of finding ``k`` or more photons."""
        return float(np.sum(self.probabilities[k:]))

    def padded(self, cutoff: int) -> SingleModeState:
        if cutoff < self.cutoff:
            raise CutoffError(f"cannot pad cutoff {self.cutoff} down to {cutoff}")
        amps = np.zeros(cutoff, dtype=np.complex128)
        amps[: self.cutoff] = self.amps
        return SingleModeState(amps, self.truncation_tail)


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Pure two-mode state on a ``D x D`` number-basis grid."""

    amps: np.ndarray
    truncation_tail: float = 0.0

    def __post_init__(self):
        amps = _frozen(self.amps)
        if amps.ndim != 2 or amps.shape[0] != amps.shape[1] or amps.size == 0:
            raise DimensionError(f"expected a square 2-D amplitude grid, got shape {amps.shape}")
        _check_norm(amps)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_unnormalized(cls, amps, truncation_tail: float = 0.0) -> TwoModeState:
        amps = np.asarray(amps, dtype=np.complex128)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(amps / norm, truncation_tail)

    @property
    def cutoff(self) -> int:
        return self.amps.shape[0]

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def block_indices(self, total: int) -> np.ndarray:
        """Values of ``n_a`` on the anti-diagonal ``n_a + n_b = total`` inside the grid."""
        D = self.cutoff
        if not 0 <= total <= 2 * D - 2:
            raise CutoffError(f"total photon number {total} outside [0, {2 * D - 2}]")
        return np.arange(max(0, total - D + 1), min(total, D - 1) + 1)

    def block(self, total: int) -> np.ndarray:
        """Amplitudes ``amps[n, total - n]`` for ``n`` in :meth:`block_indices`."""
        n = self.block_indices(total)
        return self.amps[n, total - n]

    def max_total(self) -> int:
        """Largest total photon number carrying a nonzero amplitude."""
        nz = np.nonzero(self.amps)
        return int(np.max(nz[0] + nz[1])) if nz[0].size else 0

    def padded(self, cutoff: int) -> TwoModeState:
        if cutoff < self.cutoff:
            raise CutoffError(f"cannot pad cutoff {self.cutoff} down to {cutoff}")
        amps = np.zeros((cutoff, cutoff), dtype=np.complex128)
        amps[: self.cutoff, : self.cutoff] = self.amps
        return TwoModeState(amps, self.truncation_tail)

    def marginal_probabilities(self) -> tuple[np.ndarray, np.ndarray]:
        p = self.probabilities
        return p.sum(axis=1), p.sum(axis=0)


@dataclass(frozen=True)
class ModeMoments:
    """Single-mode expectation values entering the product-input Fisher formula.

    Quadratures follow ``x = (a + a^dag)/sqrt(2)``, ``p = (a - a^dag)/(i sqrt(2))``
    so the vacuum has ``<x^2> = <p^2> = 1/2``.
    """

    mean: complex
    pair: complex
    pair_dag: complex
    number: float
    number_sq: float
    quad_x2: float
    quad_p2: float
    truncation_tail: float = 0.0


class FisherMethod(str, Enum):
    VARIANCE_FORM = "variance_form"
    MOMENT_FORM = "moment_form"


@dataclass(frozen=True)
class FisherReport:
    qfi: float
    method: FisherMethod
    truncation_tail: float = 0.0
    convention_note: str = ""
    qcrb: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "qcrb", 1.0 / self.qfi if self.qfi > 0 else float("inf"))

    def as_dict(self) -> dict:
        return {
            "qfi": self.qfi,
            "qcrb": self.qcrb,
            "method": self.method.value,
            "truncation_tail": self.truncation_tail,
            "convention_note": self.convention_note,
        }


def tensor(a_state: SingleModeState, b_state: SingleModeState) -> TwoModeState:
    """Product state ``|a> (x) |b>`` on the shared cutoff."""
    if a_state.cutoff != b_state.cutoff:
        raise DimensionError(f"cutoff mismatch: {a_state.cutoff} vs {b_state.cutoff}")
    amps = np.outer(a_state.amps, b_state.amps)
    # re-normalize away the O(1e-16) drift of the outer product
    amps = amps / np.linalg.norm(amps)
    tail = 1.0 - (1.0 - a_state.truncation_tail) * (1.0 - b_state.truncation_tail)
    return TwoModeState(amps, tail)


def moments(state: SingleModeState) -> ModeMoments:
    """Ladder-operator moments by index shifts, ``a|n> = sqrt(n)|n-1>``."""
    c = state.amps
    n = np.arange(state.cutoff, dtype=float)
    prob = np.abs(c) ** 2
    mean = complex(np.vdot(c[:-1], np.sqrt(n[1:]) * c[1:]))
    pair = complex(np.vdot(c[:-2], np.sqrt(n[2:] * n[1:-1]) * c[2:]))
    number = float(np.sum(n * prob))
    number_sq = float(np.sum(n * n * prob))
    quad_x2 = number + 0.5 + pair.real
    quad_p2 = number + 0.5 - pair.real
    return ModeMoments(
        mean=mean,
        pair=pair,
        pair_dag=pair.conjugate(),
        number=number,
        number_sq=number_sq,
        quad_x2=quad_x2,
        quad_p2=quad_p2,
        truncation_tail=state.truncation_tail,
    )


def differenced_number_moments(state: TwoModeState) -> tuple[float, float]:
    """Return ``(<N_d>, <N_d^2>)`` for ``N_d = a^dag a - b^dag b``."""
    n = np.arange(state.cutoff, dtype=float)
    nd = n[:, None] - n[None, :]
    p = state.probabilities
    return float(np.sum(nd * p)), float(np.sum(nd * nd * p))
