"""Beam splitter, phase shifters and the Mach-Zehnder photon-counting map.

The 50:50 beam splitter ``B = exp[-i pi/4 (a^dag b + b^dag a)]`` conserves the
total photon number ``T``, so it acts on each anti-diagonal ``{(n, T-n)}`` of
the amplitude grid with a ``(T+1) x (T+1)`` unitary. Blocks that the input
grid only partially covers are still transformed exactly, which is why the
output grid grows to ``T_max + 1`` (never beyond ``2D - 1``) instead of being
clipped back to ``D``.

The differential phase enters as ``phi_1 = phi_d/2``, ``phi_2 = -phi_d/2``, i.e.
``U = exp(i phi_d N_d / 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import linalg, special

from .fock import TwoModeState

MIXING_ANGLE = np.pi / 4


@dataclass(frozen=True)
class PhaseSetting:
    phi1: float
    phi2: float

    @property
    def phi_d(self) -> float:
        return self.phi1 - self.phi2

    @classmethod
    def differential(cls, phi_d: float, common: float = 0.0) -> PhaseSetting:
        return cls(phi_d / 2 + common, -phi_d / 2 + common)


class MzConvention(str, Enum):
    """Orientation of the recombining beam splitter."""

    SAME_B = "same_B"
    INVERSE_B = "inverse_B"

    @classmethod
    def parse(cls, value: str | MzConvention) -> MzConvention:
        if isinstance(value, cls):
            return value
        aliases = {"same": cls.SAME_B, "inverse": cls.INVERSE_B}
        return aliases.get(value) or cls(value)


def hopping_block(total: int) -> np.ndarray:
    """Matrix of ``a^dag b + b^dag a`` on the basis ``|n, total-n>``, n = 0..total."""
    n = np.arange(total)
    off = np.sqrt((n + 1.0) * (total - n))
    return np.diag(off, -1) + np.diag(off, 1)


@lru_cache(maxsize=None)
def _hopping_eigensystem(total: int) -> tuple[np.ndarray, np.ndarray]:
    if total == 0:
        return np.zeros(1), np.ones((1, 1))
    n = np.arange(total)
    off = np.sqrt((n + 1.0) * (total - n))
    w, v = linalg.eigh_tridiagonal(np.zeros(total + 1), off)
    # spectrum is exactly {-total, -total+2, ..., total}
    w = np.round(w)
    w.flags.writeable = False
    v.flags.writeable = False
    return w, v


@lru_cache(maxsize=4096)
def block_unitary(total: int, theta: float) -> np.ndarray:
    """``exp(-i theta (a^dag b + b^dag a))`` restricted to total photon number ``total``."""
    w, v = _hopping_eigensystem(total)
    u = (v * np.exp(-1j * theta * w)) @ v.T
    u.flags.writeable = False
    return u


def wigner_small_d(j2: int, beta: float) -> np.ndarray:
    """Wigner small-d matrix ``d^j_{m'm}(beta)`` for ``j = j2/2``, rows/cols ordered m = -j..j."""
    size = j2 + 1
    out = np.zeros((size, size))
    cb, sb = np.cos(beta / 2), np.sin(beta / 2)
    lf = special.gammaln(np.arange(j2 + 2) + 1.0)  # log factorials
    for i in range(size):  # m' = i - j
        for k in range(size):  # m = k - j
            # with integer shifts: j+m = k, j-m = j2-k, j+m' = i, j-m' = j2-i
            pref = 0.5 * (lf[k] + lf[j2 - k] + lf[i] + lf[j2 - i])
            total = 0.0
            for s in range(max(0, k - i), min(k, j2 - i) + 1):
                log_den = lf[k - s] + lf[s] + lf[j2 - i - s] + lf[i - k + s]
                pc = j2 - 2 * s + k - i
                ps = 2 * s - k + i
                term = np.exp(pref - log_den) * cb**pc * sb**ps
                total += -term if (s - k + i) % 2 else term
            out[i, k] = total
    return out


def block_unitary_wigner(total: int, theta: float) -> np.ndarray:
    """Closed-form alternative to :func:`block_unitary` through SU(2) rotation matrices.

    The alternating sum loses digits for large blocks (about 1e-10 at
    ``total = 40``), so this is a cross-check rather than the default path.

    ``a^dag b + b^dag a = 2 J_x`` with ``J_z = (n_a - n_b)/2``, and
    ``exp(-i beta J_x) = exp(i pi/2 J_z) exp(-i beta J_y) exp(-i pi/2 J_z)``.
    """
    m = np.arange(total + 1) - total / 2
    d = wigner_small_d(total, 2 * theta)
    phase = np.exp(0.5j * np.pi * m)
    return phase[:, None] * d * phase.conj()[None, :]


def _blocks(state: TwoModeState) -> list[np.ndarray]:
    """Full-length block vectors ``v_T[n] = amps[n, T-n]``, n = 0..T, zero outside the grid."""
    blocks = []
    for total in range(state.max_total() + 1):
        v = np.zeros(total + 1, dtype=np.complex128)
        n = state.block_indices(total)
        v[n] = state.amps[n, total - n]
        blocks.append(v)
    return blocks


def _grid(blocks: list[np.ndarray], cutoff: int) -> np.ndarray:
    amps = np.zeros((cutoff, cutoff), dtype=np.complex128)
    for total, v in enumerate(blocks):
        n = np.arange(max(0, total - cutoff + 1), min(total, cutoff - 1) + 1)
        amps[n, total - n] = v[n]
    return amps


def _rotate(state: TwoModeState, theta: float) -> TwoModeState:
    blocks = [block_unitary(t, theta) @ v for t, v in enumerate(_blocks(state))]
    cutoff = max(state.cutoff, len(blocks))
    return TwoModeState(_grid(blocks, cutoff), state.truncation_tail)


def beam_splitter_apply(state: TwoModeState) -> TwoModeState:
    """Apply ``B``; the output cutoff is ``max(D, T_max + 1)``."""
    return _rotate(state, MIXING_ANGLE)


def inverse_beam_splitter_apply(state: TwoModeState) -> TwoModeState:
    return _rotate(state, -MIXING_ANGLE)


def phase_shift_apply(state: TwoModeState, phases: PhaseSetting) -> TwoModeState:
    n = np.arange(state.cutoff)
    factor = np.exp(1j * (phases.phi1 * n[:, None] + phases.phi2 * n[None, :]))
    return TwoModeState(factor * state.amps, state.truncation_tail)


class MachZehnder:
    """Photon-counting statistics of ``B2 U(phi_d) B |input>`` for many phases.

    The first beam splitter is applied once; each phase then costs one
    diagonal phase and one block-wise ``B2`` per total photon number.
    """

    def __init__(self, state: TwoModeState, conv: MzConvention | str = MzConvention.INVERSE_B):
        self.conv = MzConvention.parse(conv)
        mid = beam_splitter_apply(state)
        self.cutoff = mid.cutoff
        self._mid = _blocks(mid)
        theta2 = MIXING_ANGLE if self.conv is MzConvention.SAME_B else -MIXING_ANGLE
        self._b2 = [block_unitary(t, theta2) for t in range(len(self._mid))]

    def output_blocks(self, phi_d: float, common: float = 0.0) -> list[np.ndarray]:
        out = []
        for total, (v, u2) in enumerate(zip(self._mid, self._b2)):
            n = np.arange(total + 1)
            # phi1 n + phi2 (T - n) with phi1 = phi_d/2 + c, phi2 = -phi_d/2 + c
            phase = np.exp(1j * ((phi_d / 2 + common) * n + (-phi_d / 2 + common) * (total - n)))
            out.append(u2 @ (phase * v))
        return out

    def probabilities(self, phi_d: float, common: float = 0.0) -> np.ndarray:
        """Probability grid ``P[n_a, n_b]`` on the output cutoff."""
        amps = _grid(self.output_blocks(phi_d, common), self.cutoff)
        return np.abs(amps) ** 2

    def output_state(self, phi_d: float) -> TwoModeState:
        return TwoModeState.from_unnormalized(_grid(self.output_blocks(phi_d), self.cutoff))


def mz_output_probs(
    state: TwoModeState,
    phi_d: float,
    conv: MzConvention | str = MzConvention.INVERSE_B,
    common: float = 0.0,
) -> np.ndarray:
    """Photon-counting distribution after the full interferometer.

    ``conv`` picks the recombining splitter: ``inverse_B`` (``B^dag``, images
    the input counts at ``phi_d = 0``) or ``same_B``.
    """
    return MachZehnder(state, conv).probabilities(phi_d, common)
