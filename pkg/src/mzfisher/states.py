"""Constructors for the input-state families used by the interferometer analysis.

Every constructor that truncates an infinite-support state records the
dropped probability in ``truncation_tail``. By default a cutoff that drops
more than ``tail_tol`` raises :class:`TruncationError` carrying the smallest
sufficient cutoff; with ``auto_cutoff=True`` the cutoff is doubled until the
tail is small enough (up to ``MAX_AUTO_CUTOFF``).

Squeeze convention: ``S(gamma) = exp[(gamma a^2 - gamma^* a^dag^2)/2]``.
For real ``gamma = r > 0`` the ``x`` quadrature is squeezed; ``gamma = -r``
squeezes ``p``. Complex ``gamma`` is accepted as a natural extension.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from .fock import (
    EPS_TAIL,
    CutoffError,
    FockError,
    SingleModeState,
    TwoModeState,
    TruncationError,
    tensor,
)

MAX_AUTO_CUTOFF = 512


@dataclass(frozen=True)
class SqueezeSpec:
    gamma: complex

    @property
    def r(self) -> float:
        return abs(self.gamma)

    @classmethod
    def from_mean_photons(cls, n_mean: float, sign: int = 1) -> SqueezeSpec:
        """Real squeeze parameter ``sign * arcsinh(sqrt(n_mean))``."""
        if n_mean < 0:
            raise ValueError("mean photon number must be nonnegative")
        return cls(sign * math.asinh(math.sqrt(n_mean)))


def _gauge_fix(amps: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(amps)
    if nz.size == 0:
        return amps
    first = amps.flat[nz[0]]
    return amps * (abs(first) / first)


def _resolve_cutoff(
    tail_of, D: int, tail_tol: float, auto_cutoff: bool, what: str, max_cutoff: int = MAX_AUTO_CUTOFF
) -> tuple[int, float]:
    """Apply the cutoff policy; ``tail_of(D)`` is the probability beyond ``D``."""
    tail = tail_of(D)
    if tail <= tail_tol:
        return D, tail
    if auto_cutoff:
        while D < max_cutoff:
            D = min(2 * D, max_cutoff)
            tail = tail_of(D)
            if tail <= tail_tol:
                return D, tail
    required = _required_cutoff(tail_of, tail_tol)
    hint = f"; cutoff {required} would suffice" if required is not None else ""
    raise TruncationError(f"{what}: tail mass {tail:.3e} beyond cutoff {D} exceeds {tail_tol:.1e}{hint}", tail, required)


def _required_cutoff(tail_of, tail_tol: float) -> int | None:
    hi = 1
    while tail_of(hi) > tail_tol:
        hi *= 2
        if hi > 1 << 16:
            return None
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if tail_of(mid) > tail_tol:
            lo = mid
        else:
            hi = mid
    return hi


def number_state(n: int, D: int) -> SingleModeState:
    if not 0 <= n < D:
        raise CutoffError(f"number state |{n}> does not fit below cutoff {D}")
    amps = np.zeros(D, dtype=np.complex128)
    amps[n] = 1.0
    return SingleModeState(amps)


def _coherent_tail(alpha: complex):
    mu = abs(alpha) ** 2
    return lambda D: float(stats.poisson.sf(D - 1, mu)) if mu > 0 else 0.0


def coherent_state(
    alpha: complex,
    D: int,
    *,
    tail_tol: float = EPS_TAIL,
    auto_cutoff: bool = False,
    max_cutoff: int = MAX_AUTO_CUTOFF,
) -> SingleModeState:
    D, tail = _resolve_cutoff(
        _coherent_tail(alpha), D, tail_tol, auto_cutoff, f"coherent state alpha={alpha}", max_cutoff
    )
    n = np.arange(D)
    if alpha == 0:
        amps = np.zeros(D, dtype=np.complex128)
        amps[0] = 1.0
    else:
        # log-space avoids overflow of alpha**n / sqrt(n!) at large n
        log_mag = n * math.log(abs(alpha)) - 0.5 * special.gammaln(n + 1)
        amps = np.exp(log_mag - log_mag.max()) * np.exp(1j * np.angle(alpha) * n)
    return SingleModeState.from_unnormalized(_gauge_fix(amps), tail)


def squeezed_vacuum_amplitudes(gamma: complex, size: int) -> np.ndarray:
    """Exact amplitudes ``<k|S(gamma)|0>`` for ``k < size`` (not renormalized).

    Uses the even-photon ratio ``c_{2m+2}/c_{2m} = mu sqrt((2m+1)/(2m+2))``
    with ``mu = -exp(-i arg gamma) tanh|gamma|`` and ``c_0 = 1/sqrt(cosh|gamma|)``.
    """
    r = abs(gamma)
    amps = np.zeros(size, dtype=np.complex128)
    if size == 0:
        return amps
    amps[0] = 1.0 / math.sqrt(math.cosh(r))
    if r == 0 or size < 3:
        return amps
    # conj(gamma)/|gamma| keeps real gamma exactly real
    mu = -(complex(gamma).conjugate() / r) * math.tanh(r)
    m = np.arange((size - 1) // 2)
    ratios = mu * np.sqrt((2 * m + 1) / (2 * m + 2))
    amps[2::2] = amps[0] * np.cumprod(ratios)
    return amps


def _squeezed_tail(r: float):
    if r == 0:
        return lambda D: 0.0
    t2 = math.tanh(r) ** 2
    log_c0 = -math.log(math.cosh(r))

    def tail(D: int) -> float:
        # probabilities of |2m>: c0^2 t2^m (2m)! / (4^m m!^2), summed from the first even index >= D
        m0 = (D + 1) // 2
        span = int(800 / -math.log(t2)) + 10
        m = np.arange(m0, m0 + span)
        log_binom = special.gammaln(2 * m + 1) - 2 * special.gammaln(m + 1) - m * math.log(4)
        return float(np.sum(np.exp(log_c0 + m * math.log(t2) + log_binom)))

    return tail


def squeezed_vacuum(
    spec: SqueezeSpec | complex,
    D: int,
    *,
    tail_tol: float = EPS_TAIL,
    auto_cutoff: bool = False,
    max_cutoff: int = MAX_AUTO_CUTOFF,
) -> SingleModeState:
    """Squeezed vacuum ``S(gamma)|0>`` truncated to ``D`` number states.

    Example:
        >>> psi = squeezed_vacuum(SqueezeSpec(0.3), 24)
        >>> bool(abs(psi.amps[1]) == 0)
        True
    """
    gamma = spec.gamma if isinstance(spec, SqueezeSpec) else spec
    D, tail = _resolve_cutoff(
        _squeezed_tail(abs(gamma)), D, tail_tol, auto_cutoff, f"squeezed vacuum gamma={gamma}", max_cutoff
    )
    return SingleModeState.from_unnormalized(squeezed_vacuum_amplitudes(gamma, D), tail)


def twin_fock_input(N: int, D: int, *, exchange: bool = False) -> TwoModeState:
    """``|N/2, N/2>`` for even N, ``|(N+1)/2, (N-1)/2>`` for odd N.

    ``exchange=True`` gives the mode-swapped odd variant.
    """
    if N < 0:
        raise ValueError("photon number must be nonnegative")
    hi, lo = (N + 1) // 2, N // 2
    if exchange:
        hi, lo = lo, hi
    return tensor(number_state(hi, D), number_state(lo, D))


def noon_state(N: int, D: int, *, allow_vacuum: bool = True) -> TwoModeState:
    """``(|N,0> + |0,N>)/sqrt(2)``, meant as a post-beam-splitter state."""
    if not 0 <= N < D:
        raise CutoffError(f"N00N state with N={N} does not fit below cutoff {D}")
    amps = np.zeros((D, D), dtype=np.complex128)
    if N == 0:
        if not allow_vacuum:
            raise ValueError("N=0 N00N state is just the vacuum")
        amps[0, 0] = 1.0
        return TwoModeState(amps)
    amps[N, 0] = amps[0, N] = 1 / math.sqrt(2)
    return TwoModeState.from_unnormalized(amps)


def optimal_mean_input(
    N_mean: float,
    D: int,
    *,
    tail_tol: float = EPS_TAIL,
    auto_cutoff: bool = False,
    max_cutoff: int = MAX_AUTO_CUTOFF,
) -> TwoModeState:
    """Dual squeezed vacua ``S_a(-r)|0> (x) S_b(r)|0>`` with ``sinh^2 r = N_mean/2``.

    ``tail_tol`` bounds the two-mode tail; each mode gets half of it.
    """
    return optimal_split_input(
        N_mean / 2, N_mean / 2, D, tail_tol=tail_tol, auto_cutoff=auto_cutoff, max_cutoff=max_cutoff
    )


def optimal_split_input(
    N_a: float,
    N_b: float,
    D: int,
    *,
    tail_tol: float = EPS_TAIL,
    auto_cutoff: bool = False,
    max_cutoff: int = MAX_AUTO_CUTOFF,
) -> TwoModeState:
    """``S_a(-r)|0> (x) S_b(r')|0>`` with ``sinh^2 r = N_a`` and ``sinh^2 r' = N_b``."""
    ra = SqueezeSpec.from_mean_photons(N_a, sign=-1)
    rb = SqueezeSpec.from_mean_photons(N_b, sign=+1)
    # both modes share one cutoff: resolve it for the more demanding mode first
    big = ra if ra.r >= rb.r else rb
    D = squeezed_vacuum(big, D, tail_tol=tail_tol / 2, auto_cutoff=auto_cutoff, max_cutoff=max_cutoff).cutoff
    xi = squeezed_vacuum(ra, D, tail_tol=tail_tol / 2)
    chi = squeezed_vacuum(rb, D, tail_tol=tail_tol / 2)
    return tensor(xi, chi)


# ---------------------------------------------------------------------------
# JSON state specs
# ---------------------------------------------------------------------------

SINGLE_MODE_TYPES = ("number", "coherent", "squeezed_vacuum")
TWO_MODE_TYPES = ("twin_fock", "noon", "optimal_mean")


class SpecError(FockError):
    """Malformed state spec; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _field(spec: dict, key: str, path: str, kind):
    if key not in spec:
        raise SpecError(f"{path}.{key}", "missing required field")
    value = spec[key]
    try:
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"{path}.{key}", f"invalid value {value!r} ({exc})") from None


def _complex(value) -> complex:
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    raise TypeError("expected a number, [re, im] or {'re': .., 'im': ..}")


def _int(value) -> int:
    if isinstance(value, bool) or not float(value).is_integer():
        raise TypeError("expected an integer")
    return int(value)


def from_spec(
    spec: dict | str,
    *,
    default_cutoff: int | None = None,
    auto_cutoff: bool = False,
    path: str = "$",
) -> SingleModeState | TwoModeState:
    """Build a state from a JSON-style spec.

    Recognized shapes (``cutoff`` may be omitted when ``default_cutoff`` is set)::

        {"type": "number", "n": 2, "cutoff": 8}
        {"type": "coherent", "alpha": 1.0 | [re, im] | {"re": .., "im": ..}, "cutoff": 32}
        {"type": "squeezed_vacuum", "gamma": 0.88 | [re, im], "cutoff": 64}
        {"type": "twin_fock", "N": 4, "cutoff": 8, "exchange": false}
        {"type": "noon", "N": 3, "cutoff": 8}
        {"type": "optimal_mean", "N_mean": 2.0, "cutoff": 64}
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SpecError(path, f"not valid JSON ({exc.msg})") from None
    if not isinstance(spec, dict):
        raise SpecError(path, "expected a JSON object")
    kind = _field(spec, "type", path, str)
    if kind not in SINGLE_MODE_TYPES + TWO_MODE_TYPES:
        raise SpecError(f"{path}.type", f"unknown state type {kind!r}")
    if "cutoff" in spec or default_cutoff is None:
        D = _field(spec, "cutoff", path, _int)
    else:
        D = default_cutoff
    if D < 1:
        raise SpecError(f"{path}.cutoff", "cutoff must be positive")

    if kind == "number":
        return number_state(_field(spec, "n", path, _int), D)
    if kind == "coherent":
        return coherent_state(_field(spec, "alpha", path, _complex), D, auto_cutoff=auto_cutoff)
    if kind == "squeezed_vacuum":
        return squeezed_vacuum(SqueezeSpec(_field(spec, "gamma", path, _complex)), D, auto_cutoff=auto_cutoff)
    if kind == "twin_fock":
        return twin_fock_input(_field(spec, "N", path, _int), D, exchange=bool(spec.get("exchange", False)))
    if kind == "noon":
        return noon_state(_field(spec, "N", path, _int), D)
    n_mean = _field(spec, "N_mean", path, float)
    if n_mean < 0:
        raise SpecError(f"{path}.N_mean", "must be nonnegative")
    return optimal_mean_input(n_mean, D, auto_cutoff=auto_cutoff)
