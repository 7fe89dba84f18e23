"""Certificates for the optimal product inputs.

* fixed total photon number: exact enumeration over ``|n> (x) |N-n>``;
* fixed mean photon number: closed-form optimum for a given split
  (:func:`split_optimum_qfi`), the equal-split scan, the quadrature inequality, and
  an independent penalty-method search over arbitrary truncated product
  states (:func:`mean_constrained_search`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .fisher import qfi_product, qfi_variance
from .fock import (
    ModeMoments,
    SingleModeState,
    TwoModeState,
    moments,
    tensor,
)

# ---------------------------------------------------------------------------
# fixed photon number
# ---------------------------------------------------------------------------


def fixed_total_fisher(n: int, N: int) -> int:
    """Fisher information of ``|n> (x) |N-n>``: ``2 n (N-n) + N``."""
    return 2 * n * (N - n) + N


def fixed_total_closed_form(N: int) -> int:
    return N * (N + 2) // 2 if N % 2 == 0 else (N * (N + 2) - 1) // 2


def fixed_total_best(N: int) -> tuple[frozenset[int], int]:
    """All maximizing splits ``n`` and the maximal Fisher information for total ``N``.

    Example:
        >>> fixed_total_best(3)
        (frozenset({1, 2}), 7)
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    values = [fixed_total_fisher(n, N) for n in range(N + 1)]
    best = max(values)
    return frozenset(n for n, v in enumerate(values) if v == best), best


# ---------------------------------------------------------------------------
# fixed mean photon number
# ---------------------------------------------------------------------------


def split_optimum_qfi(N_a: float, N_b: float) -> float:
    """Maximal QFI of a product input with mean photon numbers ``N_a`` and ``N_b``."""
    return 2 * N_a * N_b + N_a + N_b + 2 * math.sqrt(N_a * (N_a + 1) * N_b * (N_b + 1))


@dataclass(frozen=True)
class SplitScan:
    is_best: bool
    peak_N_a: float
    peak_value: float
    worst_margin: float
    closed_form: float


def equal_split_is_best(N: float, grid: int = 201, rtol: float = 1e-12) -> SplitScan:
    """Scan ``N_a`` over ``[0, N]`` and check that :func:`split_optimum_qfi` peaks at ``N/2``.

    ``worst_margin`` is the smallest ``F(N/2) - F(N_a)`` over off-center grid
    points (``inf`` for ``N = 0``, where the curve is flat at zero).
    """
    if grid < 3:
        raise ValueError("grid must have at least 3 points")
    na = np.linspace(0.0, N, grid)
    values = np.array([split_optimum_qfi(x, N - x) for x in na])
    center = split_optimum_qfi(N / 2, N / 2)
    closed = N * (N + 2)
    i = int(np.argmax(values))
    off = np.abs(na - N / 2) > 1e-12 * max(N, 1.0)
    margin = float(np.min(center - values[off])) if N > 0 else math.inf
    peak_ok = abs(na[i] - N / 2) <= (N / (grid - 1)) / 2 + 1e-15
    is_best = bool(peak_ok and margin >= -rtol * max(closed, 1.0) and abs(center - closed) <= rtol * max(closed, 1.0))
    return SplitScan(is_best, float(na[i]), float(values[i]), margin, float(closed))


class InvariantViolation(ArithmeticError):
    pass


def quadrature_bound_check(m: ModeMoments, tol: float = 1e-8) -> tuple[float, float, float]:
    """``((<p^2> - <x^2>)^2, 4 N (N+1), slack)``; slack vanishes only for zero-mean minimum-uncertainty states."""
    lhs = (m.quad_p2 - m.quad_x2) ** 2
    rhs = 4 * m.number * (m.number + 1)
    slack = rhs - lhs
    if slack < -tol:
        raise InvariantViolation(f"quadrature bound violated: lhs={lhs!r} > rhs={rhs!r}")
    return lhs, rhs, slack


# ---------------------------------------------------------------------------
# numerical search over product states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    """Hyperparameters of :func:`mean_constrained_search`.

    The penalty weight runs through ``penalties`` in order, each stage warm
    started from the previous one and capped at ``max_iter`` L-BFGS steps.
    """

    penalties: tuple[float, ...] = (1e2, 1e3, 1e4, 1e5, 1e6)
    max_iter: int = 2000
    gtol: float = 1e-7
    constraint_tol: float = 1e-4
    grad_tol: float = 1e-3
    bound_rtol: float = 1e-6
    rescore_tol: float = 1e-6
    vacuum_below: float = 1e-9


@dataclass
class RestartRecord:
    seed: int
    qfi: float
    constraint_residual: float
    grad_norm: float
    converged: bool
    iterations: int


@dataclass
class SearchResult:
    best_input: TwoModeState | None
    best_F: float
    rescored_F: float
    converged: bool
    message: str
    odd_mass: tuple[float, float] = (0.0, 0.0)
    history: list[RestartRecord] = field(default_factory=list)


def _split(x: np.ndarray, D: int) -> tuple[np.ndarray, np.ndarray]:
    u = x[:D] + 1j * x[D : 2 * D]
    v = x[2 * D : 3 * D] + 1j * x[3 * D :]
    return u, v


def _ladder(D: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = np.arange(D, dtype=float)
    lower = np.diag(np.sqrt(n[1:]), 1)
    return lower, lower @ lower, np.diag(n)


def _mode_terms(u: np.ndarray, ops):
    """Moments of ``u/|u|`` and their Wirtinger derivatives with respect to ``conj(u)``."""
    lower, pair_op, num_op = ops
    w = np.vdot(u, u).real
    out = []
    for op in (lower, pair_op, num_op):
        q = np.vdot(u, op @ u) / w
        dq = (op @ u - q * u) / w  # d q / d conj(u)
        dq_bar = (op.T @ u - np.conj(q) * u) / w  # d conj(q) / d conj(u), real operators
        out.append((q, dq, dq_bar))
    return out


def _objective(x: np.ndarray, D: int, ops, N_mean: float, lam: float) -> tuple[float, np.ndarray]:
    """Negative penalized QFI and its gradient in the real parametrization."""
    u, v = _split(x, D)
    (al, dal, dal_b), (sa, dsa, dsa_b), (na, dna, _) = _mode_terms(u, ops)
    (be, dbe, dbe_b), (sb, dsb, dsb_b), (nb, dnb, _) = _mode_terms(v, ops)
    na, nb = na.real, nb.real
    qfi = (
        2 * na * nb + na + nb
        - 2 * (np.conj(sa) * sb).real
        - 2 * abs(al) ** 2 * abs(be) ** 2
        + 2 * (np.conj(al) ** 2 * be**2).real
    )
    resid = na + nb - N_mean
    value = qfi - lam * resid**2

    # partial derivatives with respect to the moments, conjugates treated as independent
    f_na = 2 * nb + 1 - 2 * lam * resid
    f_nb = 2 * na + 1 - 2 * lam * resid
    f_sa, f_sa_b = -np.conj(sb), -sb
    f_sb, f_sb_b = -np.conj(sa), -sa
    f_al = -2 * np.conj(al) * abs(be) ** 2 + 2 * al * np.conj(be) ** 2
    f_be = -2 * np.conj(be) * abs(al) ** 2 + 2 * be * np.conj(al) ** 2
    g_u = f_na * dna + f_sa * dsa + f_sa_b * dsa_b + f_al * dal + np.conj(f_al) * dal_b
    g_v = f_nb * dnb + f_sb * dsb + f_sb_b * dsb_b + f_be * dbe + np.conj(f_be) * dbe_b
    grad = 2 * np.concatenate([g_u.real, g_u.imag, g_v.real, g_v.imag])
    return -float(value.real), -grad


def penalized_qfi(x: np.ndarray, D: int, N_mean: float, lam: float) -> tuple[float, np.ndarray]:
    """Penalized objective ``QFI - lam (N_a + N_b - N_mean)^2`` and its gradient.

    ``x`` packs ``Re u, Im u, Re v, Im v`` for the unnormalized amplitude
    vectors of the two modes.
    """
    value, grad = _objective(np.asarray(x, dtype=float), D, _ladder(D), N_mean, lam)
    return -value, -grad


def _tilt(u: np.ndarray, log_t: float) -> np.ndarray:
    n = np.arange(u.size)
    w = u * np.exp(log_t * n - log_t * (u.size - 1) * (log_t > 0))
    return w / np.linalg.norm(w)


def _mean_number(u: np.ndarray) -> float:
    p = np.abs(u) ** 2
    return float(np.sum(np.arange(u.size) * p) / np.sum(p))


def rescale_to_mean(vectors: list[np.ndarray], N_mean: float) -> list[np.ndarray]:
    """Rescale ``c_n -> c_n t^n`` (same ``t`` for every vector) so the summed mean photon number is ``N_mean``.

    The summed mean is increasing in ``t``, so a bracketing root search on
    ``log t`` finds the unique feasible rescaling.
    """

    def excess(log_t):
        return sum(_mean_number(_tilt(u, log_t)) for u in vectors) - N_mean

    lo, hi = -1.0, 1.0
    while excess(lo) > 0:
        lo *= 2
        if lo < -200:
            raise ValueError("cannot lower the mean photon number far enough")
    while excess(hi) < 0:
        hi *= 2
        if hi > 200:
            raise ValueError("cannot raise the mean photon number far enough")
    log_t = optimize.brentq(excess, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return [_tilt(u, log_t) for u in vectors]


def project_mean(u: np.ndarray, v: np.ndarray, N_mean: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact projection of a product candidate onto the photon budget ``N_a + N_b = N_mean``."""
    xi, chi = rescale_to_mean([u, v], N_mean)
    return xi, chi


def _run_restart(seed: int, N_mean: float, D: int, ops, cfg: SearchConfig):
    rng = np.random.default_rng(seed)
    # start with roughly the right photon budget: geometric envelope times random phases
    q = N_mean / (N_mean + 2)
    envelope = np.sqrt(q ** np.arange(D))
    x = np.concatenate([envelope * rng.normal(size=D) for _ in range(4)])
    iterations = 0
    for lam in cfg.penalties:
        res = optimize.minimize(
            _objective,
            x,
            args=(D, ops, N_mean, lam),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": cfg.max_iter, "gtol": cfg.gtol, "ftol": 1e-15},
        )
        x = res.x
        iterations += int(res.nit)
    value, grad = _objective(x, D, ops, N_mean, cfg.penalties[-1])
    u, v = _split(x, D)
    resid = _mean_number(u) + _mean_number(v) - N_mean
    # scale-free gradient: the objective is invariant under rescaling u and v
    grad_norm = float(np.linalg.norm(grad) * np.sqrt(np.vdot(u, u).real + np.vdot(v, v).real) / 2)
    return u, v, resid, grad_norm, iterations


def mean_constrained_search(
    N_mean: float,
    D: int,
    restarts: int = 32,
    seed: int = 0,
    config: SearchConfig | None = None,
) -> SearchResult:
    """Maximize the product-input QFI at fixed total mean photon number.

    Restart ``k`` uses seed ``seed + k``; restarts are independent and the
    best feasible one wins, so the result does not depend on evaluation order.
    Each candidate is projected onto the exact photon budget, scored with the
    moment formula and re-scored through the beam-splitter simulation.
    """
    cfg = config or SearchConfig()
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if N_mean < cfg.vacuum_below:
        vac = np.zeros(D, dtype=np.complex128)
        vac[0] = 1.0
        state = tensor(SingleModeState(vac), SingleModeState(vac))
        return SearchResult(state, 0.0, qfi_variance(state).qfi, True, "vacuum")
    if N_mean >= 2 * (D - 1):
        raise ValueError(f"mean photon number {N_mean} is not representable with cutoff {D}")

    ops = _ladder(D)
    bound = N_mean * (N_mean + 2)
    history: list[RestartRecord] = []
    best = None
    for k in range(restarts):
        u, v, resid, grad_norm, nit = _run_restart(seed + k, N_mean, D, ops, cfg)
        xi_amps, chi_amps = project_mean(u, v, N_mean)
        xi, chi = SingleModeState(xi_amps), SingleModeState(chi_amps)
        F = qfi_product(moments(xi), moments(chi)).qfi
        ok = abs(resid) < cfg.constraint_tol or grad_norm < cfg.grad_tol
        history.append(RestartRecord(seed + k, F, float(resid), grad_norm, bool(ok), nit))
        if ok and (best is None or F > best[0]):
            best = (F, xi, chi)

    if best is None:
        return SearchResult(None, math.nan, math.nan, False, "no restart converged", history=history)
    F, xi, chi = best
    state = tensor(xi, chi)
    rescored = qfi_variance(state).qfi
    if F > bound * (1 + cfg.bound_rtol) or rescored > bound * (1 + cfg.bound_rtol):
        raise InvariantViolation(f"search reported F={F!r} (re-scored {rescored!r}) above N(N+2)={bound!r}")
    if abs(rescored - F) > cfg.rescore_tol * max(1.0, F):
        raise InvariantViolation(f"moment-form F={F!r} disagrees with simulated {rescored!r}")
    odd = tuple(float(np.sum(np.abs(s.amps[1::2]) ** 2)) for s in (xi, chi))
    return SearchResult(state, F, rescored, True, "ok", odd, history)
