"""Acceptance suite: each check reproduces one analytic claim numerically.

``run_suite("fast")`` covers the closed-form and simulator checks;
``run_suite("full")`` adds the CFI scans, the ``N_d^2`` estimator and the
optimizer certificate, plus the wall-clock budget for the whole run.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import fisher, optics, optimize, states
from .fock import EPS_TAIL, SingleModeState, TruncationError, moments, tensor

MEAN_N_SET = (0.5, 1.0, 2.0, 4.0)
MEAN_N_MAX_CUTOFF = 64
SEED = 20140415


@dataclass
class CriterionResult:
    id: int
    name: str
    passed: bool
    measured: float
    target: float
    tolerance: float
    runtime: float
    detail: str = ""

    def __post_init__(self):
        # checks often produce numpy scalars; keep the report plain-JSON
        self.passed = bool(self.passed)
        for name in ("measured", "target", "tolerance", "runtime"):
            setattr(self, name, float(getattr(self, name)))

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (
            f"[{mark}] {self.id:2d} {self.name}: measured={self.measured:.6g} "
            f"target={self.target:.6g} tol={self.tolerance:.3g} ({self.runtime:.2f}s) {self.detail}"
        )

    def as_dict(self) -> dict:
        return asdict(self)


def _adaptive_mean_input(N_mean: float):
    """Dual squeezed vacua on the smallest doubling of 8 up to 64 meeting the tail bound.

    When no cutoff within the cap is enough, the state is built at the cap
    anyway (tail recorded) so the other quantities can still be reported.
    """
    try:
        return states.optimal_mean_input(N_mean, 8, auto_cutoff=True, max_cutoff=MEAN_N_MAX_CUTOFF)
    except TruncationError:
        return states.optimal_mean_input(N_mean, MEAN_N_MAX_CUTOFF, tail_tol=1.0)


def c1_fixed_n() -> CriterionResult:
    t0 = time.perf_counter()
    worst = 0.0
    for N in range(1, 21):
        closed = optimize.fixed_total_closed_form(N)
        _, best = optimize.fixed_total_best(N)
        simulated = fisher.qfi_variance(states.twin_fock_input(N, N // 2 + 2)).qfi
        worst = max(worst, abs(best - closed), abs(simulated - closed))
    dt = time.perf_counter() - t0
    return CriterionResult(1, "fixed-N optimum (N=1..20)", worst <= 1e-9 and dt < 5, worst, 0.0, 1e-9, dt)


def c2_beam_splitter_amplitudes() -> CriterionResult:
    t0 = time.perf_counter()
    s = 1 / math.sqrt(2)
    out10 = optics.beam_splitter_apply(states.twin_fock_input(1, 3)).amps
    out11 = optics.beam_splitter_apply(states.twin_fock_input(2, 3)).amps
    want10 = np.zeros_like(out10)
    want10[1, 0], want10[0, 1] = s, -1j * s
    want11 = np.zeros_like(out11)
    want11[2, 0] = want11[0, 2] = -1j * s
    err = max(np.abs(out10 - want10).max(), np.abs(out11 - want11).max())
    return CriterionResult(2, "beam-splitter amplitudes", err <= 1e-10, float(err), 0.0, 1e-10, time.perf_counter() - t0)


def c3_noon_comparison() -> CriterionResult:
    t0 = time.perf_counter()
    worst = 0.0
    ok = True
    for N in range(1, 21):
        f_noon = fisher.qfi_entangled(states.noon_state(N, N + 1)).qfi
        f_twin = fisher.qfi_variance(states.twin_fock_input(N, N // 2 + 2)).qfi
        worst = max(worst, abs(f_noon - N * N))
        if N <= 2:
            ok &= abs(f_noon - f_twin) <= 1e-9
        else:
            ok &= f_noon > f_twin + 1e-9
        if N == 20:
            ratio = f_noon / f_twin
    ok &= worst <= 1e-9 and abs(ratio - 400 / 220) <= 1e-9
    detail = f"ratio(N=20)={ratio:.6f}"
    return CriterionResult(3, "N00N vs twin-Fock", bool(ok), worst, 0.0, 1e-9, time.perf_counter() - t0, detail)


def c4_mean_n_optimum() -> CriterionResult:
    t0 = time.perf_counter()
    worst_rel, worst_tail, notes = 0.0, 0.0, []
    for N in MEAN_N_SET:
        psi = _adaptive_mean_input(N)
        F = fisher.qfi_variance(psi).qfi
        rel = abs(F - N * (N + 2)) / (N * (N + 2))
        worst_rel = max(worst_rel, rel)
        worst_tail = max(worst_tail, psi.truncation_tail)
        notes.append(f"N={N}:D={psi.cutoff},tail={psi.truncation_tail:.1e},rel={rel:.1e}")
    dt = time.perf_counter() - t0
    ok = worst_rel <= 1e-4 and worst_tail < EPS_TAIL and dt < 10
    return CriterionResult(4, "mean-N optimum N(N+2)", ok, worst_rel, 0.0, 1e-4, dt, "; ".join(notes))


def c5_eigenstate() -> CriterionResult:
    t0 = time.perf_counter()
    ok, worst_ratio, notes = True, 0.0, []
    for N in MEAN_N_SET:
        psi = _adaptive_mean_input(N)
        out = optics.beam_splitter_apply(psi)
        resid = float(np.linalg.norm(out.amps - psi.padded(out.cutoff).amps))
        bound = 100 * psi.truncation_tail
        ok &= resid <= bound
        ratio = resid / bound if bound > 0 else (math.inf if resid > 0 else 0.0)
        worst_ratio = max(worst_ratio, ratio)
        notes.append(f"N={N}:resid={resid:.1e},100*tail={bound:.1e},sqrt(tail)={math.sqrt(psi.truncation_tail):.1e}")
    detail = "; ".join(notes)
    return CriterionResult(5, "B|psi_opt> = |psi_opt>", bool(ok), worst_ratio, 1.0, 0.0, time.perf_counter() - t0, detail)


def c6_asymmetric_splits() -> CriterionResult:
    t0 = time.perf_counter()
    worst = 0.0
    for Na, Nb in ((1, 2), (0.5, 1.5), (3, 1)):
        psi = states.optimal_split_input(Na, Nb, 20, auto_cutoff=True)
        F = fisher.qfi_variance(psi).qfi
        closed = optimize.split_optimum_qfi(Na, Nb)
        worst = max(worst, abs(F - closed) / closed)
    peaks = [optimize.equal_split_is_best(N, 201) for N in (1, 2, 4)]
    ok = worst <= 1e-6 and all(p.is_best for p in peaks)
    detail = "peaks at " + ", ".join(f"{p.peak_N_a:g}" for p in peaks)
    return CriterionResult(6, "asymmetric splits", ok, worst, 0.0, 1e-6, time.perf_counter() - t0, detail)


def _random_mode(rng: np.random.Generator, D: int) -> SingleModeState:
    return SingleModeState.from_unnormalized(rng.normal(size=D) + 1j * rng.normal(size=D))


def c7_moment_vs_variance(samples: int = 500) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(samples):
        D = int(rng.integers(1, 11))
        xi, chi = _random_mode(rng, D), _random_mode(rng, D)
        a = fisher.qfi_product(moments(xi), moments(chi)).qfi
        b = fisher.qfi_variance(tensor(xi, chi)).qfi
        worst = max(worst, abs(a - b))
    return CriterionResult(7, "moment form = variance form", worst <= 1e-8, worst, 0.0, 1e-8, time.perf_counter() - t0)


def c8_quadrature_chain(samples: int = 1000, D: int = 16) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 1)
    worst_slack, worst_sat = math.inf, 0.0
    for Nb in (0.5, 1.0, 2.0):
        for _ in range(samples):
            u = rng.normal(size=D) + 1j * rng.normal(size=D)
            (c,) = optimize.rescale_to_mean([u], Nb)
            _, _, slack = optimize.quadrature_bound_check(moments(SingleModeState(c)), tol=math.inf)
            worst_slack = min(worst_slack, slack)
        sq = states.squeezed_vacuum(states.SqueezeSpec.from_mean_photons(Nb), 16, auto_cutoff=True)
        _, rhs, slack = optimize.quadrature_bound_check(moments(sq), tol=math.inf)
        worst_sat = max(worst_sat, abs(slack) / rhs)
    ok = worst_slack >= -1e-8 and worst_sat <= 1e-6
    detail = f"min random slack={worst_slack:.3e}; squeezed slack/rhs={worst_sat:.1e}"
    return CriterionResult(8, "quadrature inequality chain", ok, worst_sat, 0.0, 1e-6, time.perf_counter() - t0, detail)


CFI_GRID = np.linspace(-np.pi, np.pi, 25)


def c9_cfi_equals_qfi() -> CriterionResult:
    t0 = time.perf_counter()
    cases = [(f"twin N={N}", states.twin_fock_input(N, N // 2 + 2)) for N in (2, 3, 4, 6)]
    cases += [(f"opt N={N}", _adaptive_mean_input(N)) for N in (1.0, 2.0)]
    worst_gap, worst_excess, notes = 0.0, -math.inf, []
    for label, psi in cases:
        F = fisher.qfi_variance(psi).qfi
        gaps = {}
        for conv in optics.MzConvention:
            values = fisher.cfi_scan(psi, CFI_GRID, conv)
            worst_excess = max(worst_excess, float(values.max()) - F)
            gaps[conv.value] = (F - float(values.max())) / F
        best_conv = min(gaps, key=gaps.get)
        worst_gap = max(worst_gap, gaps[best_conv])
        notes.append(f"{label}:{best_conv} gap={gaps[best_conv]:.1e}")
    dt = time.perf_counter() - t0
    ok = worst_gap <= 1e-3 and worst_excess <= 1e-6 and dt < 60
    detail = f"max CFI-QFI={worst_excess:.1e}; " + "; ".join(notes)
    return CriterionResult(9, "CFI of photon counting = QFI", ok, worst_gap, 0.0, 1e-3, dt, detail)


ESTIMATOR_GRID = np.pi / 2 + np.concatenate([-np.geomspace(0.1, 0.003, 12), np.geomspace(0.003, 0.1, 12)])


def c10_moment_estimator() -> CriterionResult:
    t0 = time.perf_counter()
    psi = _adaptive_mean_input(2.0)
    F = fisher.qfi_variance(psi).qfi
    worst_excess = -math.inf
    best, best_phi, best_conv = 0.0, math.nan, ""
    for conv in optics.MzConvention:
        phi, S = fisher.moment_estimator_sensitivity(psi, ESTIMATOR_GRID, conv)
        if S > best:
            best, best_phi, best_conv = S, phi, conv.value
        worst_excess = max(worst_excess, S - F)
    ok = best >= 0.99 * 8 and worst_excess <= 1e-6
    detail = f"best phi={best_phi:.4f} ({best_conv}); S-QFI={worst_excess:.1e}"
    return CriterionResult(10, "N_d^2 estimator sensitivity", ok, best, 0.99 * 8, 0.0, time.perf_counter() - t0, detail)


def c11_optimizer(restarts: int = 32, seed: int = SEED) -> CriterionResult:
    t0 = time.perf_counter()
    res = optimize.mean_constrained_search(2.0, 16, restarts=restarts, seed=seed)
    dt = time.perf_counter() - t0
    agree = abs(res.rescored_F - res.best_F)
    ok = res.converged and 0.99 * 8 <= res.best_F <= 8 + 1e-5 and agree <= 1e-6 and dt < 120
    detail = f"rescored={res.rescored_F:.10f}; |diff|={agree:.1e}; odd mass={max(res.odd_mass):.1e}"
    return CriterionResult(11, "optimizer certificate", ok, res.best_F, 8.0, 0.08, dt, detail)


FAST = (
    c1_fixed_n,
    c2_beam_splitter_amplitudes,
    c3_noon_comparison,
    c4_mean_n_optimum,
    c5_eigenstate,
    c6_asymmetric_splits,
    c7_moment_vs_variance,
    c8_quadrature_chain,
)
FULL = FAST + (c9_cfi_equals_qfi, c10_moment_estimator, c11_optimizer)
SUITE_BUDGET = 300.0


def run_suite(level: str = "fast", callback=None, *, seed: int = SEED, restarts: int = 32) -> list[CriterionResult]:
    """Run every criterion of ``level`` ("fast" or "full"); ``callback`` sees each result as it lands.

    ``seed`` and ``restarts`` configure the optimizer certificate only.
    """
    if level not in ("fast", "full"):
        raise ValueError(f"unknown level {level!r}")
    t0 = time.perf_counter()
    results = []
    for check in FAST if level == "fast" else FULL:
        r = check(restarts=restarts, seed=seed) if check is c11_optimizer else check()
        results.append(r)
        if callback:
            callback(r)
    if level == "full":
        total = time.perf_counter() - t0
        r = CriterionResult(12, "full suite wall clock", total < SUITE_BUDGET, total, SUITE_BUDGET, 0.0, total)
        results.append(r)
        if callback:
            callback(r)
    return results
