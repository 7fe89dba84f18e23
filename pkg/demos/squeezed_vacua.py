"""
Fixed mean photon number: two squeezed vacua
============================================

Under a mean photon budget N the best product input squeezes the two modes
along opposite quadratures with N/2 photons each, reaching F = N(N+2). That
input is left unchanged by the first beam splitter.
"""

import numpy as np

from mzfisher import fisher, optics, optimize, states

for N in (0.5, 1.0, 2.0, 4.0):
    psi = states.optimal_mean_input(N, 16, auto_cutoff=True)
    F = fisher.qfi_variance(psi).qfi
    out = optics.beam_splitter_apply(psi)
    resid = np.linalg.norm(out.amps - psi.padded(out.cutoff).amps)
    print(f"N={N:3.1f}  D={psi.cutoff:3d}  F={F:.8f}  N(N+2)={N * (N + 2):.8f}  |B psi - psi|={resid:.1e}")

# unequal splits lose information: scan N_a with the total held at 2
print()
for na in np.linspace(0, 2, 9):
    print(f"N_a={na:4.2f}  F={optimize.split_optimum_qfi(na, 2 - na):.4f}")

# photon counting is optimal, and so is the cheap N_d^2 estimator away from phi = 0
psi = states.optimal_mean_input(2.0, 64)
phi, cfi = fisher.max_cfi(psi, np.linspace(-3, 3, 25), "inverse")
print(f"\nbest counting CFI {cfi:.6f} at phi={phi:.2f}")
grid = np.linspace(-np.pi, np.pi, 121)
phi, S = fisher.moment_estimator_sensitivity(psi, grid, "inverse")
print(f"N_d^2 estimator: 1/var = {S:.4f} at phi={phi:.3f}")
