"""
Fixed photon number: twin-Fock against N00N
===========================================

With exactly N photons split as |n> (x) |N-n>, the Fisher information is
2n(N-n) + N. The balanced split wins. A N00N state gets N^2, so it ties for
N = 1, 2 and pulls ahead after that, heading to twice the twin-Fock value.
"""

import numpy as np

from mzfisher import fisher, optimize, states

# every split of N = 6 photons, straight from the simulator
N = 6
for n in range(N + 1):
    psi = states.tensor(states.number_state(n, N + 1), states.number_state(N - n, N + 1))
    print(f"|{n},{N - n}>  F = {fisher.qfi_variance(psi).qfi:6.2f}   formula {optimize.fixed_total_fisher(n, N)}")

print()
print(" N   twin   N00N   ratio")
for N in (1, 2, 3, 5, 10, 20):
    twin = fisher.qfi_variance(states.twin_fock_input(N, N // 2 + 2)).qfi
    noon = fisher.qfi_entangled(states.noon_state(N, N + 1)).qfi
    print(f"{N:2d} {twin:6.0f} {noon:6.0f}   {noon / twin:.3f}")

# a second beam splitter plus photon counting reads out all of it
psi = states.twin_fock_input(4, 4)
grid = np.linspace(0.1, 3.0, 30)
phi, best = fisher.max_cfi(psi, grid, "inverse")
print(f"\ntwin-Fock N=4: QFI = {fisher.qfi_variance(psi).qfi:.4f}, best counting CFI = {best:.4f} at phi = {phi:.2f}")
