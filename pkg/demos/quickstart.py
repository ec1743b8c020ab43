"""Walk through the main entry points on the shipped scenarios.

Run with: python3 demos/quickstart.py
"""

import numpy as np

from adkey import adqkd, cli, discrimination, entropy, matcore

# Single-shot bounds for a qubit pair: the integral of the exact error curve
# reproduces H(C|E); the closed-form bounds sit below it.
tau = matcore.DensityMatrix.from_bloch([0.0, 0.0, 1.0])
sigma = matcore.DensityMatrix.from_bloch([0.5 / np.sqrt(2), 0.0, 0.5 / np.sqrt(2)])
fid = matcore.fidelity(tau, sigma)
p_half = discrimination.helstrom_error(discrimination.BinaryEnsemble(0.5, tau, sigma))
print('exact H(C|E)          ', entropy.exact_cond_entropy(entropy.CqState([0.5, 0.5], [tau, sigma])))
print('integral of p_err     ', entropy.entropy_integral(entropy.helstrom_curve(tau, sigma)))
print('fidelity bound        ', entropy.bound_fidelity_entropy(fid))
print('min-entropy bound     ', entropy.bound_minentropy_entropy(p_half))
print('combined bound        ', entropy.bound_combined(fid, p_half))
print('Renyi upper (min)     ', entropy.min_renyi_upper(tau, sigma)[0])

# Blocklength bounds for the shipped F = 0.684 scenario.
sc = cli.load_scenario(cli.shipped_scenario_path('fig2_f0684'))
rec = adqkd.asymptotic_verdict(sc)
print(f'\nQ = {rec.q:.4f}, beta = {rec.beta_eps:.4f} -> {rec.verdict.value}')
print('   n   fidelity bound   combined bound   key rate')
for n in (1, 10, 40, 80):
    r = adqkd.block_entropy_bounds(sc, n, bins=1024, with_upper=False, verdict=rec)
    print(f'{n:4d}   {r.bound_fidelity:.6e}   {r.bound_combined:.6e}   {r.key_rate:.3e}')
