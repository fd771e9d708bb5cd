"""
Finding the best cavity length
==============================

The suppression ratio oscillates with sinc^2 lobes in k L, so the optimizer
scans a coarse grid first and then refines around the best node. Sweeping
the lobe around 2 (p + 1) pi recovers that analytic optimum.
"""

# %%
import math

from cavity_cascade import large_cavity_spec, optimize, run_scan, sensitivity, sub_wavelength_spec

k = 2 * math.pi / 500e-9

for p in (1, 2, 3):
    spec = large_cavity_spec(k, p)
    res = optimize(spec)
    slope = sensitivity(spec, res.params, "length").derivative
    print(f"p = {p}: k L = {k * res.length / math.pi:.4f} pi  ratio = {res.ratio:.4f}  slope = {slope:.1e}")

# %% Below one wavelength at grazing incidence the ratio is flat in L
table = run_scan(sub_wavelength_spec(k))
print("sub-wavelength ratios:", sorted(set(round(float(r), 6) for r in table.ratios())))

# %% Refinement trace: the incumbent never gets worse
res = optimize(large_cavity_spec(k, 1), refinement=8)
for step in res.trace:
    print(f"  step {step.step}: half-width {step.half_widths['length'] * 1e9:.4f} nm  ratio {step.ratio:.6f}")
