"""
Which cavity photons can carry a cascade
========================================

A planar cavity quantises the photon wavevector along its axis to n pi / L.
Only modes whose frequency sits near the electronic gap take part in the
cascade. This walk-through lists them for a wavelength-sized cavity and for a
large one.
"""

# %%
import math

import numpy as np

from cavity_cascade import CavityGeometry, Pulse, ResonanceWindow, contributing_modes, mode_frequencies

lam = 500e-9
k = 2 * math.pi / lam

# %% A cavity one wavelength long, pulse at grazing incidence
pulse = Pulse(k, theta=math.pi / 2)
cavity = CavityGeometry(lam)
window = ResonanceWindow.for_pulse(pulse)
print("L = lambda, theta = 90 deg:", contributing_modes(pulse, cavity, window))

# %% The same pulse sees a ladder of modes; the window keeps those near omega_eg
w = mode_frequencies(k * math.sin(pulse.theta), CavityGeometry(lam, max_mode_index=5))
print("omega_n / omega_eg:", np.round(w / window.center_frequency, 3))

# %% Longer cavities with an on-axis pulse
for p in (2, 5, 10):
    cav = CavityGeometry(2 * p * math.pi / k)
    modes = contributing_modes(Pulse(k, 0.0), cav, ResonanceWindow.for_pulse(Pulse(k, 0.0)))
    print(f"L = {p} lambda, theta = 0: m = {modes[0]}..{modes[-1]}")
