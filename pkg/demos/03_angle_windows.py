"""
Choosing the pulse angle
========================

Small cavities suppress cascades best at grazing incidence; large ones
along the axis. Both rules come from asking that every contributing mode
stays a few radians away from phase matching.
"""

# %%
import math

import numpy as np

from cavity_cascade import CavityGeometry, Pulse, angle_window_50, angle_window_95, term_sinc_squared

k = 2 * math.pi / 600e-9
cavity = CavityGeometry(100e-9)
lo, hi = angle_window_50(k, cavity)
print(f"L = 100 nm, lambda = 600 nm: theta in [{math.degrees(lo):.1f}, {math.degrees(hi):.1f}] deg")

# %% Inside the window the m = 1 term keeps sinc^2 below one half
for th in np.radians([80, 85, 90, 95, 100]):
    print(f"  {math.degrees(th):5.1f} deg  sinc^2 = {term_sinc_squared(1, Pulse(k, th), cavity, 1):.3f}")

# %% The on-axis cone for L = 2 pi (p + 1) / k narrows as the cavity grows
for p in (1, 2, 5, 10):
    print(f"p = {p:2d}: theta <= {math.degrees(angle_window_95(p).theta_max):.1f} deg")
