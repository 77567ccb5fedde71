"""A short tour of the grid operators.

Run with ``python3 demos/operators_tour.py``.
"""

import math

import numpy as np

from fracvar import GridFunction, PowerPath, caputo_left, dalpha_rl, digamma, rl_left, rl_right

n = 1024

# %% Euler formula: D^0.3 t^0.7 = Gamma(1.7)/Gamma(1.4) t^0.4
y = PowerPath(1.0, 0.7).sample(n)
d = rl_left(y, 0.3)
exact = math.gamma(1.7) / math.gamma(1.4) * y.t**0.4
print("Euler formula, max error:", np.max(np.abs(d.values - exact)))

# %% Riemann-Liouville and Caputo differ by y(0) t^-alpha / Gamma(1 - alpha)
z = GridFunction.sample(lambda t: 1 + t**2, n)
gap = (rl_left(z, 0.5) - caputo_left(z, 0.5)).values[n // 2]
print("RL - Caputo at t = 1/2:", gap, "expected", 1 / (math.gamma(0.5) * 0.5**0.5))

# %% orders close to one approach the classical derivative
s = GridFunction.sample(np.sin, n)
m = s.mask(0.05, 1.0)
for a in (0.9, 0.99, 1.0):
    dist = np.max(np.abs(rl_left(s, a).values[m] - np.cos(s.t[m])))
    print(f"alpha={a}: sup |D sin - cos| on [0.05, 1] = {dist:.4f}")

# %% the right derivative mirrors the left one
r = PowerPath(1.0, 1.5, "right").sample(n)
print("right derivative at t = 0:", rl_right(r, 0.5).values[0],
      "expected", math.gamma(2.5) / math.gamma(2.0))

# %% order sensitivity G = dD/dalpha for y = t^2
g = dalpha_rl(GridFunction.sample(lambda t: t**2, n), 0.5).values
t = 0.5
print("G(t=1/2):", g.values[n // 2],
      "closed form", 2 * t**1.5 / math.gamma(2.5) * (digamma(2.5) - math.log(t)))
