"""The g-exponential on a derivator with flat stretches and jumps, and a
second-order problem solved through the coefficient recurrence."""
import numpy as np

from stieltjes import ExpG, LinearODEProblem, exp_extended, exp_product, exp_series, solve
from stieltjes.corpus import mixed

g = mixed()
lam = 1.5
E = ExpG(g, lam, 0.0)
print("domain of the exponential series:", E.domain)
for x in np.linspace(-1.0, 4.0, 6):
    x = float(x)
    print(f"  x={x:5.2f}  series {exp_series(E, x):.12f}  extension {exp_extended(g, 0.0, lam, x):.12f}"
          + (f"  product {exp_product(E, x):.12f}" if x >= 0 else ""))

# v'' = -v with v(0) = 1, v'(0) = 0: a cosine that feels every jump
p = LinearODEProblem(g, 0.0, 2, (-1.0, 0.0), (1.0, 0.0))
sol = solve(p)
print(f"growth certificate M = {sol.growth_M}, residual on {len(sol.grid)} points: {sol.residual_report:.2e}")
for x in (0.5, 1.0, 2.0, 3.0):
    print(f"  v({x}) = {sol(x):.12f}")
