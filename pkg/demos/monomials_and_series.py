"""Monomials and monomial series for a derivator with one unit jump.

g(x) = x for x <= 0 and x + 1 for x > 0.  Right of the jump the monomials
are x^n + n x^(n-1); left of it they are plain powers.
"""
from stieltjes import GSeries, g_monomial, monomial_bounds
from stieltjes.corpus import staircase, step_plus_identity
from stieltjes.series import OPEN_TAIL, eval_series_detailed

g = step_plus_identity()

print("g_{0,n}(x) at x = 0.5 and x = -0.5")
for n in range(5):
    r, l = g_monomial(g, 0.0, n, 0.5), g_monomial(g, 0.0, n, -0.5)
    print(f"  n={n}: {r:10.6f} {l:10.6f}   bounds at 0.5: {monomial_bounds(g, 0.0, n, 0.5)}")

# sum of all monomials: 1/(1-x) + 1/(1-x)^2 right of 0, 1/(1-x) left of it
S = GSeries(g, 0.0, (1.0,) * 200, OPEN_TAIL)
for x in (0.5, -0.5):
    r = eval_series_detailed(S, x, heuristic=True)
    print(f"sum g_n({x}) = {r.value!r} using {r.terms} terms")

# jumps at every integer make high monomials vanish on (0, n-1]
st = staircase()
print("staircase g_{0,4} on (0, 3]:", [g_monomial(st, 0.0, 4, x) for x in (0.5, 1.5, 2.5, 3.0)])
print("and just past it, at 3.5:", g_monomial(st, 0.0, 4, 3.5))
