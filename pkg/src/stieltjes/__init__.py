"""Calculus with respect to a left-continuous non-decreasing derivator g.

Monomials g_{x0,n}, monomial series, the g-exponential and linear
Stieltjes differential equations with constant coefficients.
"""
from .derivator import Derivator, GeometricGenerator, PointTag, Segment, truncate_jumps
from .errors import *  # noqa: F401,F403
from .exponential import ExpG, exp_extended, exp_product, exp_series, omega_domain
from .integral import g_derivative, integrate, right_limit
from .monomials import Route, change_center, g_monomial, monomial_bounds, monomials_upto
from .ode import LinearODEProblem, ODESolution, solve
from .series import (GSeries, TailKind, TailRule, coefficients_from_derivatives,
                     differentiate_series, eval_series, integrate_series, recenter_series)

__version__ = "0.1.0"
