# %% [markdown]
# The weighted projective line WP(p, q) and its twisted sector relations.

# %%
from __future__ import annotations

from fractions import Fraction

from stringyk import OrbisphereModel, stringy_k_ring

# %%
M = OrbisphereModel(2, 3)
print(M.labels, [str(a) for a in M.ages("y")])
# the generators are the sectors of smallest age
a = M.basis(M.labels[M.alpha_generator])
b = M.basis(M.labels[M.beta_generator])
print(a * a, b**3, b**4)

# %% with the default normalization only one relation holds
rep = stringy_k_ring(M)
print(rep.checks["alpha_power_is_1-u"], rep.checks["beta_power_is_1-u"])
print(rep.residual["alpha_requires_tau"], rep.residual["beta_requires_tau"])

# %% a unit twisted pairing with tau = 1 satisfies both
U = OrbisphereModel(2, 3, tau=Fraction(1), twisted_pairing="unit")
print(stringy_k_ring(U).ok)
