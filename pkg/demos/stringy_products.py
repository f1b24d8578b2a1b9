# %% [markdown]
# Three products on the inertia of [S3/S3] and the stringy product on [pt/S3].

# %%
from __future__ import annotations

from stringyk import FiniteOrbifold, builtin
from stringyk.finite_orbifold import pontryagin_product, stringy_formula, tensor_product

G = builtin("S3")

# %% on a point the stringy product is convolution of class functions
P = FiniteOrbifold.point(G)
basis = P.basis_classes()
for a in basis:
    print([[str(c) for c in P.stringy(a, b).character.values] for b in basis])

# %% on the adjoint orbifold the three products disagree
X = FiniteOrbifold.adjoint(G)
tables = {
    "tensor": X.structure_constants(lambda a, b: tensor_product(a, b, X)),
    "pontryagin": X.structure_constants(lambda a, b: pontryagin_product(a, b, X)),
    "stringy": X.structure_constants(X.stringy),
}
print(len(X.inertia.orbits), "inertia orbits")
print({k: tables[k] == tables["stringy"] for k in tables})

# %% the closed formula agrees with the bundle-level product
a, b = X.basis_classes()[1], X.basis_classes()[2]
print(stringy_formula(a.character, b.character) == X.stringy(a, b).character)

# %% the unit is the indicator of the untwisted sector
one = X.kclass(X.unit_candidate())
print(all(X.stringy(one, c) == c for c in X.basis_classes()))
