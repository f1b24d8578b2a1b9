# %% [markdown]
# Exact cyclotomic numbers and character tables.

# %%
from __future__ import annotations

from stringyk import builtin, character_table, decompose, root_of_unity, sqrt_rational
from stringyk.class_functions import ClassFunction

# %%
z = root_of_unity(8, 1)
print(z**8 == 1, z + z**7 == sqrt_rational(2))
print(sqrt_rational(5).conductor, sqrt_rational(3).conductor)

# %%
G = builtin("S4")
T = character_table(G)
print(G.order, T.degrees)
print(T.row_orthogonality_ok(), T.column_orthogonality_ok())

# %% the regular character splits as sum of deg * chi
reg = ClassFunction.from_function(G, lambda g: G.order if g == G.identity else 0)
print([str(m) for m in decompose(reg).multiplicities])

# %% A5 needs sqrt(5)
for chi in character_table(builtin("A5")):
    print([str(v) for v in chi.values])
