# %% [markdown]
# Ages and obstruction bundles for linear charts [V/G].

# %%
from __future__ import annotations

from stringyk import builtin, cyclic, obstruction_character, sector_data
from stringyk.local_model import from_weights, standard_model

# %% C^2 / Z_5 with weights (1, 2)
M = from_weights(cyclic(5), [1, 2])
for g in range(5):
    s = sector_data(M, g)
    print(g, s.fixed_dim, s.age, s.angles)

# %% a line is obstructed when the two angles wrap past 1
L = from_weights(cyclic(5), [1])
print([[obstruction_character(L, a, b).rank for b in range(5)] for a in range(5)])

# %% S3 acting on its 2-dimensional representation
S = standard_model(builtin("S3"))
for g in S.group.conjugacy.representatives:
    print(S.group.names[g], sector_data(S, g).age)
