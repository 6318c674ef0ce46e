# %% [markdown]
# # From a D-instance to a retraction problem
#
# A D-instance is a set of elements with four binary relations R1..R4. It
# maps homomorphically to the three-element structure D exactly when its
# D-graph retracts onto the embedded 4-cycle h0 h1 h2 h3. Here we build the
# D-graph for a single R1 pair, look at it, and move solutions back and forth.

# %%
from collections import Counter

import numpy as np

from dcut_lab import (
    D_STRUCTURE,
    DInstance,
    build_d_graph,
    diameter,
    extend_hom_to_retraction,
    find_retraction_c4r,
    hom_to_d,
    is_core,
    restrict_retraction_to_hom,
)
from dcut_lab.harness import dinstance_family

# %% [markdown]
# ## The target structure
#
# D lives on {0, 1, 3}; it is a core, which is what makes the hardness
# argument go through.

# %%
for rel in D_STRUCTURE.relations:
    pairs = sorted((D_STRUCTURE.label(a), D_STRUCTURE.label(b)) for a, b in rel.tuples)
    print(rel.name, pairs)
print("core:", is_core(D_STRUCTURE))

# %% [markdown]
# ## One pair in R1

# %%
a = DInstance.make(["p", "q"], r1=[("p", "q")])
d = build_d_graph(a)
print(f"{d.graph.n} vertices, {len(d.graph.edges)} edges, diameter {diameter(d.graph)}")
print("vertex types:", dict(enumerate(d.vtype)))

adj = np.zeros((d.graph.n, d.graph.n), dtype=int)
for u, v in d.graph.edges:
    adj[u, v] = adj[v, u] = 1
print(adj)

# %% [markdown]
# ## Homomorphism in, retraction out, and back

# %%
f = hom_to_d(a)
g = extend_hom_to_retraction(a, d, f)
print("hom:", f)
print("retraction:", g)
print("restricted again:", restrict_retraction_to_hom(a, d, g))

searched = find_retraction_c4r(d.graph, d.h)
print("retraction found by search:", searched, "->", restrict_retraction_to_hom(a, d, searched))

# %% [markdown]
# ## A no-instance
#
# R3 forces p onto 3 along the diagonal and R4 forces it onto 1, so no
# homomorphism exists and the D-graph does not retract.

# %%
bad = DInstance.make(["p"], r3=[("p", "p")], r4=[("p", "p")])
print("hom:", hom_to_d(bad), " retraction:", find_retraction_c4r(build_d_graph(bad).graph, (0, 1, 2, 3)))

# %% [markdown]
# ## A random family
#
# Both sides agree on every instance.

# %%
tally = Counter()
for inst in dinstance_family(seed=1, count=150):
    dg = build_d_graph(inst)
    yes = hom_to_d(inst) is not None
    assert yes == (find_retraction_c4r(dg.graph, dg.h) is not None)
    tally[yes] += 1
print(dict(tally))
