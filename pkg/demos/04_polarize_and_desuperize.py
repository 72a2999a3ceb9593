# coding: utf-8

# # From graded manifolds to purely even bundles
#
# A degree-2 graded manifold polarizes to a symmetric double vector bundle.
# Reversing parities then gives a purely even double vector bundle with a
# skew action.

# In[1]:

from supergeom.dsl import emit_dsl, parse_atlas
from supergeom.fixtures import NMANIFOLD_DEG2
from supergeom.polar import desuperize, diagonalize, polarize, roundtrip_isomorphism
from supergeom.bundle import check_morphism

a = parse_atlas(NMANIFOLD_DEG2).atlas
p = polarize(a)
print(emit_dsl(p.atlas, p.action))

# The fixed points of the flip recover the original graded manifold.

# In[2]:

d = diagonalize(p)
print(emit_dsl(d.atlas))
iso, inv = roundtrip_isomorphism(a, d, p)
print(check_morphism(iso).ok, check_morphism(inv).ok)

# Desuperization: every coordinate is even and the core changes sign under
# the swap of the two structures.

# In[3]:

ds = desuperize(a)
print(emit_dsl(ds.atlas, ds.action))
