# coding: utf-8

# # A double vector bundle and its parity reversion
#
# The atlas below has one base coordinate, two odd side coordinates and one
# even core coordinate.  Its only non-linear transition mixes the two sides.

# In[1]:

from supergeom import perms
from supergeom.bundle import check_morphism, validate_atlas
from supergeom.dsl import emit_dsl
from supergeom.fixtures import cross_term_atlas
from supergeom.parity import koszul_sign, phi_iso, total_reversion

a = cross_term_atlas()
print(emit_dsl(a))
print(validate_atlas(a).ok)

# Reversing the parity in both slots makes every coordinate even.  Slot 2 is
# reversed first, and moving the side coordinate past its odd neighbour flips
# the sign of the quadratic term.

# In[2]:

pi = total_reversion(a)
print(emit_dsl(pi))

# Permuting the two vector bundle structures and then reversing is not the
# same as reversing and then permuting.  The two results differ by Koszul
# signs, collected by the isomorphism Phi.

# In[3]:

swap = perms.parse("2 1")
for alpha in [(0, 0), (1, 0), (0, 1), (1, 1)]:
    print(alpha, koszul_sign(alpha, swap))

phi = phi_iso(a, swap)
print([str(p) for p in phi.on("U").images])
print(check_morphism(phi).ok)
