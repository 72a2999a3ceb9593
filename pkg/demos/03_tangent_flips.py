# coding: utf-8

# # Iterated tangent bundles and their flips
#
# Applying the tangent functor k times to a supermanifold gives a k-vector
# bundle.  The symmetric group permutes the k tangent directions.

# In[1]:

from supergeom import perms
from supergeom.bundle import check_morphism, validate_atlas
from supergeom.generators import random_manifold_atlas, rng_for
from supergeom.superalg import Chart, Coordinate, PolynomialMap
from supergeom.superalg import format_polynomial as show
from supergeom.symmetry import validate_action
from supergeom.tangent import flip_action, iterated_tangent, tangent_chart, tangent_of_map

# For y = x^3 the second tangent has four components.  The last one carries
# the second derivative, paired with both first-order directions.

# In[2]:

line, target = Chart([Coordinate("x", 0)]), Chart([Coordinate("y", 0)])
x = line.var(0)
cube = PolynomialMap(line, target, [x * x * x])
t1 = tangent_of_map(cube)
t2 = tangent_of_map(t1, tangent_chart(t1.domain), tangent_chart(t1.codomain))
for name, img in zip(t2.codomain.coords, t2.images):
    print(f"{name.name:10} = {show(img)}")

# On a random (1|1) supermanifold the flips of the third tangent bundle form a
# group action by bundle isomorphisms.

# In[3]:

m = random_manifold_atlas(rng_for(1), 1, 1, n_charts=2)
it = iterated_tangent(m, 3)
print(len(it.atlas.chart), "coordinates,", validate_atlas(it.atlas).ok)
print(all(check_morphism(flip_action(it, s)).ok for s in perms.all_perms(3)))
print(validate_action(it.atlas, it.action()).ok)
