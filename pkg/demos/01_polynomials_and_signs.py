# coding: utf-8

# # Polynomials in even and odd coordinates
#
# Every computation in supergeom happens in a polynomial superalgebra over a
# chart.  Coefficients are exact fractions, so equalities below are exact.

# In[1]:

from fractions import Fraction

from supergeom.superalg import Chart, Coordinate, Derivation, apply_derivation, bracket, partial
from supergeom.superalg import format_polynomial as show

c = Chart([Coordinate("x", 0), Coordinate("xi", 1), Coordinate("eta", 1)])
x, xi, eta = c.vars()

# Odd coordinates anticommute, so swapping them costs a sign and squares vanish.

# In[2]:

print(show(eta * xi))          # -xi*eta
print(show(xi * xi))           # 0
print(show((2 * x) * (3 * x)))  # 6*x^2

# Derivatives act from the left.  Differentiating xi*eta in eta first has to
# move eta past xi.

# In[3]:

print(show(partial(xi * eta, "xi")))    # eta
print(show(partial(xi * eta, "eta")))   # -xi

# Vector fields are derivations.  The bracket of x d/dx with d/dx is -d/dx.

# In[4]:

x_dx = Derivation(c, [x, c.zero(), c.zero()])
dx = Derivation(c, [c.one(), c.zero(), c.zero()])
print([show(p) for p in bracket(x_dx, dx).components])

# An Euler field counts weight.  With xi and eta of weight 1 the product
# xi*eta is an eigenvector with eigenvalue 2.

# In[5]:

euler = Derivation(c, [c.zero(), xi, eta])
print(show(apply_derivation(euler, xi * eta)))
print(show(apply_derivation(euler, Fraction(1, 2) * x * xi)))
