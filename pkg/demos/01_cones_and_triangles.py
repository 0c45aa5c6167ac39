"""Mapping cones and distinguished triangles.

Multiplication by 2 on Z is injective but not onto.  Its cone remembers the
cokernel, and rotating the cone triangle keeps it distinguished.
"""

from exacthom import (ChainComplex, ChainMap, Matrix, Triangle, cone_long_exact_sequence,
                      homology, octahedron, rotate, triangle_of, verify_distinguished)

Z0 = ChainComplex.concentrated(1, 0)
two = ChainMap(Z0, Z0, {0: Matrix([[2]])})

T = triangle_of(two)
print("cone of x2:", {n: str(homology(T.Z, n)) for n in (0, 1)})
print("distinguished:", verify_distinguished(T).ok)
print("rotated:", verify_distinguished(rotate(T)).ok)

# the long exact sequence is checked node by node with explicit witnesses
print("LES:", cone_long_exact_sequence(two).summary())

# doubling the connecting map breaks the triangle, in both directions
bad = Triangle(T.f, T.g, T.h.scale(2), T.null_witness)
print("with 2h:", verify_distinguished(bad).reason)
print("rotated with 2h:", verify_distinguished(rotate(bad)).ok)

# octahedron for Z -2-> Z -3-> Z: cones Z/2, Z/6, Z/3 form a triangle
three = ChainMap(Z0, Z0, {0: Matrix([[3]])})
O = octahedron(two, three)
for name, t in (("f", O.T_f), ("gf", O.T_gf), ("g", O.T_g)):
    print(f"H_0 cone({name}) =", homology(t.Z, 0))
print("all commutativity witnesses found:", O.commutes)
print("link triangle distinguished:", verify_distinguished(O.T_link).ok)
