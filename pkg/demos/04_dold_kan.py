"""Dold-Kan: complexes and simplicial modules carry the same information."""

from exacthom import (ChainComplex, Matrix, gamma, homology, latching_complex,
                      normalized_chains, simplicial_ss)
from exacthom.doldkan import simplex_module

C = ChainComplex({0: 1, 1: 2, 2: 1}, {1: Matrix([[2, 0]]), 2: Matrix([[0], [5]])})
M = gamma(C)
print("levels of Gamma(C):", M.ranks)
print("N(Gamma(C)) == C:", normalized_chains(M) == C)

L, witness = latching_complex(M)
print("quotient by degenerate simplices has ranks", L.ranks, "; comparison valid:",
      witness.validate())

# the skeletal spectral sequence collapses onto the bottom row at E_2
pages = simplicial_ss(M)
print(pages[1].grid())

# the free simplicial module on a 2-simplex is contractible
N = normalized_chains(simplex_module(2, 3))
print("H(N(Delta^2)):", {n: str(homology(N, n)) for n in range(3)})
