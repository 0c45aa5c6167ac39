"""The spectral sequence of a filtered complex.

Tensor (Z -2-> Z) with (Z -4-> Z) and filter the double complex by columns.
The E_1 page is columnwise homology; d_1 is multiplication by 2 on Z/4, and
E_2 = E_inf reassembles the total homology Z/2, Z/2.
"""

from exacthom import ChainComplex, DoubleComplex, e_infinity, homology, spectral_sequence

A = ChainComplex.two_term([[2]], 1)
B = ChainComplex.two_term([[4]], 1)
D = DoubleComplex.from_tensor(A, B)
F = D.column_filtration()

for pg in spectral_sequence(F):
    print(pg.grid())
    print()

report = e_infinity(F)
for n, H in report.total.items():
    pieces = ", ".join(str(g) for g in report.graded[n])
    print(f"H_{n} = {H}; graded pieces {pieces}")
print("converges:", report.ok)
print("direct total homology:", {n: str(homology(D.total(), n)) for n in range(3)})
