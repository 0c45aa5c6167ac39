"""Ext and Tor from free resolutions, and the standard t-structure."""

from exacthom import (ChainComplex, FgModule, Matrix, ext, homology, padded_resolution,
                      tau_triangle, tor, truncate_geq, truncate_leq, verify_distinguished)
from exacthom.oracle import brute_hom

M, N = FgModule.parse("Z/4"), FgModule.parse("Z/6")
for n in range(3):
    print(f"Ext^{n}(Z/4, Z/6) = {ext(M, N, n)}    Tor_{n}(Z/4, Z/6) = {tor(M, N, n)}")

# Hom by enumerating every homomorphism agrees with Ext^0
print("brute-force Hom:", brute_hom(M, N))

# a deliberately wasteful resolution gives the same answers
P = padded_resolution(M, extra=2).complex
print("padded resolution ranks:", P.ranks)

# truncations of 0 <- Z^2 <- Z^2 <- Z
C = ChainComplex({0: 2, 1: 2, 2: 1}, {1: Matrix([[0, 0], [0, 3]]), 2: Matrix([[4], [0]])})
print("H(C):", {n: str(homology(C, n)) for n in C.ranks})
for n in (0, 1):
    hi, _ = truncate_geq(C, n)
    lo, _ = truncate_leq(C, n)
    print(f"tau>={n}:", {m: str(homology(hi, m)) for m in C.ranks},
          f"  tau<={n}:", {m: str(homology(lo, m)) for m in C.ranks})
print("tau triangle at 1 distinguished:", verify_distinguished(tau_triangle(C, 1)).ok)
