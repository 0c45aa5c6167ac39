"""Free resolutions, Ext and Tor, and the standard t-structure on chain complexes.

Ext and Tor are homology of hom and tensor complexes of free resolutions.
Truncations use homological indexing: ``tau_{>=n}`` keeps ``C_m`` for
``m > n`` and the cycles ``ker d_n`` in degree ``n``; ``tau_{<=n}`` keeps
``C_m`` for ``m < n`` plus ``C_n`` and the boundaries ``im d_{n+1}`` placed
in degree ``n + 1``.  The heart functor ``pi_n`` is ``H_n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .chain import (ChainComplex, ChainHomotopy, ChainMap, hom_complex, homology,
                    tensor_complex)
from .errors import CoefficientMismatch
from .linalg import (FgModule, Matrix, _diagonalize, image_basis, inverse,
                     kernel_basis, solve_matrix)
from .triangles import Triangle, complete_triangle

__all__ = [
    "Resolution",
    "free_resolution",
    "padded_resolution",
    "resolve_complex",
    "ext",
    "tor",
    "ext_from_resolutions",
    "tor_from_resolutions",
    "truncate_geq",
    "truncate_leq",
    "heart_pi",
    "tau_triangle",
]


@dataclass(frozen=True)
class Resolution:
    """A free complex ``P`` in degrees ``>= 0`` with ``H_0(P) = module`` and
    no higher homology.  ``augmentation`` sends the basis of ``P_0`` to the
    standard generators of ``module`` (free generators, then cyclic ones)."""

    module: FgModule
    complex: ChainComplex
    augmentation: Matrix


def free_resolution(M: FgModule) -> Resolution:
    """Length-one resolution ``R^t --diag(d_i)--> R^(f+t)`` (length zero over a field)."""
    R, f, tors = M.ring, M.free_rank, M.torsion
    n0 = f + len(tors)
    ranks = {0: n0, 1: len(tors)}
    d1 = [[0] * len(tors) for _ in range(n0)]
    for i, d in enumerate(tors):
        d1[f + i][i] = d
    C = ChainComplex(ranks, {1: Matrix(d1, len(tors), R)}, R)
    return Resolution(M, C, Matrix.identity(n0, R))


def padded_resolution(M: FgModule, extra: int = 1) -> Resolution:
    """A deliberately non-minimal resolution: ``extra`` contractible pairs
    ``R --1--> R`` added in degrees 1-0 and 2-1, then a unimodular change of
    basis in degree 0.  Used to check that Ext and Tor do not depend on the
    chosen resolution."""
    base = free_resolution(M).complex
    R = M.ring
    r0, r1, r2 = base.rank(0), base.rank(1), 0
    # summands: (1 -> 0) pairs and (2 -> 1) pairs
    a, b = extra, extra
    n0, n1, n2 = r0 + a, r1 + a + b, r2 + b
    d1 = Matrix.from_blocks([
        [base.d(1), Matrix.zeros(r0, a + b, R)],
        [Matrix.zeros(a, r1, R), Matrix.identity(a, R).hstack(Matrix.zeros(a, b, R))]])
    d2 = Matrix.zeros(r1 + a, b, R).vstack(Matrix.identity(b, R))
    # shear P_0 by x_0 += x_last to hide the split summand
    U = [[1 if i == j else 0 for j in range(n0)] for i in range(n0)]
    if n0 >= 2:
        U[0][n0 - 1] = 1
    Um = Matrix(U, n0, R)
    C = ChainComplex({0: n0, 1: n1, 2: n2}, {1: Um @ d1, 2: d2}, R)
    aug = Matrix.identity(r0, R).hstack(Matrix.zeros(r0, a, R)) @ inverse(Um)
    return Resolution(M, C, aug)


def resolve_complex(C: ChainComplex, minimal: bool = False) -> Tuple[ChainComplex, ChainMap]:
    """A free complex ``P`` with a quasi-isomorphism ``P -> C``.

    Bounded complexes of free modules are already cofibrant, so the default
    returns ``(C, id)``.  With ``minimal=True`` the homology model is built:
    ``P`` is the sum of the length-one resolutions of the ``H_n(C)`` and the
    map picks cycle representatives from a Smith form of the boundaries.
    """
    if not minimal:
        return C, ChainMap.identity(C)
    R = C.ring
    info = {}
    for n in C.ranks:
        Zb = kernel_basis(C.d(n))
        k = Zb.ncols
        rel = solve_matrix(Zb, C.d(n + 1)) if k else Matrix.zeros(0, C.rank(n + 1), R)
        if k and rel.ncols:
            U, D, V = _diagonalize(rel)
            Um = Matrix(U, k, R)
            Vm = Matrix(V, rel.ncols, R)
            diag = [D[i][i] for i in range(min(k, rel.ncols))]
        else:
            Um, Vm, diag = Matrix.identity(k, R), Matrix.identity(rel.ncols, R), []
        r = sum(1 for x in diag if x)
        Zp = Zb @ inverse(Um)
        tors = [i for i in range(r) if diag[i] != 1]
        info[n] = dict(cycles=Zp, free=list(range(r, k)), tors=tors,
                       orders=[diag[i] for i in tors], V=Vm)
    ranks, diffs, comps = {}, {}, {}
    for n in sorted(set(info) | {m + 1 for m in info}):
        here = info.get(n, dict(free=[], tors=[], orders=[]))
        below = info.get(n - 1, dict(tors=[], orders=[]))
        nf, nt, nk = len(here["free"]), len(here["tors"]), len(below["tors"])
        size = nf + nt + nk
        if not size:
            continue
        ranks[n] = size
        cols = []
        if nf or nt:
            Zp = here["cycles"]
            cols += [Zp.column(i) for i in here["free"] + here["tors"]]
        if nk:
            Vb = info[n - 1]["V"]
            cols += [Vb.column(i) for i in below["tors"]]
        comps[n] = Matrix.from_columns(cols, C.rank(n), R)
        if nk:
            pb = info[n - 1]
            rows = len(pb["free"]) + len(pb["tors"]) + len(info.get(n - 2, {"tors": []})["tors"])
            d = [[0] * size for _ in range(rows)]
            off = len(pb["free"])
            for j, order in enumerate(below["orders"]):
                d[off + j][nf + nt + j] = order
            diffs[n] = Matrix(d, size, R)
    P = ChainComplex(ranks, diffs, R)
    return P, ChainMap(P, C, comps)


def _zero(M: FgModule) -> FgModule:
    return FgModule(M.ring)


def _same_ring(M, N):
    if M.ring != N.ring:
        raise CoefficientMismatch(f"{M.ring} vs {N.ring}")


def ext_from_resolutions(P: ChainComplex, Q: ChainComplex, n: int) -> FgModule:
    return homology(hom_complex(P, Q), -n)


def tor_from_resolutions(P: ChainComplex, Q: ChainComplex, n: int) -> FgModule:
    return homology(tensor_complex(P, Q), n)


def ext(M: FgModule, N: FgModule, n: int) -> FgModule:
    """``Ext^n(M, N) = H_{-n}[P, Q]`` for free resolutions ``P``, ``Q``."""
    _same_ring(M, N)
    if n < 0:
        return _zero(M)
    return ext_from_resolutions(free_resolution(M).complex, free_resolution(N).complex, n)


def tor(M: FgModule, N: FgModule, n: int) -> FgModule:
    """``Tor_n(M, N) = H_n(P (x) Q)``."""
    _same_ring(M, N)
    if n < 0:
        return _zero(M)
    return tor_from_resolutions(free_resolution(M).complex, free_resolution(N).complex, n)


def truncate_geq(C: ChainComplex, n: int) -> Tuple[ChainComplex, ChainMap]:
    """``tau_{>=n} C`` with its inclusion into ``C``."""
    R = C.ring
    K = kernel_basis(C.d(n))
    ranks = {m: r for m, r in C.ranks.items() if m > n}
    ranks[n] = K.ncols
    diffs = {m: M for m, M in C.diffs.items() if m > n + 1}
    if K.ncols and C.rank(n + 1):
        diffs[n + 1] = solve_matrix(K, C.d(n + 1))
    T = ChainComplex(ranks, diffs, R, check=False)
    comps = {m: Matrix.identity(r, R) for m, r in C.ranks.items() if m > n}
    comps[n] = K
    return T, ChainMap(T, C, comps)


def truncate_leq(C: ChainComplex, n: int) -> Tuple[ChainComplex, ChainMap]:
    """``tau_{<=n} C`` with the projection ``C -> tau_{<=n} C``."""
    R = C.ring
    I = image_basis(C.d(n + 1))
    ranks = {m: r for m, r in C.ranks.items() if m <= n}
    ranks[n + 1] = I.ncols
    diffs = {m: M for m, M in C.diffs.items() if m <= n}
    if I.ncols:
        diffs[n + 1] = I
    T = ChainComplex(ranks, diffs, R, check=False)
    comps = {m: Matrix.identity(r, R) for m, r in C.ranks.items() if m <= n}
    if I.ncols:
        comps[n + 1] = solve_matrix(I, C.d(n + 1))
    return T, ChainMap(C, T, comps)


def heart_pi(C: ChainComplex, n: int) -> FgModule:
    """``pi_n C = H_n C``, cross-checked against ``H_n`` of ``tau_{>=n} tau_{<=n} C``."""
    H = homology(C, n)
    inner, _ = truncate_leq(C, n)
    core, _ = truncate_geq(inner, n)
    if homology(core, n) != H:
        raise RuntimeError(f"truncation disagrees with homology in degree {n}")
    return H


def tau_triangle(C: ChainComplex, n: int) -> Triangle:
    """``tau_{>=n} C -> C -> tau_{<=n-1} C -> (tau_{>=n} C)[1]``.

    The composite of the first two maps is zero on the nose; the connecting
    map is found by an exact solve.
    """
    X, f = truncate_geq(C, n)
    Z, g = truncate_leq(C, n - 1)
    zero = ChainMap.zero(X, Z)
    w = ChainHomotopy(g @ f, zero, {}, check=True)
    T = complete_triangle(f, g, w)
    if T is None:
        raise RuntimeError("no connecting map completes the truncation triangle")
    return T
