"""Truncated simplicial modules and the Dold-Kan correspondence.

A :class:`SimplicialModule` stores free levels ``M_0 .. M_N`` with faces
``d_i: M_n -> M_{n-1}`` and degeneracies ``s_i: M_n -> M_{n+1}`` as matrices.
``N`` is the normalized (Moore) complex ``cap_{i>=1} ker d_i`` with ``d_0``;
``gamma`` is its inverse, built from surjections ``[n] ->> [k]``.
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement
from typing import Dict, List, Sequence, Tuple

from .chain import ChainComplex, ChainMap
from .errors import NegativeSupport, NotFiltered, SimplicialIdentityViolation
from .filtered import FilteredComplex, Page, gap, spectral_sequence
from .linalg import (Coefficients, Matrix, ZZ, complete_basis, image_basis, inverse,
                     kernel_basis, solve_matrix)

__all__ = [
    "SimplicialModule",
    "normalized_chains",
    "normalized_basis",
    "unnormalized_chains",
    "latching_complex",
    "gamma",
    "simplex_module",
    "surjections",
    "skeletal_filtration",
    "simplicial_ss",
    "complex_from_filtration",
]


class SimplicialModule:
    """Levels ``0..N``; ``faces[n]`` has ``n + 1`` matrices for ``1 <= n <= N``
    and ``degeneracies[n]`` has ``n + 1`` matrices for ``0 <= n < N``."""

    def __init__(self, ranks: Sequence[int], faces: Dict[int, Sequence],
                 degeneracies: Dict[int, Sequence], ring: Coefficients = ZZ, check: bool = True):
        self.ring = ring
        self.ranks = list(ranks)
        N = len(self.ranks) - 1
        self.faces, self.degeneracies = {}, {}
        for n in range(1, N + 1):
            ms = list(faces.get(n, []))
            if len(ms) != n + 1:
                raise SimplicialIdentityViolation(f"level {n} needs {n + 1} faces, got {len(ms)}")
            self.faces[n] = [m if isinstance(m, Matrix) else
                             Matrix(m, self.ranks[n], ring) for m in ms]
        for n in range(0, N):
            ms = list(degeneracies.get(n, []))
            if len(ms) != n + 1:
                raise SimplicialIdentityViolation(
                    f"level {n} needs {n + 1} degeneracies, got {len(ms)}")
            self.degeneracies[n] = [m if isinstance(m, Matrix) else
                                    Matrix(m, self.ranks[n], ring) for m in ms]
        for n, ms in self.faces.items():
            for m in ms:
                if m.shape != (self.ranks[n - 1], self.ranks[n]):
                    raise SimplicialIdentityViolation(f"face at level {n} has shape {m.shape}")
        for n, ms in self.degeneracies.items():
            for m in ms:
                if m.shape != (self.ranks[n + 1], self.ranks[n]):
                    raise SimplicialIdentityViolation(f"degeneracy at level {n} has shape {m.shape}")
        if check:
            self.validate()

    def __eq__(self, other):
        if not isinstance(other, SimplicialModule):
            return NotImplemented
        return (self.ring == other.ring and self.ranks == other.ranks
                and self.faces == other.faces and self.degeneracies == other.degeneracies)

    __hash__ = None

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def d(self, n: int, i: int) -> Matrix:
        return self.faces[n][i]

    def s(self, n: int, i: int) -> Matrix:
        return self.degeneracies[n][i]

    def validate(self) -> bool:
        N, I = self.top, lambda n: Matrix.identity(self.ranks[n], self.ring)
        for n in range(2, N + 1):
            for j in range(n + 1):
                for i in range(j):
                    if self.d(n - 1, i) @ self.d(n, j) != self.d(n - 1, j - 1) @ self.d(n, i):
                        raise SimplicialIdentityViolation(
                            f"d_{i} d_{j} != d_{j - 1} d_{i} at level {n}")
        for n in range(0, N - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    if self.s(n + 1, i) @ self.s(n, j) != self.s(n + 1, j + 1) @ self.s(n, i):
                        raise SimplicialIdentityViolation(
                            f"s_{i} s_{j} != s_{j + 1} s_{i} at level {n}")
        for n in range(0, N):
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = self.d(n + 1, i) @ self.s(n, j)
                    if i < j:
                        rhs = self.s(n - 1, j - 1) @ self.d(n, i)
                    elif i in (j, j + 1):
                        rhs = I(n)
                    else:
                        rhs = self.s(n - 1, j) @ self.d(n, i - 1)
                    if lhs != rhs:
                        raise SimplicialIdentityViolation(f"d_{i} s_{j} identity fails at level {n}")
        return True

    def conjugate(self, G: Sequence[Matrix]) -> "SimplicialModule":
        """Transport along levelwise isomorphisms ``G[n]: M_n -> M'_n``."""
        Gi = [inverse(g) for g in G]
        faces = {n: [G[n - 1] @ m @ Gi[n] for m in ms] for n, ms in self.faces.items()}
        degs = {n: [G[n + 1] @ m @ Gi[n] for m in ms] for n, ms in self.degeneracies.items()}
        return SimplicialModule(self.ranks, faces, degs, self.ring)


def normalized_basis(M: SimplicialModule, n: int) -> Matrix:
    """Canonical basis of ``N_n = cap_{i>=1} ker d_i`` as columns of ``M_n``."""
    if n == 0:
        return Matrix.identity(M.ranks[0], M.ring)
    stack = M.d(n, 1).vstack(*[M.d(n, i) for i in range(2, n + 1)])
    return kernel_basis(stack)


def normalized_chains(M: SimplicialModule) -> ChainComplex:
    """The Moore complex ``N(M)`` with differential ``d_0``."""
    bases = [normalized_basis(M, n) for n in range(M.top + 1)]
    ranks = {n: b.ncols for n, b in enumerate(bases)}
    diffs = {}
    for n in range(1, M.top + 1):
        if bases[n].ncols and bases[n - 1].ncols:
            diffs[n] = solve_matrix(bases[n - 1], M.d(n, 0) @ bases[n])
    return ChainComplex(ranks, diffs, M.ring)


def _alternating(M: SimplicialModule, n: int) -> Matrix:
    out = Matrix.zeros(M.ranks[n - 1], M.ranks[n], M.ring)
    for i in range(n + 1):
        out = out + (M.d(n, i) if i % 2 == 0 else -M.d(n, i))
    return out


def unnormalized_chains(M: SimplicialModule) -> ChainComplex:
    """``M_n`` with the alternating sum of faces."""
    return ChainComplex({n: r for n, r in enumerate(M.ranks)},
                        {n: _alternating(M, n) for n in range(1, M.top + 1)}, M.ring)


def latching_complex(M: SimplicialModule) -> Tuple[ChainComplex, ChainMap]:
    """``M_n`` modulo degenerate elements, with the comparison map from ``N(M)``.

    The comparison is a levelwise isomorphism; it is validated as a chain map
    and each component is inverted exactly.
    """
    R = M.ring
    comp, proj = [], []
    for n in range(M.top + 1):
        r = M.ranks[n]
        if n == 0:
            comp.append(Matrix.identity(r, R))
            proj.append(Matrix.identity(r, R))
            continue
        L = image_basis(M.s(n - 1, 0).hstack(*[M.s(n - 1, i) for i in range(1, n)]))
        full = complete_basis(L)
        l = L.ncols
        comp.append(full.block(0, r, l, r))
        proj.append(inverse(full).block(l, r, 0, r))
    ranks = {n: c.ncols for n, c in enumerate(comp)}
    diffs = {}
    for n in range(1, M.top + 1):
        if ranks[n] and ranks[n - 1]:
            diffs[n] = proj[n - 1] @ _alternating(M, n) @ comp[n]
    C = ChainComplex(ranks, diffs, R)
    N = normalized_chains(M)
    w = ChainMap(N, C, {n: proj[n] @ normalized_basis(M, n) for n in N.ranks})
    for n in N.ranks:
        inverse(w[n])
    return C, w


# --- the inverse functor ---------------------------------------------------------------

def surjections(n: int, k: int) -> List[Tuple[int, ...]]:
    """Monotone surjections ``[n] ->> [k]`` as value tuples, in lexicographic order."""
    if k > n or k < 0:
        return []
    out = []
    for jumps in combinations(range(1, n + 1), k):
        vals, v, js = [], 0, set(jumps)
        for x in range(n + 1):
            if x in js:
                v += 1
            vals.append(v)
        out.append(tuple(vals))
    return sorted(out)


def _factor(values: Tuple[int, ...], k: int):
    """Epi-mono factorization of a monotone map into ``[k]``.

    Returns ``(epi, missing)``: ``missing`` is None when ``values`` is onto,
    otherwise the single value it skips (the map is ``delta_missing o epi``),
    or ``-1`` if more than one value is skipped.
    """
    image = sorted(set(values))
    if len(image) == k + 1:
        return values, None
    if len(image) < k:
        return None, -1
    missing = next(j for j in range(k + 1) if j not in image)
    pos = {v: i for i, v in enumerate(image)}
    return tuple(pos[v] for v in values), missing


def gamma(C: ChainComplex, margin: int = 2) -> SimplicialModule:
    """``Gamma(C)_n = sum over [n] ->> [k] of C_k``, levels ``0 .. top + margin``."""
    R = C.ring
    sup = C.support()
    if sup is not None and sup[0] < 0:
        raise NegativeSupport(f"complex has a nonzero term in degree {sup[0]}")
    top = (sup[1] if sup else 0) + margin
    layout = []
    for n in range(top + 1):
        offs, off = {}, 0
        for k in range(0, min(n, sup[1] if sup else -1) + 1):
            for sig in surjections(n, k):
                if C.rank(k):
                    offs[sig] = off
                    off += C.rank(k)
        layout.append((offs, off))
    ranks = [size for _, size in layout]

    def place(rows, r0, c0, M):
        for i, row in enumerate(M.data):
            for j, x in enumerate(row):
                if x:
                    rows[r0 + i][c0 + j] += x

    faces, degs = {}, {}
    for n in range(1, top + 1):
        (src, ns), (tgt, nt) = layout[n], layout[n - 1]
        mats = []
        for i in range(n + 1):
            rows = [[0] * ns for _ in range(nt)]
            for sig, c0 in src.items():
                k = sig[-1]
                comp = sig[:i] + sig[i + 1:]
                epi, missing = _factor(comp, k)
                if missing is None:
                    place(rows, tgt[epi], c0, Matrix.identity(C.rank(k), R))
                elif missing == 0 and C.rank(k - 1):
                    place(rows, tgt[epi], c0, C.d(k))
            mats.append(Matrix(rows, ns, R))
        faces[n] = mats
    for n in range(0, top):
        (src, ns), (tgt, nt) = layout[n], layout[n + 1]
        mats = []
        for i in range(n + 1):
            rows = [[0] * ns for _ in range(nt)]
            for sig, c0 in src.items():
                new = sig[:i + 1] + sig[i:]
                place(rows, tgt[new], c0, Matrix.identity(C.rank(sig[-1]), R))
            mats.append(Matrix(rows, ns, R))
        degs[n] = mats
    return SimplicialModule(ranks, faces, degs, R)


def simplex_module(k: int, top: int) -> SimplicialModule:
    """The free simplicial module on the standard ``k``-simplex, levels ``0..top``."""
    # monotone maps [n] -> [k] are the sorted (n+1)-tuples of values
    levels = [list(combinations_with_replacement(range(k + 1), n + 1)) for n in range(top + 1)]
    index = [{t: i for i, t in enumerate(lv)} for lv in levels]

    def perm(n, m, fn):
        rows = [[0] * len(levels[n]) for _ in levels[m]]
        for j, t in enumerate(levels[n]):
            rows[index[m][fn(t)]][j] = 1
        return Matrix(rows, len(levels[n]), ZZ)

    faces = {n: [perm(n, n - 1, lambda t, i=i: t[:i] + t[i + 1:]) for i in range(n + 1)]
             for n in range(1, top + 1)}
    degs = {n: [perm(n, n + 1, lambda t, i=i: t[:i + 1] + t[i:]) for i in range(n + 1)]
            for n in range(top)}
    return SimplicialModule([len(lv) for lv in levels], faces, degs, ZZ)


# --- filtrations --------------------------------------------------------------------------

def skeletal_filtration(M: SimplicialModule) -> FilteredComplex:
    """Brutal filtration of ``N(M)``: ``X(k)`` is ``N(M)`` in degrees ``<= k``."""
    N = normalized_chains(M)
    R = M.ring
    bases = []
    for k in range(M.top):
        bases.append({n: (Matrix.identity(r, R) if n <= k else Matrix.zeros(r, 0, R))
                      for n, r in N.ranks.items()})
    return FilteredComplex.from_subcomplexes(N, bases)


def simplicial_ss(M: SimplicialModule) -> List[Page]:
    """Spectral sequence of the skeletal filtration, pages ``E_1 .. E_{N+1}``."""
    return spectral_sequence(skeletal_filtration(M))


def complex_from_filtration(F: FilteredComplex) -> ChainComplex:
    """The complex of gaps ``X(k-1, k)``, each concentrated in degree ``k``,
    with the connecting maps as differential."""
    R = F.ring
    ranks, diffs = {}, {}
    for k in range(F.P + 1):
        G = gap(F, k - 1, k).complex
        for n, r in G.ranks.items():
            if n != k:
                raise NotFiltered(f"gap {k} has a nonzero term in degree {n}")
        if G.rank(k):
            ranks[k] = G.rank(k)
    for k in ranks:
        if k - 1 in ranks:
            D = F.adapted_differential(k)
            diffs[k] = D.block(F.cut(k - 2, k - 1), F.cut(k - 1, k - 1),
                               F.cut(k - 1, k), F.cut(k, k))
    return ChainComplex(ranks, diffs, R)
