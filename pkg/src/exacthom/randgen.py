"""Seeded generators for random test instances.

A single 64-bit seed determines every instance.  The seed is expanded by
SplitMix64 (Steele, Lea and Flood): the state advances by the constant
``0x9E3779B97F4A7C15`` and each output is the state passed through the
mixer ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2^64).  Bounded integers
use rejection sampling so results are identical on every platform.

Complexes are built from split pieces (free generators and pairs
``u -> k v``) and then conjugated by random unimodular matrices, so their
homology is known by construction but hidden from the algorithms.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .chain import (ChainComplex, ChainMap, hom_differential, hom_vector_to_components,
                    map_to_hom_vector)
from .doldkan import SimplicialModule, gamma
from .filtered import DoubleComplex, FilteredComplex
from .linalg import Coefficients, FgModule, Matrix, ZZ, kernel_basis

__all__ = [
    "SplitMix64",
    "random_matrix",
    "random_unimodular",
    "random_complex",
    "random_chain_map",
    "random_commuting_square",
    "random_module",
    "random_filtered_complex",
    "random_double_complex",
    "random_simplicial",
]

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq: Sequence):
        return seq[self.below(len(seq))]

    def shuffle(self, xs: List) -> None:
        for i in range(len(xs) - 1, 0, -1):
            j = self.below(i + 1)
            xs[i], xs[j] = xs[j], xs[i]

    def fork(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())


def random_matrix(rng: SplitMix64, nrows: int, ncols: int, bound: int = 9,
                  ring: Coefficients = ZZ) -> Matrix:
    return Matrix([[rng.randint(-bound, bound) for _ in range(ncols)] for _ in range(nrows)],
                  ncols, ring)


def random_unimodular(rng: SplitMix64, n: int, ring: Coefficients = ZZ,
                      steps: Optional[int] = None,
                      levels: Optional[Sequence[int]] = None) -> Tuple[Matrix, Matrix]:
    """``(G, G^{-1})`` from random elementary operations.

    With ``levels`` given, only operations ``col_i += c col_j`` with
    ``levels[j] <= levels[i]`` are used, so ``G`` preserves the filtration
    by level.
    """
    G = [[int(i == j) for j in range(n)] for i in range(n)]
    H = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return Matrix.zeros(0, 0, ring), Matrix.zeros(0, 0, ring)
    steps = 2 * n if steps is None else steps
    for _ in range(steps):
        i, j = rng.below(n), rng.below(n)
        if i == j:
            if levels is None and rng.below(3) == 0:
                # flip a sign: column i of G and row i of G^{-1}
                for r in range(n):
                    G[r][i] = -G[r][i]
                H[i] = [-x for x in H[i]]
            continue
        if levels is not None and levels[j] > levels[i]:
            i, j = j, i
        c = rng.choice((-2, -1, 1, 2))
        # G <- G E with E = I + c e_j e_i^T (col_i += c col_j);  G^{-1} <- E^{-1} G^{-1}
        for r in range(n):
            G[r][i] += c * G[r][j]
        H[j] = [a - c * b for a, b in zip(H[j], H[i])]
    return Matrix(G, n, ring), Matrix(H, n, ring)


def _pieces(rng: SplitMix64, lo: int, hi: int, max_rank: int, orders: Sequence[int]):
    free = {n: rng.randint(0, 2) for n in range(lo, hi + 1)}
    pairs = {n: [rng.choice(orders) for _ in range(rng.randint(0, 2))] for n in range(lo, hi)}

    def size(n):
        return free.get(n, 0) + len(pairs.get(n, [])) + len(pairs.get(n - 1, []))

    for n in range(lo, hi + 1):
        while size(n) > max_rank:
            if pairs.get(n - 1):
                pairs[n - 1].pop()
            elif pairs.get(n):
                pairs[n].pop()
            else:
                free[n] -= 1
    return free, pairs


def random_complex(rng: SplitMix64, lo: int = 0, hi: int = 3, max_rank: int = 3,
                   ring: Coefficients = ZZ, conjugate: bool = True,
                   orders: Sequence[int] = (1, 1, 2, 3, 4, 6, 0)) -> ChainComplex:
    """A random bounded free complex on degrees ``[lo, hi]``.

    Pair ``u -> k v`` with ``k = 0`` contributes two free homology classes.
    """
    free, pairs = _pieces(rng, lo, hi, max_rank, orders)
    ranks = {n: free[n] + len(pairs.get(n, [])) + len(pairs.get(n - 1, []))
             for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        rows = [[0] * ranks[n] for _ in range(ranks[n - 1])]
        # degree n basis: free, bottoms of pairs(n), tops of pairs(n-1)
        for t, k in enumerate(pairs.get(n - 1, [])):
            col = free[n] + len(pairs.get(n, [])) + t
            row = free[n - 1] + t
            rows[row][col] = k
        diffs[n] = Matrix(rows, ranks[n], ring)
    if conjugate:
        G = {n: random_unimodular(rng, r, ring) for n, r in ranks.items()}
        diffs = {n: G[n - 1][0] @ d @ G[n][1] for n, d in diffs.items()}
    return ChainComplex(ranks, diffs, ring)


def random_chain_map(rng: SplitMix64, X: ChainComplex, Y: ChainComplex, bound: int = 2,
                     terms: int = 3) -> ChainMap:
    """A random element of the lattice of chain maps ``X -> Y`` (kernel of ``D_0``)."""
    K = kernel_basis(hom_differential(X, Y, 0))
    v = [0] * K.nrows
    if K.ncols:
        for _ in range(terms):
            j, c = rng.below(K.ncols), rng.randint(-bound, bound)
            col = K.column(j)
            v = [a + c * b for a, b in zip(v, col)]
    return ChainMap(X, Y, hom_vector_to_components(v, X, Y, 0))


def _linear_map(fn, A, B, C, D) -> Matrix:
    """Matrix of a linear operation taking degree-0 maps ``A -> B`` to degree-0 maps ``C -> D``."""
    size = hom_differential(A, B, 0).ncols
    nrows = hom_differential(C, D, 0).ncols
    cols = []
    for j in range(size):
        e = [0] * size
        e[j] = 1
        out = fn(hom_vector_to_components(e, A, B, 0))
        cols.append(map_to_hom_vector(out, C, D, 0))
    return Matrix.from_columns(cols, nrows, A.ring) if cols else Matrix.zeros(nrows, 0, A.ring)


def random_commuting_square(rng: SplitMix64, f: ChainMap, f2: ChainMap,
                            bound: int = 2, terms: int = 3) -> Tuple[ChainMap, ChainMap]:
    """Random chain maps ``phi_X: X -> X2``, ``phi_Y: Y -> Y2`` with
    ``phi_Y f = f2 phi_X`` exactly, drawn from the lattice of all solutions."""
    X, Y, X2, Y2, R = f.source, f.target, f2.source, f2.target, f.ring
    DX, DY = hom_differential(X, X2, 0), hom_differential(Y, Y2, 0)
    post = _linear_map(lambda c: {n: c.get(n, Matrix.zeros(Y2.rank(n), Y.rank(n), R)) @ f[n]
                                  for n in X.ranks}, Y, Y2, X, Y2)
    pre = _linear_map(lambda c: {n: f2[n] @ c.get(n, Matrix.zeros(X2.rank(n), X.rank(n), R))
                                 for n in X.ranks}, X, X2, X, Y2)
    nx, ny = DX.ncols, DY.ncols
    A = Matrix.from_blocks([
        [DX, Matrix.zeros(DX.nrows, ny, R)],
        [Matrix.zeros(DY.nrows, nx, R), DY],
        [-pre, post]])
    K = kernel_basis(A)
    v = [0] * (nx + ny)
    if K.ncols:
        for _ in range(terms):
            j, c = rng.below(K.ncols), rng.randint(-bound, bound)
            v = [a + c * b for a, b in zip(v, K.column(j))]
    phi_X = ChainMap(X, X2, hom_vector_to_components(v[:nx], X, X2, 0))
    phi_Y = ChainMap(Y, Y2, hom_vector_to_components(v[nx:], Y, Y2, 0))
    return phi_X, phi_Y


def random_module(rng: SplitMix64, ring: Coefficients = ZZ, max_free: int = 2,
                  max_cyclic: int = 2, max_order: int = 12) -> FgModule:
    f = rng.randint(0, max_free)
    orders = [rng.randint(2, max_order) for _ in range(rng.randint(0, max_cyclic))]
    return FgModule.from_cyclic(ring, f, orders)


def random_filtered_complex(rng: SplitMix64, P: int = 2, lo: int = 0, hi: int = 3,
                            max_rank: int = 3, ring: Coefficients = ZZ,
                            orders: Sequence[int] = (1, 1, 2, 3, 4, 0)) -> FilteredComplex:
    """Split pieces assigned to filtration levels, mixed by level-preserving
    unimodular changes of basis, then each step given its own random basis."""
    free, pairs = _pieces(rng, lo, hi, max_rank, orders)
    ranks, levels, diffs = {}, {}, {}
    for n in range(lo, hi + 1):
        lv = [rng.randint(0, P) for _ in range(free[n])]
        lv += [None] * len(pairs.get(n, []))        # bottoms, filled below
        lv += [rng.randint(0, P) for _ in pairs.get(n - 1, [])]  # tops
        levels[n] = lv
        ranks[n] = len(lv)
    for n in range(lo, hi):
        tops = levels[n + 1][free[n + 1] + len(pairs.get(n + 1, [])):]
        for t, top in enumerate(tops):
            levels[n][free[n] + t] = rng.randint(0, top)
    for n in range(lo + 1, hi + 1):
        rows = [[0] * ranks[n] for _ in range(ranks[n - 1])]
        for t, k in enumerate(pairs.get(n - 1, [])):
            rows[free[n - 1] + t][free[n] + len(pairs.get(n, [])) + t] = k
        diffs[n] = Matrix(rows, ranks[n], ring)
    # sort each degree by level so that X(p) is an initial segment
    order = {n: sorted(range(ranks[n]), key=lambda i: (levels[n][i], i)) for n in ranks}
    lv_sorted = {n: [levels[n][i] for i in order[n]] for n in ranks}
    diffs = {n: Matrix([[d[i][j] for j in order[n]] for i in order[n - 1]], ranks[n], ring)
             for n, d in ((n, d.data) for n, d in diffs.items())}
    G = {n: random_unimodular(rng, r, ring, levels=lv_sorted[n]) for n, r in ranks.items()}
    diffs = {n: G[n - 1][1] @ d @ G[n][0] for n, d in diffs.items()}
    total = ChainComplex(ranks, diffs, ring)
    bases = []
    for p in range(P):
        B = {}
        for n in ranks:
            k = sum(1 for x in lv_sorted[n] if x <= p)
            B[n] = Matrix.identity(ranks[n], ring).block(0, ranks[n], 0, k)
        bases.append(B)
    F = FilteredComplex.from_subcomplexes(total, bases)
    return _rebase(rng, F)


def _rebase(rng: SplitMix64, F: FilteredComplex) -> FilteredComplex:
    """Give every step an independent random basis."""
    R = F.ring
    G = [{n: random_unimodular(rng, r, R) for n, r in X.ranks.items()} for X in F.steps]
    steps = []
    for X, g in zip(F.steps, G):
        diffs = {n: g[n - 1][1] @ d @ g[n][0] for n, d in X.diffs.items()}
        steps.append(ChainComplex(X.ranks, diffs, R))
    maps = []
    for p, f in enumerate(F.maps):
        comps = {n: G[p + 1][n][1] @ m @ G[p][n][0] for n, m in f.components.items()}
        maps.append(ChainMap(steps[p], steps[p + 1], comps))
    return FilteredComplex(steps, maps)


def random_double_complex(rng: SplitMix64, width: int = 3, height: int = 3,
                          terms: int = 2, ring: Coefficients = ZZ) -> DoubleComplex:
    """A sum of tensor products ``A (x) B`` on ``[0, width) x [0, height)``,
    conjugated by random unimodular matrices in each bidegree."""
    ranks: Dict = {}
    hs: Dict = {}
    vs: Dict = {}
    parts = []
    for _ in range(terms):
        A = random_complex(rng, 0, width - 1, 2, ring)
        B = random_complex(rng, 0, height - 1, 2, ring)
        parts.append(DoubleComplex.from_tensor(A, B))
    cells = sorted({c for D in parts for c in D.ranks})
    for (p, q) in cells:
        ranks[(p, q)] = sum(D.rank(p, q) for D in parts)
    for (p, q) in cells:
        hs[(p, q)] = Matrix.block_diag([D.dh(p, q) for D in parts], ring)
        vs[(p, q)] = Matrix.block_diag([D.dv(p, q) for D in parts], ring)
    G = {c: random_unimodular(rng, r, ring) for c, r in ranks.items()}
    hs = {(p, q): G[(p - 1, q)][1] @ m @ G[(p, q)][0] if (p - 1, q) in G else m
          for (p, q), m in hs.items()}
    vs = {(p, q): G[(p, q - 1)][1] @ m @ G[(p, q)][0] if (p, q - 1) in G else m
          for (p, q), m in vs.items()}
    return DoubleComplex(ranks, hs, vs, ring)


def random_simplicial(rng: SplitMix64, top: int = 2, max_rank: int = 2,
                      conjugate: bool = True) -> SimplicialModule:
    """``gamma`` of a random nonnegative complex, optionally moved by
    levelwise isomorphisms so it is no longer in normal form."""
    C = random_complex(rng, 0, top, max_rank, ZZ, orders=(1, 2, 3, 0))
    M = gamma(C)
    if not conjugate:
        return M
    return M.conjugate([random_unimodular(rng, r, ZZ, steps=r)[0] for r in M.ranks])
