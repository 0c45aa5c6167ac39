"""Bounded chain complexes of free modules, chain maps and homotopies.

Sign conventions (used everywhere in the package):

* shift: ``C[k]_n = C_{n-k}`` with differential ``(-1)^k d``;
* cone: ``cone(f)_n = X_{n-1} + Y_n`` with ``d(a, b) = (-d a, -f a + d b)``;
* mapping complex: ``[A, B]_n = prod_m Hom(A_m, B_{n+m})`` with
  ``D f = d_B f - (-1)^n f d_A``, so ``H_n[A, B]`` is the group of homotopy
  classes of maps ``A -> B[-n]`` (maps raising degree by ``n``);
* homotopy ``h`` from ``f`` to ``g``: ``f - g = d h + h d``.

Bases of sums and tensor products are ordered lexicographically by
(degree of the left factor, left index, right index).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

from .errors import (CoefficientMismatch, CompositionMismatch, NotAChainMap,
                     NotAComplex, NotAHomotopy, ShapeError)
from .linalg import (ZZ, Coefficients, FgModule, Matrix, Subquotient,
                     invariant_factors, kernel_basis, rank, solve, solve_matrix)

__all__ = [
    "ChainComplex",
    "ChainMap",
    "ChainHomotopy",
    "validate",
    "homology",
    "homology_subquotient",
    "shift",
    "shift_map",
    "shift_homotopy",
    "cone",
    "hom_complex",
    "hom_differential",
    "map_to_hom_vector",
    "hom_vector_to_components",
    "homotopy_classes",
    "find_homotopy",
    "is_quasi_iso",
    "direct_sum",
    "direct_sum_maps",
    "tensor_complex",
    "check_exact",
    "ExactnessWitness",
    "LongExactSequence",
    "cone_long_exact_sequence",
]


def _as_matrix(m, nrows, ncols, ring):
    if isinstance(m, Matrix):
        if m.ring != ring:
            raise CoefficientMismatch(f"matrix over {m.ring} in complex over {ring}")
        M = m
    else:
        M = Matrix(m, ncols, ring) if len(m) or nrows == 0 else Matrix.zeros(nrows, ncols, ring)
    if M.shape != (nrows, ncols):
        if M.nrows == 0 and nrows == 0 or M.ncols == 0 and ncols == 0:
            return Matrix.zeros(nrows, ncols, ring)
        raise ShapeError(f"expected a {nrows}x{ncols} matrix, got {M.shape[0]}x{M.shape[1]}")
    return M


class ChainComplex:
    """A bounded complex of finitely generated free modules.

    ``ranks[n]`` is the rank of ``C_n`` and ``diffs[n]`` the matrix of
    ``d_n: C_n -> C_{n-1}`` (shape ``rank(n-1) x rank(n)``).  Zero ranks are
    dropped; a differential is stored for every pair of adjacent nonzero
    degrees.  The empty complex is the zero object.
    """

    __slots__ = ("ring", "ranks", "diffs")

    def __init__(self, ranks: Mapping[int, int] = None, diffs: Mapping[int, object] = None,
                 ring: Coefficients = ZZ, check: bool = True):
        ranks = {int(n): int(r) for n, r in (ranks or {}).items() if r}
        for n, r in ranks.items():
            if r < 0:
                raise ShapeError(f"negative rank in degree {n}")
        diffs = dict(diffs or {})
        out = {}
        for n, m in diffs.items():
            n = int(n)
            M = _as_matrix(m, ranks.get(n - 1, 0), ranks.get(n, 0), ring)
            if ranks.get(n) and ranks.get(n - 1):
                out[n] = M
            elif not M.is_zero():
                raise ShapeError(f"differential d_{n} between zero modules")
        for n in ranks:
            if n - 1 in ranks and n not in out:
                out[n] = Matrix.zeros(ranks[n - 1], ranks[n], ring)
        self.ring = ring
        self.ranks = dict(sorted(ranks.items()))
        self.diffs = dict(sorted(out.items()))
        if check:
            validate(self)

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def d(self, n: int) -> Matrix:
        m = self.diffs.get(n)
        if m is None:
            return Matrix.zeros(self.rank(n - 1), self.rank(n), self.ring)
        return m

    def degrees(self) -> List[int]:
        return list(self.ranks)

    def support(self):
        """``(lo, hi)`` of the nonzero degrees, or None for the zero complex."""
        if not self.ranks:
            return None
        ds = list(self.ranks)
        return ds[0], ds[-1]

    def is_zero(self) -> bool:
        return not self.ranks

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self.ring == other.ring and self.ranks == other.ranks and self.diffs == other.diffs

    def __hash__(self):
        return hash((self.ring, tuple(self.ranks.items()), tuple(self.diffs.items())))

    def __repr__(self):
        ds = ", ".join(f"{n}: {m.tolist()}" for n, m in self.diffs.items())
        return f"ChainComplex(ranks={self.ranks}, diffs={{{ds}}}, ring={self.ring})"

    @classmethod
    def concentrated(cls, rank_: int, degree: int = 0, ring: Coefficients = ZZ) -> "ChainComplex":
        return cls({degree: rank_}, {}, ring)

    @classmethod
    def two_term(cls, matrix, top: int = 1, ring: Coefficients = ZZ) -> "ChainComplex":
        """``C_top --matrix--> C_{top-1}``."""
        M = matrix if isinstance(matrix, Matrix) else Matrix(matrix, ring=ring)
        return cls({top: M.ncols, top - 1: M.nrows}, {top: M}, M.ring)


def validate(C: ChainComplex) -> bool:
    """Check shapes and ``d_{n-1} d_n = 0``; raise on the first failing degree."""
    for n, M in C.diffs.items():
        if M.shape != (C.rank(n - 1), C.rank(n)):
            raise ShapeError(f"d_{n} has shape {M.shape}, expected {(C.rank(n - 1), C.rank(n))}")
    for n in C.diffs:
        if n - 1 in C.diffs and not (C.diffs[n - 1] @ C.diffs[n]).is_zero():
            raise NotAComplex(n)
    return True


def _check_same_ring(*objs):
    rings = {o.ring for o in objs}
    if len(rings) > 1:
        raise CoefficientMismatch(" vs ".join(sorted(str(r) for r in rings)))


@dataclass(frozen=True, eq=False)
class ChainMap:
    """Degreewise matrices ``f_n: source_n -> target_n`` commuting with d."""

    source: ChainComplex
    target: ChainComplex
    components: Dict[int, Matrix] = field(default_factory=dict)

    def __init__(self, source: ChainComplex, target: ChainComplex,
                 components: Mapping[int, object] = None, check: bool = True):
        _check_same_ring(source, target)
        comps = {}
        for n, m in (components or {}).items():
            M = _as_matrix(m, target.rank(int(n)), source.rank(int(n)), source.ring)
            if source.rank(int(n)) and target.rank(int(n)):
                comps[int(n)] = M
        for n in source.ranks:
            if target.rank(n) and n not in comps:
                comps[n] = Matrix.zeros(target.rank(n), source.rank(n), source.ring)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "components", dict(sorted(comps.items())))
        if check:
            self.validate()

    @property
    def ring(self):
        return self.source.ring

    def __getitem__(self, n: int) -> Matrix:
        m = self.components.get(n)
        if m is None:
            return Matrix.zeros(self.target.rank(n), self.source.rank(n), self.ring)
        return m

    def validate(self) -> bool:
        for n in set(self.source.ranks) | {k + 1 for k in self.source.ranks}:
            lhs = self.target.d(n) @ self[n]
            rhs = self[n - 1] @ self.source.d(n)
            if lhs != rhs:
                raise NotAChainMap(f"d f_{n} != f_{n - 1} d at n={n}")
        return True

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.components == other.components)

    __hash__ = None

    def _check_parallel(self, other):
        if self.source != other.source or self.target != other.target:
            raise CompositionMismatch("maps have different source or target")

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._check_parallel(other)
        return ChainMap(self.source, self.target,
                        {n: self[n] + other[n] for n in self.components}, check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {n: -m for n, m in self.components.items()}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def scale(self, c: int) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {n: m.scale(c) for n, m in self.components.items()}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composition ``self o other``."""
        if other.target != self.source:
            raise CompositionMismatch("target of the first map is not the source of the second")
        return ChainMap(other.source, self.target,
                        {n: self[n] @ other[n] for n in other.source.ranks}, check=False)

    @classmethod
    def identity(cls, C: ChainComplex) -> "ChainMap":
        return cls(C, C, {n: Matrix.identity(r, C.ring) for n, r in C.ranks.items()}, check=False)

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> "ChainMap":
        return cls(source, target, {}, check=False)


@dataclass(frozen=True, eq=False)
class ChainHomotopy:
    """Degree +1 maps ``h_n: source_n -> target_{n+1}`` with ``f - g = d h + h d``."""

    f: ChainMap
    g: ChainMap
    components: Dict[int, Matrix] = field(default_factory=dict)

    def __init__(self, f: ChainMap, g: ChainMap, components: Mapping[int, object] = None,
                 check: bool = True):
        f._check_parallel(g)
        S, T = f.source, f.target
        comps = {}
        for n, m in (components or {}).items():
            n = int(n)
            M = _as_matrix(m, T.rank(n + 1), S.rank(n), S.ring)
            if S.rank(n) and T.rank(n + 1):
                comps[n] = M
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "components", dict(sorted(comps.items())))
        if check:
            self.validate()

    def __getitem__(self, n: int) -> Matrix:
        m = self.components.get(n)
        if m is None:
            return Matrix.zeros(self.f.target.rank(n + 1), self.f.source.rank(n), self.f.ring)
        return m

    def validate(self) -> bool:
        S, T = self.f.source, self.f.target
        for n in S.ranks:
            lhs = self.f[n] - self.g[n]
            rhs = T.d(n + 1) @ self[n] + self[n - 1] @ S.d(n)
            if lhs != rhs:
                raise NotAHomotopy(f"f - g != dh + hd at n={n}")
        return True


# --- homology ---------------------------------------------------------------------

def homology(C: ChainComplex, n: int) -> FgModule:
    """``H_n(C) = ker d_n / im d_{n+1}`` in invariant-factor form."""
    rn = C.rank(n)
    if rn == 0:
        return FgModule(C.ring)
    out_rank = rank(C.d(n))
    d_in = C.d(n + 1)
    if C.ring.is_field:
        return FgModule(C.ring, rn - out_rank - rank(d_in))
    inv = invariant_factors(d_in)
    return FgModule(ZZ, rn - out_rank - len(inv), tuple(d for d in inv if d > 1))


def homology_subquotient(C: ChainComplex, n: int) -> Subquotient:
    """Cycles over boundaries as a :class:`Subquotient` of ``C_n``."""
    return Subquotient.of(kernel_basis(C.d(n)), C.d(n + 1))


# --- shifts and cones ---------------------------------------------------------------

def shift(C: ChainComplex, k: int) -> ChainComplex:
    """``C[k]_n = C_{n-k}``, differential ``(-1)^k d``."""
    s = -1 if k % 2 else 1
    return ChainComplex({n + k: r for n, r in C.ranks.items()},
                        {n + k: (m if s == 1 else -m) for n, m in C.diffs.items()},
                        C.ring, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k),
                    {n + k: m for n, m in f.components.items()}, check=False)


def shift_homotopy(h: ChainHomotopy, k: int) -> ChainHomotopy:
    s = -1 if k % 2 else 1
    return ChainHomotopy(shift_map(h.f, k), shift_map(h.g, k),
                         {n + k: (m if s == 1 else -m) for n, m in h.components.items()},
                         check=False)


def cone(f: ChainMap):
    """Mapping cone with its inclusion and projection.

    Returns ``(Z, incl, proj)`` with ``incl: Y -> Z`` and ``proj: Z -> X[1]``.
    ``proj o incl`` is zero on the nose.
    """
    X, Y, R = f.source, f.target, f.ring
    degs = sorted({n + 1 for n in X.ranks} | set(Y.ranks))
    ranks = {n: X.rank(n - 1) + Y.rank(n) for n in degs}
    diffs = {}
    for n in degs:
        if n - 1 not in ranks:
            continue
        top = (-X.d(n - 1)).hstack(Matrix.zeros(X.rank(n - 2), Y.rank(n), R))
        bot = (-f[n - 1]).hstack(Y.d(n))
        diffs[n] = top.vstack(bot)
    Z = ChainComplex(ranks, diffs, R, check=False)
    incl = ChainMap(Y, Z, {n: Matrix.zeros(X.rank(n - 1), Y.rank(n), R).vstack(
        Matrix.identity(Y.rank(n), R)) for n in Y.ranks}, check=False)
    X1 = shift(X, 1)
    proj = ChainMap(Z, X1, {n: Matrix.identity(X.rank(n - 1), R).hstack(
        Matrix.zeros(X.rank(n - 1), Y.rank(n), R)) for n in degs}, check=False)
    return Z, incl, proj


def is_quasi_iso(f: ChainMap) -> bool:
    """True iff every homology group of ``cone(f)`` vanishes."""
    Z, _, _ = cone(f)
    return all(homology(Z, n).is_zero for n in Z.ranks)


# --- mapping complexes ----------------------------------------------------------------

def _hom_blocks(A: ChainComplex, B: ChainComplex, n: int):
    """Offsets of the blocks ``Hom(A_m, B_{n+m})`` inside ``[A, B]_n``."""
    blocks = []
    off = 0
    for m, ra in A.ranks.items():
        rb = B.rank(n + m)
        if rb:
            blocks.append((m, off, rb, ra))
            off += rb * ra
    return blocks, off


def _hom_degrees(A: ChainComplex, B: ChainComplex):
    return sorted({nb - ma for ma in A.ranks for nb in B.ranks})


def hom_differential(A: ChainComplex, B: ChainComplex, n: int) -> Matrix:
    """Matrix of ``D: [A, B]_n -> [A, B]_{n-1}``."""
    _check_same_ring(A, B)
    R = A.ring
    src, ns = _hom_blocks(A, B, n)
    tgt, nt = _hom_blocks(A, B, n - 1)
    rows = [[0] * ns for _ in range(nt)]
    sign = 1 if n % 2 else -1
    src_at = {m: (off, rb, ra) for m, off, rb, ra in src}

    def place(r0, c0, M, coeff):
        for i, row in enumerate(M.data):
            target = rows[r0 + i]
            for j, x in enumerate(row):
                if x:
                    target[c0 + j] += coeff * x

    for m, toff, rb_t, ra in tgt:
        # d_B o f_m with f_m: A_m -> B_{n+m}
        if m in src_at:
            soff, rb_s, _ = src_at[m]
            place(toff, soff, B.d(n + m).kron(Matrix.identity(ra, R)), 1)
        # f_{m-1} o d_A with f_{m-1}: A_{m-1} -> B_{n+m-1}
        if m - 1 in src_at:
            soff, rb_s, ra_s = src_at[m - 1]
            place(toff, soff, Matrix.identity(rb_s, R).kron(A.d(m).T), sign)
    return Matrix(rows, ns, R)


def hom_complex(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    """The mapping complex ``[A, B]``.

    A degree ``n`` element is a family ``f_m: A_m -> B_{n+m}``; blocks are
    ordered by ``m`` and each block is a ``rank(B_{n+m}) x rank(A_m)``
    matrix flattened row by row.
    """
    _check_same_ring(A, B)
    degs = _hom_degrees(A, B)
    ranks = {n: _hom_blocks(A, B, n)[1] for n in degs}
    diffs = {n: hom_differential(A, B, n) for n in degs if ranks.get(n) and ranks.get(n - 1)}
    return ChainComplex(ranks, diffs, A.ring, check=False)


def map_to_hom_vector(components: Mapping[int, Matrix], A: ChainComplex, B: ChainComplex,
                      n: int) -> list:
    """Flatten a degree-``n`` family ``A_m -> B_{n+m}`` into ``[A, B]_n``."""
    blocks, size = _hom_blocks(A, B, n)
    v = [0] * size
    for m, off, rb, ra in blocks:
        M = components.get(m)
        if M is None:
            continue
        k = off
        for row in M.data:
            for x in row:
                v[k] = x
                k += 1
    return v


def hom_vector_to_components(v, A: ChainComplex, B: ChainComplex, n: int) -> Dict[int, Matrix]:
    blocks, _ = _hom_blocks(A, B, n)
    out = {}
    for m, off, rb, ra in blocks:
        flat = v[off:off + rb * ra]
        out[m] = Matrix([flat[i * ra:(i + 1) * ra] for i in range(rb)], ra, A.ring)
    return out


def homotopy_classes(A: ChainComplex, B: ChainComplex, n: int) -> FgModule:
    """``H_n[A, B]``: homotopy classes of maps ``A -> B[-n]``."""
    return homology(hom_complex(A, B), n)


def find_homotopy(f: ChainMap, g: ChainMap) -> Optional[ChainHomotopy]:
    """A homotopy from ``f`` to ``g`` found by an exact linear solve, or None."""
    f._check_parallel(g)
    A, B = f.source, f.target
    diff = f - g
    v = map_to_hom_vector(diff.components, A, B, 0)
    if not v or not any(v):
        return ChainHomotopy(f, g, {}, check=False)
    D = hom_differential(A, B, 1)
    x = solve(D, v)
    if x is None:
        return None
    return ChainHomotopy(f, g, hom_vector_to_components(x, A, B, 1))


# --- sums and tensor products ------------------------------------------------------------

def direct_sum(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    _check_same_ring(A, B)
    degs = sorted(set(A.ranks) | set(B.ranks))
    return ChainComplex({n: A.rank(n) + B.rank(n) for n in degs},
                        {n: Matrix.block_diag([A.d(n), B.d(n)], A.ring) for n in degs},
                        A.ring, check=False)


def direct_sum_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    S = direct_sum(f.source, g.source)
    T = direct_sum(f.target, g.target)
    return ChainMap(S, T, {n: Matrix.block_diag([f[n], g[n]], S.ring) for n in S.ranks},
                    check=False)


def tensor_complex(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    """``(A (x) B)_n = sum_{i+j=n} A_i (x) B_j`` with the Koszul sign on ``B``'s differential."""
    _check_same_ring(A, B)
    R = A.ring
    pieces = {}
    for i, ra in A.ranks.items():
        for j, rb in B.ranks.items():
            pieces.setdefault(i + j, []).append((i, j, ra, rb))
    ranks = {n: sum(ra * rb for _, _, ra, rb in ps) for n, ps in pieces.items()}
    offsets = {}
    for n, ps in pieces.items():
        off = 0
        for i, j, ra, rb in ps:
            offsets[(i, j)] = off
            off += ra * rb
    diffs = {}
    for n, ps in pieces.items():
        if n - 1 not in ranks:
            continue
        rows = [[0] * ranks[n] for _ in range(ranks[n - 1])]
        for i, j, ra, rb in ps:
            c0 = offsets[(i, j)]
            if (i - 1, j) in offsets:
                M = A.d(i).kron(Matrix.identity(rb, R))
                r0 = offsets[(i - 1, j)]
                for a, row in enumerate(M.data):
                    for b, x in enumerate(row):
                        rows[r0 + a][c0 + b] += x
            if (i, j - 1) in offsets:
                M = Matrix.identity(ra, R).kron(B.d(j))
                if i % 2:
                    M = -M
                r0 = offsets[(i, j - 1)]
                for a, row in enumerate(M.data):
                    for b, x in enumerate(row):
                        rows[r0 + a][c0 + b] += x
        diffs[n] = Matrix(rows, ranks[n], R)
    return ChainComplex(ranks, diffs, R, check=False)


# --- exactness --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExactnessWitness:
    """Certificates for ``im(alpha) = ker(beta)`` at a node.

    ``composite``: coordinates of ``beta alpha (gens)`` in the target
    relations (so the composite is zero).  ``kernel``: coordinates of each
    kernel generator in ``[alpha(gens) | relations]`` (so ker is in im).
    """

    composite: Matrix
    kernel: Matrix


def check_exact(alpha: Matrix, src: Subquotient, mid: Subquotient, beta: Matrix,
                tgt: Subquotient) -> Optional[ExactnessWitness]:
    """Exactness of ``src -alpha-> mid -beta-> tgt`` with witness matrices, or None."""
    comp = beta @ alpha @ src.gens
    c1 = solve_matrix(tgt.rels, comp)
    if c1 is None:
        return None
    K = mid.kernel(beta, tgt)
    c2 = solve_matrix((alpha @ src.gens).hstack(mid.rels), K.gens)
    if c2 is None:
        return None
    return ExactnessWitness(c1, c2)


@dataclass
class LongExactSequence:
    """Nodes ``... -> H_n(X) -> H_n(Y) -> H_n(cone f) -> H_{n-1}(X) -> ...``."""

    nodes: list
    witnesses: list
    failures: list

    @property
    def exact(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        total = len(self.witnesses) + len(self.failures)
        return f"exact at {len(self.witnesses)}/{total} nodes"


def cone_long_exact_sequence(f: ChainMap) -> LongExactSequence:
    """The homology sequence of ``X -> Y -> cone(f) -> X[1]``, checked node by node.

    The connecting map is induced by the cone projection.
    """
    X, Y = f.source, f.target
    Z, incl, proj = cone(f)
    degs = set(X.ranks) | set(Y.ranks) | set(Z.ranks)
    if not degs:
        return LongExactSequence([], [], [])
    lo, hi = min(degs) - 1, max(degs) + 1
    HX = {n: homology_subquotient(X, n) for n in range(lo - 1, hi + 2)}
    HY = {n: homology_subquotient(Y, n) for n in range(lo - 1, hi + 2)}
    HZ = {n: homology_subquotient(Z, n) for n in range(lo - 1, hi + 2)}
    nodes, wits, fails = [], [], []
    for n in range(hi, lo - 1, -1):
        checks = [
            (f"H_{n}(Y)", HX[n], f[n], HY[n], incl[n], HZ[n]),
            (f"H_{n}(cone)", HY[n], incl[n], HZ[n], proj[n], HX[n - 1]),
            (f"H_{n - 1}(X)", HZ[n], proj[n], HX[n - 1], f[n - 1], HY[n - 1]),
        ]
        for label, S, a, M, b, T in checks:
            nodes.append((label, M.module()))
            w = check_exact(a, S, M, b, T)
            if w is None:
                fails.append(label)
            else:
                wits.append((label, w))
    return LongExactSequence(nodes, wits, fails)
