"""Exact matrices over the integers and prime fields.

Everything here works with Python integers, so there is no overflow no matter
how large Smith pivots grow.  Matrices are immutable; the elimination
routines copy into plain lists of columns, work there, and wrap the result.

The main entry points are

* :func:`smith_normal_form` -- ``D = U A V`` with unimodular ``U``, ``V``;
* :func:`kernel_basis`, :func:`image_basis` -- canonical (Hermite) bases;
* :func:`solve`, :func:`solve_matrix` -- exact linear systems;
* :class:`Subquotient` -- ``span(gens) / span(rels)`` inside a free module,
  the work horse behind homology and spectral sequence pages;
* :class:`FgModule` -- finitely generated modules in invariant-factor form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import CoefficientMismatch, MembershipError, ShapeError

__all__ = [
    "Coefficients",
    "ZZ",
    "GF",
    "Matrix",
    "FgModule",
    "Subquotient",
    "smith_normal_form",
    "invariant_factors",
    "kernel_basis",
    "image_basis",
    "rank",
    "solve",
    "solve_matrix",
    "inverse",
    "complete_basis",
    "subquotient",
    "hom_and_tensor",
    "xgcd",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Coefficients:
    """Coefficient ring: the integers (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def kind(self) -> str:
        return "PrimeField" if self.p else "Integers"

    @property
    def is_field(self) -> bool:
        return self.p != 0

    def reduce(self, x: int) -> int:
        return x % self.p if self.p else x

    def inv(self, x: int) -> int:
        if not self.p:
            if x in (1, -1):
                return x
            raise ZeroDivisionError(f"{x} is not a unit in Z")
        return pow(x, -1, self.p)

    def __str__(self):
        return f"F_{self.p}" if self.p else "Z"

    def __repr__(self):
        return f"Coefficients({self})"

    @classmethod
    def parse(cls, text: str) -> "Coefficients":
        t = text.strip()
        if t in ("Z", "ZZ"):
            return ZZ
        for prefix in ("F_", "GF", "F"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls(int(t[len(prefix):]))
        raise ValueError(f"unknown coefficient ring {text!r}")


ZZ = Coefficients(0)


def GF(p: int) -> Coefficients:
    return Coefficients(p)


def _check_ring(a, b):
    if a.ring != b.ring:
        raise CoefficientMismatch(f"{a.ring} vs {b.ring}")


class Matrix:
    """Immutable dense matrix with exact entries over a :class:`Coefficients` ring."""

    __slots__ = ("nrows", "ncols", "data", "ring")

    def __init__(self, rows: Iterable[Iterable[int]] = (), ncols: Optional[int] = None,
                 ring: Coefficients = ZZ):
        data = []
        for row in rows:
            r = []
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int):
                    raise TypeError(f"matrix entries must be int, got {type(x).__name__}")
                r.append(ring.reduce(x))
            data.append(tuple(r))
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise ShapeError(f"ragged matrix: row of length {len(r)}, expected {ncols}")
        self.nrows = len(data)
        self.ncols = ncols
        self.data = tuple(data)
        self.ring = ring

    @classmethod
    def _raw(cls, data, nrows, ncols, ring):
        m = cls.__new__(cls)
        m.data = data
        m.nrows = nrows
        m.ncols = ncols
        m.ring = ring
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int, ring: Coefficients = ZZ) -> "Matrix":
        row = (0,) * ncols
        return cls._raw((row,) * nrows, nrows, ncols, ring)

    @classmethod
    def identity(cls, n: int, ring: Coefficients = ZZ) -> "Matrix":
        return cls._raw(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)),
                        n, n, ring)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int,
                     ring: Coefficients = ZZ) -> "Matrix":
        if not columns:
            return cls.zeros(nrows, 0, ring)
        return cls._raw(tuple(tuple(ring.reduce(x) for x in r) for r in zip(*columns)),
                        nrows, len(columns), ring)

    @classmethod
    def diagonal(cls, entries: Sequence[int], nrows: int = None, ncols: int = None,
                 ring: Coefficients = ZZ) -> "Matrix":
        nrows = len(entries) if nrows is None else nrows
        ncols = len(entries) if ncols is None else ncols
        rows = [[0] * ncols for _ in range(nrows)]
        for i, e in enumerate(entries):
            rows[i][i] = e
        return cls(rows, ncols, ring)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.ring == other.ring and self.shape == other.shape
                and self.data == other.data)

    def __hash__(self):
        return hash((self.ring, self.nrows, self.ncols, self.data))

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.data]}, ncols={self.ncols}, ring={self.ring})"

    def tolist(self):
        return [list(r) for r in self.data]

    def columns(self):
        if self.nrows == 0:
            return [[] for _ in range(self.ncols)]
        return [list(c) for c in zip(*self.data)]

    def column(self, j: int):
        return [r[j] for r in self.data]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    @property
    def T(self) -> "Matrix":
        if self.nrows == 0:
            return Matrix.zeros(self.ncols, 0, self.ring)
        return Matrix._raw(tuple(zip(*self.data)), self.ncols, self.nrows, self.ring)

    def _wrap(self, data, nrows, ncols):
        if self.ring.p:
            p = self.ring.p
            data = tuple(tuple(x % p for x in r) for r in data)
        return Matrix._raw(data, nrows, ncols, self.ring)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _check_ring(self, other)
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        if self.ncols == 0:
            return Matrix.zeros(self.nrows, other.ncols, self.ring)
        cols = tuple(zip(*other.data))
        data = tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                     for row in self.data)
        if other.ncols == 0:
            data = tuple(() for _ in range(self.nrows))
        return self._wrap(data, self.nrows, other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_ring(self, other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        data = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data))
        return self._wrap(data, self.nrows, self.ncols)

    def __neg__(self) -> "Matrix":
        return self._wrap(tuple(tuple(-a for a in r) for r in self.data), self.nrows, self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c: int) -> "Matrix":
        return self._wrap(tuple(tuple(c * a for a in r) for r in self.data),
                          self.nrows, self.ncols)

    def __rmul__(self, c: int) -> "Matrix":
        return self.scale(c)

    def apply(self, v: Sequence[int]):
        """Matrix times a column vector given as a sequence."""
        if len(v) != self.ncols:
            raise ShapeError(f"vector of length {len(v)} for {self.shape} matrix")
        out = [sum(a * b for a, b in zip(r, v)) for r in self.data]
        return [self.ring.reduce(x) for x in out]

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._raw(tuple(r[c0:c1] for r in self.data[r0:r1]),
                           r1 - r0, c1 - c0, self.ring)

    def select_columns(self, js: Sequence[int]) -> "Matrix":
        return Matrix._raw(tuple(tuple(r[j] for j in js) for r in self.data),
                           self.nrows, len(js), self.ring)

    def hstack(self, *others: "Matrix") -> "Matrix":
        out = self
        for o in others:
            _check_ring(out, o)
            if o.nrows != out.nrows:
                raise ShapeError(f"hstack of {out.shape} and {o.shape}")
            out = Matrix._raw(tuple(a + b for a, b in zip(out.data, o.data)) if out.nrows
                              else (), out.nrows, out.ncols + o.ncols, out.ring)
        return out

    def vstack(self, *others: "Matrix") -> "Matrix":
        out = self
        for o in others:
            _check_ring(out, o)
            if o.ncols != out.ncols:
                raise ShapeError(f"vstack of {out.shape} and {o.shape}")
            out = Matrix._raw(out.data + o.data, out.nrows + o.nrows, out.ncols, out.ring)
        return out

    def kron(self, other: "Matrix") -> "Matrix":
        _check_ring(self, other)
        rows = []
        for r in self.data:
            for s in other.data:
                rows.append(tuple(a * b for a in r for b in s))
        return self._wrap(tuple(rows), self.nrows * other.nrows, self.ncols * other.ncols)

    @staticmethod
    def block_diag(blocks: Sequence["Matrix"], ring: Coefficients = ZZ) -> "Matrix":
        nr = sum(b.nrows for b in blocks)
        nc = sum(b.ncols for b in blocks)
        rows = []
        c0 = 0
        for b in blocks:
            for r in b.data:
                rows.append((0,) * c0 + r + (0,) * (nc - c0 - b.ncols))
            c0 += b.ncols
        return Matrix._raw(tuple(rows), nr, nc, blocks[0].ring if blocks else ring)

    @staticmethod
    def from_blocks(grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a block matrix; every block in a row shares its row count."""
        rows = []
        for brow in grid:
            acc = brow[0]
            for b in brow[1:]:
                acc = acc.hstack(b)
            rows.append(acc)
        out = rows[0]
        for r in rows[1:]:
            out = out.vstack(r)
        return out


def xgcd(a: int, b: int):
    """Return ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


# --- column echelon -------------------------------------------------------------

def _axpy(target, source, q, p):
    # target - q * source, in place semantics returned as new list
    if p:
        return [(t - q * s) % p for t, s in zip(target, source)]
    return [t - q * s for t, s in zip(target, source)]


def _col_echelon(A: Matrix, track: bool = True):
    """Column Hermite form: ``A V = H``.

    Returns ``(H_cols, V_cols, pivots)``: columns ``0..k-1`` of ``H`` are the
    nonzero ones, column ``j`` has its leading (topmost) nonzero entry in row
    ``pivots[j]``, strictly increasing.  Over Z pivots are positive and entries
    to the left of a pivot are reduced into ``[0, pivot)``; over F_p the form is
    fully reduced with unit pivots.  Both are canonical for the column span.
    """
    p = A.ring.p
    m, n = A.nrows, A.ncols
    cols = A.columns()
    V = [[1 if i == j else 0 for i in range(n)] for j in range(n)] if track else None
    c = 0
    pivots = []
    for i in range(m):
        if c == n:
            break
        if p:
            j0 = next((j for j in range(c, n) if cols[j][i]), None)
            if j0 is None:
                continue
            if j0 != c:
                cols[c], cols[j0] = cols[j0], cols[c]
                if track:
                    V[c], V[j0] = V[j0], V[c]
            s = pow(cols[c][i], -1, p)
            if s != 1:
                cols[c] = [x * s % p for x in cols[c]]
                if track:
                    V[c] = [x * s % p for x in V[c]]
            for j in range(n):
                if j != c and cols[j][i]:
                    q = cols[j][i]
                    cols[j] = _axpy(cols[j], cols[c], q, p)
                    if track:
                        V[j] = _axpy(V[j], V[c], q, p)
        else:
            for j in range(c + 1, n):
                b = cols[j][i]
                if b == 0:
                    continue
                a = cols[c][i]
                if a == 0:
                    cols[c], cols[j] = cols[j], cols[c]
                    if track:
                        V[c], V[j] = V[j], V[c]
                    continue
                if b % a == 0:
                    q = b // a
                    cols[j] = _axpy(cols[j], cols[c], q, 0)
                    if track:
                        V[j] = _axpy(V[j], V[c], q, 0)
                    continue
                x, y, g = xgcd(a, b)
                ag, bg = a // g, b // g
                cc, cj = cols[c], cols[j]
                cols[c] = [x * u + y * v for u, v in zip(cc, cj)]
                cols[j] = [ag * v - bg * u for u, v in zip(cc, cj)]
                if track:
                    vc, vj = V[c], V[j]
                    V[c] = [x * u + y * v for u, v in zip(vc, vj)]
                    V[j] = [ag * v - bg * u for u, v in zip(vc, vj)]
            piv = cols[c][i]
            if piv == 0:
                continue
            if piv < 0:
                cols[c] = [-u for u in cols[c]]
                if track:
                    V[c] = [-u for u in V[c]]
                piv = -piv
            for j in range(c):
                q = cols[j][i] // piv
                if q:
                    cols[j] = _axpy(cols[j], cols[c], q, 0)
                    if track:
                        V[j] = _axpy(V[j], V[c], q, 0)
        pivots.append(i)
        c += 1
    return cols, V, pivots


def rank(A: Matrix) -> int:
    return len(_col_echelon(A, track=False)[2])


def image_basis(A: Matrix) -> Matrix:
    """Canonical basis (column Hermite form) of the column span of ``A``."""
    cols, _, piv = _col_echelon(A, track=False)
    return Matrix.from_columns(cols[:len(piv)], A.nrows, A.ring)


def kernel_basis(A: Matrix) -> Matrix:
    """Columns form a basis of ``ker A``, in canonical Hermite form.

    Over Z the kernel is saturated, so the basis spans a direct summand.
    """
    _, V, piv = _col_echelon(A)
    k = len(piv)
    K = Matrix.from_columns(V[k:], A.ncols, A.ring)
    if K.ncols == 0:
        return K
    return image_basis(K)


def _forward_solve(cols, pivots, b, p):
    """Solve ``H y = b`` for a column echelon ``H``; None if impossible."""
    k = len(pivots)
    y = [0] * k
    for j in range(k):
        r = pivots[j]
        acc = b[r] - sum(cols[l][r] * y[l] for l in range(j))
        piv = cols[j][r]
        if p:
            y[j] = acc * pow(piv, -1, p) % p
        else:
            if acc % piv:
                return None
            y[j] = acc // piv
    for r in range(len(b)):
        val = sum(cols[l][r] * y[l] for l in range(k))
        if (val - b[r]) % p if p else val != b[r]:
            return None
    return y


def solve_matrix(A: Matrix, B: Matrix) -> Optional[Matrix]:
    """Return ``X`` with ``A X = B`` exactly, or None when no solution exists."""
    _check_ring(A, B)
    if A.nrows != B.nrows:
        raise ShapeError(f"solve with {A.shape} and {B.shape}")
    p = A.ring.p
    cols, V, piv = _col_echelon(A)
    k = len(piv)
    out = []
    for b in B.columns():
        y = _forward_solve(cols, piv, b, p)
        if y is None:
            return None
        x = [0] * A.ncols
        for j in range(k):
            if y[j]:
                vj = V[j]
                x = [u + y[j] * v for u, v in zip(x, vj)]
        out.append(x)
    return Matrix.from_columns(out, A.ncols, A.ring) if out else Matrix.zeros(A.ncols, 0, A.ring)


def solve(A: Matrix, b: Sequence[int]) -> Optional[list]:
    """Solve ``A x = b`` for a single vector; None if there is no solution."""
    X = solve_matrix(A, Matrix.from_columns([list(b)], A.nrows, A.ring))
    return None if X is None else X.column(0)


def inverse(A: Matrix) -> Matrix:
    if A.nrows != A.ncols:
        raise ShapeError(f"inverse of non-square {A.shape}")
    X = solve_matrix(A, Matrix.identity(A.nrows, A.ring))
    if X is None or A.nrows and not (X @ A == Matrix.identity(A.nrows, A.ring)):
        raise ValueError("matrix is not invertible over its coefficient ring")
    return X


def complete_basis(T: Matrix) -> Matrix:
    """Extend the columns of ``T`` to an invertible square matrix ``[T | C]``.

    ``T`` must be injective with saturated image (split injective).
    """
    m, k = T.shape
    # T^T W = [H | 0] with W invertible; then [T | W^{-T}[:, k:]] is invertible.
    cols, W, piv = _col_echelon(T.T)
    if len(piv) != k:
        raise ValueError("columns are linearly dependent")
    Wm = Matrix.from_columns(W, m, T.ring)
    Winv_T = inverse(Wm).T
    C = Winv_T.block(0, m, k, m)
    full = T.hstack(C)
    if not T.ring.is_field:
        # unimodular iff the first k rows of W^{-1}-side block H is unimodular
        H = Matrix.from_columns(cols[:k], k, T.ring)
        if abs(_det_triangular(H)) != 1:
            raise ValueError("image is not saturated; no complement exists")
    return full


def _det_triangular(H: Matrix) -> int:
    d = 1
    for i in range(min(H.shape)):
        d *= H[i, i]
    return d


# --- Smith normal form ------------------------------------------------------------

def _diagonalize(A: Matrix, track: bool = True):
    """Return ``(U, D, V)`` as row lists with ``D = U A V`` diagonal.

    Over Z: Smith form with smallest-absolute-value pivoting, nonnegative
    diagonal, ``d_i | d_{i+1}``.  Over F_p: rank normal form (ones then zeros).
    """
    p = A.ring.p
    m, n = A.shape
    D = [list(r) for r in A.data]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if track else None
    Vt = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if track else None  # rows of V^T

    def row_op(i, k, q):  # row_i -= q row_k
        D[i] = [(a - q * b) % p if p else a - q * b for a, b in zip(D[i], D[k])]
        if track:
            U[i] = [(a - q * b) % p if p else a - q * b for a, b in zip(U[i], U[k])]

    def col_op(j, k, q):  # col_j -= q col_k
        for r in D:
            r[j] = (r[j] - q * r[k]) % p if p else r[j] - q * r[k]
        if track:
            Vt[j] = [(a - q * b) % p if p else a - q * b for a, b in zip(Vt[j], Vt[k])]

    def swap_rows(i, k):
        D[i], D[k] = D[k], D[i]
        if track:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in D:
            r[j], r[k] = r[k], r[j]
        if track:
            Vt[j], Vt[k] = Vt[k], Vt[j]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = D[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i0, j0 = best
        swap_rows(t, i0)
        swap_cols(t, j0)
        if p:
            s = pow(D[t][t], -1, p)
            D[t] = [x * s % p for x in D[t]]
            if track:
                U[t] = [x * s % p for x in U[t]]
            for i in range(t + 1, m):
                if D[i][t]:
                    row_op(i, t, D[i][t])
            for j in range(t + 1, n):
                if D[t][j]:
                    col_op(j, t, D[t][j])
            t += 1
            continue
        while True:
            piv = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    row_op(i, t, D[i][t] // piv)
            for j in range(t + 1, n):
                if D[t][j]:
                    col_op(j, t, D[t][j] // piv)
            cand = None
            for i in range(t + 1, m):
                v = D[i][t]
                if v and (cand is None or abs(v) < cand[0]):
                    cand = (abs(v), i, None)
            for j in range(t + 1, n):
                v = D[t][j]
                if v and (cand is None or abs(v) < cand[0]):
                    cand = (abs(v), None, j)
            if cand is not None:
                if cand[1] is not None:
                    swap_rows(t, cand[1])
                else:
                    swap_cols(t, cand[2])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            if track:
                U[t] = [-x for x in U[t]]
        t += 1
    if not track:
        return None, D, None
    V = [list(r) for r in zip(*Vt)] if n else []
    return U, D, V


def smith_normal_form(A: Matrix):
    """Smith normal form over Z: returns ``(U, D, V)`` with ``D = U A V``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative entries
    and ``d_i | d_{i+1}``.  The pivot rule (smallest nonzero absolute value,
    first in row-major order) makes the transforms deterministic.

    >>> U, D, V = smith_normal_form(Matrix([[2, 4], [6, 8]]))
    >>> D.tolist()
    [[2, 0], [0, 4]]
    """
    if A.ring.is_field:
        raise CoefficientMismatch("smith_normal_form needs integer coefficients; use rank()")
    U, D, V = _diagonalize(A)
    m, n = A.shape
    return (Matrix(U, m, ZZ), Matrix(D, n, ZZ), Matrix(V, n, ZZ))


def invariant_factors(A: Matrix):
    """Nonzero diagonal of the Smith form (all ones over a field)."""
    _, D, _ = _diagonalize(A, track=False)
    return [D[i][i] for i in range(min(A.shape)) if D[i][i]]


# --- modules -------------------------------------------------------------------------

@dataclass(frozen=True)
class FgModule:
    """Finitely generated module ``R^free_rank + R/d_1 + ... + R/d_k``.

    Invariant factors are > 1 and satisfy ``d_i | d_{i+1}``; over a field the
    torsion list is always empty.  Structural equality is module isomorphism.
    """

    ring: Coefficients = ZZ
    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        if self.ring.is_field and self.torsion:
            raise ValueError("modules over a field have no torsion")
        for d in self.torsion:
            if isinstance(d, bool) or not isinstance(d, int) or d <= 1:
                raise ValueError(f"invariant factors must be integers > 1, got {d!r}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} do not form a chain")

    @classmethod
    def from_cyclic(cls, ring: Coefficients, free_rank: int, orders: Iterable[int]) -> "FgModule":
        """Normalize ``R^free_rank + sum R/a`` to invariant-factor form.

        An order of 0 counts as a free summand, 1 as the zero module.
        """
        orders = list(orders)
        free_rank += sum(1 for a in orders if a == 0)
        orders = [abs(a) for a in orders if a not in (0, 1, -1)]
        if ring.is_field:
            free_rank += sum(1 for a in orders if a % ring.p == 0)
            return cls(ring, free_rank, ())
        if not orders:
            return cls(ring, free_rank, ())
        return cls(ring, free_rank,
                   tuple(d for d in invariant_factors(Matrix.diagonal(orders)) if d > 1))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> Optional[int]:
        """Cardinality for finite modules, None otherwise."""
        if self.free_rank:
            return None
        o = 1
        for d in self.torsion:
            o *= d
        return o

    def direct_sum(self, other: "FgModule") -> "FgModule":
        if self.ring != other.ring:
            raise CoefficientMismatch(f"{self.ring} vs {other.ring}")
        return FgModule.from_cyclic(self.ring, self.free_rank + other.free_rank,
                                    self.torsion + other.torsion)

    def __str__(self):
        parts = []
        base = str(self.ring)
        if self.free_rank == 1:
            parts.append(base)
        elif self.free_rank > 1:
            parts.append(f"{base}^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    @classmethod
    def parse(cls, text: str) -> "FgModule":
        """Inverse of ``str``: ``"0"``, ``"Z^2 + Z/6"``, ``"F_3^2"``..."""
        t = text.replace(" ", "")
        if t == "0":
            return cls(ZZ)
        ring = None
        free = 0
        orders = []
        for part in t.split("+"):
            if part.startswith("Z/"):
                r, order = ZZ, int(part[2:])
                orders.append(order)
            else:
                head, _, exp = part.partition("^")
                r = Coefficients.parse(head)
                free += int(exp) if exp else 1
            if ring is not None and ring != r:
                raise ValueError(f"mixed coefficient rings in {text!r}")
            ring = r
        return cls.from_cyclic(ring, free, orders)


def _same_ring(M: FgModule, N: FgModule):
    if M.ring != N.ring:
        raise CoefficientMismatch(f"{M.ring} vs {N.ring}")


def hom_and_tensor(M: FgModule, N: FgModule):
    """``(Hom(M, N), M (x) N)`` from the formulas for cyclic summands."""
    _same_ring(M, N)
    R = M.ring
    a, b = M.free_rank, N.free_rank
    if R.is_field:
        return FgModule(R, a * b), FgModule(R, a * b)
    from math import gcd
    gg = [gcd(m, n) for m in M.torsion for n in N.torsion]
    hom = FgModule.from_cyclic(R, a * b, list(N.torsion) * a + gg)
    ten = FgModule.from_cyclic(R, a * b, list(N.torsion) * a + list(M.torsion) * b + gg)
    return hom, ten


@dataclass(frozen=True)
class Subquotient:
    """The module ``span(gens) / span(rels)`` inside a free ambient module.

    ``gens`` is a canonical basis of the numerator lattice; ``rels`` spans a
    submodule of it (not necessarily independently).
    """

    gens: Matrix
    rels: Matrix

    @classmethod
    def of(cls, generators: Matrix, relations: Matrix) -> "Subquotient":
        _check_ring(generators, relations)
        if generators.nrows != relations.nrows:
            raise ShapeError(f"ambient dimensions differ: {generators.nrows} vs {relations.nrows}")
        basis = image_basis(generators)
        if relations.ncols and solve_matrix(basis, relations) is None:
            raise MembershipError("a relation column is not in the span of the generators")
        return cls(basis, relations)

    @property
    def ring(self) -> Coefficients:
        return self.gens.ring

    @property
    def ambient(self) -> int:
        return self.gens.nrows

    def relation_coordinates(self) -> Matrix:
        if self.rels.ncols == 0:
            return Matrix.zeros(self.gens.ncols, 0, self.ring)
        return solve_matrix(self.gens, self.rels)

    def module(self) -> FgModule:
        k = self.gens.ncols
        R = self.relation_coordinates()
        if self.ring.is_field:
            return FgModule(self.ring, k - rank(R))
        inv = invariant_factors(R)
        return FgModule(ZZ, k - len(inv), tuple(d for d in inv if d > 1))

    def contains(self, v: Sequence[int]) -> bool:
        return solve(self.gens, v) is not None

    def is_zero(self, v: Sequence[int]) -> bool:
        """Does ``v`` (assumed in the numerator) vanish in the quotient?"""
        if self.rels.ncols == 0:
            return all(x == 0 for x in v)
        return solve(self.rels, v) is not None

    def kernel(self, M: Matrix, target: "Subquotient") -> "Subquotient":
        """Kernel of the map induced by ``M`` into ``target``, as a subquotient of self."""
        A = (M @ self.gens).hstack(target.rels)
        K = kernel_basis(A)
        top = K.block(0, self.gens.ncols, 0, K.ncols)
        return Subquotient.of((self.gens @ top).hstack(self.rels), self.rels)

    def image(self, M: Matrix, source: "Subquotient") -> "Subquotient":
        """Image of ``source`` under ``M``, as a subquotient of self."""
        return Subquotient.of((M @ source.gens).hstack(self.rels), self.rels)

    def quotient_by(self, sub: "Subquotient") -> "Subquotient":
        """``self / sub`` for a submodule ``sub`` with the same denominator."""
        return Subquotient.of(self.gens, sub.gens.hstack(self.rels))

    def same_submodule(self, other: "Subquotient") -> bool:
        a = self.gens.hstack(self.rels)
        b = other.gens.hstack(other.rels)
        return (solve_matrix(b, a) is not None) and (solve_matrix(a, b) is not None)


def subquotient(generators: Matrix, relations: Matrix) -> FgModule:
    """Invariant-factor form of ``span(generators) / span(relations)``.

    Raises :class:`MembershipError` if some relation is not a combination of
    the generators.
    """
    return Subquotient.of(generators, relations).module()
