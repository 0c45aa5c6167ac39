"""Brute-force reference computations, independent of the main algebra code.

Nothing here calls into the Smith form, echelon or complex machinery: groups
are enumerated element by element, ranks come from a separate row reduction
over F_p and determinants from fraction-free (Bareiss) elimination.  These
are slow and only accept small inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import List, Sequence, Tuple

from .errors import TooLarge
from .linalg import FgModule

__all__ = [
    "ElementTable",
    "brute_hom",
    "brute_homology",
    "brute_homology_rank",
    "brute_ext_cyclic",
    "brute_tor_cyclic",
    "bareiss_det",
    "group_invariants",
]

LIMIT = 10 ** 4


@dataclass(frozen=True)
class ElementTable:
    """All elements of a finite abelian group ``Z/n_1 + ... + Z/n_k``."""

    orders: Tuple[int, ...]
    elements: Tuple[Tuple[int, ...], ...]

    @classmethod
    def of(cls, orders: Sequence[int]) -> "ElementTable":
        orders = tuple(orders)
        size = 1
        for n in orders:
            size *= n
        if size > LIMIT:
            raise TooLarge(f"group of order {size} exceeds {LIMIT}")
        return cls(orders, tuple(product(*[range(n) for n in orders])))

    def scale(self, c: int, x):
        return tuple((c * a) % n for a, n in zip(x, self.orders))

    def is_zero(self, x) -> bool:
        return all(a == 0 for a in x)


def _finite_orders(M: FgModule) -> Tuple[int, ...]:
    if M.free_rank:
        raise TooLarge("module is infinite")
    return tuple(M.torsion)


def _prime_factors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def group_invariants(size: int, killed_by) -> Tuple[int, ...]:
    """Invariant factors of a finite abelian group from counting.

    ``killed_by(m)`` must return ``|{x : m x = 0}|``.  For each prime ``p``
    the number of cyclic ``p``-parts of order at least ``p^k`` is
    ``log_p(c_k / c_{k-1})`` with ``c_k = killed_by(p^k)``.
    """
    if size == 1:
        return ()
    parts = {}
    for p in _prime_factors(size):
        exps, k, prev = [], 1, 1
        while True:
            c = killed_by(p ** k)
            ratio, count = c // prev, 0
            while ratio > 1:
                ratio //= p
                count += 1
            if count == 0:
                break
            exps.append(count)
            prev, k = c, k + 1
        # exps[k-1] = number of parts of order >= p^k
        sizes = []
        for k in range(len(exps)):
            nxt = exps[k + 1] if k + 1 < len(exps) else 0
            sizes += [k + 1] * (exps[k] - nxt)
        parts[p] = sorted(sizes, reverse=True)
    length = max(len(v) for v in parts.values())
    factors = []
    for j in range(length):
        d = 1
        for p, es in parts.items():
            if j < len(es):
                d *= p ** es[j]
        factors.append(d)
    return tuple(sorted(factors))


def brute_hom(M: FgModule, N: FgModule) -> FgModule:
    """``Hom(M, N)`` for finite ``M``, ``N``, by enumerating generator images."""
    mo, no = _finite_orders(M), _finite_orders(N)
    TN, TM = ElementTable.of(no), ElementTable.of(mo)
    if len(TN.elements) * len(TM.elements) > LIMIT:
        raise TooLarge("|M| |N| exceeds the enumeration limit")
    # a homomorphism is a choice of image for each cyclic generator of M
    cands = [[y for y in TN.elements if TN.is_zero(TN.scale(m, y))] for m in mo]
    total = 1
    for c in cands:
        total *= len(c)
    if total > 10 * LIMIT:
        raise TooLarge(f"Hom has {total} elements")
    homs = list(product(*cands))

    def killed_by(c):
        return sum(1 for h in homs if all(TN.is_zero(TN.scale(c, y)) for y in h))

    return FgModule(M.ring, 0, group_invariants(len(homs), killed_by))


def _rank_mod_p(rows: List[List[int]], p: int) -> int:
    A = [[x % p for x in r] for r in rows]
    rk, ncols = 0, len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rk], A[piv] = A[piv], A[rk]
        inv = pow(A[rk][c], p - 2, p)
        A[rk] = [(x * inv) % p for x in A[rk]]
        for i in range(len(A)):
            if i != rk and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[rk])]
        rk += 1
    return rk


def brute_homology_rank(ranks: dict, diffs: dict, n: int, p: int) -> int:
    """``dim H_n(C ; F_p)`` from plain nested lists ``diffs[n]`` (rows x cols)."""
    rn = ranks.get(n, 0)
    out = _rank_mod_p(diffs[n], p) if diffs.get(n) and ranks.get(n - 1) else 0
    inc = _rank_mod_p(diffs[n + 1], p) if diffs.get(n + 1) and rn else 0
    return rn - out - inc


def brute_homology(C, p: int) -> dict:
    """``{n: dim H_n(C ; F_p)}`` for a small complex, by separate row reduction."""
    if p > 7:
        raise TooLarge(f"prime {p} exceeds 7")
    if sum(C.ranks.values()) > 12:
        raise TooLarge("total dimension exceeds 12")
    diffs = {n: [list(r) for r in m.data] for n, m in C.diffs.items()}
    return {n: brute_homology_rank(dict(C.ranks), diffs, n, p) for n in C.ranks}


def _cyclic(order: int) -> FgModule:
    return FgModule(torsion=() if order == 1 else (order,))


def brute_ext_cyclic(a: int, b: int, n: int) -> FgModule:
    """``Ext^n(Z/a, Z/b)`` from the resolution ``Z --a--> Z`` and enumeration of ``Z/b``."""
    if n < 0 or n > 1:
        return FgModule()
    ker = sum(1 for y in range(b) if (a * y) % b == 0)
    img = len({(a * y) % b for y in range(b)})
    return _cyclic(ker) if n == 0 else _cyclic(b // img)


def brute_tor_cyclic(a: int, b: int, n: int) -> FgModule:
    """``Tor_n(Z/a, Z/b)``: cokernel (n = 0) and kernel (n = 1) of ``a`` on ``Z/b``."""
    if n < 0 or n > 1:
        return FgModule()
    ker = sum(1 for y in range(b) if (a * y) % b == 0)
    img = len({(a * y) % b for y in range(b)})
    return _cyclic(b // img) if n == 0 else _cyclic(ker)


def bareiss_det(rows: List[List[int]]) -> int:
    """Exact determinant of a square integer matrix."""
    A = [list(r) for r in rows]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]
