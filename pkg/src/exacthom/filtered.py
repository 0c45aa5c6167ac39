"""Filtered complexes and their spectral sequences.

A filtered complex is a chain ``X(0) -> X(1) -> ... -> X(P)`` of degreewise
split injective chain maps; ``X(P)`` is the total complex.  Everything is
computed in an *adapted basis* of the total complex, in which ``X(p)_n`` is
spanned by the first ``cut(p, n)`` coordinates.  The gap ``X(i, j)`` is then
the complex on coordinates ``[cut(i, n), cut(j, n))``, with ``X(i) = 0`` for
``i < 0`` and ``X(j) = X(P)`` for ``j >= P``.

Page entries come straight from the image description

    E_r^{p,q} = im( H_n X(p-r, p) -> H_n X(p-1, p+r-1) ),   n = p + q,

and ``d_r`` is induced by the connecting map
``H_n X(p-r, p) -> H_{n-1} X(p-2r, p-r)``.  Each entry is presented as
``Z^k / K`` where the ``Z^k`` are relative cycles of ``X(p-r, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .chain import ChainComplex, ChainMap, cone, direct_sum, homology
from .errors import IndexOrder, InconsistentPage, NotAChainMap, NotFiltered
from .linalg import (FgModule, Matrix, Subquotient, ZZ, complete_basis, inverse,
                     invariant_factors, kernel_basis, rank, solve_matrix)

__all__ = [
    "FilteredComplex",
    "Gap",
    "PageEntry",
    "Page",
    "ConvergenceReport",
    "DoubleComplex",
    "gap",
    "page",
    "e1_page",
    "turn_page",
    "spectral_sequence",
    "e_infinity",
]


def _split_injective(M: Matrix) -> bool:
    if rank(M) != M.ncols:
        return False
    if M.ring.is_field or M.ncols == 0:
        return True
    return all(d == 1 for d in invariant_factors(M))


class FilteredComplex:
    """``X(0) -> ... -> X(P)`` with split injective inclusions ``maps[p]: X(p) -> X(p+1)``."""

    def __init__(self, steps: Sequence[ChainComplex], maps: Sequence[ChainMap], check: bool = True):
        steps, maps = list(steps), list(maps)
        if not steps:
            raise NotFiltered("a filtration needs at least one step")
        if len(maps) != len(steps) - 1:
            raise NotFiltered(f"{len(steps)} steps need {len(steps) - 1} inclusions, got {len(maps)}")
        for p, f in enumerate(maps):
            if f.source != steps[p] or f.target != steps[p + 1]:
                raise NotFiltered(f"inclusion {p} does not go from step {p} to step {p + 1}")
            if check:
                try:
                    f.validate()
                except NotAChainMap as e:
                    raise NotFiltered(f"inclusion {p} is not a chain map: {e}") from None
                for n in f.source.ranks:
                    if not _split_injective(f[n]):
                        raise NotFiltered(f"inclusion {p} is not split injective in degree {n}")
        self.steps = tuple(steps)
        self.maps = tuple(maps)
        self.ring = steps[0].ring
        self._adapted = None

    def __eq__(self, other):
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return self.steps == other.steps and self.maps == other.maps

    __hash__ = None

    @property
    def P(self) -> int:
        return len(self.steps) - 1

    @property
    def total(self) -> ChainComplex:
        return self.steps[-1]

    # --- constructors -----------------------------------------------------------

    @classmethod
    def from_subcomplexes(cls, total: ChainComplex, bases: Sequence[Mapping[int, Matrix]]):
        """Steps spanned by ``bases[p][n]`` (columns in total coordinates), then ``total``."""
        R = total.ring
        steps, embeds = [], []
        for p, B in enumerate(bases):
            B = {n: B.get(n, Matrix.zeros(total.rank(n), 0, R)) for n in total.ranks}
            diffs = {}
            for n in total.ranks:
                if n - 1 not in B:
                    continue
                img = total.d(n) @ B[n]
                X = solve_matrix(B[n - 1], img)
                if X is None:
                    raise NotFiltered(f"step {p} is not a subcomplex in degree {n}")
                diffs[n] = X
            ranks = {n: m.ncols for n, m in B.items()}
            steps.append(ChainComplex(ranks, {n: d for n, d in diffs.items()
                                              if ranks.get(n) and ranks.get(n - 1)}, R))
            embeds.append(B)
        steps.append(total)
        embeds.append({n: Matrix.identity(r, R) for n, r in total.ranks.items()})
        maps = []
        for p in range(len(bases)):
            comps = {}
            for n in total.ranks:
                X = solve_matrix(embeds[p + 1][n], embeds[p][n])
                if X is None:
                    raise NotFiltered(f"step {p} is not contained in step {p + 1} in degree {n}")
                comps[n] = X
            maps.append(ChainMap(steps[p], steps[p + 1], comps))
        return cls(steps, maps)

    @classmethod
    def from_maps(cls, steps: Sequence[ChainComplex], maps: Sequence[ChainMap],
                  force_cylinder: bool = False):
        """Accept arbitrary chain maps.

        If some map is not split injective, every step is replaced by an
        iterated mapping cylinder, which keeps each homotopy type.
        """
        return _from_maps(list(steps), list(maps), force_cylinder)

    # --- adapted basis ----------------------------------------------------------

    def _adapt(self):
        if self._adapted is not None:
            return self._adapted
        R = self.ring
        tot = self.total
        # step_bases[p][n]: adapted basis of X(p)_n in X(p) coordinates
        step_bases = [{n: Matrix.identity(r, R) for n, r in self.steps[0].ranks.items()}]
        for p, f in enumerate(self.maps):
            nxt = {}
            for n, r in self.steps[p + 1].ranks.items():
                prev = step_bases[p].get(n)
                if prev is None or prev.ncols == 0:
                    nxt[n] = Matrix.identity(r, R)
                else:
                    nxt[n] = complete_basis(f[n] @ prev)
            step_bases.append(nxt)
        B = step_bases[-1]
        cuts = []
        for p in range(self.P + 1):
            cuts.append({n: self.steps[p].rank(n) for n in tot.ranks})
        D = {}
        for n in tot.ranks:
            if tot.rank(n - 1):
                D[n] = inverse(B[n - 1]) @ tot.d(n) @ B[n]
        for n, M in D.items():
            for p in range(self.P + 1):
                lower = M.block(cuts[p][n - 1], M.nrows, 0, cuts[p][n])
                if not lower.is_zero():
                    raise NotFiltered(f"differential leaves step {p} in degree {n}")
        self._adapted = (B, cuts, D, step_bases)
        return self._adapted

    def adapted_basis(self) -> Dict[int, Matrix]:
        return self._adapt()[0]

    def cut(self, p: int, n: int) -> int:
        if p < 0:
            return 0
        cuts = self._adapt()[1]
        if p >= self.P:
            return self.total.rank(n)
        return cuts[p][n] if n in cuts[p] else 0

    def adapted_differential(self, n: int) -> Matrix:
        D = self._adapt()[2]
        if n in D:
            return D[n]
        return Matrix.zeros(self.total.rank(n - 1), self.total.rank(n), self.ring)

    def step_iso(self, p: int) -> ChainMap:
        """Chain isomorphism ``gap(-inf, p) -> X(p)`` given by the adapted basis."""
        sb = self._adapt()[3][p]
        G = gap(self, None, p)
        return ChainMap(G.complex, self.steps[p], {n: sb[n] for n in G.complex.ranks})

    def degrees(self) -> List[int]:
        return list(self.total.ranks)


def mapping_cylinder(f: ChainMap):
    """``Cyl(f) = cone(X -> X + Y, x |-> (x, -f x))`` with ``X -> Cyl(f) -> Y``.

    Returns ``(cyl, incl, proj)``; ``incl`` is split injective and ``proj`` is
    a homotopy equivalence with ``proj o incl = f``.
    """
    X, Y, R = f.source, f.target, f.ring
    XY = direct_sum(X, Y)
    phi = ChainMap(X, XY, {n: Matrix.identity(r, R).vstack(-f[n]) for n, r in X.ranks.items()})
    cyl, _, _ = cone(phi)
    # cyl_n = X_{n-1} + X_n + Y_n
    incl = ChainMap(X, cyl, {n: Matrix.zeros(X.rank(n - 1), r, R).vstack(
        Matrix.identity(r, R), Matrix.zeros(Y.rank(n), r, R)) for n, r in X.ranks.items()})
    proj = ChainMap(cyl, Y, {n: Matrix.zeros(Y.rank(n), X.rank(n - 1), R).hstack(
        f[n], Matrix.identity(Y.rank(n), R)) for n in cyl.ranks})
    return cyl, incl, proj


def _from_maps(steps, maps, force_cylinder=False):
    ok = all(_split_injective(f[n]) for f in maps for n in f.source.ranks)
    if ok and not force_cylinder:
        return FilteredComplex(steps, maps)
    new_steps, new_maps = [steps[0]], []
    to_orig = ChainMap.identity(steps[0])  # replacement of step p -> original step p
    for f in maps:
        cyl, inc, proj = mapping_cylinder(f @ to_orig)
        new_steps.append(cyl)
        new_maps.append(inc)
        to_orig = proj
    return FilteredComplex(new_steps, new_maps)



# --- gaps ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Gap:
    """``X(i, j) = X(j) / X(i)`` in adapted coordinates, with the quotient
    map from ``X(j)`` (also in adapted coordinates)."""

    i: Optional[int]
    j: Optional[int]
    complex: ChainComplex
    quotient: ChainMap


def _lo(F: FilteredComplex, i: Optional[int], n: int) -> int:
    return 0 if i is None else F.cut(i, n)


def _hi(F: FilteredComplex, j: Optional[int], n: int) -> int:
    return F.total.rank(n) if j is None else F.cut(j, n)


def _gap_complex(F: FilteredComplex, i, j) -> ChainComplex:
    ranks, diffs = {}, {}
    for n in F.total.ranks:
        ranks[n] = _hi(F, j, n) - _lo(F, i, n)
    for n in F.total.ranks:
        if ranks.get(n) and ranks.get(n - 1):
            D = F.adapted_differential(n)
            diffs[n] = D.block(_lo(F, i, n - 1), _hi(F, j, n - 1), _lo(F, i, n), _hi(F, j, n))
    return ChainComplex(ranks, diffs, F.ring, check=False)


def gap(F: FilteredComplex, i: Optional[int], j: Optional[int]) -> Gap:
    """The subquotient complex ``X(i, j)``; ``None`` means minus or plus infinity."""
    if i is not None and j is not None and i > j:
        raise IndexOrder(f"gap({i}, {j}) needs i <= j")
    G = _gap_complex(F, i, j)
    Xj = _gap_complex(F, None, j)
    R = F.ring
    comps = {}
    for n in Xj.ranks:
        lo = _lo(F, i, n)
        comps[n] = Matrix.zeros(G.rank(n), lo, R).hstack(Matrix.identity(G.rank(n), R))
    return Gap(i, j, G, ChainMap(Xj, G, comps))


# --- pages -----------------------------------------------------------------------------

@dataclass(frozen=True)
class PageEntry:
    """``E_r^{p,q} = Z^k / span(relations)``; ``cycles`` are the relative
    cycles of ``X(p-r, p)`` in degree ``p + q``, as columns in adapted total
    coordinates."""

    p: int
    q: int
    cycles: Matrix
    relations: Matrix
    module: FgModule

    @property
    def subquotient(self) -> Subquotient:
        k = self.cycles.ncols
        return Subquotient(Matrix.identity(k, self.cycles.ring), self.relations)


def _embed(F: FilteredComplex, Z: Matrix, lo: int, n: int) -> Matrix:
    R = F.ring
    total = F.total.rank(n)
    return Matrix.zeros(lo, Z.ncols, R).vstack(
        Z, Matrix.zeros(total - lo - Z.nrows, Z.ncols, R))


def _entry(F: FilteredComplex, r: int, p: int, q: int) -> PageEntry:
    R = F.ring
    n = p + q
    a, b = F.cut(p - r, n), F.cut(p, n)
    if b - a == 0:
        z = Matrix.zeros(0, 0, R)
        return PageEntry(p, q, Matrix.zeros(F.total.rank(n), 0, R), z, FgModule(R))
    D = F.adapted_differential(n)
    a1, b1 = F.cut(p - r, n - 1), F.cut(p, n - 1)
    Z = kernel_basis(D.block(a1, b1, a, b))
    cyc = _embed(F, Z, a, n)
    k = Z.ncols
    # map into X(p-1, p+r-1) in degree n, then quotient by boundaries there
    c, e = F.cut(p - 1, n), F.cut(p + r - 1, n)
    img = cyc.block(c, e, 0, k)
    Dn1 = F.adapted_differential(n + 1)
    bnd = Dn1.block(c, e, F.cut(p - 1, n + 1), F.cut(p + r - 1, n + 1))
    A = img.hstack(bnd)
    K = kernel_basis(A)
    K = K.block(0, k, 0, K.ncols)
    module = Subquotient(Matrix.identity(k, R), K).module()
    return PageEntry(p, q, cyc, K, module)


def _d_matrix(F: FilteredComplex, r: int, src: PageEntry, tgt: PageEntry) -> Matrix:
    """Coordinates of the connecting images of ``src.cycles`` in ``tgt.cycles``."""
    R = F.ring
    n = src.p + src.q
    k_src, k_tgt = src.cycles.ncols, tgt.cycles.ncols
    if k_src == 0 or k_tgt == 0:
        return Matrix.zeros(k_tgt, k_src, R)
    D = F.adapted_differential(n)
    img = D @ src.cycles
    lo, hi = F.cut(src.p - 2 * r, n - 1), F.cut(src.p - r, n - 1)
    rel = img.block(lo, hi, 0, k_src)
    tz = tgt.cycles.block(lo, hi, 0, k_tgt)
    X = solve_matrix(tz, rel)
    if X is None:
        raise InconsistentPage(f"connecting image at ({src.p},{src.q}) is not a relative cycle")
    return X


@dataclass
class Page:
    r: int
    entries: Dict[Tuple[int, int], PageEntry]
    differentials: Dict[Tuple[int, int], Matrix]
    filtration: "FilteredComplex" = field(repr=False, default=None)

    def module(self, p: int, q: int) -> FgModule:
        e = self.entries.get((p, q))
        return e.module if e is not None else FgModule(self.filtration.ring)

    def target(self, p: int, q: int) -> Tuple[int, int]:
        return p - self.r, q + self.r - 1

    def modules(self) -> Dict[Tuple[int, int], FgModule]:
        return {k: e.module for k, e in self.entries.items()}

    def check_d_squared(self) -> List[Tuple[int, int]]:
        """Positions where ``d_r o d_r`` is not zero modulo the target relations."""
        bad = []
        for (p, q), d in self.differentials.items():
            t = self.target(p, q)
            d2 = self.differentials.get(t)
            tt = self.target(*t)
            if d2 is None or tt not in self.entries:
                continue
            comp = d2 @ d
            rels = self.entries[tt].relations
            if comp.ncols and not comp.is_zero() and solve_matrix(rels, comp) is None:
                bad.append((p, q))
        return bad

    def grid(self) -> str:
        """Text grid: p to the right, q upward, origin at bottom-left."""
        nz = {k: str(m) for k, m in self.modules().items() if not m.is_zero}
        if not nz:
            return f"E_{self.r}: 0"
        ps = range(0, self.filtration.P + 1)
        qs = [q for _, q in nz]
        cells = {(p, q): nz.get((p, q), ".") for p in ps for q in range(min(qs), max(qs) + 1)}
        width = max(len(s) for s in cells.values())
        qw = max(len(str(q)) for q in range(min(qs), max(qs) + 1))
        lines = [f"E_{self.r}"]
        for q in range(max(qs), min(qs) - 1, -1):
            row = " ".join(cells[(p, q)].rjust(width) for p in ps)
            lines.append(f"{str(q).rjust(qw)} | {row}")
        lines.append(" " * qw + " +-" + "-" * ((width + 1) * len(ps) - 1))
        lines.append(" " * qw + "   " + " ".join(str(p).rjust(width) for p in ps))
        return "\n".join(lines)


def _positions(F: FilteredComplex):
    sup = F.total.support()
    if sup is None:
        return []
    lo, hi = sup
    return [(p, n - p) for p in range(F.P + 1) for n in range(lo, hi + 1)]


def page(F: FilteredComplex, r: int) -> Page:
    """``E_r`` with its differential, computed directly from the image description."""
    if r < 1:
        raise ValueError("pages start at r = 1")
    entries = {pos: _entry(F, r, *pos) for pos in _positions(F)}
    diffs = {}
    for (p, q), e in entries.items():
        t = (p - r, q + r - 1)
        te = entries.get(t) or _entry(F, r, *t)
        diffs[(p, q)] = _d_matrix(F, r, e, te)
    return Page(r, entries, diffs, F)


def e1_page(F: FilteredComplex) -> Page:
    return page(F, 1)


def _homology_of_page(P: Page, p: int, q: int) -> FgModule:
    F, r = P.filtration, P.r
    e = P.entries[(p, q)]
    S = e.subquotient
    out = P.target(p, q)
    src = (p + r, q - r + 1)
    te = P.entries.get(out) or _entry(F, r, *out)
    se = P.entries.get(src) or _entry(F, r, *src)
    dout = P.differentials.get((p, q))
    if dout is None:
        dout = _d_matrix(F, r, e, te)
    din = P.differentials.get(src)
    if din is None:
        din = _d_matrix(F, r, se, e)
    ker = S.kernel(dout, te.subquotient)
    numer = (din @ se.subquotient.gens).hstack(S.rels)
    return Subquotient.of(ker.gens, numer).module()


def turn_page(P: Page, F: FilteredComplex) -> Page:
    """``E_{r+1}`` from ``E_r``.

    The supplied page is first checked against the direct computation from
    ``F`` (:class:`InconsistentPage` on mismatch).  Each entry of the result is
    computed from the image description and checked to be isomorphic to
    ``ker d_r / im d_r``; ``d_{r+1}`` is recomputed from the defining images.
    """
    r = P.r
    direct = page(F, r)
    for pos in set(P.entries) | set(direct.entries):
        if P.module(*pos) != direct.module(*pos):
            raise InconsistentPage(f"entry {pos} of E_{r} is {P.module(*pos)}, "
                                   f"expected {direct.module(*pos)}")
    for pos, d in direct.differentials.items():
        given = P.differentials.get(pos)
        if given is not None and given.shape != d.shape:
            raise InconsistentPage(f"d_{r} at {pos} has shape {given.shape}, expected {d.shape}")
    nxt = page(F, r + 1)
    for pos in direct.entries:
        h = _homology_of_page(direct, *pos)
        if h != nxt.module(*pos):
            raise InconsistentPage(f"E_{r + 1}{pos} = {nxt.module(*pos)} but "
                                   f"ker/im of d_{r} is {h}")
    return nxt


def spectral_sequence(F: FilteredComplex, last: Optional[int] = None) -> List[Page]:
    """Pages ``E_1 .. E_last`` (default ``P + 1``, after which nothing changes)."""
    last = F.P + 1 if last is None else last
    pages = [page(F, 1)]
    while pages[-1].r < last:
        pages.append(turn_page(pages[-1], F))
    return pages


# --- convergence -----------------------------------------------------------------------

@dataclass
class ConvergenceReport:
    """Per degree ``n``: the filtration ``F^p H_n`` for ``p = 0..P``, the
    graded pieces, the matching ``E_inf`` entries and one verdict per ``p``."""

    page: Page
    total: Dict[int, FgModule]
    filtration: Dict[int, List[FgModule]]
    graded: Dict[int, List[FgModule]]
    verdicts: Dict[int, List[bool]]
    reassembled: Dict[int, bool]

    @property
    def ok(self) -> bool:
        return all(all(v) for v in self.verdicts.values()) and all(self.reassembled.values())


def _free_and_order(M: FgModule):
    order = 1
    for d in M.torsion:
        order *= d
    return M.free_rank, order


def e_infinity(F: FilteredComplex) -> ConvergenceReport:
    """``E_inf`` with a check that ``E_inf^{p, n-p} = F^p H_n / F^{p-1} H_n``."""
    R = F.ring
    Einf = page(F, F.P + 1)
    totals, filts, grads, verdicts, reass = {}, {}, {}, {}, {}
    for n in F.total.ranks:
        bnd = F.adapted_differential(n + 1)
        bnd = bnd if bnd.ncols else Matrix.zeros(F.total.rank(n), 0, R)
        D = F.adapted_differential(n)

        def cycles_upto(p):
            c, c1 = F.cut(p, n), F.cut(p, n - 1)
            if c == 0:
                return Matrix.zeros(F.total.rank(n), 0, R)
            Z = kernel_basis(D.block(0, c1, 0, c)) if D.nrows else Matrix.identity(c, R)
            return _embed(F, Z, 0, n)

        H = homology(F.total, n)
        totals[n] = H
        fl, gr, vs = [], [], []
        prev = cycles_upto(-1)
        for p in range(F.P + 1):
            Zp = cycles_upto(p)
            Fp = Subquotient.of(Zp.hstack(bnd), bnd).module()
            fl.append(Fp)
            piece = Subquotient.of(Zp.hstack(bnd), prev.hstack(bnd)).module() \
                if Zp.ncols or bnd.ncols else FgModule(R)
            gr.append(piece)
            vs.append(piece == Einf.module(p, n - p))
            prev = Zp
        vs.append(fl[-1] == H)
        filts[n], grads[n], verdicts[n] = fl, gr, vs
        # rank is additive along the filtration; orders multiply only if all are finite
        pieces = [Einf.module(p, n - p) for p in range(F.P + 1)]
        ok = sum(m.free_rank for m in pieces) == H.free_rank
        if H.free_rank == 0:
            od = 1
            for m in pieces:
                od *= _free_and_order(m)[1]
            ok = ok and od == _free_and_order(H)[1]
        reass[n] = ok
    return ConvergenceReport(Einf, totals, filts, grads, verdicts, reass)


# --- double complexes ------------------------------------------------------------------

class DoubleComplex:
    """Free modules ``C_{p,q}`` with ``dh: C_{p,q} -> C_{p-1,q}`` and
    ``dv: C_{p,q} -> C_{p,q-1}`` that commute.  The total differential is
    ``dh + (-1)^p dv``."""

    def __init__(self, ranks: Mapping[Tuple[int, int], int],
                 horizontal: Mapping[Tuple[int, int], Matrix],
                 vertical: Mapping[Tuple[int, int], Matrix], ring=ZZ, check: bool = True):
        self.ring = ring
        self.ranks = {k: r for k, r in sorted(ranks.items()) if r}
        self.h = {k: m for k, m in horizontal.items() if k in self.ranks}
        self.v = {k: m for k, m in vertical.items() if k in self.ranks}
        if check:
            self.validate()

    def rank(self, p, q):
        return self.ranks.get((p, q), 0)

    def dh(self, p, q) -> Matrix:
        m = self.h.get((p, q))
        return m if m is not None else Matrix.zeros(self.rank(p - 1, q), self.rank(p, q), self.ring)

    def dv(self, p, q) -> Matrix:
        m = self.v.get((p, q))
        return m if m is not None else Matrix.zeros(self.rank(p, q - 1), self.rank(p, q), self.ring)

    def validate(self):
        from .errors import NotAComplex
        for (p, q) in self.ranks:
            if not (self.dh(p - 1, q) @ self.dh(p, q)).is_zero():
                raise NotAComplex(p + q)
            if not (self.dv(p, q - 1) @ self.dv(p, q)).is_zero():
                raise NotAComplex(p + q)
            if self.dh(p, q - 1) @ self.dv(p, q) != self.dv(p - 1, q) @ self.dh(p, q):
                raise NotAComplex(p + q)
        return True

    @classmethod
    def from_tensor(cls, A: ChainComplex, B: ChainComplex) -> "DoubleComplex":
        R = A.ring
        ranks, h, v = {}, {}, {}
        for p, ra in A.ranks.items():
            for q, rb in B.ranks.items():
                ranks[(p, q)] = ra * rb
                h[(p, q)] = A.d(p).kron(Matrix.identity(rb, R))
                v[(p, q)] = Matrix.identity(ra, R).kron(B.d(q))
        return cls(ranks, h, v, R)

    def _layout(self, n):
        cells = sorted((p, q) for (p, q) in self.ranks if p + q == n)
        offs, off = {}, 0
        for c in cells:
            offs[c] = off
            off += self.ranks[c]
        return cells, offs, off

    def total(self) -> ChainComplex:
        R = self.ring
        degs = sorted({p + q for p, q in self.ranks})
        ranks, diffs = {}, {}
        for n in degs:
            ranks[n] = self._layout(n)[2]
        for n in degs:
            if n - 1 not in ranks:
                continue
            cells, offs, size = self._layout(n)
            tcells, toffs, tsize = self._layout(n - 1)
            rows = [[0] * size for _ in range(tsize)]
            for (p, q) in cells:
                for (tp, tq), M, s in (((p - 1, q), self.dh(p, q), 1),
                                       ((p, q - 1), self.dv(p, q), -1 if p % 2 else 1)):
                    if (tp, tq) not in toffs:
                        continue
                    r0, c0 = toffs[(tp, tq)], offs[(p, q)]
                    for i, row in enumerate(M.data):
                        for j, x in enumerate(row):
                            if x:
                                rows[r0 + i][c0 + j] += s * x
            diffs[n] = Matrix(rows, size, R)
        return ChainComplex(ranks, diffs, R)

    def column_filtration(self) -> FilteredComplex:
        """``X(p)`` = columns ``p' <= p``, indexed from the leftmost column."""
        R = self.ring
        T = self.total()
        ps = sorted({p for p, _ in self.ranks})
        if not ps:
            return FilteredComplex([T], [])
        p0 = ps[0]
        bases = []
        for k in range(ps[-1] - p0):
            B = {}
            for n in T.ranks:
                cells, offs, size = self._layout(n)
                cols = []
                for (p, q) in cells:
                    if p - p0 <= k:
                        for j in range(self.ranks[(p, q)]):
                            e = [0] * size
                            e[offs[(p, q)] + j] = 1
                            cols.append(e)
                B[n] = Matrix.from_columns(cols, size, R)
            bases.append(B)
        return FilteredComplex.from_subcomplexes(T, bases)
