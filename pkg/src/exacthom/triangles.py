"""Distinguished triangles in the homotopy category of chain complexes.

A :class:`Triangle` ``X -f-> Y -g-> Z -h-> X[1]`` carries a nullhomotopy of
``g f`` as part of its data.  It is *distinguished* when the comparison map
``cone(f) -> Z``, ``(x, y) |-> -W x + g y`` (``W`` the nullhomotopy, with
``g f = d W + W d``), is a quasi-isomorphism and ``h`` composed with it is
homotopic to the cone projection.  Nothing here compares triangles for
equality; only these isomorphism-invariant predicates are exposed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

from .chain import (ChainComplex, ChainHomotopy, ChainMap, cone,
                    direct_sum_maps, find_homotopy, hom_differential, homology,
                    hom_vector_to_components, map_to_hom_vector, shift, shift_map)
from .errors import CompositionMismatch, ExactHomError, NotAHomotopy
from .linalg import Matrix, solve

__all__ = [
    "Triangle",
    "Verdict",
    "Octahedron",
    "triangle_of",
    "rotate",
    "verify_distinguished",
    "octahedron",
    "tr3_filler",
    "complete_triangle",
    "direct_sum_triangles",
]


@dataclass(frozen=True, eq=False)
class Triangle:
    f: ChainMap
    g: ChainMap
    h: ChainMap
    null_witness: Optional[ChainHomotopy]

    def __post_init__(self):
        if self.f.target != self.g.source or self.g.target != self.h.source:
            raise CompositionMismatch("triangle maps are not composable")
        if self.h.target != shift(self.f.source, 1):
            raise CompositionMismatch("h must land in X[1]")
        w = self.null_witness
        if w is not None and (w.f.source != self.f.source or w.f.target != self.g.target):
            raise CompositionMismatch("null witness has the wrong source or target")

    @property
    def X(self) -> ChainComplex:
        return self.f.source

    @property
    def Y(self) -> ChainComplex:
        return self.f.target

    @property
    def Z(self) -> ChainComplex:
        return self.g.target


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = "ok"

    def __bool__(self):
        return self.ok


def triangle_of(f: ChainMap) -> Triangle:
    """The standard triangle ``X -> Y -> cone(f) -> X[1]``.

    ``g f`` is not zero on the nose; the witness is ``x |-> (-x, 0)``.
    """
    X, R = f.source, f.ring
    Z, incl, proj = cone(f)
    W = {n: (-Matrix.identity(r, R)).vstack(Matrix.zeros(f.target.rank(n + 1), r, R))
         for n, r in X.ranks.items()}
    witness = ChainHomotopy(incl @ f, ChainMap.zero(X, Z), W)
    return Triangle(f, incl, proj, witness)


def _null_witness(comp: ChainMap) -> Optional[ChainHomotopy]:
    zero = ChainMap.zero(comp.source, comp.target)
    if all(m.is_zero() for m in comp.components.values()):
        return ChainHomotopy(comp, zero, {}, check=False)
    return find_homotopy(comp, zero)


def rotate(T: Triangle) -> Triangle:
    """``(Y, Z, X[1], g, h, -f[1])``; the new witness is found by exact solve.

    If ``h g`` admits no nullhomotopy the rotated triangle has witness None
    (and is reported as not distinguished).
    """
    return Triangle(T.g, T.h, -shift_map(T.f, 1), _null_witness(T.h @ T.g))


def _comparison(T: Triangle, Zc: ChainComplex, W) -> ChainMap:
    R = T.f.ring
    comps = {}
    for n in Zc.ranks:
        Wn = W.get(n - 1, Matrix.zeros(T.Z.rank(n), T.X.rank(n - 1), R))
        comps[n] = (-Wn).hstack(T.g[n])
    return ChainMap(Zc, T.Z, comps, check=False)


def _check_comparison(T: Triangle, Zc: ChainComplex, proj: ChainMap, W) -> Verdict:
    phi = _comparison(T, Zc, W)
    try:
        phi.validate()
    except ExactHomError as e:
        return Verdict(False, f"comparison map is not a chain map: {e}")
    C, _, _ = cone(phi)
    for n in C.ranks:
        H = homology(C, n)
        if not H.is_zero:
            return Verdict(False, f"comparison cone(f) -> Z is not a quasi-isomorphism "
                                  f"(its cone has H_{n} = {H})")
    if find_homotopy(T.h @ phi, proj) is None:
        return Verdict(False, "h o comparison is not homotopic to the cone projection")
    return Verdict(True)


def _solve_witness(T: Triangle, Zc: ChainComplex, proj: ChainMap):
    """A nullhomotopy ``W`` of ``g f`` with ``h o comparison_W ~ proj``, or None.

    ``W`` and the homotopy ``K`` enter linearly, so both come from one solve of
    ``[[D, 0], [L, D']] [W; K] = [g f; h (0, g) - proj]`` with ``L(W) = h (W, 0)``.
    """
    X, Z, R = T.X, T.Z, T.f.ring
    X1 = T.h.target
    D1 = hom_differential(X, Z, 1)
    D2 = hom_differential(Zc, X1, 1)
    nw, nk = D1.shape[1], D2.shape[1]
    gf = map_to_hom_vector((T.g @ T.f).components, X, Z, 0)
    rest = ChainMap(Zc, Z, {n: Matrix.zeros(Z.rank(n), X.rank(n - 1), R).hstack(T.g[n])
                            for n in Zc.ranks}, check=False)
    rhs2 = map_to_hom_vector((T.h @ rest - proj).components, Zc, X1, 0)
    cols = []
    for j in range(nw):
        e = [0] * nw
        e[j] = 1
        Wj = hom_vector_to_components(e, X, Z, 1)
        comps = {n: T.h[n] @ Wj.get(n - 1, Matrix.zeros(Z.rank(n), X.rank(n - 1), R))
                 .hstack(Matrix.zeros(Z.rank(n), T.Y.rank(n), R)) for n in Zc.ranks}
        cols.append(map_to_hom_vector(comps, Zc, X1, 0))
    L = Matrix.from_columns(cols, len(rhs2), R)
    top = D1.hstack(Matrix.zeros(len(gf), nk, R))
    A = top.vstack(L.hstack(D2))
    x = solve(A, gf + rhs2)
    if x is None:
        return None
    return hom_vector_to_components(x[:nw], X, Z, 1)


def verify_distinguished(T: Triangle) -> Verdict:
    """Decide whether ``T`` is distinguished (see module docstring).

    The carried witness is tried first.  Failing that, a witness making
    ``h o comparison ~ proj`` is solved for; such a comparison commutes with
    the whole homology sequence, so by the five lemma it is a
    quasi-isomorphism exactly when some comparison is.
    """
    Zc, _, proj = cone(T.f)
    first = None
    if T.null_witness is not None:
        try:
            T.null_witness.validate()
            first = _check_comparison(T, Zc, proj, T.null_witness.components)
        except NotAHomotopy as e:
            first = Verdict(False, f"null witness invalid: {e}")
        if first:
            return first
    W = _solve_witness(T, Zc, proj)
    if W is None:
        return first or Verdict(False, "no nullhomotopy of g o f makes h o comparison "
                                       "homotopic to the cone projection")
    return _check_comparison(T, Zc, proj, W)


def direct_sum_triangles(S: Triangle, T: Triangle) -> Triangle:
    f = direct_sum_maps(S.f, T.f)
    g = direct_sum_maps(S.g, T.g)
    h = direct_sum_maps(S.h, T.h)
    # X[1] + X'[1] == (X + X')[1] on the nose, so h needs no retyping
    h = ChainMap(h.source, shift(f.source, 1), h.components, check=False)
    w = None
    if S.null_witness is not None and T.null_witness is not None:
        comps = {}
        for n in f.source.ranks:
            comps[n] = Matrix.block_diag([S.null_witness[n], T.null_witness[n]], f.ring)
        w = ChainHomotopy(g @ f, ChainMap.zero(f.source, g.target), comps)
    return Triangle(f, g, h, w)


@dataclass
class Octahedron:
    T_f: Triangle
    T_g: Triangle
    T_gf: Triangle
    T_link: Triangle
    witnesses: Dict[str, Optional[ChainHomotopy]] = field(default_factory=dict)

    @property
    def commutes(self) -> bool:
        return all(w is not None for w in self.witnesses.values())


def octahedron(f: ChainMap, g: ChainMap) -> Octahedron:
    """The octahedral configuration for composable ``f: X -> Y``, ``g: Y -> Z``.

    ``T_link`` is ``cone(f) -phi-> cone(gf) -psi-> cone(g) -theta-> cone(f)[1]``
    with ``phi(a, y) = (a, g y)``, ``psi(a, z) = (f a, z)``,
    ``theta(y, z) = (0, y)``.  Each commutativity constraint of the octahedral
    diagram gets a homotopy witness from an exact solve (None if it fails).
    """
    if f.target != g.source:
        raise CompositionMismatch("target of f is not the source of g")
    X, Y, Zc, R = f.source, f.target, g.target, f.ring
    gf = g @ f
    T_f, T_g, T_gf = triangle_of(f), triangle_of(g), triangle_of(gf)
    Cf, Cg, Cgf = T_f.Z, T_g.Z, T_gf.Z

    def zeros(r, c):
        return Matrix.zeros(r, c, R)

    def I(r):
        return Matrix.identity(r, R)

    phi = ChainMap(Cf, Cgf, {n: Matrix.from_blocks([
        [I(X.rank(n - 1)), zeros(X.rank(n - 1), Y.rank(n))],
        [zeros(Zc.rank(n), X.rank(n - 1)), g[n]]]) for n in Cf.ranks})
    psi = ChainMap(Cgf, Cg, {n: Matrix.from_blocks([
        [f[n - 1], zeros(Y.rank(n - 1), Zc.rank(n))],
        [zeros(Zc.rank(n), X.rank(n - 1)), I(Zc.rank(n))]]) for n in Cgf.ranks})
    Cf1 = shift(Cf, 1)
    theta = ChainMap(Cg, Cf1, {n: Matrix.from_blocks([
        [zeros(X.rank(n - 2), Y.rank(n - 1)), zeros(X.rank(n - 2), Zc.rank(n))],
        [I(Y.rank(n - 1)), zeros(Y.rank(n - 1), Zc.rank(n))]]) for n in Cg.ranks})
    W = ChainHomotopy(psi @ phi, ChainMap.zero(Cf, Cg), {n: Matrix.from_blocks([
        [zeros(Y.rank(n), X.rank(n - 1)), -I(Y.rank(n))],
        [zeros(Zc.rank(n + 1), X.rank(n - 1)), zeros(Zc.rank(n + 1), Y.rank(n))]])
        for n in Cf.ranks})
    T_link = Triangle(phi, psi, theta, W)

    constraints = {
        "phi.g_f ~ g_gf.g": (phi @ T_f.g, T_gf.g @ g),
        "psi.g_gf ~ g_g": (psi @ T_gf.g, T_g.g),
        "h_f ~ h_gf.phi": (T_f.h, T_gf.h @ phi),
        "h_g.psi ~ f[1].h_gf": (T_g.h @ psi, shift_map(f, 1) @ T_gf.h),
        "theta ~ g_f[1].h_g": (theta, shift_map(T_f.g, 1) @ T_g.h),
    }
    witnesses = {name: find_homotopy(a, b) for name, (a, b) in constraints.items()}
    return Octahedron(T_f, T_g, T_gf, T_link, witnesses)


def tr3_filler(T1: Triangle, T2: Triangle, phi_X: ChainMap, phi_Y: ChainMap):
    """Fill a square between two standard cone triangles.

    Given ``phi_Y f1 ~ f2 phi_X``, solve exactly for a homotopy ``K`` and
    return ``(phi_Z, K, w_g, w_h)`` where ``phi_Z(a, b) = (phi_X a, phi_Y b - K a)``
    and ``w_g``, ``w_h`` witness the two remaining squares.  Returns None if
    the given square does not commute up to homotopy.
    """
    for T in (T1, T2):
        if T.Z != cone(T.f)[0]:
            raise ValueError("tr3_filler expects standard cone triangles")
    K = find_homotopy(phi_Y @ T1.f, T2.f @ phi_X)
    if K is None:
        return None
    R = T1.f.ring
    comps = {}
    for n in T1.Z.ranks:
        comps[n] = Matrix.from_blocks([
            [phi_X[n - 1], Matrix.zeros(T2.X.rank(n - 1), T1.Y.rank(n), R)],
            [-K[n - 1], phi_Y[n]]])
    phi_Z = ChainMap(T1.Z, T2.Z, comps)
    w_g = find_homotopy(phi_Z @ T1.g, T2.g @ phi_Y)
    w_h = find_homotopy(T2.h @ phi_Z, shift_map(phi_X, 1) @ T1.h)
    return phi_Z, K, w_g, w_h


def complete_triangle(f: ChainMap, g: ChainMap, witness: ChainHomotopy) -> Optional[Triangle]:
    """Find ``h: Z -> X[1]`` making ``(f, g, h)`` distinguished, by one exact solve.

    Unknowns are a chain map ``h`` and a homotopy ``K`` with
    ``h phi - proj = d K + K d``, where ``phi: cone(f) -> Z`` is the
    comparison built from ``witness``.  None if no such ``h`` exists.
    """
    X, Z, R = f.source, g.target, f.ring
    X1 = shift(X, 1)
    Zc, _, proj = cone(f)
    phi = _comparison(Triangle(f, g, ChainMap.zero(Z, X1), witness), Zc, witness.components)
    D0 = hom_differential(Z, X1, 0)          # chain-map condition on h
    D1 = hom_differential(Zc, X1, 1)         # boundary of K
    # h |-> h o phi, block by block in the flattened coordinates
    nh = D0.ncols
    hom_cols = []
    for j in range(nh):
        e = [0] * nh
        e[j] = 1
        comps = hom_vector_to_components(e, Z, X1, 0)
        hphi = {n: comps[n] @ phi[n] for n in comps if n in Zc.ranks}
        hom_cols.append(map_to_hom_vector(hphi, Zc, X1, 0))
    nrow = D1.nrows
    Phi = Matrix.from_columns(hom_cols, nrow, R) if hom_cols else Matrix.zeros(nrow, 0, R)
    top = D0.hstack(Matrix.zeros(D0.nrows, D1.ncols, R))
    bot = Phi.hstack(-D1)
    A = top.vstack(bot)
    rhs = [0] * D0.nrows + map_to_hom_vector(proj.components, Zc, X1, 0)
    x = solve(A, rhs)
    if x is None:
        return None
    h = ChainMap(Z, X1, hom_vector_to_components(x[:nh], Z, X1, 0))
    return Triangle(f, g, h, witness)
