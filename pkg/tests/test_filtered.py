import dataclasses

import pytest

from exacthom.chain import (ChainComplex, ChainMap, cone, homology, homology_subquotient,
                            is_quasi_iso)
from exacthom.errors import InconsistentPage, IndexOrder, NotFiltered
from exacthom.filtered import (DoubleComplex, FilteredComplex, e1_page,
                               e_infinity, gap, mapping_cylinder, page, spectral_sequence,
                               turn_page)
from exacthom.linalg import FgModule, Matrix, Subquotient
from exacthom.randgen import (SplitMix64, random_chain_map, random_complex,
                              random_double_complex, random_filtered_complex)


def mod(text):
    return FgModule.parse(text)


def unit():
    return ChainComplex.concentrated(1, 0)


def cone_filtration(f):
    """``0 <= Y <= cone(f)`` with quotient ``X[1]``."""
    X, Y = f.source, f.target
    Zc, incl, _ = cone(f)
    return FilteredComplex([Y, Zc], [incl]), X, Y


@pytest.mark.parametrize("seed", range(10))
def test_gaps(seed):
    F = random_filtered_complex(SplitMix64(seed), P=3)
    for p in range(F.P + 1):
        G = gap(F, p, p).complex
        assert all(r == 0 for r in G.ranks.values())
        iso = F.step_iso(p)
        assert is_quasi_iso(iso)
        assert all(iso[n].shape[0] == iso[n].shape[1] for n in iso.components)
    with pytest.raises(IndexOrder):
        gap(F, 2, 1)
    whole = gap(F, None, None).complex
    for n in F.total.ranks:
        assert homology(whole, n) == homology(F.total, n)


def test_two_step_quotient():
    rng = SplitMix64(21)
    X, Y = random_complex(rng, 0, 2, 2), random_complex(rng, 0, 2, 2)
    f = random_chain_map(rng, X, Y)
    F, X, Y = cone_filtration(f)
    Q = gap(F, 0, 1).complex
    for n in range(-1, 5):
        assert homology(Q, n) == homology(X, n - 1)


def connecting_cokernel_kernel(f, n):
    """``coker`` and ``ker`` of ``H_n f`` from homology subquotients alone."""
    HX, HY = homology_subquotient(f.source, n), homology_subquotient(f.target, n)
    ker = HX.kernel(f[n], HY).module()
    img = f[n] @ HX.gens
    coker = Subquotient.of(HY.gens, HY.rels.hstack(img)).module()
    return coker, ker


@pytest.mark.parametrize("seed", range(12))
def test_first_differential_is_connecting_map(seed):
    rng = SplitMix64(100 + seed)
    X, Y = random_complex(rng, 0, 2, 2), random_complex(rng, 0, 2, 2)
    f = random_chain_map(rng, X, Y)
    F, _, _ = cone_filtration(f)
    E1 = e1_page(F)
    for n in range(-1, 4):
        assert E1.module(0, n) == homology(Y, n)
        assert E1.module(1, n) == homology(X, n)       # (1, q) sits in degree q + 1
    E2 = turn_page(E1, F)
    for n in range(-1, 4):
        coker, ker = connecting_cokernel_kernel(f, n)
        assert E2.module(0, n) == coker
        assert E2.module(1, n) == ker
    # only d_1 can act on a two-step filtration
    assert page(F, 3).modules() == E2.modules()


def test_one_step_filtration():
    C = random_complex(SplitMix64(5), 0, 2, 3)
    F = FilteredComplex([C], [])
    E1 = e1_page(F)
    for n in C.ranks:
        assert E1.module(0, n) == homology(C, n)
    rep = e_infinity(F)
    assert rep.ok and all(len(v) == 1 for v in rep.graded.values())


def test_two_z_inside_z():
    F = FilteredComplex.from_maps([unit(), unit()], [ChainMap(unit(), unit(), {0: Matrix([[2]])})])
    rep = e_infinity(F)
    assert rep.ok
    assert rep.page.module(0, 0) == mod("Z") and rep.page.module(1, -1) == mod("Z/2")


def test_non_split_maps_use_cylinder():
    f = ChainMap(unit(), unit(), {0: Matrix([[2]])})
    with pytest.raises(NotFiltered):
        FilteredComplex([unit(), unit()], [f])
    F = FilteredComplex.from_maps([unit(), unit()], [f])
    assert homology(F.total, 0) == mod("Z") and e_infinity(F).ok
    cyl, incl, proj = mapping_cylinder(f)
    assert is_quasi_iso(proj) and proj @ incl == f


@pytest.mark.parametrize("seed", range(15))
def test_random_filtrations(seed):
    F = random_filtered_complex(SplitMix64(seed), P=1 + seed % 4)
    pages = spectral_sequence(F, F.P + 2)
    assert all(not pg.check_d_squared() for pg in pages)
    for a, b in zip(pages, pages[1:]):
        assert b.modules() == page(F, a.r + 1).modules()
    assert pages[-1].modules() == pages[-2].modules()
    assert e_infinity(F).ok


def test_tampered_page_rejected():
    F = random_filtered_complex(SplitMix64(3), P=2)
    E1 = e1_page(F)
    pos = next(k for k, e in E1.entries.items() if not e.module.is_zero)
    e = E1.entries[pos]
    fake = dataclasses.replace(e, module=e.module.direct_sum(mod("Z/7")))
    bad = dataclasses.replace(E1, entries={**E1.entries, pos: fake})
    with pytest.raises(InconsistentPage):
        turn_page(bad, F)


def column_homology(D, p, q):
    col = ChainComplex({q2: D.rank(p, q2) for (p2, q2) in D.ranks if p2 == p},
                       {q2: D.dv(p, q2) for (p2, q2) in D.ranks if p2 == p and D.rank(p, q2 - 1)})
    return homology(col, q)


@pytest.mark.parametrize("seed", range(8))
def test_double_complex(seed):
    D = random_double_complex(SplitMix64(seed), width=3, height=3)
    F = D.column_filtration()
    E1 = e1_page(F)
    p0 = min(p for p, _ in D.ranks)
    # filtration steps are counted from the leftmost column
    for (p, q) in D.ranks:
        assert E1.module(p - p0, q + p0) == column_homology(D, p, q)
    rep = e_infinity(F)
    assert rep.ok
    for n, H in rep.total.items():
        assert H == homology(D.total(), n)


def test_tensor_double_complex():
    A = ChainComplex.two_term(Matrix([[2]]), 1)
    B = ChainComplex.two_term(Matrix([[4]]), 1)
    D = DoubleComplex.from_tensor(A, B)
    T = D.total()
    assert homology(T, 0) == mod("Z/2") and homology(T, 1) == mod("Z/2")
    assert e_infinity(D.column_filtration()).ok


def test_grid_layout():
    F = FilteredComplex.from_maps([unit(), unit()], [ChainMap(unit(), unit(), {0: Matrix([[2]])})])
    text = page(F, 2).grid()
    assert text.splitlines()[0] == "E_2"
    assert text.splitlines()[-1].split() == ["0", "1"]
    empty = FilteredComplex([ChainComplex({}, {})], [])
    assert page(empty, 1).grid() == "E_1: 0"
