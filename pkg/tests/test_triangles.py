import pytest

from exacthom.chain import (ChainComplex, ChainMap, check_exact, homology,
                            homology_subquotient, is_quasi_iso, shift_map)
from exacthom.errors import CompositionMismatch
from exacthom.linalg import FgModule, Matrix
from exacthom.randgen import (SplitMix64, random_chain_map, random_commuting_square,
                              random_complex)
from exacthom.triangles import (Triangle, complete_triangle, direct_sum_triangles,
                                octahedron, rotate, tr3_filler, triangle_of,
                                verify_distinguished)


def unit():
    return ChainComplex.concentrated(1, 0)


def mult(k):
    return ChainMap(unit(), unit(), {0: Matrix([[k]])})


def small(rng):
    return random_complex(rng, 0, 2, 2)


def random_map(seed):
    rng = SplitMix64(seed)
    X, Y = small(rng), small(rng)
    return rng, random_chain_map(rng, X, Y)


def sequence_exact(T):
    """Exactness of H(X) -> H(Y) -> H(Z) -> H(X[1]) -> H(Y[1]) at every node."""
    X, Y, Z, X1 = T.X, T.Y, T.Z, T.h.target
    degs = set(X.ranks) | set(Y.ranks) | set(Z.ranks)
    if not degs:
        return True
    for n in range(min(degs) - 1, max(degs) + 3):
        hx, hy, hz, hx1 = (homology_subquotient(C, n) for C in (X, Y, Z, X1))
        hx_prev = homology_subquotient(X, n - 1)
        hy_prev = homology_subquotient(Y, n - 1)
        ok = (check_exact(T.f[n], hx, hy, T.g[n], hz) is not None
              and check_exact(T.g[n], hy, hz, T.h[n], hx1) is not None
              and check_exact(T.h[n], hz, hx_prev, T.f[n - 1], hy_prev) is not None)
        if not ok:
            return False
    return True


def test_cone_of_identity_contractible():
    X = random_complex(SplitMix64(0), 0, 2, 3)
    T = triangle_of(ChainMap.identity(X))
    assert all(homology(T.Z, n).is_zero for n in range(-1, 5))
    assert verify_distinguished(T)
    assert verify_distinguished(rotate(T))


def test_zero_map_cone_splits():
    rng = SplitMix64(1)
    X, Y = small(rng), small(rng)
    T = triangle_of(ChainMap.zero(X, Y))
    for n in range(-1, 5):
        assert homology(T.Z, n) == homology(X, n - 1).direct_sum(homology(Y, n))


def test_times_two():
    T = triangle_of(mult(2))
    assert homology(T.Z, 0) == FgModule.parse("Z/2")
    assert verify_distinguished(T)


def test_times_two_with_doubled_h_fails_both_ways():
    T = triangle_of(mult(2))
    bad = Triangle(T.f, T.g, T.h.scale(2), T.null_witness)
    v = verify_distinguished(bad)
    assert not v and "cone projection" in v.reason
    assert not verify_distinguished(rotate(bad))


@pytest.mark.parametrize("seed", range(25))
def test_tr1_tr2(seed):
    _, f = random_map(seed)
    T = triangle_of(f)
    assert verify_distinguished(T)
    R = rotate(T)
    assert verify_distinguished(R)
    assert verify_distinguished(rotate(R))
    bad = Triangle(T.f, T.g, T.h.scale(2), T.null_witness)
    assert bool(verify_distinguished(bad)) == bool(verify_distinguished(rotate(bad)))


@pytest.mark.parametrize("seed", range(10))
def test_triple_rotation_is_negated_shift(seed):
    _, f = random_map(seed)
    T = triangle_of(f)
    R3 = rotate(rotate(rotate(T)))
    assert R3.f == -shift_map(T.f, 1)
    assert R3.g == -shift_map(T.g, 1)
    assert R3.h == -shift_map(T.h, 1)


@pytest.mark.parametrize("seed", range(15))
def test_distinguished_implies_exact_sequence(seed):
    rng, f = random_map(seed)
    T = triangle_of(f)
    for S in (T, rotate(T), rotate(rotate(T))):
        assert verify_distinguished(S) and sequence_exact(S)


def test_direct_sum_of_distinguished():
    _, f1 = random_map(3)
    _, f2 = random_map(4)
    S = direct_sum_triangles(triangle_of(f1), triangle_of(f2))
    assert verify_distinguished(S)


def test_composition_mismatch():
    T = triangle_of(mult(2))
    with pytest.raises(CompositionMismatch):
        Triangle(T.f, T.f, T.h, None)
    X = random_complex(SplitMix64(9), 0, 1, 2)
    with pytest.raises(CompositionMismatch):
        octahedron(mult(2), ChainMap.identity(X))


@pytest.mark.parametrize("seed", range(10))
def test_tr3_filler(seed):
    rng, f = random_map(seed)
    X2, Y2 = small(rng), small(rng)
    f2 = random_chain_map(rng, X2, Y2)
    phi_X, phi_Y = random_commuting_square(rng, f, f2)
    res = tr3_filler(triangle_of(f), triangle_of(f2), phi_X, phi_Y)
    assert res is not None
    phi_Z, K, w_g, w_h = res
    assert phi_Z.validate() and w_g is not None and w_h is not None


def test_tr3_on_scalars():
    phi_Z, _, w_g, w_h = tr3_filler(triangle_of(mult(2)), triangle_of(mult(2)),
                                    mult(3), mult(3))
    assert w_g is not None and w_h is not None
    # 1 * 2 != 3 * 1, and degree-0 complexes admit no homotopies
    assert tr3_filler(triangle_of(mult(2)), triangle_of(mult(3)), mult(1), mult(1)) is None


def test_octahedron_two_three():
    O = octahedron(mult(2), mult(3))
    assert O.commutes
    assert homology(O.T_f.Z, 0) == FgModule.parse("Z/2")
    assert homology(O.T_gf.Z, 0) == FgModule.parse("Z/6")
    assert homology(O.T_g.Z, 0) == FgModule.parse("Z/3")
    assert verify_distinguished(O.T_link)
    # 0 -> Z/2 -> Z/6 -> Z/3 -> 0: the link maps are injective then surjective on H_0
    L = O.T_link
    assert sequence_exact(L)
    h0 = [homology_subquotient(C, 0) for C in (L.X, L.Y, L.Z)]
    zero = homology_subquotient(ChainComplex({}, {}), 0)
    assert check_exact(Matrix.zeros(L.X.rank(0), 0), zero, h0[0], L.f[0], h0[1]) is not None


def test_octahedron_identities():
    _, f = random_map(5)
    O = octahedron(f, ChainMap.identity(f.target))
    assert O.commutes
    assert all(homology(O.T_g.Z, n).is_zero for n in range(-1, 5))
    assert is_quasi_iso(O.T_link.f)
    O = octahedron(ChainMap.identity(f.source), f)
    assert O.commutes and is_quasi_iso(O.T_link.g)


@pytest.mark.parametrize("seed", range(10))
def test_octahedron_random(seed):
    rng, f = random_map(seed)
    g = random_chain_map(rng, f.target, small(rng))
    O = octahedron(f, g)
    assert O.commutes
    assert all(verify_distinguished(t) for t in (O.T_f, O.T_g, O.T_gf, O.T_link))


def test_complete_triangle():
    _, f = random_map(6)
    T = triangle_of(f)
    S = complete_triangle(T.f, T.g, T.null_witness)
    assert S is not None and verify_distinguished(S)
