from functools import reduce

import pytest
from hypothesis import given, strategies as st

from exacthom.chain import ChainComplex, homology, is_quasi_iso, shift
from exacthom.derived import (ext, ext_from_resolutions, free_resolution, heart_pi,
                              padded_resolution, resolve_complex, tau_triangle, tor,
                              tor_from_resolutions, truncate_geq, truncate_leq)
from exacthom.errors import CoefficientMismatch
from exacthom.linalg import GF, ZZ, FgModule, Matrix, hom_and_tensor
from exacthom.oracle import brute_ext_cyclic, brute_hom, brute_tor_cyclic
from exacthom.randgen import SplitMix64, random_complex, random_module
from exacthom.triangles import verify_distinguished


def mod(text):
    return FgModule.parse(text)


def finite_modules():
    orders = st.lists(st.integers(2, 9), min_size=1, max_size=2)
    return orders.map(lambda os: FgModule.from_cyclic(ZZ, 0, os))


def cyclic_orders(M):
    """Orders of a cyclic decomposition (any one works for the oracle)."""
    return list(M.torsion)


def pairwise(fn, M, N, n):
    pieces = [fn(a, b, n) for a in cyclic_orders(M) for b in cyclic_orders(N)]
    return reduce(lambda x, y: x.direct_sum(y), pieces, FgModule())


def test_free_resolution_examples():
    assert free_resolution(mod("Z")).complex.ranks == {0: 1}
    P = free_resolution(mod("Z/2")).complex
    assert homology(P, 0) == mod("Z/2") and homology(P, 1).is_zero
    P = free_resolution(mod("Z + Z/6")).complex
    assert (P.rank(0), P.rank(1)) == (2, 1)
    assert P.d(1).tolist() == [[0], [6]]


def test_hom_and_tensor_examples():
    assert hom_and_tensor(mod("Z"), mod("Z/3")) == (mod("Z/3"), mod("Z/3"))
    assert hom_and_tensor(mod("Z/2"), mod("Z/4")) == (mod("Z/2"), mod("Z/2"))
    assert hom_and_tensor(mod("Z/2"), mod("Z")) == (mod("0"), mod("Z/2"))


def test_ext_examples():
    N = mod("Z^2 + Z/5")
    assert ext(mod("Z"), N, 0) == N and ext(mod("Z"), N, 1).is_zero
    assert ext(mod("Z/2"), mod("Z"), 1) == mod("Z/2")
    assert ext(mod("Z/4"), mod("Z/6"), 0) == mod("Z/2")
    assert ext(mod("Z/4"), mod("Z/6"), 1) == mod("Z/2")
    assert ext(mod("Z/4"), mod("Z/6"), 2).is_zero
    assert ext(mod("Z/4"), mod("Z/6"), -1).is_zero


def test_tor_examples():
    N = mod("Z + Z/5")
    assert tor(mod("Z"), N, 0) == N and tor(mod("Z"), N, 1).is_zero
    assert tor(mod("Z/2"), mod("Z/2"), 1) == mod("Z/2")


def test_field_coefficients():
    F = GF(3)
    M, N = FgModule(F, 2), FgModule(F, 1)
    assert ext(M, N, 0) == FgModule(F, 2) and ext(M, N, 1).is_zero
    with pytest.raises(CoefficientMismatch):
        ext(M, mod("Z"), 0)


@given(finite_modules(), finite_modules())
def test_ext_tor_match_cyclic_oracles(M, N):
    for n in range(3):
        assert ext(M, N, n) == pairwise(brute_ext_cyclic, M, N, n)
        assert tor(M, N, n) == pairwise(brute_tor_cyclic, M, N, n)


@given(finite_modules(), finite_modules())
def test_hom_matches_enumeration(M, N):
    assert ext(M, N, 0) == brute_hom(M, N)


def test_tor_symmetric():
    rng = SplitMix64(11)
    for _ in range(30):
        M, N = random_module(rng), random_module(rng)
        for n in range(3):
            assert tor(M, N, n) == tor(N, M, n)


def test_padded_resolutions_agree():
    rng = SplitMix64(12)
    for _ in range(30):
        M, N = random_module(rng), random_module(rng)
        P, Q = padded_resolution(M, 2).complex, padded_resolution(N, 1).complex
        assert homology(P, 0) == M and all(homology(P, k).is_zero for k in (1, 2))
        for n in range(3):
            assert ext_from_resolutions(P, Q, n) == ext(M, N, n)
            assert tor_from_resolutions(P, Q, n) == tor(M, N, n)


def test_resolve_complex():
    rng = SplitMix64(13)
    C = random_complex(rng, 0, 2, 3)
    P, q = resolve_complex(C)
    assert P == C and is_quasi_iso(q)
    # Z/2 in degree 0 presented with a redundant contractible pair
    C = ChainComplex({0: 2, 1: 2}, {1: Matrix([[2, 0], [0, 1]])})
    P, q = resolve_complex(C, minimal=True)
    assert P.ranks == {0: 1, 1: 1} and P.d(1).tolist() == [[2]] and is_quasi_iso(q)
    C = ChainComplex.two_term(Matrix([[1]]), 1)
    P, q = resolve_complex(C, minimal=True)
    assert all(homology(P, n).is_zero for n in range(-1, 3)) and is_quasi_iso(q)


@pytest.mark.parametrize("seed", range(10))
def test_minimal_model_random(seed):
    C = random_complex(SplitMix64(seed), -1, 2, 3)
    P, q = resolve_complex(C, minimal=True)
    assert is_quasi_iso(q)
    assert sum(P.ranks.values()) <= sum(C.ranks.values())


def test_truncation_examples():
    C = ChainComplex.two_term(Matrix([[2]]), 1)
    assert truncate_geq(C, -3)[0] == C
    T, i = truncate_geq(C, -1)
    assert is_quasi_iso(i)
    T, _ = truncate_geq(C, 1)
    assert all(r == 0 for r in T.ranks.values())
    T, p = truncate_leq(C, 0)
    assert homology(T, 0) == mod("Z/2") and is_quasi_iso(p)
    T, p = truncate_leq(C, 5)
    assert is_quasi_iso(p)


@pytest.mark.parametrize("seed", range(15))
def test_truncation_homology(seed):
    C = random_complex(SplitMix64(seed), -1, 3, 3)
    for n in range(-2, 5):
        Tg, i = truncate_geq(C, n)
        Tl, p = truncate_leq(C, n)
        i.validate()
        p.validate()
        for m in range(-2, 6):
            H = homology(C, m)
            assert homology(Tg, m) == (H if m >= n else FgModule())
            assert homology(Tl, m) == (H if m <= n else FgModule())


@pytest.mark.parametrize("seed", range(8))
def test_tau_triangle_and_heart(seed):
    C = random_complex(SplitMix64(seed), 0, 2, 3)
    for n in range(0, 4):
        assert verify_distinguished(tau_triangle(C, n))
        assert heart_pi(C, n) == homology(C, n)
        assert heart_pi(shift(C, 2), n + 2) == heart_pi(C, n)


def test_heart_of_concentrated_module():
    C = shift(free_resolution(mod("Z/6 + Z")).complex, 3)
    assert heart_pi(C, 3) == mod("Z + Z/6")
    assert heart_pi(C, 2).is_zero and heart_pi(C, 4).is_zero
