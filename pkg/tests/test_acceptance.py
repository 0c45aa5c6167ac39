"""Acceptance criteria 1-8, each with its time limit.

Every test prints one ``criterion N: PASS|FAIL`` line; the lines are repeated
in the terminal summary.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import json
import pathlib
import subprocess
import sys
import time

from exacthom.chain import (ChainComplex, ChainMap, cone, cone_long_exact_sequence,
                            homology_subquotient)
from exacthom.derived import (ext, ext_from_resolutions, padded_resolution, tor,
                              tor_from_resolutions)
from exacthom.filtered import FilteredComplex, e_infinity, page, spectral_sequence
from exacthom.linalg import ZZ, FgModule, Matrix, Subquotient, smith_normal_form
from exacthom.oracle import bareiss_det, brute_ext_cyclic, brute_tor_cyclic
from exacthom.randgen import (SplitMix64, random_chain_map, random_complex,
                              random_double_complex, random_filtered_complex,
                              random_matrix, random_module)
from exacthom.suites import run_suite
from exacthom.triangles import Triangle, rotate, triangle_of, verify_distinguished

GOLDEN = pathlib.Path(__file__).parent / "golden"


def test_criterion_1_smith_form(acceptance):
    rng = SplitMix64(1)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(1000):
        A = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6), bound=9)
        U, D, V = smith_normal_form(A)
        m, n = A.shape
        diag = [D.data[i][i] for i in range(min(m, n))]
        nz = [d for d in diag if d]
        ok = (U @ A @ V == D
              and abs(bareiss_det(U.tolist())) == 1 and abs(bareiss_det(V.tolist())) == 1
              and all(D.data[i][j] == 0 for i in range(m) for j in range(n) if i != j)
              and all(d >= 0 for d in diag)
              and all(b % a == 0 for a, b in zip(nz, nz[1:])))
        bad += not ok
    dt = time.perf_counter() - t0
    assert acceptance(1, "Smith normal form on 1000 matrices", bad == 0, dt, 5,
                      f"; {bad} failures")


def test_criterion_2_cone_sequence(acceptance):
    rng = SplitMix64(2)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(200):
        X = random_complex(rng, -3, 5, 4)
        Y = random_complex(rng, -3, 5, 4)
        bad += not cone_long_exact_sequence(random_chain_map(rng, X, Y)).exact
    dt = time.perf_counter() - t0
    assert acceptance(2, "cone long exact sequence on 200 maps", bad == 0, dt, 30,
                      f"; {bad} failures")


def _times_two_failing_instance():
    U = ChainComplex.concentrated(1, 0)
    T = triangle_of(ChainMap(U, U, {0: Matrix([[2]])}))
    bad = Triangle(T.f, T.g, T.h.scale(2), T.null_witness)
    return not verify_distinguished(bad) and not verify_distinguished(rotate(bad))


def test_criterion_3_triangulated_axioms(acceptance):
    t0 = time.perf_counter()
    rep = run_suite("triangles", 3, 100)
    constructed = _times_two_failing_instance()
    dt = time.perf_counter() - t0
    detail = f"; {rep.lines()[-1]}; constructed failing instance rejected both ways: {constructed}"
    assert acceptance(3, "TR1-TR4 on 100 instances", rep.ok and constructed, dt, 60, detail)


def test_criterion_4_ext_tor(acceptance):
    rng = SplitMix64(4)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(50):
        a, b, n = rng.randint(2, 30), rng.randint(2, 30), rng.randint(0, 3)
        M, N = FgModule.from_cyclic(ZZ, 0, [a]), FgModule.from_cyclic(ZZ, 0, [b])
        bad += ext(M, N, n) != brute_ext_cyclic(a, b, n)
        bad += tor(M, N, n) != brute_tor_cyclic(a, b, n)
    for _ in range(30):
        M, N = random_module(rng), random_module(rng)
        bad += any(tor(M, N, n) != tor(N, M, n) for n in range(4))
    for _ in range(30):
        M, N = random_module(rng), random_module(rng)
        P, Q = padded_resolution(M, 2).complex, padded_resolution(N, 1).complex
        bad += any(ext_from_resolutions(P, Q, n) != ext(M, N, n)
                   or tor_from_resolutions(P, Q, n) != tor(M, N, n) for n in range(4))
    dt = time.perf_counter() - t0
    assert acceptance(4, "Ext/Tor oracles, symmetry, resolution independence", bad == 0, dt,
                      20, f"; {bad} mismatches")


def test_criterion_5_truncation(acceptance):
    t0 = time.perf_counter()
    rep = run_suite("tstructure", 5, 50)
    dt = time.perf_counter() - t0
    assert acceptance(5, "truncations commute, tau triangles distinguished", rep.ok, dt, 30,
                      f"; {rep.lines()[-1]}")


def _connecting_ok(f):
    Zc, incl, _ = cone(f)
    F = FilteredComplex([f.target, Zc], [incl])
    E2 = page(F, 2)
    for n in range(-2, 6):
        HX, HY = homology_subquotient(f.source, n), homology_subquotient(f.target, n)
        ker = HX.kernel(f[n], HY).module()
        coker = Subquotient.of(HY.gens, HY.rels.hstack(f[n] @ HX.gens)).module()
        if E2.module(0, n) != coker or E2.module(1, n) != ker:
            return False
    return True


def test_criterion_6_spectral_sequence(acceptance):
    rng = SplitMix64(6)
    t0 = time.perf_counter()
    bad_a = bad_b = bad_c = 0
    for i in range(50):
        F = random_filtered_complex(rng, P=1 + i % 4)
        bad_a += any(pg.check_d_squared() for pg in spectral_sequence(F, F.P + 2))
    for _ in range(50):
        X, Y = random_complex(rng, 0, 3, 3), random_complex(rng, 0, 3, 3)
        bad_b += not _connecting_ok(random_chain_map(rng, X, Y))
    for i in range(20):
        w, h = 2 + i % 3, 2 + (i // 3) % 3
        D = random_double_complex(rng, width=w, height=h)
        bad_c += not e_infinity(D.column_filtration()).ok
    dt = time.perf_counter() - t0
    detail = f"; d^2 failures {bad_a}, connecting-map mismatches {bad_b}, reassembly failures {bad_c}"
    assert acceptance(6, "spectral sequences", bad_a + bad_b + bad_c == 0, dt, 60, detail)


def test_criterion_7_dold_kan(acceptance):
    t0 = time.perf_counter()
    rep = run_suite("doldkan", 7, 50)
    dt = time.perf_counter() - t0
    assert acceptance(7, "Dold-Kan on 50 instances", rep.ok, dt, 60, f"; {rep.lines()[-1]}")


def _run_golden():
    out = {}
    for case in json.loads((GOLDEN / "manifest.json").read_text()):
        r = subprocess.run([sys.executable, "-m", "exacthom.cli", *case["argv"]],
                           cwd=GOLDEN, capture_output=True, text=True)
        out[case["name"]] = (r.returncode, r.stdout)
    return out


def test_criterion_8_golden_files(acceptance):
    t0 = time.perf_counter()
    first, second = _run_golden(), _run_golden()
    mismatched = [name for name, (code, text) in first.items()
                  if code != 0 or text != (GOLDEN / "expected" / f"{name}.out").read_text()]
    dt = time.perf_counter() - t0
    ok = len(first) == 10 and not mismatched and first == second
    assert acceptance(8, "CLI golden files byte-exact and deterministic", ok, dt, 10,
                      f"; mismatched: {mismatched or 'none'}")
