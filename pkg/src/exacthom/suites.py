"""Randomized invariant suites, deterministic in a single 64-bit seed.

Each suite runs ``cases`` independent cases.  Case ``i`` draws its own seed
from ``SplitMix64(seed)`` in order, so cases can run in any order (or in
parallel) and the aggregated report is always the same.  A case is a list
of named checks; it passes when every check does.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .chain import (ChainComplex, ChainMap, cone, cone_long_exact_sequence, homology,
                    homotopy_classes, shift_map)
from .derived import heart_pi, tau_triangle, truncate_geq, truncate_leq
from .doldkan import (SimplicialModule, complex_from_filtration, gamma, latching_complex,
                      normalized_chains, simplicial_ss, skeletal_filtration)
from .errors import ExactHomError
from .filtered import FilteredComplex, e_infinity, spectral_sequence
from .linalg import FgModule
from .randgen import (SplitMix64, random_chain_map, random_commuting_square, random_complex,
                      random_filtered_complex, random_simplicial)
from .triangles import (Triangle, octahedron, rotate, tr3_filler, triangle_of,
                        verify_distinguished)

__all__ = ["CaseResult", "SuiteReport", "SUITES", "run_suite", "case_seeds"]

Check = Tuple[str, bool]


@dataclass
class CaseResult:
    index: int
    seed: int
    checks: List[Check] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(ok for _, ok in self.checks)

    def failures(self) -> List[str]:
        out = [name for name, ok in self.checks if not ok]
        if self.error:
            out.append(f"error: {self.error}")
        return out


@dataclass
class SuiteReport:
    suite: str
    seed: int
    cases: List[CaseResult]

    @property
    def passed(self) -> int:
        return sum(1 for c in self.cases if c.ok)

    @property
    def ok(self) -> bool:
        return self.passed == len(self.cases)

    def lines(self) -> List[str]:
        out = []
        for c in self.cases:
            for name in c.failures():
                out.append(f"case {c.index} (seed {c.seed}): FAIL {name}")
        out.append(f"{self.suite}: {self.passed}/{len(self.cases)} cases passed")
        return out

    def to_json_obj(self):
        return {"type": "verify", "suite": self.suite, "seed": self.seed,
                "passed": self.passed, "cases": len(self.cases),
                "failures": [{"case": c.index, "seed": c.seed, "checks": c.failures()}
                             for c in self.cases if not c.ok]}


# --- triangles ------------------------------------------------------------------------

def _small(rng):
    return random_complex(rng, 0, 2, 2)


def check_triangles(rng: SplitMix64, given: Optional[ChainMap] = None) -> List[Check]:
    if given is not None:
        f = given
        X, Y = f.source, f.target
    else:
        X, Y = _small(rng), _small(rng)
        f = random_chain_map(rng, X, Y)
    T = triangle_of(f)
    checks = [("TR1 cone triangle distinguished", bool(verify_distinguished(T)))]
    Zi = cone(ChainMap.identity(X))[0]
    checks.append(("TR1 cone of identity contractible",
                   all(homology(Zi, n).is_zero for n in Zi.ranks)))
    R1 = rotate(T)
    checks.append(("TR2 rotation distinguished", bool(verify_distinguished(R1))))
    R3 = rotate(rotate(R1))
    checks.append(("TR2 triple rotation is the negated shift",
                   R3.f == -shift_map(T.f, 1) and R3.g == -shift_map(T.g, 1)
                   and R3.h == -shift_map(T.h, 1)))
    bad = Triangle(T.f, T.g, T.h.scale(2), T.null_witness)
    checks.append(("TR2 both directions",
                   bool(verify_distinguished(bad)) == bool(verify_distinguished(rotate(bad)))))
    checks.append(("LES of distinguished triangle exact", cone_long_exact_sequence(f).exact))
    X2, Y2 = _small(rng), _small(rng)
    f2 = random_chain_map(rng, X2, Y2)
    phi_X, phi_Y = random_commuting_square(rng, f, f2)
    fill = tr3_filler(T, triangle_of(f2), phi_X, phi_Y)
    checks.append(("TR3 filler exists", fill is not None and fill[2] is not None
                   and fill[3] is not None))
    W = _small(rng)
    g = random_chain_map(rng, Y, W)
    O = octahedron(f, g)
    checks.append(("TR4 commutativity witnesses", O.commutes))
    checks.append(("TR4 triangles distinguished",
                   all(verify_distinguished(t) for t in (O.T_f, O.T_g, O.T_gf, O.T_link))))
    return checks


# --- t-structure ------------------------------------------------------------------------

def check_tstructure(rng: SplitMix64, given: Optional[ChainComplex] = None) -> List[Check]:
    C = given if given is not None else random_complex(rng, -1, 3, 3)
    sup = C.support()
    if sup is None:
        return [("zero complex", True)]
    lo, hi = sup
    checks = []
    ok_geq = ok_leq = True
    for n in range(lo - 1, hi + 2):
        Tg, _ = truncate_geq(C, n)
        Tl, _ = truncate_leq(C, n)
        for m in range(lo - 1, hi + 3):
            h = homology(C, m)
            ok_geq &= homology(Tg, m) == (h if m >= n else FgModule(C.ring))
            ok_leq &= homology(Tl, m) == (h if m <= n else FgModule(C.ring))
    checks.append(("truncate_geq homology", ok_geq))
    checks.append(("truncate_leq homology", ok_leq))
    comm = True
    for n in range(lo, hi + 1):
        for m in range(n, hi + 1):
            A = truncate_leq(truncate_geq(C, n)[0], m)[0]
            B = truncate_geq(truncate_leq(C, m)[0], n)[0]
            for k in range(lo - 1, hi + 3):
                comm &= homology(A, k) == homology(B, k)
    checks.append(("truncations commute", comm))
    checks.append(("tau triangles distinguished",
                   all(verify_distinguished(tau_triangle(C, n)) for n in range(lo, hi + 2))))
    checks.append(("heart is homology",
                   all(heart_pi(C, n) == homology(C, n) for n in range(lo - 1, hi + 2))))
    # C is in D_{<=k} iff maps from Z in degree 0 into C shifted up vanish above k
    unit = ChainComplex.concentrated(1, 0, C.ring)
    echo = True
    for k in (lo, lo + 1):
        Ck = truncate_geq(C, lo)[0]
        lhs = all(homology(Ck, m).is_zero for m in range(k + 1, hi + 1))
        rhs = all(homotopy_classes(unit, Ck, m).is_zero for m in range(k + 1, hi + 1))
        echo &= lhs == rhs
    checks.append(("bounded-above test by maps from the unit", echo))
    return checks


# --- spectral sequences --------------------------------------------------------------

def check_ss(rng: SplitMix64, given: Optional[FilteredComplex] = None) -> List[Check]:
    F = given if given is not None else random_filtered_complex(rng, P=rng.randint(1, 4))
    pages = spectral_sequence(F, F.P + 2)
    checks = [("d_r o d_r = 0", all(not p.check_d_squared() for p in pages))]
    rep = e_infinity(F)
    checks.append(("E_inf matches graded pieces", rep.ok))
    last = pages[-1].modules()
    checks.append(("pages stable after P + 1", last == rep.page.modules()))
    return checks


# --- Dold-Kan -------------------------------------------------------------------------

def check_doldkan(rng: SplitMix64, given: Optional[SimplicialModule] = None) -> List[Check]:
    checks = []
    if given is None:
        C = random_complex(rng, 0, 2, 2, orders=(1, 2, 3, 0))
        G = gamma(C)
        checks.append(("N(gamma(C)) = C", normalized_chains(G) == C))
        M = random_simplicial(rng)
    else:
        M = given
    N = normalized_chains(M)
    L, w = latching_complex(M)
    checks.append(("latching complex iso to normalized chains", L.ranks == N.ranks))
    F = skeletal_filtration(M)
    try:
        checks.append(("skeletal gaps concentrated", complex_from_filtration(F) == N))
    except ExactHomError:
        checks.append(("skeletal gaps concentrated", False))
    pages = simplicial_ss(M)
    e2 = pages[1].modules() if len(pages) > 1 else pages[0].modules()
    degenerate = all(m.is_zero for (p, q), m in e2.items() if q != 0)
    degenerate &= all(e2.get((p, 0), FgModule()) == homology(N, p) for p in N.ranks)
    degenerate &= all(pg.modules() == e2 for pg in pages[1:])
    checks.append(("simplicial SS degenerates at E_2", degenerate))
    checks.append(("E_inf reassembles H(N(M))", e_infinity(F).ok))
    return checks


SUITES: Dict[str, Callable] = {
    "triangles": check_triangles,
    "tstructure": check_tstructure,
    "ss": check_ss,
    "doldkan": check_doldkan,
}


def case_seeds(seed: int, cases: int) -> List[int]:
    rng = SplitMix64(seed)
    return [rng.next_u64() for _ in range(cases)]


def _run_case(args) -> CaseResult:
    suite, index, seed, given = args
    res = CaseResult(index, seed)
    try:
        res.checks = SUITES[suite](SplitMix64(seed), given)
    except ExactHomError as e:
        res.error = f"{type(e).__name__}: {e}"
    return res


def run_suite(suite: str, seed: int, cases: int, jobs: int = 1, given=None) -> SuiteReport:
    """Run ``cases`` random cases (plus one on ``given`` if supplied)."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    work = [(suite, i, s, None) for i, s in enumerate(case_seeds(seed, cases))]
    if given is not None:
        work.insert(0, (suite, -1, seed, given))
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_case, work))
    else:
        results = [_run_case(w) for w in work]
    results.sort(key=lambda r: r.index)
    return SuiteReport(suite, seed, results)
