"""Command-line interface: ``exacthom <subcommand> ...``.

Results go to stdout with exit status 0.  Errors go to stderr as one JSON
record ``{"error": ..., "message": ..., "path": ...}`` with a nonzero exit
status.  Every table can be printed as a canonical JSON document with
``--json``.  Output depends only on the inputs and the seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from .chain import cone, cone_long_exact_sequence, homology
from .derived import ext, tor, truncate_geq, truncate_leq
from .doldkan import normalized_chains, simplicial_ss, skeletal_filtration
from .errors import ExactHomError, SchemaError
from .filtered import e_infinity, spectral_sequence
from .io import canonical_json, emit_document, load_document, module_body, to_json_obj
from .linalg import FgModule
from .suites import SUITES, run_suite

GRID_HELP = ("Spectral sequence pages are printed as text grids with p increasing to the "
             "right and q increasing upward, origin at the bottom-left; '.' marks a zero "
             "entry.  d_r has bidegree (-r, r - 1).")
SEED_HELP = ("Seeds: --seed is expanded with SplitMix64; case i uses the i-th 64-bit output "
             "as its own SplitMix64 seed, so reports do not depend on --jobs.")


class CliError(Exception):
    def __init__(self, kind: str, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.kind, self.message, self.path = kind, message, path


def _load(path: str, kind: str):
    try:
        doc = load_document(path)
    except OSError as e:
        raise CliError("FileError", f"{path}: {e.strerror}") from None
    if doc.kind != kind:
        raise CliError("SchemaError", f"expected a {kind} document, got {doc.kind}", "/type")
    return doc.value


def _module_arg(text: str) -> FgModule:
    if os.path.exists(text):
        return _load(text, "module")
    try:
        return FgModule.parse(text)
    except ValueError as e:
        raise CliError("ValueError", f"cannot read module {text!r}: {e}") from None


def _describe(M: FgModule) -> str:
    if M.is_zero:
        return "0"
    parts = []
    if M.free_rank:
        parts.append(f"free {M.free_rank}")
    if M.torsion:
        parts.append("torsion [" + ", ".join(str(d) for d in M.torsion) + "]")
    return ", ".join(parts)


def _out(lines: List[str]):
    sys.stdout.write("".join(line + "\n" for line in lines))


# --- subcommands ---------------------------------------------------------------------

def cmd_homology(a) -> int:
    C = _load(a.file, "complex")
    degs = [a.degree] if a.degree is not None else list(C.ranks)
    groups = {n: homology(C, n) for n in degs}
    if a.json:
        sys.stdout.write(canonical_json({"type": "homology", "coefficients": str(C.ring),
                                         "groups": {str(n): module_body(M)
                                                    for n, M in groups.items()}}))
    else:
        _out([f"{n}: {_describe(M)}" for n, M in groups.items()])
    return 0


def _derived_table(a, fn, name) -> int:
    M, N = _module_arg(a.M), _module_arg(a.N)
    if M.ring != N.ring:
        raise CliError("CoefficientMismatch", f"{M.ring} vs {N.ring}")
    rows = {n: fn(M, N, n) for n in range(0, a.max + 1)}
    if a.json:
        sys.stdout.write(canonical_json({"type": name, "coefficients": str(M.ring),
                                         "M": module_body(M), "N": module_body(N),
                                         "values": {str(n): module_body(V)
                                                    for n, V in rows.items()}}))
    else:
        _out([f"{n}: {V}" for n, V in rows.items()])
    return 0


def cmd_ext(a) -> int:
    return _derived_table(a, ext, "ext")


def cmd_tor(a) -> int:
    return _derived_table(a, tor, "tor")


def cmd_cone(a) -> int:
    f = _load(a.file, "map")
    Z, _, _ = cone(f)
    les = cone_long_exact_sequence(f)
    if a.json:
        sys.stdout.write(canonical_json({"type": "cone", "complex": to_json_obj(Z),
                                         "exact_nodes": len(les.witnesses),
                                         "nodes": len(les.witnesses) + len(les.failures)}))
    else:
        sys.stdout.write(emit_document(Z))
        _out([f"long exact sequence: {les.summary()}"])
    return 0 if les.exact else 1


def cmd_truncate(a) -> int:
    C = _load(a.file, "complex")
    T = truncate_geq(C, a.geq)[0] if a.geq is not None else truncate_leq(C, a.leq)[0]
    sys.stdout.write(emit_document(T))
    return 0


def _page_obj(pg):
    return {f"{p},{q}": module_body(m) for (p, q), m in pg.modules().items() if not m.is_zero}


def _report_lines(rep) -> List[str]:
    lines = ["convergence:"]
    for n, H in rep.total.items():
        pieces = ", ".join(f"E_inf^({p},{n - p}) = {g}" for p, g in enumerate(rep.graded[n]))
        verdict = "ok" if all(rep.verdicts[n]) and rep.reassembled[n] else "FAIL"
        lines.append(f"  H_{n} = {H}; {pieces}: {verdict}")
    lines.append("converges: " + ("yes" if rep.ok else "no"))
    return lines


def _report_obj(rep):
    return {"ok": rep.ok,
            "degrees": {str(n): {"total": module_body(H),
                                 "filtration": [module_body(m) for m in rep.filtration[n]],
                                 "graded": [module_body(m) for m in rep.graded[n]],
                                 "verdicts": rep.verdicts[n] + [rep.reassembled[n]]}
                        for n, H in rep.total.items()}}


def cmd_ss(a) -> int:
    F = _load(a.file, "filtered")
    last = a.pages if a.pages is not None else F.P + 1
    pages = spectral_sequence(F, max(1, last))
    rep = e_infinity(F) if a.report else None
    if a.json:
        obj = {"type": "spectral_sequence", "pages": {str(pg.r): _page_obj(pg) for pg in pages}}
        if rep is not None:
            obj["convergence"] = _report_obj(rep)
        sys.stdout.write(canonical_json(obj))
    else:
        lines = []
        for pg in pages:
            lines += pg.grid().split("\n") + [""]
        if rep is not None:
            lines += _report_lines(rep)
        else:
            lines.pop()
        _out(lines)
    return 0 if rep is None or rep.ok else 1


def cmd_dold_kan(a) -> int:
    M = _load(a.file, "simplicial")
    N = normalized_chains(M)
    pages = simplicial_ss(M) if a.ss else []
    if a.json:
        obj = {"type": "dold_kan", "normalized": to_json_obj(N)}
        if a.ss:
            obj["pages"] = {str(pg.r): _page_obj(pg) for pg in pages}
            obj["convergence"] = _report_obj(e_infinity(skeletal_filtration(M)))
        sys.stdout.write(canonical_json(obj))
    else:
        sys.stdout.write(emit_document(N))
        lines = []
        for pg in pages:
            lines += [""] + pg.grid().split("\n")
        _out(lines)
    return 0


_GIVEN_KIND = {"triangles": "map", "tstructure": "complex", "ss": "filtered",
               "doldkan": "simplicial"}


def cmd_verify(a) -> int:
    given = _load(a.file, _GIVEN_KIND[a.suite]) if a.file else None
    rep = run_suite(a.suite, a.seed, a.cases, jobs=a.jobs, given=given)
    if a.json:
        sys.stdout.write(canonical_json(rep.to_json_obj()))
    else:
        _out(rep.lines())
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="exacthom",
        description="Exact homological algebra over Z and F_p.",
        epilog=GRID_HELP + "  " + SEED_HELP)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, description=help_, epilog=GRID_HELP)
        sp.add_argument("--json", action="store_true", help="print a canonical JSON document")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("homology", cmd_homology, "homology of a complex document")
    sp.add_argument("file")
    sp.add_argument("--degree", type=int)

    for name, fn in (("ext", cmd_ext), ("tor", cmd_tor)):
        sp = add(name, fn, f"{name} of two modules (a module document or text such as Z/4)")
        sp.add_argument("M")
        sp.add_argument("N")
        sp.add_argument("--max", type=int, default=3)

    sp = add("cone", cmd_cone, "mapping cone of a map document, with its long exact sequence")
    sp.add_argument("file")

    sp = add("truncate", cmd_truncate, "good truncation of a complex document")
    sp.add_argument("file")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--geq", type=int)
    g.add_argument("--leq", type=int)

    sp = add("ss", cmd_ss, "spectral sequence of a filtered complex document")
    sp.add_argument("file")
    sp.add_argument("--pages", type=int, help="last page to print (default P + 1)")
    sp.add_argument("--report", action="store_true", help="print the convergence report")

    sp = add("dold-kan", cmd_dold_kan, "normalized chains of a simplicial module document")
    sp.add_argument("file")
    sp.add_argument("--ss", action="store_true", help="also print the skeletal spectral sequence")

    sp = add("verify", cmd_verify, "run a randomized invariant suite")
    sp.epilog = SEED_HELP
    sp.add_argument("file", nargs="?", help="optional extra instance to include as case -1")
    sp.add_argument("--suite", choices=sorted(SUITES), required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cases", type=int, default=20)
    sp.add_argument("--jobs", type=int, default=1)
    return p


def _error(kind: str, message: str, path: Optional[str] = None) -> int:
    rec = {"error": kind, "message": message}
    if path is not None:
        rec["path"] = path
    sys.stderr.write(json.dumps(rec, sort_keys=True) + "\n")
    return 2


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        return _error(e.kind, e.message, e.path)
    except SchemaError as e:
        return _error("SchemaError", str(e), e.path)
    except (ExactHomError, ValueError) as e:
        return _error(type(e).__name__, str(e))


if __name__ == "__main__":
    sys.exit(main())
