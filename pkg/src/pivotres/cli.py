"""Command-line front end.

Every command reads an ideal file (see ``pivotres.io``).  Exit status is 0 on
success, 1 when the mathematical answer is negative (not a resolution, a
failed identity, no gap) and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .chain import BasedComplex, check_d_squared, is_resolution
from .core import Polynomial
from .ideal import IdealError, MonomialIdeal, ResourceError
from .indexsets import IndexSet, index_set
from .io import ParseError, complex_from_dict, parse_ci, parse_ideal, serialize_complex
from .resolutions import (
    MorseMatching,
    betti_numbers,
    find_gaps,
    lyubeznik_resolution,
    morse_resolution,
    pivot_complex,
    scarf_number,
    smallest_pivot_indices,
    taylor_resolution,
    validate_matching,
)


class UsageError(Exception):
    pass


@dataclass
class Check:
    identity: str
    passed: bool
    witness: Optional[object] = None


@dataclass
class Certificate:
    command: str
    inputs: Dict[str, str]
    checks: List[Check] = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "checks": [{"identity": c.identity, "passed": c.passed, "witness": c.witness} for c in self.checks],
            "passed": self.passed,
            "version": self.version,
        }

    def to_text(self) -> str:
        lines = [f"certificate for '{self.command}' (pivotres {self.version})"]
        for name, digest in self.inputs.items():
            lines.append(f"  input {name} sha256={digest}")
        for c in self.checks:
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.identity}")
            if c.witness is not None:
                lines.append(f"         witness: {json.dumps(c.witness, sort_keys=True)}")
        return "\n".join(lines) + "\n"


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _indices(text: Optional[str]) -> Optional[IndexSet]:
    if text is None:
        return None
    try:
        return index_set(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"bad index list {text!r}; expected e.g. 1,2,3")


def _order(text: Optional[str]):
    return None if text is None else list(_indices_list(text))


def _indices_list(text: str):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad index list {text!r}")


def _poly_text(p: Polynomial, ideal: MonomialIdeal) -> str:
    return p.format(ideal.variables)


def _cycle_json(cycle: Dict[IndexSet, Polynomial], ideal: MonomialIdeal):
    return [{"cell": list(c), "coeff": _poly_text(v, ideal)} for c, v in sorted(cycle.items())]


def _emit(out, args, payload: dict, text: str) -> None:
    if args.format == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=1) + "\n")
    else:
        out.write(text)


def _emit_complex(out, args, c: BasedComplex) -> None:
    out.write(serialize_complex(c, args.format).decode())


def _load_complex(args, ideal: MonomialIdeal) -> BasedComplex:
    if getattr(args, "complex", None):
        try:
            d = json.loads(Path(args.complex).read_text(encoding="utf-8"))
            c = complex_from_dict(d)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read complex {args.complex}: {exc}")
        if c.ideal is None:
            c.ideal = ideal
        return c
    s = _indices(getattr(args, "indices", None))
    if s is None:
        return taylor_resolution(ideal)
    return pivot_complex(ideal, s)


def _read_matching(path: str, ideal: MonomialIdeal) -> MorseMatching:
    """Lines ``1,2,3 -> 1,3``: a Taylor cell and the face it is matched with."""
    edges = []
    for n, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "->" not in body:
            raise ParseError("expected 'cell -> face'", n, 1)
        left, right = body.split("->", 1)
        try:
            up, down = _indices(left), _indices(right)
        except UsageError as exc:
            raise ParseError(str(exc), n, 1)
        if any(not 1 <= i <= ideal.q for i in up + down):
            raise ParseError(f"indices must lie in 1..{ideal.q}", n, 1)
        edges.append((up, down))
    return MorseMatching(frozenset(edges))


# -- commands -------------------------------------------------------------


def cmd_taylor(args, ideal, out) -> int:
    _emit_complex(out, args, taylor_resolution(ideal))
    return 0


def cmd_pivot(args, ideal, out) -> int:
    _emit_complex(out, args, pivot_complex(ideal, _indices(args.indices)))
    return 0


def cmd_gaps(args, ideal, out) -> int:
    s = _indices(args.indices)
    gaps = find_gaps(ideal, s)
    _emit(out, args, {"indices": list(s), "gaps": gaps}, " ".join(map(str, gaps)) + "\n" if gaps else "none\n")
    return 0 if gaps else 1


def cmd_scarf(args, ideal, out) -> int:
    t = scarf_number(ideal)
    shown = "inf" if t == math.inf else str(t)
    _emit(out, args, {"scarf_number": shown if t == math.inf else t}, shown + "\n")
    return 0


def cmd_smallest_pivot(args, ideal, out) -> int:
    s = smallest_pivot_indices(ideal)
    if s is None:
        _emit(out, args, {"indices": None}, "none\n")
        return 1
    _emit(out, args, {"indices": list(s), "gap": find_gaps(ideal, s)[0]}, ",".join(map(str, s)) + "\n")
    return 0


def cmd_betti(args, ideal, out) -> int:
    b = betti_numbers(ideal)
    _emit(out, args, {"betti": b}, " ".join(map(str, b)) + "\n")
    return 0


def cmd_lyubeznik(args, ideal, out) -> int:
    _emit_complex(out, args, lyubeznik_resolution(ideal, _order(args.order)))
    return 0


def cmd_morse(args, ideal, out) -> int:
    matching = _read_matching(args.matching, ideal)
    report = validate_matching(ideal, matching)
    if not report.valid:
        msg = f"not a Morse matching (condition {report.condition}): {report.detail}"
        _emit(out, args, {"valid": False, "condition": report.condition, "detail": report.detail}, msg + "\n")
        return 1
    _emit_complex(out, args, morse_resolution(ideal, matching))
    return 0


def _verify_exactness(c, ideal, cert: Certificate) -> None:
    res = is_resolution(c, ideal)
    if res.exact:
        cert.checks.append(Check(
            f"H_i = 0 for i >= 1 and H_0 = Q/I on {res.multidegrees_checked} lcm-lattice strands", True))
        return
    for f in res.failures:
        cert.checks.append(Check(
            f"H_{f.degree} = 0 at multidegree {ideal.format_monomial(f.multidegree)}",
            False,
            {"dimension": f.dimension, "multidegree": list(f.multidegree), "cycle": _cycle_json(f.cycle, ideal)},
        ))


def _verify_dg(c, ideal, cert: Certificate) -> None:
    from .dga import ChainElement, differential, product

    if c.pivot is not None:
        gaps = find_gaps(ideal, c.pivot)
        cert.checks.append(Check(f"{list(c.pivot)} has a gap (pivot product is defined)", bool(gaps),
                                 None if gaps else {"indices": list(c.pivot)}))
        if not gaps:
            return
    cells = c.cells()
    basis = {cell: ChainElement.basis(c, cell) for cell in cells}
    unit = basis[()]

    def first(name, failing):
        for args in failing:
            cert.checks.append(Check(name, False, [list(a) for a in args]))
            return
        cert.checks.append(Check(name, True))

    prods = {(a, b): product(basis[a], basis[b]) for a in cells for b in cells}
    first("1 * e_A = e_A = e_A * 1",
          ((a,) for a in cells if product(unit, basis[a]) != basis[a] or product(basis[a], unit) != basis[a]))
    first("e_A e_B = (-1)^(|A||B|) e_B e_A",
          ((a, b) for a in cells for b in cells if prods[a, b] != prods[b, a].scale((-1) ** (len(a) * len(b)))))
    first("d(e_A e_B) = d(e_A) e_B + (-1)^|A| e_A d(e_B)",
          ((a, b) for a in cells for b in cells
           if differential(prods[a, b])
           != product(differential(basis[a]), basis[b]) + product(basis[a], differential(basis[b])).scale((-1) ** len(a))))
    first("(e_A e_B) e_C = e_A (e_B e_C)",
          ((a, b, x) for a in cells for b in cells for x in cells
           if product(prods[a, b], basis[x]) != product(basis[a], prods[b, x])))


def cmd_verify(args, ideal, out) -> int:
    c = _load_complex(args, ideal)
    inputs = {args.ideal: _digest(args.ideal)}
    if getattr(args, "complex", None):
        inputs[args.complex] = _digest(args.complex)
    cert = Certificate(f"verify --what {args.what}", inputs)
    if args.what == "d2":
        rep = check_d_squared(c)
        witness = None
        if not rep.passed:
            witness = {"degree": rep.degree, "row": list(rep.row.cell), "col": list(rep.col.cell),
                       "value": _poly_text(rep.value, ideal)}
        cert.checks.append(Check("d_{i-1} d_i = 0 for all i", rep.passed, witness))
    elif args.what == "exactness":
        _verify_exactness(c, ideal, cert)
    elif args.what == "dg":
        if c.kind != "taylor" and c.pivot is None:
            raise UsageError("dg verification needs a Taylor or pivot complex")
        _verify_dg(c, ideal, cert)
    elif args.what == "homotopy":
        if not args.ci:
            raise UsageError("verify --what homotopy needs --ci")
        return cmd_homotopy(args, ideal, out)
    _emit(out, args, cert.to_dict(), cert.to_text())
    return 0 if cert.passed else 1


def _homotopy_setup(args, ideal):
    from .homotopy import pivot_homotopy, relabel_for_pivot, taylor_homotopy

    ci = parse_ci(args.ci, ideal)
    s = _indices(args.indices) if args.indices else None
    if s is None:
        return ideal, ci, taylor_homotopy(taylor_resolution(ideal), ci), None
    perm, _ = relabel_for_pivot(ideal, s)
    normal = ideal.relabeled(perm)
    nci = ci.relabeled(perm)
    return normal, nci, pivot_homotopy(pivot_complex(normal, index_set(range(1, len(s) + 1))), nci), perm


def _sigma_json(h, ideal):
    out = []
    for s, sig in enumerate(h.sigma, start=1):
        entries = []
        for cell in h.complex.cells():
            for tgt, v in sorted(sig.get(cell, {}).items()):
                entries.append({"source": list(cell), "target": list(tgt), "coeff": _poly_text(v, ideal)})
        out.append({"s": s, "entries": entries})
    return out


def _homotopy_checks(h, cert: Certificate, ideal) -> None:
    from .homotopy import verify_homotopy

    for chk in verify_homotopy(h).checks:
        witness = None
        if not chk.passed:
            witness = {"cell": list(chk.cell), "residual": _cycle_json(chk.residual, ideal)}
        cert.checks.append(Check(f"{chk.name} on {chk.cells_checked} basis cells", chk.passed, witness))


def cmd_homotopy(args, ideal, out) -> int:
    normal, ci, h, perm = _homotopy_setup(args, ideal)
    cert = Certificate("homotopy", {args.ideal: _digest(args.ideal), args.ci: _digest(args.ci)})
    _homotopy_checks(h, cert, normal)
    payload = {"certificate": cert.to_dict(), "complex": h.label, "sigma": _sigma_json(h, normal)}
    text = cert.to_text()
    if perm is not None:
        payload["relabeling"] = {str(k): v for k, v in sorted(perm.items())}
        text += "relabeling (old -> new): " + ", ".join(f"{k}->{v}" for k, v in sorted(perm.items())) + "\n"
    _emit(out, args, payload, text)
    return 0 if cert.passed else 1


def cmd_shamash(args, ideal, out) -> int:
    from .homotopy import shamash_complex, shamash_d2_certificate, shamash_strand_exactness

    normal, ci, h, perm = _homotopy_setup(args, ideal)
    cert = Certificate(f"shamash --truncate {args.truncate}",
                       {args.ideal: _digest(args.ideal), args.ci: _digest(args.ci)})
    _homotopy_checks(h, cert, normal)
    if not cert.passed:
        _emit(out, args, cert.to_dict(), cert.to_text())
        return 1
    phi = shamash_complex(h, args.truncate)
    d2 = shamash_d2_certificate(phi)
    cert.checks.append(Check(
        f"delta^2 = sum_s a_s t_s over Q in degrees 2..{args.truncate}", d2.passed,
        None if d2.passed else {"degree": d2.degree, "detail": d2.detail}))
    if args.strand_bound:
        bound = tuple(_indices_list(args.strand_bound))
        if len(bound) != ideal.nvars:
            raise UsageError(f"--strand-bound needs {ideal.nvars} exponents")
        ex = shamash_strand_exactness(phi, bound)
        cert.checks.append(Check(
            f"strand homology over R vanishes in degrees 1..{args.truncate - 1} up to {ideal.format_monomial(bound)}",
            ex.exact, None if ex.exact else [{"multidegree": list(a), "degree": i, "dimension": d}
                                             for a, i, d in ex.failures[:5]]))
    regular = "assumed regular (--trust-regular)" if args.trust_regular else "not asserted: regularity of a_1..a_r unchecked"
    payload = {"certificate": cert.to_dict(), "ranks": phi.ranks(), "exactness_over_R": regular}
    text = f"ranks {' '.join(map(str, phi.ranks()))}\nexactness over R: {regular}\n" + cert.to_text()
    _emit(out, args, payload, text)
    return 0 if cert.passed else 1


def cmd_bounds(args, ideal, out) -> int:
    from .homotopy import betti_bound

    s = smallest_pivot_indices(ideal)
    if s is None:
        _emit(out, args, {"pivot": None}, "no pivot resolution (Taylor resolution is minimal)\n")
        return 1
    top = args.max_degree if args.max_degree is not None else ideal.q + 2
    rows = []
    for i in range(top + 1):
        rows.append({
            "degree": i,
            "structural": betti_bound(ideal.q, len(s), args.r, i, "structural"),
            "paper_literal": betti_bound(ideal.q, len(s), args.r, i, "paper_literal"),
        })
    text = f"pivot {','.join(map(str, s))}  r={args.r}\ndegree structural literal\n"
    text += "".join(f"{r['degree']:>6} {r['structural']:>10} {r['paper_literal']:>7}\n" for r in rows)
    _emit(out, args, {"pivot": list(s), "r": args.r, "bounds": rows}, text)
    return 0


COMMANDS = {
    "taylor": cmd_taylor,
    "pivot": cmd_pivot,
    "gaps": cmd_gaps,
    "scarf": cmd_scarf,
    "smallest-pivot": cmd_smallest_pivot,
    "betti": cmd_betti,
    "lyubeznik": cmd_lyubeznik,
    "morse": cmd_morse,
    "verify": cmd_verify,
    "homotopy": cmd_homotopy,
    "shamash": cmd_shamash,
    "bounds": cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pivotres", description="Resolutions of monomial ideals.")
    parser.add_argument("--version", action="version", version=f"pivotres {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("ideal", help="ideal file ('vars: ...' and 'gens: ...' lines)")
        p.add_argument("--format", choices=["json", "text"], default="text")
        return p

    add("taylor", "Taylor resolution")
    add("pivot", "pivot complex T_S").add_argument("--indices", required=True, help="S as 1-based list, e.g. 1,2")
    add("gaps", "gaps of an index set").add_argument("--indices", required=True)
    add("scarf", "Scarf number")
    add("smallest-pivot", "lex-first pivot set of Scarf size with a gap")
    add("betti", "Betti numbers by minimalizing the Taylor resolution")
    add("lyubeznik", "Lyubeznik resolution").add_argument(
        "--order", help="generator indices from largest to smallest (default 1,...,q)")
    add("morse", "Morse resolution of a matching").add_argument(
        "--matching", required=True, help="file of lines 'cell -> face', e.g. '1,2,3 -> 1,3'")
    p = add("verify", "certify a complex")
    p.add_argument("--what", required=True, choices=["d2", "exactness", "dg", "homotopy"])
    p.add_argument("--indices", help="pivot set; default is the Taylor resolution")
    p.add_argument("--complex", help="JSON complex written by another command")
    p.add_argument("--ci", help="complete intersection file (for --what homotopy)")
    p = add("homotopy", "higher homotopies for a complete intersection")
    p.add_argument("--ci", required=True)
    p.add_argument("--indices", help="pivot set; default is the Taylor resolution")
    p = add("shamash", "truncated Eisenbud-Shamash complex")
    p.add_argument("--ci", required=True)
    p.add_argument("--truncate", type=int, default=6)
    p.add_argument("--indices", help="pivot set; default is the Taylor resolution")
    p.add_argument("--trust-regular", action="store_true",
                   help="acknowledge that a_1..a_r form a regular sequence (not checked)")
    p.add_argument("--strand-bound", help="exponent bound, e.g. 6,6, for strand exactness over R (monomial a_s)")
    p = add("bounds", "Betti number bounds over Q/(a_1..a_r) from the smallest pivot resolution")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--max-degree", type=int)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        ideal = parse_ideal(args.ideal)
        return COMMANDS[args.command](args, ideal, out)
    except (UsageError, ParseError, IdealError, OSError) as exc:
        print(f"pivotres: error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"pivotres: resource limit: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"pivotres: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
