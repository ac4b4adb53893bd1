"""Ideal/CI file parsing and deterministic complex serialization.

Ideal file::

    vars: w x y z
    gens: w*x, x*y, y*z

CI file (variables come from the ideal)::

    a: x^2 + y^2
    a: x*y - 3/2*y^2
    coeffs: 0, 1, -3/2      # optional; a_{s1}, ..., a_{sq} for the preceding a:

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .chain import BasedComplex, BasisLabel, SparseMatrix
from .core import Multidegree, Polynomial
from .ideal import IdealError, MonomialIdeal


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")


def _tokenize(text: str, line: Optional[int], offset: int):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r}", line, offset + pos + 1)
        kind = m.lastgroup
        out.append((kind, m.group(kind), offset + m.start(kind) + 1))
        pos = m.end()
    return out


def parse_polynomial(text: str, variables: Sequence[str], line: Optional[int] = None, offset: int = 0) -> Polynomial:
    """Parse sums of terms like ``-3/2*x^2*y``; no parentheses or nested products of sums."""
    variables = list(variables)
    index = {v: k for k, v in enumerate(variables)}
    toks = _tokenize(text, line, offset)
    if not toks:
        raise ParseError("empty expression", line, offset + 1)
    total = Polynomial()
    pos = 0
    first = True
    while pos < len(toks):
        sign = 1
        if toks[pos][0] == "op" and toks[pos][1] in "+-":
            sign = -1 if toks[pos][1] == "-" else 1
            pos += 1
        elif not first:
            raise ParseError(f"expected + or -, got {toks[pos][1]!r}", line, toks[pos][2])
        first = False
        coeff = Fraction(sign)
        exps = [0] * len(variables)
        expect_factor = True
        while pos < len(toks):
            kind, val, col = toks[pos]
            if expect_factor:
                if kind == "num":
                    coeff *= Fraction(val)
                elif kind == "name":
                    if val not in index:
                        raise ParseError(f"undeclared variable {val!r}", line, col)
                    power = 1
                    if pos + 2 < len(toks) + 1 and pos + 1 < len(toks) and toks[pos + 1][1] == "^":
                        if pos + 2 >= len(toks) or toks[pos + 2][0] != "num" or "/" in toks[pos + 2][1]:
                            raise ParseError("exponent must be a nonnegative integer", line, toks[pos + 1][2])
                        power = int(toks[pos + 2][1])
                        pos += 2
                    exps[index[val]] += power
                else:
                    raise ParseError(f"unexpected {val!r}", line, col)
                pos += 1
                expect_factor = False
            elif kind == "op" and val == "*":
                pos += 1
                expect_factor = True
            else:
                break
        if expect_factor:
            col = toks[pos][2] if pos < len(toks) else offset + len(text) + 1
            raise ParseError("term ends unexpectedly", line, col)
        total = total + Polynomial.monomial(tuple(exps), coeff)
    return total


def parse_monomial(text: str, variables: Sequence[str], line: Optional[int] = None, offset: int = 0) -> Multidegree:
    p = parse_polynomial(text, variables, line, offset)
    if len(p) != 1 or next(iter(p.terms.values())) != 1:
        raise ParseError(f"{text.strip()!r} is not a monic monomial", line, offset + 1)
    return next(iter(p.terms))


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield n, body


def _split_key(body: str, n: int) -> Tuple[str, str, int]:
    if ":" not in body:
        raise ParseError("expected 'key: value'", n, 1)
    key, _, rest = body.partition(":")
    return key.strip().lower(), rest, len(key) + 1


def parse_ideal_text(text: str) -> MonomialIdeal:
    variables: Optional[List[str]] = None
    gens: List[Multidegree] = []
    for n, body in _lines(text):
        key, rest, off = _split_key(body, n)
        if key == "vars":
            variables = rest.split()
            if not variables or len(set(variables)) != len(variables):
                raise ParseError("variables must be distinct and nonempty", n, off + 1)
        elif key == "gens":
            if variables is None:
                raise ParseError("'vars:' must precede 'gens:'", n, 1)
            col = off
            for piece in rest.split(","):
                if piece.strip():
                    gens.append(parse_monomial(piece, variables, n, col))
                col += len(piece) + 1
        else:
            raise ParseError(f"unknown key {key!r}", n, 1)
    if variables is None or not gens:
        raise ParseError("an ideal file needs 'vars:' and 'gens:' lines")
    try:
        return MonomialIdeal(tuple(variables), tuple(gens))
    except IdealError as exc:
        raise ParseError(str(exc)) from exc


def parse_ideal(path) -> MonomialIdeal:
    return parse_ideal_text(Path(path).read_text(encoding="utf-8"))


def parse_ci_text(text: str, ideal: MonomialIdeal):
    """Return the list of (element, explicit coefficient row or None)."""
    out: List[Tuple[Polynomial, Optional[List[Polynomial]]]] = []
    for n, body in _lines(text):
        key, rest, off = _split_key(body, n)
        if key == "a":
            out.append((parse_polynomial(rest, ideal.variables, n, off), None))
        elif key == "coeffs":
            if not out:
                raise ParseError("'coeffs:' must follow an 'a:' line", n, 1)
            pieces = rest.split(",")
            if len(pieces) != ideal.q:
                raise ParseError(f"expected {ideal.q} coefficients, got {len(pieces)}", n, off + 1)
            row = []
            col = off
            for piece in pieces:
                row.append(parse_polynomial(piece, ideal.variables, n, col) if piece.strip() != "0" else Polynomial())
                col += len(piece) + 1
            out[-1] = (out[-1][0], row)
        else:
            raise ParseError(f"unknown key {key!r}", n, 1)
    if not out:
        raise ParseError("a CI file needs at least one 'a:' line")
    return out


def parse_ci(path, ideal: MonomialIdeal):
    from .homotopy import CIData, express_in_generators

    entries = parse_ci_text(Path(path).read_text(encoding="utf-8"), ideal)
    elements = [a for a, _ in entries]
    rows = [row if row is not None else express_in_generators(a, ideal) for a, row in entries]
    return CIData(ideal, elements, rows)


# -- complexes -----------------------------------------------------------


def _poly_json(p: Polynomial):
    return [{"exps": list(e), "num": c.numerator, "den": c.denominator} for e, c in p.sorted_terms()]


def complex_to_dict(c: BasedComplex) -> dict:
    degrees = [
        {"rank": len(labels), "basis": [{"cell": list(l.cell), "multidegree": list(l.degree)} for l in labels]}
        for labels in c.basis
    ]
    diffs = []
    for i in range(1, len(c.basis)):
        m = c.differential(i)
        diffs.append({
            "degree": i,
            "rows": m.nrows,
            "cols": m.ncols,
            "entries": [{"row": r, "col": k, "poly": _poly_json(v)} for (r, k), v in m.sorted_entries()],
        })
    out = {"kind": c.kind, "nvars": c.nvars, "degrees": degrees, "differentials": diffs}
    if c.pivot is not None:
        out["pivot"] = list(c.pivot)
    if c.ideal is not None:
        out["ideal"] = {"variables": list(c.ideal.variables), "generators": [list(g) for g in c.ideal.generators]}
    return out


def complex_from_dict(d: dict) -> BasedComplex:
    basis = [
        [BasisLabel(tuple(b["cell"]), tuple(b["multidegree"])) for b in deg["basis"]]
        for deg in d["degrees"]
    ]
    maps = {}
    for i, m in enumerate(d["differentials"], start=1):
        ents = {}
        for e in m["entries"]:
            ents[(e["row"], e["col"])] = Polynomial(
                {tuple(t["exps"]): Fraction(t["num"], t["den"]) for t in e["poly"]}
            )
        maps[m.get("degree", i)] = SparseMatrix(m["rows"], m["cols"], ents)
    ideal = None
    if "ideal" in d:
        ideal = MonomialIdeal(tuple(d["ideal"]["variables"]), tuple(tuple(g) for g in d["ideal"]["generators"]))
    pivot = tuple(d["pivot"]) if "pivot" in d else None
    return BasedComplex(d["nvars"], basis, maps, ideal=ideal, kind=d.get("kind", "complex"), pivot=pivot)


def _cell_name(cell) -> str:
    if not cell:
        return "e_{}"
    sep = "," if any(i >= 10 for i in cell) else ""
    return "e_" + sep.join(map(str, cell))


def complex_to_text(c: BasedComplex) -> str:
    """Matrix display: columns are the source basis, rows the target basis."""
    names = c.ideal.variables if c.ideal is not None else [f"x{k + 1}" for k in range(c.nvars)]
    lines = [f"{c.kind}: ranks {' '.join(map(str, c.ranks()))}"]
    for i in range(len(c.basis) - 1, 0, -1):
        m = c.differential(i)
        cols = [_cell_name(l.cell) for l in c.basis[i]]
        rows = [_cell_name(l.cell) for l in c.basis[i - 1]]
        dense = [[v.format(names) for v in row] for row in m.to_dense()]
        width = max([len(s) for row in dense for s in row] + [len(s) for s in cols] + [1])
        rw = max(len(s) for s in rows) if rows else 1
        lines.append(f"d{i}:")
        lines.append(" " * (rw + 2) + " ".join(s.rjust(width) for s in cols))
        for name, row in zip(rows, dense):
            lines.append(name.ljust(rw) + " [" + " ".join(s.rjust(width) for s in row) + " ]")
    return "\n".join(lines) + "\n"


def serialize_complex(c: BasedComplex, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(complex_to_dict(c), sort_keys=True, indent=1) + "\n").encode()
    if fmt == "text":
        return complex_to_text(c).encode()
    raise ValueError(f"unknown format {fmt!r}")


def deserialize_complex(data: bytes) -> BasedComplex:
    return complex_from_dict(json.loads(data))
