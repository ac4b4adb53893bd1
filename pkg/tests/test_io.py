import json
from fractions import Fraction

import pytest

from corpus import CORPUS
from pivotres.core import Polynomial
from pivotres.io import (
    ParseError,
    complex_to_text,
    deserialize_complex,
    parse_ci,
    parse_ideal,
    parse_ideal_text,
    parse_monomial,
    parse_polynomial,
    serialize_complex,
)
from pivotres.chain import minimalize
from pivotres.resolutions import lyubeznik_resolution, pivot_complex, taylor_resolution

VARS = ["w", "x", "y", "z"]


def test_parse_ideal_file(tmp_path):
    f = tmp_path / "i.txt"
    f.write_text("# path ideal\nvars: w x y z\ngens: w*x, x*y, y*z\n", encoding="utf-8")
    ideal = parse_ideal(f)
    assert ideal.variables == ("w", "x", "y", "z")
    assert ideal.generators == ((1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1))


def test_minimality_error_names_pair():
    with pytest.raises(ParseError, match="x divides x\\*y"):
        parse_ideal_text("vars: x y\ngens: x, x*y\n")


def test_undeclared_variable_position():
    with pytest.raises(ParseError) as err:
        parse_ideal_text("vars: x y\ngens: x*q\n")
    assert err.value.line == 2 and err.value.column == 9


@pytest.mark.parametrize("text", [
    "gens: x\n",
    "vars: x x\ngens: x\n",
    "vars: x\ngens: 2*x\n",
    "vars: x\ngens: x^\n",
    "vars: x\ngens: x^1/2\n",
    "vars: x\nfoo: x\n",
    "vars: x\ngens: x + \n",
    "vars: x\ngens: 1\n",
    "vars: x\ngens: x $\n",
])
def test_malformed_ideal_files(text):
    with pytest.raises(ParseError):
        parse_ideal_text(text)


def test_parse_polynomial():
    p = parse_polynomial("3/2*x^2*y - y + 4 - x*x", ["x", "y"])
    assert p == Polynomial({(2, 1): Fraction(3, 2), (0, 1): -1, (0, 0): 4, (2, 0): -1})
    assert parse_monomial("w*x^3", VARS) == (1, 3, 0, 0)
    with pytest.raises(ParseError):
        parse_monomial("x + y", VARS)


def test_parse_ci(tmp_path):
    ideal = CORPUS["max_sq"]
    f = tmp_path / "ci.txt"
    f.write_text("a: x^2 + y^2\na: x*y\ncoeffs: 0, 1, 0\n", encoding="utf-8")
    ci = parse_ci(f, ideal)
    assert ci.r == 2
    assert ci.coeff(1, 1) == Polynomial.constant(1, 2) and ci.coeff(1, 3) == Polynomial.constant(1, 2)
    assert ci.coeff(2, 2) == Polynomial.constant(1, 2)
    f.write_text("a: x*y\ncoeffs: 1, 0, 0\n", encoding="utf-8")
    with pytest.raises(ValueError):
        parse_ci(f, ideal)
    f.write_text("coeffs: 1, 0, 0\n", encoding="utf-8")
    with pytest.raises(ParseError):
        parse_ci(f, ideal)


def test_taylor_of_single_variable_json():
    ideal = parse_ideal_text("vars: x\ngens: x\n")
    d = json.loads(serialize_complex(taylor_resolution(ideal)))
    assert [deg["rank"] for deg in d["degrees"]] == [1, 1]
    assert d["differentials"][0]["entries"] == [{"row": 0, "col": 0, "poly": [{"exps": [1], "num": 1, "den": 1}]}]


@pytest.mark.parametrize("name", ["path", "u_path", "random4", "max_fourth"])
def test_round_trip_and_determinism(name):
    ideal = CORPUS[name]
    for c in (taylor_resolution(ideal), lyubeznik_resolution(ideal), minimalize(taylor_resolution(ideal))[0]):
        data = serialize_complex(c)
        back = deserialize_complex(data)
        assert back.ranks() == c.ranks()
        assert back.basis == c.basis
        for i in range(1, len(c.basis)):
            assert back.differential(i) == c.differential(i)
        assert serialize_complex(back) == data
        assert serialize_complex(deserialize_complex(data)) == serialize_complex(deserialize_complex(data))


def test_entries_are_row_major():
    c = taylor_resolution(CORPUS["four_cycle"])
    d = json.loads(serialize_complex(c))
    for m in d["differentials"]:
        keys = [(e["row"], e["col"]) for e in m["entries"]]
        assert keys == sorted(keys)


def test_pivot_text_display():
    p = pivot_complex(CORPUS["path"], (1, 2))
    text = complex_to_text(p)
    rows = [line.split() for line in text.splitlines()]
    assert ["e_13", "e_23"] in rows
    assert ["e_1", "[-y*z", "0", "]"] in rows
    assert ["e_2", "[", "0", "-z", "]"] in rows
    assert ["e_3", "[", "w*x", "x", "]"] in rows
    assert ["e_{}", "[w*x", "x*y", "y*z", "]"] in rows
    with pytest.raises(ValueError):
        serialize_complex(p, "xml")
