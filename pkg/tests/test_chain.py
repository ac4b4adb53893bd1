import sympy
import pytest

from corpus import CORPUS, oracle_taylor_boundary, oracle_tor_ranks, sym_poly, sym_vars
from pivotres.chain import (
    ContractError,
    SparseMatrix,
    StructureError,
    check_d_squared,
    homology_dims,
    homology_witness,
    is_resolution,
    lcm_lattice,
    minimalize,
    strand,
)
from pivotres.core import Polynomial
from pivotres.ideal import ResourceError, ideal_from_strings
from pivotres.resolutions import find_gaps, pivot_complex, taylor_resolution
from pivotres.indexsets import all_subsets


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_taylor_boundary_matches_sympy_oracle(name):
    ideal = CORPUS[name]
    xs = sym_vars(ideal)
    t = taylor_resolution(ideal)
    for cell in t.cells():
        ours = {face: sym_poly(v, xs) for face, v in t.boundary(cell).items()}
        expected = {f: v for f, v in oracle_taylor_boundary(ideal, cell, xs).items() if v != 0}
        assert ours == expected


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_d_squared_taylor_and_pivots(name):
    ideal = CORPUS[name]
    assert check_d_squared(taylor_resolution(ideal))
    for s in all_subsets(ideal.q):
        if len(s) >= 2:
            assert check_d_squared(pivot_complex(ideal, s))


def test_d_squared_reports_entry():
    ideal = ideal_from_strings(["x", "y"], ["x", "y"])
    t = taylor_resolution(ideal)
    bad = dict(t.maps)
    bad[2] = SparseMatrix(2, 1, {(0, 0): Polynomial.monomial((0, 1)), (1, 0): Polynomial.monomial((1, 0))})
    t.maps = bad
    rep = check_d_squared(t)
    assert not rep and rep.degree == 2 and rep.col.cell == (1, 2)
    with pytest.raises(ContractError):
        homology_dims(strand(t, (1, 1)))


def test_taylor_of_single_generator():
    t = taylor_resolution(ideal_from_strings(["x"], ["x"]))
    assert t.ranks() == [1, 1]
    assert t.differential(1).sorted_entries() == [((0, 0), Polynomial.monomial((1,)))]


def test_taylor_of_two_squares():
    ideal = ideal_from_strings(["x", "y"], ["x^2", "y^2"])
    d2 = taylor_resolution(ideal).differential(2)
    # d eps_12 = sign(1,{2}) y^2 eps_2 + sign(2,{1}) x^2 eps_1
    assert d2.to_dense() == [[-Polynomial.monomial((0, 2))], [Polynomial.monomial((2, 0))]]


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_taylor_is_resolution(name):
    ideal = CORPUS[name]
    cert = is_resolution(taylor_resolution(ideal), ideal)
    assert cert.exact and cert.multidegrees_checked == len(lcm_lattice(ideal))


def test_strand_homology_witness_is_cycle_not_boundary():
    ideal = ideal_from_strings("w x y z".split(), ["w*x", "x*y", "y*z"])
    p = pivot_complex(ideal, (1, 2))
    s = strand(p, (1, 1, 1, 0))
    assert homology_dims(s) == [0, 1, 0]
    v = homology_witness(s, 1)
    assert v is not None
    assert homology_witness(strand(p, (1, 1, 0, 0)), 1) is None


def test_first_differential_must_list_generators():
    ideal = ideal_from_strings(["x", "y"], ["x", "y"])
    other = ideal_from_strings(["x", "y"], ["x^2", "y"])
    with pytest.raises(StructureError):
        is_resolution(taylor_resolution(other), ideal)


def test_generator_cap(monkeypatch):
    monkeypatch.setenv("PIVOTRES_MAX_GENERATORS", "3")
    ideal = ideal_from_strings("w x y z".split(), ["w*x", "x*y", "y*z", "w*z"])
    with pytest.raises(ResourceError):
        taylor_resolution(ideal)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_minimalize_matches_tor_oracle(name):
    ideal = CORPUS[name]
    expected = oracle_tor_ranks(ideal)
    m_up, b_up = minimalize(taylor_resolution(ideal), "ascending")
    m_down, b_down = minimalize(taylor_resolution(ideal), "descending")
    assert b_up == b_down == expected
    for m in (m_up, m_down):
        assert check_d_squared(m)
        for i in range(1, len(m.basis)):
            assert not any(v.is_constant() for v in m.differential(i).entries.values())
        assert is_resolution(m, ideal)


def test_minimalize_of_pivot_resolution():
    ideal = CORPUS["u_path"]
    for s in all_subsets(ideal.q):
        if len(s) >= 2 and find_gaps(ideal, s):
            _, b = minimalize(pivot_complex(ideal, s))
            assert b == [1, 4, 5, 2]
