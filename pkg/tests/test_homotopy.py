from fractions import Fraction

import pytest

from corpus import CORPUS
from hom_instances import LEMMA_CLASSES, lemma_cells, normal_instances, random_ci, sigma_case
from pivotres.chain import BasedComplex
from pivotres.core import Polynomial
from pivotres.dga import project_cell
from pivotres.homotopy import (
    CIData,
    MembershipError,
    PreconditionError,
    anticommutator_residual,
    cell_class,
    express_in_generators,
    homotopy_residual,
    is_normal_form,
    pivot_homotopy,
    relabel_cell,
    relabel_for_pivot,
    taylor_homotopy,
    verify_homotopy,
)
from pivotres.io import parse_polynomial
from pivotres.resolutions import pivot_complex, taylor_resolution

INSTANCES = normal_instances()
MAX_SQ = CORPUS["max_sq"]


def poly(text, ideal):
    return parse_polynomial(text, ideal.variables)


def test_express_in_generators():
    a = poly("x^2 + 3*x*y - y^3", MAX_SQ)
    first = express_in_generators(a, MAX_SQ, "first")
    last = express_in_generators(a, MAX_SQ, "last")
    assert first == [Polynomial.constant(1, 2), Polynomial.constant(3, 2), -Polynomial.monomial((0, 1))]
    assert last[0] == Polynomial.constant(1, 2) and last[2] == -Polynomial.monomial((0, 1))
    with pytest.raises(MembershipError):
        express_in_generators(poly("x + y^2", MAX_SQ), MAX_SQ)


def test_ci_data_validation():
    ci = CIData.from_elements(MAX_SQ, [poly("x^2 + y^2", MAX_SQ)])
    assert ci.r == 1 and ci.coeff(1, 3) == Polynomial.constant(1, 2)
    with pytest.raises(MembershipError):
        CIData(MAX_SQ, [poly("x^2", MAX_SQ)], [[Polynomial(), Polynomial.monomial((1, 0)), Polynomial()]])
    with pytest.raises(ValueError):
        CIData(MAX_SQ, [poly("x^2", MAX_SQ)], [[Polynomial()]])


def test_relabel_for_pivot_and_normal_form():
    perm, h = relabel_for_pivot(MAX_SQ, (1, 3))
    assert h == 2 and perm == {1: 1, 3: 2, 2: 3}
    normal = MAX_SQ.relabeled(perm)
    assert normal.generators == ((2, 0), (0, 2), (1, 1))
    assert is_normal_form(normal, (1, 2))
    assert not is_normal_form(MAX_SQ, (1, 3))
    assert relabel_cell((2, 3), perm) == (-1, (2, 3))
    assert relabel_cell((1, 3), perm) == (1, (1, 2))


@pytest.mark.parametrize("name", ["path", "four_cycle", "u_path", "random3", "random4"])
def test_relabeling_is_a_chain_isomorphism(name):
    ideal = CORPUS[name]
    for s in [s for s in pivot_sets(ideal)]:
        perm, _ = relabel_for_pivot(ideal, s)
        normal = ideal.relabeled(perm)
        p = pivot_complex(ideal, s)
        n = pivot_complex(normal, tuple(range(1, len(s) + 1)))
        for cell in p.cells():
            sgn, img = relabel_cell(cell, perm)
            moved = {}
            for face, v in p.boundary(cell).items():
                fs, fimg = relabel_cell(face, perm)
                moved[fimg] = v * fs
            assert {f: v * sgn for f, v in n.boundary(img).items()} == moved


def pivot_sets(ideal):
    from pivotres.indexsets import all_subsets
    from pivotres.resolutions import find_gaps

    return [s for s in all_subsets(ideal.q) if len(s) >= 2 and find_gaps(ideal, s)]


def test_pivot_homotopy_requires_normal_form():
    p = pivot_complex(MAX_SQ, (1, 3))
    ci = CIData.from_elements(MAX_SQ, [poly("x^2", MAX_SQ)])
    with pytest.raises(PreconditionError):
        pivot_homotopy(p, ci)


def test_homotopy_mismatched_ideal():
    other = CORPUS["path"]
    ci = CIData.from_elements(MAX_SQ, [poly("x^2", MAX_SQ)])
    with pytest.raises(PreconditionError):
        taylor_homotopy(taylor_resolution(other), ci)


@pytest.mark.parametrize("name", ["max_sq", "path", "four_cycle", "squares_abc"])
def test_taylor_homotopy(name):
    import random

    ideal = CORPUS[name]
    ci = random_ci(random.Random(name), ideal, 2, dense=True)
    report = verify_homotopy(taylor_homotopy(taylor_resolution(ideal), ci))
    assert report.passed
    assert [c.name for c in report.checks] == [
        "sigma_0^2 = 0",
        "sigma_0 sigma_e1 + sigma_e1 sigma_0 = a_1",
        "sigma_0 sigma_e2 + sigma_e2 sigma_0 = a_2",
        "sigma_e1^2 = 0",
        "sigma_e2^2 = 0",
        "sigma_e1 sigma_e2 + sigma_e2 sigma_e1 = 0",
    ]


def test_instance_pool():
    assert len(INSTANCES) >= 20
    assert all(ideal.q <= 5 and 1 <= ci.r <= 3 for ideal, _, ci in INSTANCES)
    assert {ci.r for _, _, ci in INSTANCES} == {1, 2, 3}


@pytest.mark.parametrize("k", range(len(INSTANCES)))
def test_pivot_homotopy_identities(k):
    ideal, l, ci = INSTANCES[k]
    p = pivot_complex(ideal, tuple(range(1, l + 1)))
    report = verify_homotopy(pivot_homotopy(p, ci))
    assert report.passed, [c for c in report.checks if not c.passed]


def test_sigma_cases_and_lemma_classes_are_exercised():
    cases = set()
    hits = dict.fromkeys(LEMMA_CLASSES, 0)
    for ideal, l, ci in INSTANCES:
        p = pivot_complex(ideal, tuple(range(1, l + 1)))
        h = pivot_homotopy(p, ci)
        for cell in p.cells():
            for s in range(1, ci.r + 1):
                if h.sigma[s - 1].get(cell):
                    cases.add(sigma_case(cell, l))
        for lemma, (_, _, family) in LEMMA_CLASSES.items():
            for cell in lemma_cells(p, l, lemma):
                if family == "homotopy":
                    for s in range(1, ci.r + 1):
                        if h.sigma[s - 1].get(cell):
                            assert not homotopy_residual(h, s, cell)
                            hits[lemma] += 1
                else:
                    for s in range(1, ci.r + 1):
                        for t in range(s + 1, ci.r + 1):
                            if h.sigma[s - 1].get(cell) or h.sigma[t - 1].get(cell):
                                assert not anticommutator_residual(h, s, t, cell)
                                hits[lemma] += 1
    assert cases == {1, 2, 3}
    assert all(hits.values()), hits


@pytest.mark.parametrize("k", range(0, len(INSTANCES), 3))
def test_pivot_homotopy_is_projected_taylor_homotopy(k):
    ideal, l, ci = INSTANCES[k]
    s = tuple(range(1, l + 1))
    p = pivot_complex(ideal, s)
    hp = pivot_homotopy(p, ci)
    ht = taylor_homotopy(taylor_resolution(ideal), ci)
    for t in range(ci.r):
        for cell in p.cells():
            projected = {}
            for c, v in ht.sigma[t].get(cell, {}).items():
                for img, w in project_cell(ideal, c, s, l + 1).items():
                    projected[img] = projected.get(img, Polynomial()) + v * w
            projected = {c: v for c, v in projected.items() if v}
            assert hp.sigma[t].get(cell, {}) == projected


def test_cell_class():
    assert cell_class((1, 3), 2) == (1, True)
    assert cell_class((2, 5), 3) == (1, False)
    assert cell_class((), 2) == (0, False)
