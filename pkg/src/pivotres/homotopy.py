"""Higher-homotopy systems on Taylor and pivot resolutions and the Eisenbud-Shamash lift.

Linear maps between based modules are stored cell-wise:
``{source cell: {target cell: Polynomial}}``.  A homotopy system for
a_1..a_r consists of the differential plus one degree-raising map per a_s;
all maps indexed by |u| >= 2 are zero and are never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .chain import BasedComplex, SparseMatrix, StrandComplex, homology_dims
from .core import Multidegree, Polynomial, add_degrees, divides, monomial_quotient
from .ideal import MonomialIdeal
from .indexsets import IndexSet, add, binom, remove, sign_elem
from .resolutions import find_gaps, pivot_rank_formula

CellMap = Dict[IndexSet, Dict[IndexSet, Polynomial]]


class MembershipError(ValueError):
    """A polynomial could not be written in terms of the monomial generators."""


class PreconditionError(ValueError):
    pass


# -- complete-intersection data ----------------------------------------


def express_in_generators(a: Polynomial, ideal: MonomialIdeal, strategy: str = "first") -> List[Polynomial]:
    """Coefficients c_1..c_q with a = sum c_j m_j.

    Each term of ``a`` is charged to a single generator dividing it: the
    lowest-index one ("first") or the highest-index one ("last").
    """
    coeffs: List[Polynomial] = [Polynomial() for _ in range(ideal.q)]
    idx = range(1, ideal.q + 1) if strategy == "first" else range(ideal.q, 0, -1)
    for exps, c in a.sorted_terms():
        j = next((j for j in idx if divides(ideal.gen(j), exps)), None)
        if j is None:
            raise MembershipError(f"term {ideal.format_monomial(exps)} is divisible by no generator")
        coeffs[j - 1] = coeffs[j - 1] + Polynomial.monomial(monomial_quotient(exps, ideal.gen(j)), c)
    total = Polynomial()
    for j, c in enumerate(coeffs, start=1):
        total = total + c.shift(ideal.gen(j))
    assert total == a
    return coeffs


@dataclass
class CIData:
    """Elements a_1..a_r of I together with a coefficient matrix a_s = sum_j a_{sj} m_j.

    Whether a_1..a_r is a regular sequence is not checked.
    """

    ideal: MonomialIdeal
    elements: List[Polynomial]
    coefficients: List[List[Polynomial]]

    def __post_init__(self):
        if len(self.elements) != len(self.coefficients):
            raise ValueError("one coefficient row per element is required")
        for s, (a, row) in enumerate(zip(self.elements, self.coefficients), start=1):
            if len(row) != self.ideal.q:
                raise ValueError(f"coefficient row {s} has {len(row)} entries, expected {self.ideal.q}")
            total = Polynomial()
            for j, c in enumerate(row, start=1):
                total = total + c.shift(self.ideal.gen(j))
            if total != a:
                raise MembershipError(f"a_{s} != sum_j a_{s}j m_j")

    @classmethod
    def from_elements(cls, ideal: MonomialIdeal, elements: Sequence[Polynomial], strategy: str = "first") -> "CIData":
        elements = list(elements)
        return cls(ideal, elements, [express_in_generators(a, ideal, strategy) for a in elements])

    @classmethod
    def from_coefficients(cls, ideal: MonomialIdeal, coefficients: Sequence[Sequence[Polynomial]]) -> "CIData":
        elements = []
        for row in coefficients:
            total = Polynomial()
            for j, c in enumerate(row, start=1):
                total = total + c.shift(ideal.gen(j))
            elements.append(total)
        return cls(ideal, elements, [list(r) for r in coefficients])

    @property
    def r(self) -> int:
        return len(self.elements)

    def coeff(self, s: int, j: int) -> Polynomial:
        """a_{sj}, both indices 1-based."""
        return self.coefficients[s - 1][j - 1]

    def relabeled(self, perm: Dict[int, int]) -> "CIData":
        ideal = self.ideal.relabeled(perm)
        rows = []
        for row in self.coefficients:
            new = [None] * self.ideal.q
            for old, nw in perm.items():
                new[nw - 1] = row[old - 1]
            rows.append(new)
        return CIData(ideal, list(self.elements), rows)


# -- relabeling --------------------------------------------------------


def relabel_for_pivot(ideal: MonomialIdeal, s: IndexSet) -> Tuple[Dict[int, int], int]:
    """Permutation sending S to [l] (order kept), its smallest gap h to l+1, the rest after."""
    s = tuple(sorted(s))
    gaps = find_gaps(ideal, s)
    if not gaps:
        raise ValueError(f"{s} has no gap; T_S is not a resolution")
    h = gaps[0]
    rest = [i for i in range(1, ideal.q + 1) if i not in s and i != h]
    perm = {old: new for new, old in enumerate(list(s) + [h] + rest, start=1)}
    return perm, h


def relabel_cell(cell: IndexSet, perm: Dict[int, int]) -> Tuple[int, IndexSet]:
    """(sign, image) such that eps_cell corresponds to sign * eps_image after relabeling.

    The sign is the parity of the images listed in the original order, which
    makes the identification an isomorphism of DG-algebras.
    """
    seq = [perm[i] for i in cell]
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return (-1 if inv & 1 else 1), tuple(sorted(seq))


def is_normal_form(ideal: MonomialIdeal, pivot: IndexSet) -> bool:
    l = len(pivot)
    return pivot == tuple(range(1, l + 1)) and l + 1 <= ideal.q and l + 1 in find_gaps(ideal, pivot)


# -- homotopy systems --------------------------------------------------


@dataclass
class HomotopySystem:
    complex: BasedComplex
    ci: CIData
    differential: CellMap
    sigma: List[CellMap]
    label: str = ""

    @property
    def r(self) -> int:
        return len(self.sigma)


def _taylor_sigma_terms(ideal: MonomialIdeal, ci: CIData, s: int, a: IndexSet,
                        skip: Sequence[int] = ()) -> Dict[IndexSet, Polynomial]:
    """sum over j not in A (and not in ``skip``) of sign(j,A) a_sj (m_j m_A / m_{A+j}) eps_{A+j}."""
    out: Dict[IndexSet, Polynomial] = {}
    m_a = ideal.lcm(a)
    for j in range(1, ideal.q + 1):
        if j in a or j in skip:
            continue
        c = ci.coeff(s, j)
        if not c:
            continue
        target = add(a, j)
        shift = monomial_quotient(add_degrees(ideal.gen(j), m_a), ideal.lcm(target))
        term = c.shift(shift) * sign_elem(j, a)
        out[target] = out.get(target, Polynomial()) + term
    return {k: v for k, v in out.items() if v}


def _accumulate(into: Dict[IndexSet, Polynomial], cell: IndexSet, value: Polynomial) -> None:
    v = into.get(cell, Polynomial()) + value
    if v:
        into[cell] = v
    else:
        into.pop(cell, None)


def _check_ci(complex_: BasedComplex, ci: CIData) -> MonomialIdeal:
    ideal = complex_.ideal
    if ideal is None or ideal.generators != ci.ideal.generators:
        raise PreconditionError("CI coefficients are expressed over a different generator list")
    return ideal


def taylor_homotopy(taylor: BasedComplex, ci: CIData) -> HomotopySystem:
    ideal = _check_ci(taylor, ci)
    sigma = []
    for s in range(1, ci.r + 1):
        sigma.append({c: _taylor_sigma_terms(ideal, ci, s, c) for c in taylor.cells()})
    return HomotopySystem(taylor, ci, taylor.boundary_table(), sigma, label="taylor")


def pivot_sigma(ideal: MonomialIdeal, ci: CIData, l: int, s: int, a: IndexSet) -> Dict[IndexSet, Polynomial]:
    """sigma_{e_s}(eps_A) on T_{1..l} whose gap is l+1."""
    missing = [i for i in range(1, l + 1) if i not in a]
    if not missing:
        raise ValueError(f"{a} is not a cell of T_[{l}]")
    if len(missing) != 1:
        return _taylor_sigma_terms(ideal, ci, s, a)
    (t,) = missing
    out = _taylor_sigma_terms(ideal, ci, s, a, skip=(t,))
    if l + 1 in a:
        return out
    c = ci.coeff(s, t)
    if c:
        a_t = add(a, t)
        base = (-1) ** (l + 1) * sign_elem(t, a)
        num = add_degrees(ideal.gen(t), ideal.lcm(a))
        for i in range(1, l + 1):
            target = remove(add(a_t, l + 1), i)
            shift = monomial_quotient(num, ideal.lcm(target))
            _accumulate(out, target, c.shift(shift) * (base * sign_elem(i, remove(a_t, i))))
    return out


def pivot_homotopy(pivot: BasedComplex, ci: CIData) -> HomotopySystem:
    """Homotopy system on a pivot resolution T_{1..l} whose gap is l+1."""
    ideal = _check_ci(pivot, ci)
    if pivot.pivot is None or not is_normal_form(ideal, pivot.pivot):
        raise PreconditionError("pivot_homotopy needs T_{1..l} with l+1 a gap (use relabel_for_pivot)")
    l = len(pivot.pivot)
    sigma = []
    for s in range(1, ci.r + 1):
        sigma.append({c: pivot_sigma(ideal, ci, l, s, c) for c in pivot.cells()})
    return HomotopySystem(pivot, ci, pivot.boundary_table(), sigma, label=f"pivot[{l}]")


# -- verification ------------------------------------------------------


def compose(f: CellMap, g: CellMap, cell: IndexSet) -> Dict[IndexSet, Polynomial]:
    """(f o g)(eps_cell)."""
    out: Dict[IndexSet, Polynomial] = {}
    for mid, c in g.get(cell, {}).items():
        for tgt, d in f.get(mid, {}).items():
            _accumulate(out, tgt, c * d)
    return out


def _sum(*parts: Dict[IndexSet, Polynomial]) -> Dict[IndexSet, Polynomial]:
    out: Dict[IndexSet, Polynomial] = {}
    for p in parts:
        for k, v in p.items():
            _accumulate(out, k, v)
    return out


@dataclass
class IdentityCheck:
    name: str
    passed: bool
    cells_checked: int
    cell: Optional[IndexSet] = None
    residual: Optional[Dict[IndexSet, Polynomial]] = None


@dataclass
class HomotopyReport:
    checks: List[IdentityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed


def homotopy_residual(h: HomotopySystem, s: int, cell: IndexSet) -> Dict[IndexSet, Polynomial]:
    """(d sigma_s + sigma_s d - a_s)(eps_cell); zero when identity (2) holds."""
    sig = h.sigma[s - 1]
    a_s = h.ci.elements[s - 1]
    return _sum(compose(h.differential, sig, cell), compose(sig, h.differential, cell), {cell: -a_s})


def anticommutator_residual(h: HomotopySystem, s: int, t: int, cell: IndexSet) -> Dict[IndexSet, Polynomial]:
    """(sigma_s sigma_t + sigma_t sigma_s)(eps_cell); for s == t this is twice sigma_s^2."""
    f, g = h.sigma[s - 1], h.sigma[t - 1]
    if s == t:
        return compose(f, f, cell)
    return _sum(compose(f, g, cell), compose(g, f, cell))


def _run(name: str, cells: Sequence[IndexSet], residual) -> IdentityCheck:
    for c in cells:
        res = residual(c)
        if res:
            return IdentityCheck(name, False, len(cells), c, res)
    return IdentityCheck(name, True, len(cells))


def verify_homotopy(h: HomotopySystem, cells: Optional[Sequence[IndexSet]] = None) -> HomotopyReport:
    """Exact check of sigma_0^2 = 0, sigma_0 sigma_s + sigma_s sigma_0 = a_s,
    sigma_s^2 = 0 and sigma_s sigma_t + sigma_t sigma_s = 0 (s < t)."""
    cells = list(h.complex.cells()) if cells is None else list(cells)
    report = HomotopyReport()
    report.checks.append(_run("sigma_0^2 = 0", cells, lambda c: compose(h.differential, h.differential, c)))
    for s in range(1, h.r + 1):
        report.checks.append(_run(f"sigma_0 sigma_e{s} + sigma_e{s} sigma_0 = a_{s}", cells,
                                  lambda c, s=s: homotopy_residual(h, s, c)))
    for s in range(1, h.r + 1):
        report.checks.append(_run(f"sigma_e{s}^2 = 0", cells, lambda c, s=s: anticommutator_residual(h, s, s, c)))
    for s in range(1, h.r + 1):
        for t in range(s + 1, h.r + 1):
            report.checks.append(_run(f"sigma_e{s} sigma_e{t} + sigma_e{t} sigma_e{s} = 0", cells,
                                      lambda c, s=s, t=t: anticommutator_residual(h, s, t, c)))
    return report


def cell_class(cell: IndexSet, l: int) -> Tuple[int, bool]:
    """(|A meet [l]|, whether l+1 lies in A): the case split of the pivot homotopy."""
    return sum(1 for i in cell if i <= l), (l + 1) in cell


# -- Eisenbud-Shamash ---------------------------------------------------

ShamashLabel = Tuple[Tuple[int, ...], IndexSet]


@dataclass
class ShamashComplex:
    """Truncation through degree N of D (x) F with differential y^(u) e -> y^(u) de + sum_s y^(u-e_s) sigma_s e.

    Entries are polynomials over Q, to be read modulo the ideal (a_1..a_r).
    """

    truncation: int
    r: int
    basis: List[List[ShamashLabel]]
    maps: Dict[int, SparseMatrix]
    source: HomotopySystem

    def ranks(self) -> List[int]:
        return [len(b) for b in self.basis]


def _divided_monomials(r: int, d: int):
    """All u in N^r with |u| = d, lexicographically descending."""
    if r == 0:
        return [()] if d == 0 else []
    out = []
    for first in range(d, -1, -1):
        for rest in _divided_monomials(r - 1, d - first):
            out.append((first,) + rest)
    return out


def shamash_complex(h: HomotopySystem, truncation: int = 6, verified: Optional[HomotopyReport] = None) -> ShamashComplex:
    if verified is None:
        verified = verify_homotopy(h)
    if not verified.passed:
        raise PreconditionError("homotopy system failed verification")
    f = h.complex
    r = h.r
    basis: List[List[ShamashLabel]] = []
    for i in range(truncation + 1):
        labels = []
        for d in range(i // 2 + 1):
            k = i - 2 * d
            if k >= len(f.basis):
                continue
            for u in _divided_monomials(r, d):
                labels.extend((u, lab.cell) for lab in f.basis[k])
        basis.append(labels)
    pos = [{lab: n for n, lab in enumerate(b)} for b in basis]
    maps = {}
    for i in range(1, truncation + 1):
        ents: Dict[Tuple[int, int], Polynomial] = {}
        for col, (u, cell) in enumerate(basis[i]):
            for tgt, v in h.differential.get(cell, {}).items():
                ents[(pos[i - 1][(u, tgt)], col)] = v
            for s in range(r):
                if u[s] == 0:
                    continue
                lower = u[:s] + (u[s] - 1,) + u[s + 1:]
                for tgt, v in h.sigma[s].get(cell, {}).items():
                    key = (pos[i - 1][(lower, tgt)], col)
                    ents[key] = ents.get(key, Polynomial()) + v
        maps[i] = SparseMatrix(len(basis[i - 1]), len(basis[i]), ents)
    return ShamashComplex(truncation, r, basis, maps, h)


def contraction(phi: ShamashComplex, s: int, i: int) -> SparseMatrix:
    """t_s: y^(u) e -> y^(u - e_s) e on degree i (zero if u_s = 0), landing in degree i - 2."""
    ents = {}
    tgt = {lab: n for n, lab in enumerate(phi.basis[i - 2])}
    for col, (u, cell) in enumerate(phi.basis[i]):
        if u[s - 1]:
            lower = u[:s - 1] + (u[s - 1] - 1,) + u[s:]
            ents[(tgt[(lower, cell)], col)] = Polynomial.constant(1, phi.source.complex.nvars)
    return SparseMatrix(len(phi.basis[i - 2]), len(phi.basis[i]), ents)


@dataclass
class D2Certificate:
    passed: bool
    degrees_checked: int
    degree: Optional[int] = None
    detail: str = ""


def shamash_d2_certificate(phi: ShamashComplex) -> D2Certificate:
    """Check delta^2 = sum_s a_s t_s exactly over Q, so delta^2 vanishes modulo (a_1..a_r)."""
    elems = phi.source.ci.elements
    checked = 0
    for i in range(2, phi.truncation + 1):
        lhs = phi.maps[i - 1] @ phi.maps[i]
        ents: Dict[Tuple[int, int], Polynomial] = {}
        for s in range(1, phi.r + 1):
            for key, v in contraction(phi, s, i).entries.items():
                ents[key] = ents.get(key, Polynomial()) + v * elems[s - 1]
        rhs = SparseMatrix(lhs.nrows, lhs.ncols, ents)
        checked += 1
        if lhs != rhs:
            bad = sorted(set(lhs.entries.items()) ^ set(rhs.entries.items()))[0][0]
            return D2Certificate(False, checked, i, f"mismatch at entry {bad}")
    return D2Certificate(True, checked)


def shamash_rank(f_ranks: Sequence[int], r: int, i: int) -> int:
    """sum over 2d + k = i of binom(r + d - 1, r - 1) * rank F_k."""
    total = 0
    for d in range(i // 2 + 1):
        k = i - 2 * d
        if k < len(f_ranks):
            total += binom(r + d - 1, r - 1) * f_ranks[k]
    return total


def betti_bound(q: int, scarf: int, r: int, degree: int, mode: str = "structural") -> int:
    """Upper bound for beta^R_degree(R/I) from the smallest pivot resolution.

    ``paper_literal`` evaluates the printed closed form, where the pivot rank
    factor is taken at ``degree`` for every summand; ``structural`` is the
    rank of the Eisenbud-Shamash complex built on the pivot ranks.
    """
    if degree < 0:
        return 0
    half = degree // 2
    if mode == "paper_literal":
        factor = pivot_rank_formula(q, scarf, degree)
        return sum(factor * binom(r + half - j - 1, r - 1) for j in range(half + 1))
    if mode == "structural":
        ranks = [pivot_rank_formula(q, scarf, k) for k in range(q + 1)]
        return shamash_rank(ranks, r, degree)
    raise ValueError(f"unknown mode {mode!r}")


# -- exactness over R for monomial complete intersections ----------------


def _monomial_ci_degrees(ci: CIData) -> List[Multidegree]:
    out = []
    for a in ci.elements:
        if not a.is_monomial_term():
            raise PreconditionError("strand exactness over R needs each a_s to be a scalar times a monomial")
        out.append(next(iter(a.terms)))
    for i, x in enumerate(out):
        for y in out[i + 1:]:
            if any(p and q for p, q in zip(x, y)):
                raise PreconditionError("the monomials a_s must be pairwise coprime")
    return out


def shamash_label_degree(phi: ShamashComplex, lab: ShamashLabel, ci_degrees: Sequence[Multidegree]) -> Multidegree:
    u, cell = lab
    deg = phi.source.complex.label(cell).degree
    for us, d in zip(u, ci_degrees):
        deg = add_degrees(deg, tuple(us * x for x in d))
    return deg


@dataclass
class StrandExactness:
    exact: bool
    strands_checked: int
    failures: List[Tuple[Multidegree, int, int]]

    def __bool__(self):
        return self.exact


def shamash_strand_exactness(phi: ShamashComplex, bound: Multidegree) -> StrandExactness:
    """Homology over R = Q/(a_1..a_r) of every strand a <= bound, in degrees 1..N-1.

    Each a_s must be a scalar multiple of a monomial, pairwise coprime.  In a
    strand, y^(u) eps survives iff its multidegree d divides a and x^(a-d) is
    nonzero in R; entries are read off as scalar coefficients.
    """
    ci_degrees = _monomial_ci_degrees(phi.source.ci)

    def nonzero_in_r(exps):
        return not any(divides(d, exps) for d in ci_degrees)

    degs = [[shamash_label_degree(phi, lab, ci_degrees) for lab in b] for b in phi.basis]
    failures = []
    count = 0
    for a in product(*(range(b + 1) for b in bound)):
        count += 1
        keep = [[k for k, d in enumerate(row) if divides(d, a) and nonzero_in_r(monomial_quotient(a, d))]
                for row in degs]
        mats = {}
        for i in range(1, phi.truncation + 1):
            rows, cols = keep[i - 1], keep[i]
            rpos = {k: n for n, k in enumerate(rows)}
            cpos = {k: n for n, k in enumerate(cols)}
            mat = [[Fraction(0)] * len(cols) for _ in rows]
            for (rr, kk), v in phi.maps[i].entries.items():
                if rr in rpos and kk in cpos:
                    shift = monomial_quotient(degs[i][kk], degs[i - 1][rr])
                    mat[rpos[rr]][cpos[kk]] = v.coefficient(shift)
            mats[i] = mat
        sc = StrandComplex(tuple(a), [[] for _ in keep], keep, mats)
        h = homology_dims(sc)
        for i in range(1, phi.truncation):
            if h[i]:
                failures.append((tuple(a), i, h[i]))
    return StrandExactness(not failures, count, failures)
