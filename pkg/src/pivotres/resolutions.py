"""Taylor, pivot, Lyubeznik and general Morse resolutions of Q/I, plus gap and Scarf analysis."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .chain import BasedComplex, BasisLabel, SparseMatrix, minimalize
from .core import Polynomial, divides, monomial_quotient
from .ideal import MonomialIdeal, ResourceError, max_generators
from .indexsets import IndexSet, add, all_subsets, binom, contains, index_set, remove, sign_elem

DEFAULT_MAX_PATHS = 10 ** 6
INFINITY = math.inf

Edge = Tuple[IndexSet, IndexSet]


def max_paths() -> int:
    return int(os.environ.get("PIVOTRES_MAX_PATHS", DEFAULT_MAX_PATHS))


def _check_size(ideal: MonomialIdeal, bound: Optional[int]) -> None:
    bound = max_generators() if bound is None else bound
    if ideal.q > bound:
        raise ResourceError(f"q = {ideal.q} generators means 2^{ideal.q} cells; bound is {bound}")


def _taylor_coefficient(ideal: MonomialIdeal, cell: IndexSet, j: int) -> Polynomial:
    """Coefficient of eps_{cell \\ j} in the Taylor differential of eps_cell."""
    face = remove(cell, j)
    return Polynomial.monomial(
        monomial_quotient(ideal.lcm(cell), ideal.lcm(face)), sign_elem(j, face)
    )


def subcomplex_of_taylor(ideal: MonomialIdeal, cells: Iterable[IndexSet], kind: str,
                         pivot: Optional[IndexSet] = None) -> BasedComplex:
    """Restriction of the Taylor differential to a subset-closed family of cells."""
    by_size: Dict[int, List[IndexSet]] = {}
    for c in cells:
        by_size.setdefault(len(c), []).append(c)
    top = max(by_size)
    basis = [[BasisLabel(c, ideal.lcm(c)) for c in sorted(by_size.get(i, []))] for i in range(top + 1)]
    while len(basis) > 1 and not basis[-1]:
        basis.pop()
    pos = [{lab.cell: k for k, lab in enumerate(labels)} for labels in basis]
    maps = {}
    for i in range(1, len(basis)):
        ents = {}
        for k, lab in enumerate(basis[i]):
            for j in lab.cell:
                face = remove(lab.cell, j)
                r = pos[i - 1].get(face)
                if r is None:
                    raise ValueError(f"cell family is not closed under subsets: {face} missing")
                ents[(r, k)] = _taylor_coefficient(ideal, lab.cell, j)
        maps[i] = SparseMatrix(len(basis[i - 1]), len(basis[i]), ents)
    return BasedComplex(ideal.nvars, basis, maps, ideal=ideal, kind=kind, pivot=pivot)


def taylor_resolution(ideal: MonomialIdeal, bound: Optional[int] = None) -> BasedComplex:
    _check_size(ideal, bound)
    return subcomplex_of_taylor(ideal, all_subsets(ideal.q), "taylor")


# -- gaps and pivot complexes ------------------------------------------


def find_gaps(ideal: MonomialIdeal, tau: IndexSet) -> List[int]:
    """Indices h outside tau with m_h | m_tau."""
    tau = index_set(tau)
    m_tau = ideal.lcm(tau)
    gaps = []
    for h in range(1, ideal.q + 1):
        if h in tau:
            continue
        if divides(ideal.gen(h), m_tau):
            assert ideal.lcm(add(tau, h)) == m_tau
            gaps.append(h)
    return gaps


def _check_pivot_set(ideal: MonomialIdeal, s: IndexSet) -> IndexSet:
    s = index_set(s)
    if len(s) < 2:
        raise ValueError(f"a pivot complex needs |S| >= 2, got {s}")
    if s[-1] > ideal.q:
        raise ValueError(f"index {s[-1]} exceeds q = {ideal.q}")
    return s


def pivot_cells(ideal: MonomialIdeal, s: IndexSet) -> List[IndexSet]:
    return [c for c in all_subsets(ideal.q) if not contains(c, s)]


def pivot_complex(ideal: MonomialIdeal, s: IndexSet, bound: Optional[int] = None) -> BasedComplex:
    """T_S: the Taylor subcomplex on cells not containing S."""
    s = _check_pivot_set(ideal, s)
    _check_size(ideal, bound)
    return subcomplex_of_taylor(ideal, pivot_cells(ideal, s), f"pivot{list(s)}", pivot=s)


def is_pivot_resolution(ideal: MonomialIdeal, s: IndexSet) -> bool:
    s = _check_pivot_set(ideal, s)
    return bool(find_gaps(ideal, s))


def pivot_rank_formula(q: int, l: int, i: int) -> int:
    """rank of (T_S)_i when |S| = l: binom(q, i) - binom(q - l, i - l)."""
    return binom(q, i) - binom(q - l, i - l)


# -- Scarf data --------------------------------------------------------


def lcm_classes(ideal: MonomialIdeal) -> Dict[tuple, List[IndexSet]]:
    classes: Dict[tuple, List[IndexSet]] = {}
    for c in all_subsets(ideal.q):
        classes.setdefault(ideal.lcm(c), []).append(c)
    return classes


def scarf_number(ideal: MonomialIdeal):
    """Least |tau| such that some tau' != tau has the same lcm; ``math.inf`` if none."""
    best = INFINITY
    for cells in lcm_classes(ideal).values():
        if len(cells) > 1:
            best = min(best, min(len(c) for c in cells))
    return best


def scarf_sets(ideal: MonomialIdeal) -> List[IndexSet]:
    return sorted(
        (cells[0] for cells in lcm_classes(ideal).values() if len(cells) == 1),
        key=lambda c: (len(c), c),
    )


def smallest_pivot_indices(ideal: MonomialIdeal) -> Optional[IndexSet]:
    """Lexicographically least S of size scarf_number(I) that has a gap, or None."""
    l = scarf_number(ideal)
    if l == INFINITY:
        return None
    for s in combinations(range(1, ideal.q + 1), l):
        if find_gaps(ideal, s):
            return s
    raise AssertionError("a minimal non-Scarf index set must have a gap")


def betti_numbers(ideal: MonomialIdeal) -> List[int]:
    _, betti = minimalize(taylor_resolution(ideal))
    return betti


def has_minimal_pivot(ideal: MonomialIdeal) -> bool:
    l = scarf_number(ideal)
    if l == INFINITY:
        return True
    betti = betti_numbers(ideal)
    return all(
        (betti[i] if i < len(betti) else 0) == pivot_rank_formula(ideal.q, l, i)
        for i in range(ideal.q + 1)
    )


# -- Morse matchings ---------------------------------------------------


@dataclass(frozen=True)
class MorseMatching:
    """Edges (tau -> tau') of the Taylor cell digraph with tau' = tau minus one index."""

    edges: FrozenSet[Edge]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset((tuple(a), tuple(b)) for a, b in self.edges))

    def partner(self) -> Dict[IndexSet, IndexSet]:
        out = {}
        for up, down in self.edges:
            out[up] = down
            out[down] = up
        return out

    def __len__(self):
        return len(self.edges)


def lyubeznik_index(ideal: MonomialIdeal, order: Sequence[int], tau: IndexSet) -> Optional[int]:
    """Generator index i_j for the largest j with m_{i_j} | lcm of the earlier i's lying in tau.

    An empty set of earlier generators never qualifies.
    """
    members = set(tau)
    best = None
    for j in range(1, len(order)):
        earlier = [i for i in order[:j] if i in members]
        if not earlier:
            continue
        if divides(ideal.gen(order[j]), ideal.lcm(index_set(earlier))):
            best = order[j]
    return best


def _check_order(ideal: MonomialIdeal, order: Sequence[int]) -> Tuple[int, ...]:
    order = tuple(order)
    if sorted(order) != list(range(1, ideal.q + 1)):
        raise ValueError(f"order must be a permutation of 1..{ideal.q}, got {order}")
    return order


def lyubeznik_matching(ideal: MonomialIdeal, order: Optional[Sequence[int]] = None) -> MorseMatching:
    """``order`` lists generator indices from largest to smallest (m_{i_1} > ... > m_{i_q})."""
    order = _check_order(ideal, order or range(1, ideal.q + 1))
    edges = set()
    for tau in all_subsets(ideal.q):
        h = lyubeznik_index(ideal, order, tau)
        if h is not None:
            edges.add((add(tau, h) if h not in tau else tau, remove(tau, h)))
    matching = MorseMatching(frozenset(edges))
    report = validate_matching(ideal, matching)
    if not report.valid:
        raise AssertionError(f"Lyubeznik matching failed validation: {report}")
    return matching


def pivot_matching(ideal: MonomialIdeal, s: IndexSet, h: int) -> MorseMatching:
    """{tau + h -> tau - h : tau contains S}; critical cells are exactly the T_S basis."""
    s = index_set(s)
    edges = set()
    for tau in all_subsets(ideal.q):
        if contains(tau, s) and h not in tau:
            edges.add((add(tau, h), tau))
    return MorseMatching(frozenset(edges))


@dataclass
class MatchingReport:
    valid: bool
    condition: Optional[int] = None
    detail: str = ""

    def __bool__(self):
        return self.valid


def _gradient_successors(q: int, partner_up: Dict[IndexSet, IndexSet],
                         matched_down: Dict[IndexSet, IndexSet], v: IndexSet):
    """Out-neighbours of v in G^A (down edges except the matched one, plus the reversed up edge)."""
    down = matched_down.get(v)
    for j in v:
        w = remove(v, j)
        if w != down:
            yield w
    up = partner_up.get(v)
    if up is not None:
        yield up


def validate_matching(ideal: MonomialIdeal, matching: MorseMatching) -> MatchingReport:
    seen: Dict[IndexSet, Edge] = {}
    for up, down in sorted(matching.edges):
        if len(up) != len(down) + 1 or not contains(up, down) or (up and up[-1] > ideal.q):
            return MatchingReport(False, 0, f"{up} -> {down} is not an edge of the cell digraph")
        for v in (up, down):
            if v in seen:
                return MatchingReport(False, 1, f"{v} lies on edges {seen[v]} and {(up, down)}")
            seen[v] = (up, down)
    for up, down in sorted(matching.edges):
        if ideal.lcm(up) != ideal.lcm(down):
            return MatchingReport(False, 2, f"m_{up} != m_{down} on edge {up} -> {down}")
    partner_up = {down: up for up, down in matching.edges}
    matched_down = {up: down for up, down in matching.edges}
    # iterative DFS colouring: 0 new, 1 on stack, 2 done
    colour: Dict[IndexSet, int] = {}
    for root in all_subsets(ideal.q):
        if colour.get(root):
            continue
        stack = [(root, iter(_gradient_successors(ideal.q, partner_up, matched_down, root)))]
        colour[root] = 1
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is None:
                colour[v] = 2
                stack.pop()
                continue
            c = colour.get(w, 0)
            if c == 1:
                return MatchingReport(False, 3, f"G^A has a directed cycle through {w}")
            if c == 0:
                colour[w] = 1
                stack.append((w, iter(_gradient_successors(ideal.q, partner_up, matched_down, w))))
    return MatchingReport(True)


def critical_cells(ideal: MonomialIdeal, matching: MorseMatching) -> List[IndexSet]:
    used = matching.partner()
    return [c for c in all_subsets(ideal.q) if c not in used]


def gradient_path_sums(ideal: MonomialIdeal, matching: MorseMatching, tau: IndexSet,
                       limit: Optional[int] = None) -> Dict[IndexSet, int]:
    """Sum of m(P) over gradient paths from critical tau to each critical cell one size down.

    Paths alternate: a down step tau_k -> sigma, then (if sigma is matched
    upward) the reversed edge sigma -> sigma + j, and so on.  A path ends at
    the first critical cell of size |tau| - 1; it cannot continue usefully
    from there since only down steps leave a critical cell.
    """
    limit = max_paths() if limit is None else limit
    partner_up = {down: up for up, down in matching.edges}
    matched_down = {up: down for up, down in matching.edges}
    used = matching.partner()
    out: Dict[IndexSet, int] = {}
    count = 0
    stack = [(tau, 1)]
    while stack:
        v, sgn = stack.pop()
        for j in v:
            w = remove(v, j)
            if matched_down.get(v) == w:
                continue
            s = sgn * sign_elem(j, w)
            if w not in used:
                count += 1
                if count > limit:
                    raise ResourceError(f"more than {limit} gradient paths from {tau}")
                out[w] = out.get(w, 0) + s
            elif w in partner_up:
                up = partner_up[w]
                k = next(x for x in up if x not in w)
                # reversed edge sign: -[up : w]
                stack.append((up, -s * sign_elem(k, w)))
    return {w: c for w, c in out.items() if c}


def morse_resolution(ideal: MonomialIdeal, matching: MorseMatching, bound: Optional[int] = None,
                     kind: str = "morse") -> BasedComplex:
    _check_size(ideal, bound)
    report = validate_matching(ideal, matching)
    if not report.valid:
        raise ValueError(f"not a Morse matching: condition {report.condition}: {report.detail}")
    crit = critical_cells(ideal, matching)
    top = max(len(c) for c in crit)
    basis = [[BasisLabel(c, ideal.lcm(c)) for c in crit if len(c) == i] for i in range(top + 1)]
    pos = [{lab.cell: k for k, lab in enumerate(labels)} for labels in basis]
    maps = {}
    for i in range(1, len(basis)):
        ents = {}
        for k, lab in enumerate(basis[i]):
            for w, coeff in gradient_path_sums(ideal, matching, lab.cell).items():
                shift = monomial_quotient(lab.degree, ideal.lcm(w))
                ents[(pos[i - 1][w], k)] = Polynomial.monomial(shift, coeff)
        maps[i] = SparseMatrix(len(basis[i - 1]), len(basis[i]), ents)
    return BasedComplex(ideal.nvars, basis, maps, ideal=ideal, kind=kind)


def lyubeznik_resolution(ideal: MonomialIdeal, order: Optional[Sequence[int]] = None) -> BasedComplex:
    return morse_resolution(ideal, lyubeznik_matching(ideal, order), kind="lyubeznik")
