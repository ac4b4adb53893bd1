"""Based multigraded complexes of free Q-modules.

A ``BasedComplex`` stores, for each homological degree, an ordered list of
basis labels (a cell of the Taylor complex plus its multidegree) and, for
each degree i >= 1, a sparse matrix of polynomials from degree i to degree
i - 1 (columns = source basis, rows = target basis).

Exactness is decided strand by strand: restricting to a multidegree ``a``
gives a finite complex of Q-vector spaces, and a multigraded complex whose
labels live in the lcm lattice is acyclic iff every lattice strand is.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .core import Multidegree, Polynomial, divides, monomial_quotient
from .ideal import MonomialIdeal, ResourceError, max_generators
from .indexsets import IndexSet, all_subsets
from .linalg import bareiss_rank, in_column_span, nullspace


class StructureError(ValueError):
    """Stored matrices do not fit together (shape mismatch, malformed first map)."""


class ContractError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class BasisLabel:
    cell: IndexSet
    degree: Multidegree


class SparseMatrix:
    """Sparse matrix of polynomials; ``entries`` maps (row, col) to a nonzero Polynomial."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries: Optional[Dict[Tuple[int, int], Polynomial]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    def __getitem__(self, key) -> Polynomial:
        return self.entries.get(key, Polynomial())

    def column(self, c: int) -> Dict[int, Polynomial]:
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def columns(self) -> List[Dict[int, Polynomial]]:
        cols: List[Dict[int, Polynomial]] = [{} for _ in range(self.ncols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise StructureError(f"cannot compose {self.nrows}x{self.ncols} with {other.nrows}x{other.ncols}")
        rows: Dict[int, Dict[int, Polynomial]] = {}
        for (r, k), v in self.entries.items():
            rows.setdefault(k, {})[r] = v
        out: Dict[Tuple[int, int], Polynomial] = {}
        for (k, c), w in other.entries.items():
            for r, v in rows.get(k, {}).items():
                key = (r, c)
                out[key] = out.get(key, Polynomial()) + v * w
        return SparseMatrix(self.nrows, other.ncols, out)

    def is_zero(self) -> bool:
        return not self.entries

    def sorted_entries(self):
        return sorted(self.entries.items())

    def to_dense(self) -> List[List[Polynomial]]:
        m = [[Polynomial() for _ in range(self.ncols)] for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            m[r][c] = v
        return m

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.entries) == (other.nrows, other.ncols, other.entries)

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, {len(self.entries)} entries)"


@dataclass
class BasedComplex:
    """Finite complex F_0 <- F_1 <- ... with labeled bases.

    ``maps[i]`` is the differential F_i -> F_{i-1} for 1 <= i <= top.
    ``pivot`` is set for pivot complexes T_S (the defining index set S).
    """

    nvars: int
    basis: List[List[BasisLabel]]
    maps: Dict[int, SparseMatrix]
    ideal: Optional[MonomialIdeal] = None
    kind: str = "complex"
    pivot: Optional[IndexSet] = None
    _index: Dict[IndexSet, Tuple[int, int]] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self._index = {}
        for i, labels in enumerate(self.basis):
            for k, lab in enumerate(labels):
                self._index[lab.cell] = (i, k)
        for i, m in self.maps.items():
            if not 1 <= i < len(self.basis):
                raise StructureError(f"differential in degree {i} has no target/source module")
            if (m.nrows, m.ncols) != (len(self.basis[i - 1]), len(self.basis[i])):
                raise StructureError(
                    f"differential {i} is {m.nrows}x{m.ncols} but modules have ranks "
                    f"{len(self.basis[i - 1])}, {len(self.basis[i])}"
                )

    @property
    def length(self) -> int:
        return len(self.basis) - 1

    def ranks(self) -> List[int]:
        return [len(b) for b in self.basis]

    def differential(self, i: int) -> SparseMatrix:
        if i in self.maps:
            return self.maps[i]
        rows = len(self.basis[i - 1]) if 0 <= i - 1 < len(self.basis) else 0
        cols = len(self.basis[i]) if 0 <= i < len(self.basis) else 0
        return SparseMatrix(rows, cols)

    def cells(self) -> List[IndexSet]:
        return [lab.cell for labels in self.basis for lab in labels]

    def has_cell(self, cell: IndexSet) -> bool:
        return cell in self._index

    def locate(self, cell: IndexSet) -> Tuple[int, int]:
        return self._index[cell]

    def label(self, cell: IndexSet) -> BasisLabel:
        i, k = self._index[cell]
        return self.basis[i][k]

    def boundary(self, cell: IndexSet) -> Dict[IndexSet, Polynomial]:
        """Differential of a basis element as a map target cell -> coefficient."""
        i, k = self._index[cell]
        if i == 0:
            return {}
        m = self.differential(i)
        return {self.basis[i - 1][r].cell: v for (r, c), v in m.entries.items() if c == k}

    def boundary_table(self) -> Dict[IndexSet, Dict[IndexSet, Polynomial]]:
        table: Dict[IndexSet, Dict[IndexSet, Polynomial]] = {c: {} for c in self.cells()}
        for i, m in self.maps.items():
            src, tgt = self.basis[i], self.basis[i - 1]
            for (r, c), v in m.entries.items():
                table[src[c].cell][tgt[r].cell] = v
        return table


# -- d^2 ---------------------------------------------------------------


@dataclass
class D2Report:
    passed: bool
    degree: Optional[int] = None
    row: Optional[BasisLabel] = None
    col: Optional[BasisLabel] = None
    value: Optional[Polynomial] = None

    def __bool__(self):
        return self.passed


def check_d_squared(c: BasedComplex) -> D2Report:
    for i in range(2, len(c.basis)):
        prod = c.differential(i - 1) @ c.differential(i)
        if not prod.is_zero():
            (r, k), v = prod.sorted_entries()[0]
            return D2Report(False, i, c.basis[i - 2][r], c.basis[i][k], v)
    return D2Report(True)


# -- lcm lattice and strands -------------------------------------------


def lcm_lattice(ideal: MonomialIdeal, bound: Optional[int] = None) -> Set[Multidegree]:
    """All m_A for nonempty A in P([q]), deduplicated."""
    bound = max_generators() if bound is None else bound
    if ideal.q > bound:
        raise ResourceError(f"q = {ideal.q} exceeds the generator bound {bound}")
    return {ideal.lcm(a) for a in all_subsets(ideal.q) if a}


@dataclass
class StrandComplex:
    """Restriction of a multigraded complex to one multidegree.

    ``indices[i]`` lists positions of surviving degree-i basis elements;
    ``matrices[i]`` is the dense rational matrix of the degree-i differential.
    """

    multidegree: Multidegree
    labels: List[List[BasisLabel]]
    indices: List[List[int]]
    matrices: Dict[int, List[List[Fraction]]]

    def dims(self) -> List[int]:
        return [len(ix) for ix in self.indices]


def strand(c: BasedComplex, a: Multidegree) -> StrandComplex:
    indices = [[k for k, lab in enumerate(labels) if divides(lab.degree, a)] for labels in c.basis]
    labels = [[c.basis[i][k] for k in ix] for i, ix in enumerate(indices)]
    matrices: Dict[int, List[List[Fraction]]] = {}
    for i in range(1, len(c.basis)):
        rows, cols = indices[i - 1], indices[i]
        rpos = {k: n for n, k in enumerate(rows)}
        cpos = {k: n for n, k in enumerate(cols)}
        mat = [[Fraction(0)] * len(cols) for _ in rows]
        for (r, k), v in c.differential(i).entries.items():
            if r in rpos and k in cpos:
                shift = monomial_quotient(c.basis[i][k].degree, c.basis[i - 1][r].degree)
                mat[rpos[r]][cpos[k]] = v.coefficient(shift)
        matrices[i] = mat
    return StrandComplex(tuple(a), labels, indices, matrices)


def _matmul_q(a: List[List[Fraction]], b: List[List[Fraction]]) -> List[List[Fraction]]:
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def _rank(m: List[List[Fraction]]) -> int:
    return bareiss_rank(m) if m and m[0] else 0


def homology_dims(s: StrandComplex) -> List[int]:
    dims = s.dims()
    for i in range(2, len(dims)):
        a, b = s.matrices[i - 1], s.matrices[i]
        if a and b and b[0] and any(any(x for x in row) for row in _matmul_q(a, b)):
            raise ContractError(f"d^2 != 0 on strand {s.multidegree} in degree {i}")
    ranks = [0] * (len(dims) + 1)
    for i in range(1, len(dims)):
        ranks[i] = _rank(s.matrices[i])
    return [dims[i] - ranks[i] - ranks[i + 1] for i in range(len(dims))]


def homology_witness(s: StrandComplex, i: int) -> Optional[List[Fraction]]:
    """A cycle in degree i of the strand that is not a boundary, or None."""
    n = len(s.indices[i])
    if n == 0:
        return None
    d_out = s.matrices.get(i, []) if i >= 1 else []
    cycles = nullspace(d_out, n) if i >= 1 else nullspace([], n)
    d_in = s.matrices.get(i + 1)
    for v in cycles:
        if d_in is None or not d_in or not d_in[0]:
            return v
        if not in_column_span(d_in, v):
            return v
    return None


def lift_strand_vector(s: StrandComplex, i: int, v: Sequence[Fraction]) -> Dict[IndexSet, Polynomial]:
    """Turn strand coordinates into polynomial coefficients c * x^(a - deg)."""
    out = {}
    for lab, x in zip(s.labels[i], v):
        if x:
            out[lab.cell] = Polynomial.monomial(monomial_quotient(s.multidegree, lab.degree), x)
    return out


# -- resolution certificate --------------------------------------------


@dataclass
class HomologyFailure:
    multidegree: Multidegree
    degree: int
    dimension: int
    cycle: Dict[IndexSet, Polynomial]


@dataclass
class ResolutionCertificate:
    """Outcome of ``is_resolution``.

    Exactness is only tested on lcm-lattice multidegrees; strands at other
    multidegrees are isomorphic to a lattice strand (or zero).
    """

    exact: bool
    multidegrees_checked: int
    failures: List[HomologyFailure]
    assumption: str = "exactness checked on lcm-lattice strands only"

    def __bool__(self):
        return self.exact


def _check_first_differential(c: BasedComplex, ideal: MonomialIdeal) -> None:
    if len(c.basis) < 2 or len(c.basis[0]) != 1 or any(c.basis[0][0].degree):
        raise StructureError("degree-0 module must be a single generator in multidegree 0")
    d1 = c.differential(1)
    seen = []
    for k, lab in enumerate(c.basis[1]):
        col = d1.column(k)
        if set(col) != {0}:
            raise StructureError(f"first differential column {lab.cell} is not a single entry")
        v = col[0]
        if not v.is_monomial_term() or abs(next(iter(v.terms.values()))) != 1:
            raise StructureError(f"first differential entry {v!r} is not +-monomial")
        seen.append(next(iter(v.terms)))
    if sorted(seen) != sorted(ideal.generators):
        raise StructureError("first differential does not list the generators of the ideal")


def is_resolution(c: BasedComplex, ideal: MonomialIdeal, stop_at_first: bool = False) -> ResolutionCertificate:
    _check_first_differential(c, ideal)
    lattice = sorted(lcm_lattice(ideal))
    failures = []
    for a in lattice:
        s = strand(c, a)
        h = homology_dims(s)
        for i in range(1, len(h)):
            if h[i]:
                w = homology_witness(s, i)
                failures.append(HomologyFailure(a, i, h[i], lift_strand_vector(s, i, w)))
        if failures and stop_at_first:
            break
    return ResolutionCertificate(not failures, len(lattice), failures)


# -- minimalization ----------------------------------------------------


def _find_unit(c_maps: Dict[int, Dict[Tuple[int, int], Polynomial]], degrees, order: str):
    for i in degrees:
        entries = c_maps.get(i, {})
        keys = sorted(entries) if order != "reverse" else sorted(entries, reverse=True)
        for key in keys:
            if entries[key].is_constant():
                return i, key
    return None


def minimalize(c: BasedComplex, order: str = "ascending") -> Tuple[BasedComplex, List[int]]:
    """Cancel unit entries by Gaussian reduction of the complex until none remain.

    ``order`` is "ascending" (homological degree ascending, row-major) or
    "descending" (degree descending, reverse row-major); both reach a minimal
    complex and must agree on the Betti numbers.
    """
    basis = [list(b) for b in c.basis]
    maps = {i: dict(c.differential(i).entries) for i in range(1, len(basis))}
    alive = [list(range(len(b))) for b in basis]
    top = len(basis) - 1

    def degrees():
        return range(1, top + 1) if order == "ascending" else range(top, 0, -1)

    mode = "forward" if order == "ascending" else "reverse"
    while True:
        hit = _find_unit(maps, degrees(), mode)
        if hit is None:
            break
        i, (rho, kappa) = hit
        d = maps[i]
        unit = d[(rho, kappa)].constant_value()
        col_k = {r: v for (r, k), v in d.items() if k == kappa and r != rho}
        row_r = {k: v for (r, k), v in d.items() if r == rho and k != kappa}
        for r, alpha in col_k.items():
            for k, beta in row_r.items():
                key = (r, k)
                new = d.get(key, Polynomial()) - alpha * beta * (1 / unit)
                if new:
                    d[key] = new
                else:
                    d.pop(key, None)
        maps[i] = {key: v for key, v in d.items() if key[0] != rho and key[1] != kappa}
        if i + 1 in maps:
            maps[i + 1] = {key: v for key, v in maps[i + 1].items() if key[0] != kappa}
        if i - 1 >= 1:
            maps[i - 1] = {key: v for key, v in maps[i - 1].items() if key[1] != rho}
        alive[i].remove(kappa)
        alive[i - 1].remove(rho)

    new_basis = [[basis[i][k] for k in alive[i]] for i in range(len(basis))]
    pos = [{k: n for n, k in enumerate(alive[i])} for i in range(len(basis))]
    new_maps = {}
    for i in range(1, len(basis)):
        ents = {(pos[i - 1][r], pos[i][k]): v for (r, k), v in maps[i].items()}
        new_maps[i] = SparseMatrix(len(new_basis[i - 1]), len(new_basis[i]), ents)
    while len(new_basis) > 1 and not new_basis[-1]:
        new_maps.pop(len(new_basis) - 1, None)
        new_basis.pop()
    out = BasedComplex(c.nvars, new_basis, new_maps, ideal=c.ideal, kind=f"minimal({c.kind})")
    return out, out.ranks()
