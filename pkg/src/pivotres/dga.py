"""DG-algebra products on Taylor and pivot resolutions.

Elements are formal sums of basis cells with polynomial coefficients.  The
pivot product is computed in the normal form where the pivot set is
[l] and its gap is l+1, then carried back to the original labels through
the sign-twisted relabeling of ``homotopy.relabel_cell``.
"""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Optional, Tuple

from .chain import BasedComplex
from .core import Polynomial, add_degrees, monomial_quotient
from .homotopy import relabel_cell, relabel_for_pivot
from .ideal import MonomialIdeal
from .resolutions import find_gaps
from .indexsets import IndexSet, add, contains, index_set, remove, sign_elem, sign_pair, union


class ChainElement:
    """Finite sum of basis elements of a fixed complex; zero coefficients are dropped."""

    __slots__ = ("complex", "coeffs")

    def __init__(self, complex_: BasedComplex, coeffs: Optional[Mapping[IndexSet, Polynomial]] = None):
        self.complex = complex_
        self.coeffs: Dict[IndexSet, Polynomial] = {}
        for cell, v in (coeffs or {}).items():
            if v:
                if not complex_.has_cell(cell):
                    raise ValueError(f"{cell} is not a basis cell of {complex_.kind}")
                self.coeffs[cell] = v

    @classmethod
    def basis(cls, complex_: BasedComplex, cell: Iterable[int], coeff=1) -> "ChainElement":
        cell = index_set(cell)
        return cls(complex_, {cell: Polynomial.constant(coeff, complex_.nvars)})

    def _same(self, other: "ChainElement") -> None:
        if other.complex is not self.complex:
            raise ValueError("elements belong to different complexes")

    def __add__(self, other: "ChainElement") -> "ChainElement":
        self._same(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Polynomial()) + v
        return ChainElement(self.complex, out)

    def __neg__(self):
        return ChainElement(self.complex, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ChainElement":
        return ChainElement(self.complex, {k: v * c for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, ChainElement):
            return NotImplemented
        return self.complex is other.complex and self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def degrees(self):
        return {len(c) for c in self.coeffs}

    def __repr__(self):
        names = self.complex.ideal.variables if self.complex.ideal else None
        if not self.coeffs:
            return "0"
        parts = []
        for cell in sorted(self.coeffs, key=lambda c: (len(c), c)):
            v = self.coeffs[cell]
            coeff = v.format(names) if names else repr(v)
            tag = "".join(map(str, cell)) if cell else "()"
            parts.append(f"({coeff})*e{tag}")
        return " + ".join(parts)


def differential(x: ChainElement) -> ChainElement:
    out: Dict[IndexSet, Polynomial] = {}
    for cell, v in x.coeffs.items():
        for tgt, d in x.complex.boundary(cell).items():
            out[tgt] = out.get(tgt, Polynomial()) + v * d
    return ChainElement(x.complex, out)


# -- basis-level formulas ------------------------------------------------

def taylor_basis_product(ideal: MonomialIdeal, a: IndexSet, b: IndexSet) -> Dict[IndexSet, Polynomial]:
    """eps_A * eps_B = sign(A,B) (m_A m_B / m_{A u B}) eps_{A u B}, or 0 if A, B meet."""
    sgn = sign_pair(a, b)
    if not sgn:
        return {}
    ab = union(a, b)
    shift = monomial_quotient(add_degrees(ideal.lcm(a), ideal.lcm(b)), ideal.lcm(ab))
    return {ab: Polynomial.monomial(shift, sgn)}


def pivot_basis_product(ideal: MonomialIdeal, l: int, a: IndexSet, b: IndexSet) -> Dict[IndexSet, Polynomial]:
    """Product on T_{1..l} whose gap is l+1.

    The third case carries a factor (-1)^(l+1) = -sign(l+1, A u B): it is the
    image of eps_{A u B} in the quotient of the Taylor algebra.
    """
    sgn = sign_pair(a, b)
    if not sgn:
        return {}
    ab = union(a, b)
    full = range(1, l + 1)
    has_l = contains(ab, full)
    if has_l and (l + 1) in ab:
        return {}
    if not has_l:
        return taylor_basis_product(ideal, a, b)
    num = add_degrees(ideal.lcm(a), ideal.lcm(b))
    base = sgn * (-1) ** (l + 1)
    out: Dict[IndexSet, Polynomial] = {}
    for i in full:
        target = remove(add(ab, l + 1), i)
        if contains(target, full):
            raise AssertionError(f"pivot product left the basis at {target}")
        coeff = base * sign_elem(i, remove(ab, i))
        out[target] = Polynomial.monomial(monomial_quotient(num, ideal.lcm(target)), coeff)
    return out


def _bilinear(x: ChainElement, y: ChainElement, rule, target: BasedComplex) -> ChainElement:
    out: Dict[IndexSet, Polynomial] = {}
    for a, va in x.coeffs.items():
        for b, vb in y.coeffs.items():
            terms = rule(a, b)
            if not terms:
                continue
            vab = va * vb
            for cell, c in terms.items():
                out[cell] = out.get(cell, Polynomial()) + vab * c
    return ChainElement(target, out)


def taylor_product(x: ChainElement, y: ChainElement) -> ChainElement:
    x._same(y)
    ideal = x.complex.ideal
    if x.complex.kind != "taylor":
        raise ValueError("taylor_product needs elements of a Taylor resolution")
    return _bilinear(x, y, lambda a, b: taylor_basis_product(ideal, a, b), x.complex)


class PivotAlgebra:
    """Multiplication on a pivot resolution T_S in its original labels.

    Cells are moved to the normal form (S -> [l], smallest gap -> l+1),
    multiplied there and moved back; each move carries the sign of
    ``relabel_cell`` so the result is the same DG-algebra.
    """

    def __init__(self, complex_: BasedComplex):
        if complex_.pivot is None:
            raise ValueError("not a pivot complex")
        ideal = complex_.ideal
        self.complex = complex_
        self.perm, self.gap = relabel_for_pivot(ideal, complex_.pivot)
        self.inverse = {v: k for k, v in self.perm.items()}
        self.normal_ideal = ideal.relabeled(self.perm)
        self.l = len(complex_.pivot)
        self._cache: Dict[Tuple[IndexSet, IndexSet], Dict[IndexSet, Polynomial]] = {}

    def basis_product(self, a: IndexSet, b: IndexSet) -> Dict[IndexSet, Polynomial]:
        key = (a, b)
        got = self._cache.get(key)
        if got is None:
            sa, na = relabel_cell(a, self.perm)
            sb, nb = relabel_cell(b, self.perm)
            got = {}
            for cell, c in pivot_basis_product(self.normal_ideal, self.l, na, nb).items():
                sc, back = relabel_cell(cell, self.inverse)
                got[back] = c * (sa * sb * sc)
            self._cache[key] = got
        return got

    def product(self, x: ChainElement, y: ChainElement) -> ChainElement:
        x._same(y)
        if x.complex is not self.complex:
            raise ValueError("element is not in this pivot complex")
        return _bilinear(x, y, self.basis_product, self.complex)


def pivot_algebra(complex_: BasedComplex) -> PivotAlgebra:
    """The (cached) multiplication of a pivot complex."""
    alg = complex_.__dict__.get("_pivot_algebra")
    if alg is None:
        alg = PivotAlgebra(complex_)
        complex_.__dict__["_pivot_algebra"] = alg
    return alg


def pivot_product(x: ChainElement, y: ChainElement) -> ChainElement:
    return pivot_algebra(x.complex).product(x, y)


def product(x: ChainElement, y: ChainElement) -> ChainElement:
    """Dispatch to the Taylor or pivot multiplication according to the complex."""
    if x.complex.kind == "taylor":
        return taylor_product(x, y)
    return pivot_product(x, y)


# -- quotient map Taylor -> pivot -----------------------------------------


def project_cell(ideal: MonomialIdeal, cell: IndexSet, s: IndexSet, h: int) -> Dict[IndexSet, Polynomial]:
    """Image of eps_cell in T / span{eps_tau, d eps_tau : tau contains S + h}."""
    if not contains(cell, s):
        return {cell: Polynomial.constant(1, ideal.nvars)}
    if h in cell:
        return {}
    # d eps_{cell+h} = 0 in the quotient; its eps_cell coefficient is sign(h, cell) (a unit)
    big = add(cell, h)
    m_big = ideal.lcm(big)
    lead = sign_elem(h, cell)
    out: Dict[IndexSet, Polynomial] = {}
    for j in s:
        face = remove(big, j)
        c = -lead * sign_elem(j, face)
        out[face] = Polynomial.monomial(monomial_quotient(m_big, ideal.lcm(face)), c)
    return out


def quotient_projection(x: ChainElement, s: Iterable[int], h: int, target: BasedComplex) -> ChainElement:
    """Map an element of the Taylor resolution onto the pivot resolution ``target`` = T_S."""
    s = index_set(s)
    ideal = x.complex.ideal
    if h not in find_gaps(ideal, s):
        raise ValueError(f"{h} is not a gap of {s}")
    if target.pivot != s:
        raise ValueError("target is not the pivot complex T_S")
    out: Dict[IndexSet, Polynomial] = {}
    for cell, v in x.coeffs.items():
        for img, c in project_cell(ideal, cell, s, h).items():
            out[img] = out.get(img, Polynomial()) + v * c
    return ChainElement(target, out)
