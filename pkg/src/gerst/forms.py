"""Polynomial differential forms, connections nabla = d + ad(gamma), curvature.

Forms live over a weight-capped polynomial algebra (or a matrix algebra over
one); weight caps are enforced by error, never truncation, so the exterior
derivative and wedge product are exact wherever they are defined.

A form monomial is a sorted tuple of variable indices (dx_{i1} ^ ... ^
dx_{ip}); coefficients are sparse vectors over the value algebra.
"""

from __future__ import annotations

import itertools

from .algebra import Algebra, WeightOverflowError
from .fields import GerstError
from .linalg import SparseMatrix


def wedge_sign(I, J):
    """Sign and sorted result of dx_I ^ dx_J, or None if they overlap."""
    if set(I) & set(J):
        return None
    merged = list(I) + list(J)
    sign = 1
    # bubble sort counting transpositions
    out = []
    for v in merged:
        k = len(out)
        while k > 0 and out[k - 1] > v:
            k -= 1
            sign = -sign
        out.insert(k, v)
    return sign, tuple(out)


def form_indices(d: int, degree: int):
    return list(itertools.combinations(range(d), degree))


def _poly_parts(A: Algebra):
    """(matrix size, base polynomial algebra) of A; size 1 if A itself is
    the polynomial algebra."""
    base = getattr(A, "matrix_base", None)
    if base is not None:
        return A.matrix_size, base
    return 1, A


def partial_vec(A: Algebra, i: int, vec: dict) -> dict:
    """d/dx_i on a sparse vector over a polynomial (or matrix-over-
    polynomial) algebra."""
    n, base = _poly_parts(A)
    monomials = getattr(base, "monomials", None)
    if monomials is None:
        raise GerstError("no polynomial structure to differentiate")
    out = {}
    for k, c in vec.items():
        block, r = divmod(k, base.dim)
        m = monomials[r]
        if m[i] == 0:
            continue
        m2 = list(m)
        m2[i] -= 1
        k2 = block * base.dim + base.monomial_index[tuple(m2)]
        nv = out.get(k2, A.field.zero) + c * A.field.of(m[i])
        if nv == A.field.zero:
            out.pop(k2, None)
        else:
            out[k2] = nv
    return out


class PolyForm:
    """Differential form with coefficients in a value algebra.

    terms: dict form-index tuple -> sparse coefficient vector.  Mixed
    degrees are allowed; degree-homogeneous pieces can be selected.
    """

    def __init__(self, algebra: Algebra, d: int, terms=None):
        self.algebra = algebra
        self.d = d
        self.terms = {}
        if terms:
            for I, vec in terms.items():
                I = tuple(I)
                if len(I) > d:
                    continue
                clean = {k: v for k, v in vec.items()
                         if v != algebra.field.zero}
                if clean:
                    self.terms[I] = clean

    def is_zero(self) -> bool:
        return not self.terms

    def equals(self, other: "PolyForm") -> bool:
        return (self - other).is_zero()

    def coefficient(self, I) -> dict:
        return dict(self.terms.get(tuple(I), {}))

    def _merged(self, other, sign):
        zero = self.algebra.field.zero
        terms = {I: dict(vec) for I, vec in self.terms.items()}
        for I, vec in other.terms.items():
            tgt = terms.setdefault(I, {})
            for k, v in vec.items():
                nv = tgt.get(k, zero) + sign * v
                if nv == zero:
                    tgt.pop(k, None)
                else:
                    tgt[k] = nv
        return PolyForm(self.algebra, self.d, terms)

    def __add__(self, other):
        return self._merged(other, self.algebra.field.one)

    def __sub__(self, other):
        return self._merged(other, -self.algebra.field.one)

    def scale(self, c):
        c = self.algebra.field.of(c)
        return PolyForm(self.algebra, self.d,
                        {I: {k: c * v for k, v in vec.items()}
                         for I, vec in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def wedge(self, other: "PolyForm") -> "PolyForm":
        A = self.algebra
        terms = {}
        for I, u in self.terms.items():
            for J, v in other.terms.items():
                sgn_K = wedge_sign(I, J)
                if sgn_K is None:
                    continue
                sgn, K = sgn_K
                tgt = terms.setdefault(K, {})
                for i, ci in u.items():
                    for j, cj in v.items():
                        c = ci * cj
                        if sgn < 0:
                            c = -c
                        for k, w in A.mul_basis(i, j).items():
                            nv = tgt.get(k, A.field.zero) + c * w
                            if nv == A.field.zero:
                                tgt.pop(k, None)
                            else:
                                tgt[k] = nv
        return PolyForm(A, self.d, terms)

    def bracket(self, other: "PolyForm") -> "PolyForm":
        """Graded commutator [u, v] = u^v - (-1)^{|u||v|} v^u for
        homogeneous form degrees (computed termwise)."""
        A = self.algebra
        result = self.wedge(other)
        for J, v in other.terms.items():
            for I, u in self.terms.items():
                sgn_K = wedge_sign(J, I)
                if sgn_K is None:
                    continue
                sgn, K = sgn_K
                if (len(I) * len(J)) % 2 == 0:
                    sgn = -sgn
                piece = {}
                for j, cj in v.items():
                    for i, ci in u.items():
                        c = cj * ci
                        if sgn < 0:
                            c = -c
                        for k, w in A.mul_basis(j, i).items():
                            nv = piece.get(k, A.field.zero) + c * w
                            if nv == A.field.zero:
                                piece.pop(k, None)
                            else:
                                piece[k] = nv
                result = result + PolyForm(A, self.d, {K: piece})
        return result

    def de_rham_d(self) -> "PolyForm":
        """d(omega) = sum_i dx_i ^ (d/dx_i omega)."""
        A = self.algebra
        terms = {}
        for I, vec in self.terms.items():
            for i in range(self.d):
                dv = partial_vec(A, i, vec)
                if not dv:
                    continue
                sgn_K = wedge_sign((i,), I)
                if sgn_K is None:
                    continue
                sgn, K = sgn_K
                tgt = terms.setdefault(K, {})
                for k, v in dv.items():
                    nv = tgt.get(k, A.field.zero) + (v if sgn > 0 else -v)
                    if nv == A.field.zero:
                        tgt.pop(k, None)
                    else:
                        tgt[k] = nv
        return PolyForm(A, self.d, terms)

    def __repr__(self):
        return "PolyForm(d=%d, indices=%s)" % (self.d, sorted(self.terms))


def scalar_form(A: Algebra, d: int, I, vec) -> PolyForm:
    return PolyForm(A, d, {tuple(I): dict(vec)})


def trace_vec(A: Algebra, vec: dict) -> dict:
    """Trace of a matrix-over-polynomial element (a base-algebra vector)."""
    n, base = _poly_parts(A)
    out = {}
    for k, c in vec.items():
        block, r = divmod(k, base.dim)
        a, b = divmod(block, n)
        if a != b:
            continue
        nv = out.get(r, A.field.zero) + c
        if nv == A.field.zero:
            out.pop(r, None)
        else:
            out[r] = nv
    return out


class Connection:
    """nabla = d + ad(gamma) on a matrix algebra over a polynomial base.

    gamma is a degree-1 traceless matrix-valued form; nabla acts on
    algebra-valued forms and satisfies the Leibniz rule by construction
    (verified in tests, not assumed).
    """

    def __init__(self, A: Algebra, d: int, gamma: PolyForm):
        self.algebra = A
        self.d = d
        self.gamma = gamma
        for I in gamma.terms:
            if len(I) != 1:
                raise GerstError("connection form must have degree 1")
            if trace_vec(A, gamma.terms[I]):
                raise GerstError("connection form must be traceless")

    def apply(self, omega: PolyForm) -> PolyForm:
        """nabla(omega) = d omega + [gamma, omega] (graded commutator)."""
        return omega.de_rham_d() + self.gamma.bracket(omega)

    def apply_element(self, vec: dict) -> PolyForm:
        return self.apply(PolyForm(self.algebra, self.d, {(): vec}))

    def curvature(self) -> PolyForm:
        """theta = d gamma + gamma ^ gamma; satisfies ad(theta) = nabla^2."""
        return self.gamma.de_rham_d() + self.gamma.wedge(self.gamma)

    def curvature_check(self):
        """First basis element where ad(theta) differs from nabla^2,
        or None when they agree everywhere."""
        A = self.algebra
        theta = self.curvature()
        for k in range(A.dim):
            e = PolyForm(A, self.d, {(): {k: A.field.one}})
            try:
                lhs = theta.bracket(e)
                rhs = self.apply(self.apply(e))
            except WeightOverflowError:
                continue
            if not lhs.equals(rhs):
                return k
        return None

    def leibniz_check(self):
        """First basis pair violating nabla(ab) = nabla(a)b + a nabla(b),
        or None."""
        A = self.algebra
        for i in range(A.dim):
            for j in range(A.dim):
                try:
                    prod = A.mul_basis(i, j)
                    ei = PolyForm(A, self.d, {(): {i: A.field.one}})
                    ej = PolyForm(A, self.d, {(): {j: A.field.one}})
                    lhs = self.apply(PolyForm(A, self.d, {(): prod}))
                    rhs = self.apply(ei).wedge(ej) + ei.wedge(self.apply(ej))
                except WeightOverflowError:
                    continue
                if not lhs.equals(rhs):
                    return (i, j)
        return None
