"""Prolongation of multidifferential operators to jets and the per-weight
de Rham cohomology of jet cochain complexes.

The prolongation of an operator sends jets of sections to jets of
sections: it is determined by prolong(D)(jet(g_1), ..., jet(g_q)) =
jet(D(g_1, ..., g_q)) together with linearity over the x-polynomials and
continuity.  Concretely the coefficients of D move from x to x + y and
the derivatives move from x to y, so the result commutes with the
canonical connection.

The flat sections of the jet cochain complex are exactly these
prolongations; in positive form degree the complex is exact.  Both
facts are checked per weight slice by exact rank computations.
"""

import itertools

from .fields import GerstError
from .jets import JetModel, JetElement, j_infty
from .compare import JetCochain, _nabla_dir_cochain
from .linalg import echelon_basis


def _binom(n, k):
    from math import comb
    return comb(n, k)


def _y_to_jet_expansion(model, y_mono):
    """Write the y-monomial y^m as an x-combination of jets of
    x-monomials: list of (x-mono, x-mono-under-jet, integer coeff), using
    y = (x + y) - x."""
    terms = [((0,) * model.d, (0,) * model.d, 1)]
    for i, mi in enumerate(y_mono):
        new = []
        for (xm, jm, c) in terms:
            for k in range(mi + 1):
                nx = list(xm)
                nj = list(jm)
                nx[i] += mi - k
                nj[i] += k
                sgn = -1 if (mi - k) % 2 == 1 else 1
                new.append((tuple(nx), tuple(nj), c * sgn * _binom(mi, k)))
        terms = new
    return terms


def _arg_tuples(model, q, w):
    gens = model.module_basis(w)
    return [t for t in itertools.product(gens, repeat=q)
            if sum(model.y_deg(g[2]) for g in t) <= w]


def jet_prolong(model: JetModel, arity: int, algebra_entry) -> JetCochain:
    """Prolong a multidifferential operator on matrix-valued x-polynomials
    to a cochain on the jet module.

    The operator is given through `algebra_entry(args) -> dict`: the value
    on a tuple of arguments ((a, b), x-mono) as a dict
    ((a, b), x-mono) -> scalar.  Values outside the working x-window
    raise a weight overflow.
    """
    m = model
    q = arity
    entries = {}
    x0 = (0,) * m.d

    def jet_of(vec):
        return j_infty(m, {(a, b, mono): v
                           for ((a, b), mono), v in vec.items()})

    for args in _arg_tuples(m, q, m.yw):
        expansions = []
        for (a, b, yi) in args:
            expansions.append([((a, b), xm, jm, c)
                               for (xm, jm, c) in
                               _y_to_jet_expansion(m, m.y_monos[yi])])
        total = m.zero()
        stack = [(0, (), x0, 1)]
        while stack:
            pos, chosen, xacc, cacc = stack.pop()
            if pos == q:
                vec = algebra_entry(chosen)
                if not vec:
                    continue
                for ((a2, b2), mono2), v in vec.items():
                    if sum(mono2) > min(m.xw, m.yw):
                        raise GerstError("prolongation exceeds the "
                                         "working window")
                nxi = m.x_index.get(xacc)
                total = total + jet_of(vec).x_shift(nxi).scale(cacc)
                continue
            for ((a, b), xm, jm, c) in expansions[pos]:
                nx = tuple(p + r for p, r in zip(xacc, xm))
                if sum(nx) > m.xw:
                    raise GerstError("prolongation exceeds the working "
                                     "x-window")
                stack.append((pos + 1, chosen + (((a, b), jm),),
                              nx, cacc * c))
        if total.coeffs:
            entries[args] = total
    return JetCochain(m, q, entries, aw=m.yw)


def symbol_cochain(model: JetModel, a, b, c, dd, k_mono, x_mono) -> JetCochain:
    """Prolonged arity-1 operator with symbol x^m E_ab (d/dx)^k E_cd:
    g -> (x+y)^m E_ab (d/dy)^k(g) E_cd."""
    m = model
    entries = {}
    coeff = j_infty(m, {(r, r, x_mono): m.field.one for r in range(m.n)})
    left = m.basis_element(a, b)
    right = m.basis_element(c, dd)
    for (r, s, yi) in m.module_basis(m.yw):
        el = m.basis_element(r, s, yi=yi)
        for i, ki in enumerate(k_mono):
            for _ in range(ki):
                el = el.partial_y(i)
        val = coeff.mul(left.mul(el).mul(right))
        if val.coeffs:
            entries[((r, s, yi),)] = val
    return JetCochain(m, 1, entries, aw=m.yw)


# -- per-weight de Rham cohomology ------------------------------------------

class DeRhamSlice:
    """Exact cohomology data of one weight slice of the jet cochain
    de Rham complex (one base variable)."""

    def __init__(self, arity, weight, dims, flat_dim, flat_contained):
        self.arity = arity
        self.weight = weight
        self.dims = dims                  # dim H^i per form degree i
        self.flat_dim = flat_dim          # dim of the prolongation span
        self.flat_contained = flat_contained

    def ok(self):
        higher_vanish = all(v == 0 for i, v in enumerate(self.dims) if i > 0)
        return (higher_vanish and self.flat_contained
                and self.dims[0] == self.flat_dim)


def _slice_basis(model, q, weight, arg_win):
    """Basis pieces (args, out-key) with output total weight minus
    argument y-weight equal to `weight`, argument window `arg_win`, and
    outputs anywhere in the working window."""
    out = []
    for args in _arg_tuples(model, q, arg_win):
        aw = sum(model.y_deg(g[2]) for g in args)
        want = weight + aw
        if want < 0:
            continue
        for a in range(model.n):
            for b in range(model.n):
                for xi in range(len(model.x_monos)):
                    xd = model.x_deg(xi)
                    if xd > want:
                        continue
                    for yi in range(len(model.y_monos)):
                        if model.y_deg(yi) == want - xd:
                            out.append((args, (a, b, xi, yi)))
    return out


def _nabla_columns(model, q, src_basis, tgt_index):
    cols = []
    for (args, key) in src_basis:
        D = JetCochain(model, q,
                       {args: JetElement(model, {key: model.field.one})},
                       aw=model.yw)
        nD = _nabla_dir_cochain(D, 0, None)
        col = {}
        for args2, el in nD.entries.items():
            for k2, v in el.coeffs.items():
                j = tgt_index.get((args2, k2))
                if j is not None:
                    col[j] = v
        cols.append(col)
    return cols


def de_rham_slice(model: JetModel, q: int, weight: int,
                  prolong_span) -> DeRhamSlice:
    """Cohomology of 0 -> C_w --nabla--> dx (x) C_{w-1} -> 0 for one
    weight slice, with the flat part compared against the span of
    prolongations of the same weight."""
    if model.d != 1:
        raise GerstError("per-weight de Rham check needs one base variable")
    arg_win = model.y_cap
    if abs(weight) + arg_win > min(model.xw, model.yw):
        raise GerstError("weight slice does not fit the working window")
    field = model.field
    src = _slice_basis(model, q, weight, arg_win)
    tgt = _slice_basis(model, q, weight - 1, arg_win)
    tgt_index = {p: i for i, p in enumerate(tgt)}
    cols = _nabla_columns(model, q, src, tgt_index)
    rank = len(echelon_basis(cols, len(tgt), field))
    h0 = len(src) - rank
    h1 = len(tgt) - rank
    src_index = {p: i for i, p in enumerate(src)}
    flat_cols = []
    flat_contained = True
    for coch in prolong_span:
        col = {}
        for args, el in coch.entries.items():
            if sum(model.y_deg(g[2]) for g in args) > arg_win:
                continue
            for k2, v in el.coeffs.items():
                j = src_index.get((args, k2))
                if j is None:
                    flat_contained = False
                else:
                    col[j] = v
        if col:
            flat_cols.append(col)
        nD = _nabla_dir_cochain(coch, 0, None)
        for args2, el in nD.entries.items():
            if sum(model.y_deg(g[2]) for g in args2) > arg_win:
                continue
            if not el.is_zero():
                flat_contained = False
    flat_dim = len(echelon_basis(flat_cols, len(src), field))
    return DeRhamSlice(q, weight, [h0, h1], flat_dim, flat_contained)


def prolongation_basis(model: JetModel, q: int, weight: int):
    """Spanning prolongations of weight-homogeneous operators: arity 0
    gives jets of matrix-valued monomials; arity 1 gives the symbols
    x^m E_ab (d/dx)^k E_cd with |m| - |k| = weight."""
    m = model
    cap = min(m.xw, m.yw)
    out = []
    if q == 0:
        if not (0 <= weight <= cap):
            return out
        for a in range(m.n):
            for b in range(m.n):
                for mono in m.x_monos:
                    if sum(mono) != weight:
                        continue
                    el = j_infty(m, {(a, b, mono): m.field.one})
                    out.append(JetCochain(m, 0, {(): el}, aw=m.yw))
        return out
    if q != 1:
        raise GerstError("prolongation bases are enumerated for arities "
                         "0 and 1")
    for a in range(m.n):
        for b in range(m.n):
            for c in range(m.n):
                for dd in range(m.n):
                    for xm in m.x_monos:
                        if sum(xm) > cap:
                            continue
                        for km in m.y_monos:
                            if sum(km) > m.y_cap:
                                continue
                            if sum(xm) - sum(km) != weight:
                                continue
                            coch = symbol_cochain(m, a, b, c, dd, km, xm)
                            if coch.entries:
                                out.append(coch)
    return out


def de_rham_report(model: JetModel, q_max: int, weight_cap: int):
    """Per-weight, per-arity cohomology of the jet cochain complex with
    the canonical connection: higher cohomology vanishes and the flat part
    is spanned by prolongations."""
    slices = {}
    for q in range(q_max + 1):
        for w in range(-weight_cap, weight_cap + 1):
            span = prolongation_basis(model, q, w)
            slices[(q, w)] = de_rham_slice(model, q, w, span)
    return slices
