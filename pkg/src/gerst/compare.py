"""Form-valued jet cochains: the graded Lie algebra where the operator
identities live, plus contraction and twist operators.

An element of the graded space is a sum of homogeneous pieces
(form index I, cochain arity q).  Cochains on Mat_n (x) k[x,y] are linear
over the x-polynomials, so they are stored by their values on the module
generators (matrix unit, y-monomial); outputs are full jet elements.

Sign conventions, fixed here and pinned by tests:

    [w (x) D, e (x) E] = (-1)^{|e| (q_D - 1)} (w ^ e) (x) [D, E]
    delta (w (x) D)   = (-1)^{|w|} w (x) [mu, D]
    iota_H            = -[H, .]  for H of cochain arity 0
    ad H              = (-1)^{|I|+1} (w ^ .) (x) (H^ o . - . o H^)
                        per form component I (x) h, with H^(m) = [h, m]

The minus on iota and the (-1)^{|I|+1} on ad are forced together: delta
and the total connection are degree-1 derivations of the graded bracket,
so conjugation identities reduce to bracket identities, and this is the
unique decoration under which all four contraction identities
([delta, iota_H] = ad H and friends) hold on the nose while the
form-level bracket of two 1-forms stays the plain graded commutator.
The graded commutator of operators is A o B - (-1)^{|A||B|} B o A with
|iota_H| = |I_H| - 1 and |ad H| = |I_H|.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .fields import GerstError
from .forms import wedge_sign
from .jets import JetElement, JetForm, JetModel, _cmin


def _wmin(*ws):
    vals = [w for w in ws if w is not None]
    return min(vals) if vals else None


class JetCochain:
    """Cochain on Mat_n (x) k[x, y], linear over the x-polynomials.

    entries: dict (tuple of module ids) -> JetElement.  aw is the argument
    window: values are claimed for argument tuples of total y-degree <= aw.
    """

    def __init__(self, model: JetModel, arity: int, entries=None, aw=None):
        self.model = model
        self.arity = arity
        self.entries = {}
        if entries:
            for args, el in entries.items():
                if el.coeffs:
                    self.entries[tuple(args)] = el
        self.aw = model.y_cap if aw is None else aw
        # lazy indices (entries are frozen after construction)
        self._slot_index = None
        self._out_index = None
        self._y_shift = None

    def arg_weight(self, args) -> int:
        return sum(self.model.y_deg(m[2]) for m in args)

    def in_window(self, args) -> bool:
        return self.aw is None or self.arg_weight(args) <= self.aw

    def value(self, args) -> JetElement:
        el = self.entries.get(tuple(args))
        return el if el is not None else self.model.zero()

    def y_shift(self) -> int:
        """Max output y-degree minus argument y-degree over all entries."""
        if self._y_shift is None:
            best = 0
            for args, el in self.entries.items():
                base = self.arg_weight(args)
                for (_, _, _, yi) in el.coeffs:
                    best = max(best, self.model.y_deg(yi) - base)
            self._y_shift = best
        return self._y_shift

    def is_zero(self) -> bool:
        return all(not self.in_window(args) or el.is_zero()
                   for args, el in self.entries.items())

    def equals(self, other: "JetCochain") -> bool:
        if self.arity != other.arity:
            return self.is_zero() and other.is_zero()
        aw = _wmin(self.aw, other.aw)
        for args in set(self.entries) | set(other.entries):
            if aw is not None and self.arg_weight(args) > aw:
                continue
            if not self.value(args).equals(other.value(args)):
                return False
        return True

    def _merged(self, other, sign):
        if self.arity != other.arity:
            if not other.entries:
                other = JetCochain(self.model, self.arity, {}, aw=other.aw)
            elif not self.entries:
                self = JetCochain(other.model, other.arity, {}, aw=self.aw)
            else:
                raise GerstError("arity mismatch: %d vs %d"
                                 % (self.arity, other.arity))
        entries = dict(self.entries)
        for args, el in other.entries.items():
            add = el if sign > 0 else -el
            entries[args] = entries[args] + add if args in entries else add
        return JetCochain(self.model, self.arity, entries,
                          aw=_wmin(self.aw, other.aw))

    def __add__(self, other):
        return self._merged(other, 1)

    def __sub__(self, other):
        return self._merged(other, -1)

    def scale(self, c):
        return JetCochain(self.model, self.arity,
                          {args: el.scale(c)
                           for args, el in self.entries.items()}, aw=self.aw)

    def __neg__(self):
        return self.scale(-1)

    def compose(self, other: "JetCochain") -> "JetCochain":
        """Insertion sum D o E with the table-cochain sign convention."""
        D, E = self, other
        m, n = D.arity, E.arity
        model = self.model
        if m == 0:
            return JetCochain(model, max(m + n - 1, 0), {},
                              aw=_wmin(D.aw, E.aw))
        slot_index = D._slot_index
        if slot_index is None:
            slot_index = {}
            for d_args in D.entries:
                for pos in range(m):
                    slot_index.setdefault(d_args[pos], []).append(
                        (d_args, pos))
            D._slot_index = slot_index
        out_index = E._out_index
        if out_index is None:
            out_index = {}
            for e_args, e_out in E.entries.items():
                for (mid, xi, c) in e_out.module_expand():
                    out_index.setdefault(mid, []).append((e_args, xi, c))
            E._out_index = out_index
        out = {}
        sign_flip = (n - 1) % 2 == 1
        small = (slot_index if len(slot_index) <= len(out_index)
                 else out_index)
        for mid in small:
            if mid not in slot_index or mid not in out_index:
                continue
            for (e_args, xi, c) in out_index[mid]:
                for (d_args, pos) in slot_index[mid]:
                    piece = D.entries[d_args].x_shift(xi).scale(c)
                    if sign_flip and pos % 2 == 1:
                        piece = -piece
                    args = d_args[:pos] + e_args + d_args[pos + 1:]
                    out[args] = out[args] + piece if args in out else piece
        aw = _wmin(E.aw, None if D.aw is None else D.aw - E.y_shift())
        return JetCochain(model, m + n - 1, out, aw=aw)

    def bracket(self, other: "JetCochain") -> "JetCochain":
        de = self.compose(other)
        ed = other.compose(self)
        if ((self.arity - 1) * (other.arity - 1)) % 2 == 1:
            return de + ed
        return de - ed

    def delta(self) -> "JetCochain":
        return mu_jet(self.model).bracket(self)

    def insert_eval(self, args, pos, elem: JetElement) -> JetElement:
        """Value at args with the module id in slot pos replaced by a
        general element, expanded by linearity over the x-polynomials."""
        out = self.model.zero()
        for (mid, xi, c) in elem.module_expand():
            full = args[:pos] + (mid,) + args[pos + 1:]
            el = self.entries.get(full)
            if el is not None:
                out = out + el.x_shift(xi).scale(c)
            out.cx = _cmin(out.cx, elem.cx)
            out.cy = _cmin(out.cy, elem.cy)
        return out

    def eval_general(self, elems) -> JetElement:
        """Full multilinear evaluation on general elements."""
        model = self.model
        out = model.zero()
        expansions = [e.module_expand() for e in elems]
        for combo in itertools.product(*expansions):
            args = tuple(part[0] for part in combo)
            el = self.entries.get(args)
            if el is None:
                continue
            piece = el
            coeff = model.field.one
            for (_, xi, c) in combo:
                piece = piece.x_shift(xi)
                coeff = coeff * c
            out = out + piece.scale(coeff)
        for e in elems:
            out.cx = _cmin(out.cx, e.cx)
            out.cy = _cmin(out.cy, e.cy)
        return out

    def normalized(self) -> bool:
        """Vanishes whenever an argument is the unit direction (scalar
        y-monomial 1 with matching matrix units handled at the caller)."""
        unit_ids = {(a, a, 0) for a in range(self.model.n)}
        return all(not (set(args) & unit_ids) or el.is_zero()
                   for args, el in self.entries.items())

    def __repr__(self):
        return "JetCochain(arity=%d, %d entries, aw=%s)" % (
            self.arity, len(self.entries), self.aw)


_mu_cache = {}


def mu_jet(model: JetModel) -> JetCochain:
    """Multiplication cochain of Mat_n (x) k[x,y] on module generators."""
    key = id(model)
    if key not in _mu_cache:
        entries = {}
        for (a, b, yi) in model.module_basis(model.yw):
            for (c, d, yj) in model.module_basis(model.yw):
                if b != c:
                    continue
                ny = tuple(p + q for p, q in
                           zip(model.y_monos[yi], model.y_monos[yj]))
                if sum(ny) > model.yw:
                    continue
                out = JetElement(model, {(a, d, 0, model.y_index[ny]):
                                         model.field.one})
                entries[((a, b, yi), (c, d, yj))] = out
        _mu_cache[key] = JetCochain(model, 2, entries, aw=model.yw)
    return _mu_cache[key]


def element_jet_cochain(model: JetModel, e: JetElement) -> JetCochain:
    return JetCochain(model, 0, {(): e}, aw=model.yw)


def adhat_cochain(model: JetModel, h: JetElement) -> JetCochain:
    """The arity-1 cochain m -> [h, m]."""
    entries = {}
    for mid in model.module_basis(model.yw):
        el = h.commutator(model.basis_element(mid[0], mid[1], yi=mid[2]))
        if el.coeffs:
            entries[(mid,)] = el
    return JetCochain(model, 1, entries, aw=model.yw)


# -- the graded space: form index (x) cochain -------------------------------


class Graded:
    """Sum of homogeneous pieces (form index I, arity q) -> JetCochain."""

    def __init__(self, model: JetModel, terms=None):
        self.model = model
        self.terms = {}
        if terms:
            for (I, q), coch in terms.items():
                if len(I) > model.d:
                    continue
                if coch.entries:
                    self.terms[(tuple(I), q)] = coch

    @classmethod
    def piece(cls, model, I, coch: JetCochain) -> "Graded":
        return cls(model, {(tuple(I), coch.arity): coch})

    @classmethod
    def from_form(cls, form: JetForm) -> "Graded":
        cached = getattr(form, "_graded_cache", None)
        if cached is not None:
            return cached
        out = cls(form.model,
                  {(I, 0): element_jet_cochain(form.model, el)
                   for I, el in form.terms.items()})
        form._graded_cache = out
        return out

    @classmethod
    def adhat_from_form(cls, form: JetForm) -> "Graded":
        cached = getattr(form, "_adhat_cache", None)
        if cached is not None:
            return cached
        terms = {}
        for I, el in form.terms.items():
            coch = adhat_cochain(form.model, el)
            if len(I) % 2 == 0:
                coch = -coch
            terms[(I, 1)] = coch
        out = cls(form.model, terms)
        form._adhat_cache = out
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.terms.values())

    def equals(self, other: "Graded") -> bool:
        zero = JetCochain(self.model, 0, {})
        for key in set(self.terms) | set(other.terms):
            a = self.terms.get(key)
            b = other.terms.get(key)
            if a is None:
                if not b.is_zero():
                    return False
            elif b is None:
                if not a.is_zero():
                    return False
            elif not a.equals(b):
                return False
        return True

    def __add__(self, other):
        terms = dict(self.terms)
        for key, coch in other.terms.items():
            terms[key] = terms[key] + coch if key in terms else coch
        return Graded(self.model, terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Graded(self.model,
                      {key: coch.scale(c)
                       for key, coch in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def gbracket(self, other: "Graded") -> "Graded":
        out = Graded(self.model, {})
        for (I, qd), D in self.terms.items():
            for (J, qe), E in other.terms.items():
                sgn_K = wedge_sign(I, J)
                if sgn_K is None:
                    continue
                sgn, K = sgn_K
                if (len(J) * (qd - 1)) % 2 == 1:
                    sgn = -sgn
                br = D.bracket(E)
                if sgn < 0:
                    br = -br
                out = out + Graded.piece(self.model, K, br)
        return out

    def gdelta(self) -> "Graded":
        out = Graded(self.model, {})
        for (I, q), D in self.terms.items():
            dD = D.delta()
            if len(I) % 2 == 1:
                dD = -dD
            out = out + Graded(self.model, {(I, q + 1): dD})
        return out

    def total_degrees(self):
        return sorted({len(I) + q - 1 for (I, q) in self.terms})

    def __repr__(self):
        return "Graded(%s)" % sorted(self.terms.keys())


def iota(H: JetForm, S: Graded) -> Graded:
    """Contraction by an algebra-valued form: minus the graded bracket
    with H viewed as an arity-0 element (sign pinned by the contraction
    identities, see module docstring)."""
    return Graded.from_form(H).gbracket(S).scale(-1)


def ad_op(H: JetForm, S: Graded) -> Graded:
    """Action of H through algebra commutators on values and arguments,
    with the per-degree sign that makes [delta, iota_H] = ad H exact."""
    return Graded.adhat_from_form(H).gbracket(S)


def graded_nabla(S: Graded, gamma: JetForm) -> Graded:
    """The total connection on form-valued cochains: termwise derivative of
    outputs minus insertion of the derivative of each argument, wedged on
    the left."""
    model = S.model
    out = Graded(model, {})
    for (I, q), D in S.terms.items():
        for i in range(model.d):
            sgn_K = wedge_sign((i,), I)
            if sgn_K is None:
                continue
            sgn, K = sgn_K
            piece = _nabla_dir_cochain(D, i, gamma)
            if piece.entries:
                if sgn < 0:
                    piece = -piece
                out = out + Graded(model, {(K, q): piece})
    return out


def _nabla_rev(model: JetModel, i: int, gamma) -> dict:
    """Reverse index of the connection direction on module generators:
    target id -> [(source id, x power, coeff)].  Cached on the gamma form
    (or the model when gamma is None); inputs are frozen after creation."""
    holder = gamma if gamma is not None else model
    cache = getattr(holder, "_nabla_rev_cache", None)
    if cache is None:
        cache = {}
        holder._nabla_rev_cache = cache
    if i not in cache:
        g = gamma.coefficient((i,)) if gamma is not None else model.zero()
        rev = {}
        for mid in model.module_basis(model.yw):
            marg = model.basis_element(mid[0], mid[1], yi=mid[2])
            darg = marg.nabla_can(i)
            if g.coeffs:
                darg = darg + g.commutator(marg)
            for (tmid, xi, c) in darg.module_expand():
                rev.setdefault(tmid, []).append((mid, xi, c))
        cache[i] = rev
    return cache[i]


def _nabla_dir_cochain(D: JetCochain, i: int, gamma: JetForm) -> JetCochain:
    model = D.model
    g = gamma.coefficient((i,)) if gamma is not None else model.zero()
    # argument-insertion terms are pushed from existing entries to every
    # tuple that maps into them under the connection
    rev = _nabla_rev(model, i, gamma)
    entries = {}

    def acc(args, el):
        if el.coeffs or el.cx is not None or el.cy is not None:
            entries[args] = entries[args] + el if args in entries else el

    for args, el in D.entries.items():
        piece = el.nabla_can(i)
        if g.coeffs:
            piece = piece + g.commutator(el)
        acc(args, piece)
        for pos, mid in enumerate(args):
            for (src, xi, c) in rev.get(mid, ()):
                args2 = args[:pos] + (src,) + args[pos + 1:]
                acc(args2, -el.x_shift(xi).scale(c))
    return JetCochain(model, D.arity, entries, aw=D.aw)


def exp_iota(F: JetForm, S: Graded) -> Graded:
    """exp(iota_F) applied to S: finite since F has form degree >= 1."""
    for I in F.terms:
        if len(I) == 0:
            raise GerstError("twist form must have degree >= 1")
    out = S
    term = S
    k = 0
    from math import factorial
    while True:
        term = iota(F, term)
        k += 1
        if not any(c.entries for c in term.terms.values()):
            break
        # window-zero terms still shrink claim windows, so merge first
        out = out + term.scale(Fraction(1, factorial(k)))
        if term.is_zero() or k > F.model.d:
            break
    return out
