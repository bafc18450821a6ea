"""Formal deformations: Maurer-Cartan elements, gauge action, star products.

A deformation parameter lives in t * C(A)[t] / (t^N): a polynomial in a
central formal variable t whose coefficients are cochains, truncated at
order N.  The Maurer-Cartan residual of lambda is

    R(lambda) = delta lambda + 1/2 [lambda, lambda]

and lambda deforms the product a * b = ab + lambda(a, b) associatively
exactly when R(lambda) = 0.  The gauge action of an arity-1 parameter X is

    e^X(lambda) = sum_n ad_X^n(lambda) / n!  -  sum_n ad_X^n(delta X) / (n+1)!

which is a finite sum because X has t-order at least 1.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import Algebra, WeightOverflowError
from .cochains import Cochain, CochainSpace, _bmin, random_cochain
from .fields import GerstError


class TCochain:
    """Cochain-valued polynomial in t, truncated mod t^N."""

    def __init__(self, algebra: Algebra, arity: int, N: int, terms=None):
        self.algebra = algebra
        self.arity = arity
        self.N = N
        self.terms = {}
        if terms:
            for k, coch in terms.items():
                if k < 0:
                    raise GerstError("negative t-power")
                if k < N and not coch.is_zero():
                    self.terms[k] = coch

    def term(self, k: int) -> Cochain:
        coch = self.terms.get(k)
        if coch is None:
            return Cochain(self.algebra, self.arity, {})
        return coch

    def t_order(self) -> int:
        """Order of the lowest nonzero term (N if identically zero)."""
        return min(self.terms.keys(), default=self.N)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.terms.values())

    def equals(self, other: "TCochain") -> bool:
        if self.N != other.N:
            raise GerstError("mixed truncation orders")
        return all(self.term(k).equals(other.term(k)) for k in range(self.N))

    def _check(self, other):
        if self.N != other.N:
            raise GerstError("mixed truncation orders")
        return other

    def __add__(self, other):
        o = self._check(other)
        terms = {}
        for k in set(self.terms) | set(o.terms):
            terms[k] = self.term(k) + o.term(k)
        return TCochain(self.algebra, max(self.arity, o.arity), self.N, terms)

    def __sub__(self, other):
        return self + o_scale(other, -1)

    def scale(self, c):
        return TCochain(self.algebra, self.arity, self.N,
                        {k: coch.scale(c) for k, coch in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def shift(self, power: int) -> "TCochain":
        """Multiply by t^power."""
        return TCochain(self.algebra, self.arity, self.N,
                        {k + power: coch for k, coch in self.terms.items()
                         if k + power < self.N})

    def bracket(self, other: "TCochain") -> "TCochain":
        o = self._check(other)
        terms = {}
        for p, cp in self.terms.items():
            for q, cq in o.terms.items():
                if p + q >= self.N:
                    continue
                br = cp.bracket(cq)
                terms[p + q] = terms[p + q] + br if p + q in terms else br
        arity = max(self.arity + o.arity - 1, 0)
        return TCochain(self.algebra, arity, self.N, terms)

    def delta(self) -> "TCochain":
        return TCochain(self.algebra, self.arity + 1, self.N,
                        {k: coch.delta() for k, coch in self.terms.items()})

    def bound(self):
        return _bmin(*(coch.bound for coch in self.terms.values())) \
            if self.terms else None

    def __repr__(self):
        return "TCochain(arity=%d, N=%d, orders=%s)" % (
            self.arity, self.N, sorted(self.terms))


def o_scale(x: TCochain, c) -> TCochain:
    return x.scale(c)


def t_cochain(coch: Cochain, power: int, N: int) -> TCochain:
    """The single term t^power * coch."""
    terms = {power: coch} if power < N else {}
    return TCochain(coch.algebra, coch.arity, N, terms)


def mc_residual(lam: TCochain) -> TCochain:
    """delta lambda + 1/2 [lambda, lambda]."""
    half = Fraction(1, 2)
    return lam.delta() + lam.bracket(lam).scale(half)


def gauge_act(X: TCochain, lam: TCochain) -> TCochain:
    """Action of exp(X) on a deformation parameter (finite sum mod t^N)."""
    if X.arity != 1:
        raise GerstError("gauge parameter must have arity 1")
    if X.t_order() < 1:
        raise GerstError("gauge parameter must have t-order >= 1")
    N = X.N
    out = TCochain(lam.algebra, lam.arity, N)
    term = lam
    n = 0
    fact = 1
    while not term.is_zero() and n < N:
        out = out + term.scale(Fraction(1, fact))
        term = X.bracket(term)
        n += 1
        fact *= n
    dX = X.delta()
    term = dX
    n = 0
    fact = 1
    while not term.is_zero() and n < N:
        out = out - term.scale(Fraction(1, fact * (n + 1)))
        term = X.bracket(term)
        n += 1
        fact *= n
    return out


# -- star products (element-level route, independent of the bracket) --------


class StarProduct:
    """The product a * b = ab + lambda(a, b) on A[t]/(t^N).

    Elements are dicts t-power -> sparse coefficient vector.  This is the
    element-level route: products are computed through the multiplication
    table and the raw values of lambda, with no operadic composition, so it
    can cross-check the Maurer-Cartan residual.
    """

    def __init__(self, A: Algebra, lam: TCochain):
        if lam.arity != 2:
            raise GerstError("deformation parameter must have arity 2")
        if lam.t_order() < 1:
            raise GerstError("deformation parameter must have t-order >= 1")
        self.algebra = A
        self.lam = lam
        self.N = lam.N

    def basis(self, i: int, power=0) -> dict:
        return {power: {i: self.algebra.field.one}}

    def star(self, u: dict, v: dict) -> dict:
        A = self.algebra
        field = A.field
        out = {}

        def acc(power, vec, c):
            if power >= self.N:
                return
            tgt = out.setdefault(power, {})
            for k, w in vec.items():
                nv = tgt.get(k, field.zero) + c * w
                if nv == field.zero:
                    tgt.pop(k, None)
                else:
                    tgt[k] = nv

        for p, up in u.items():
            for q, vq in v.items():
                if p + q >= self.N:
                    continue
                for i, ci in up.items():
                    for j, cj in vq.items():
                        c = ci * cj
                        acc(p + q, A.mul_basis(i, j), c)
                        for r, lam_r in self.lam.terms.items():
                            if p + q + r < self.N:
                                acc(p + q + r, lam_r.value((i, j)), c)
        return {p: vec for p, vec in out.items() if vec}

    def defect(self, i: int, j: int, k: int) -> dict:
        """(e_i * e_j) * e_k - e_i * (e_j * e_k)."""
        left = self.star(self.star(self.basis(i), self.basis(j)), self.basis(k))
        right = self.star(self.basis(i), self.star(self.basis(j), self.basis(k)))
        field = self.algebra.field
        out = {}
        for p in set(left) | set(right):
            vec = dict(left.get(p, {}))
            for t, v in right.get(p, {}).items():
                nv = vec.get(t, field.zero) - v
                if nv == field.zero:
                    vec.pop(t, None)
                else:
                    vec[t] = nv
            if vec:
                out[p] = vec
        return out

    def defect_cochain(self, bound=None) -> TCochain:
        """The associativity defect as an arity-3 t-cochain.

        Claimed on argument triples of total weight <= bound (every product
        along the two parenthesizations then stays under the weight cap).
        """
        A = self.algebra
        if bound is None:
            bound = A.weight_cap
        terms = {}
        for i in range(A.dim):
            for j in range(A.dim):
                for k in range(A.dim):
                    if bound is not None:
                        w = A.weight_of(i) + A.weight_of(j) + A.weight_of(k)
                        if w > bound:
                            continue
                    d = self.defect(i, j, k)
                    for p, vec in d.items():
                        terms.setdefault(p, {})[(i, j, k)] = vec
        return TCochain(A, 3, self.N,
                        {p: Cochain(A, 3, entries, bound=bound)
                         for p, entries in terms.items()})


def defect_matches_residual(A: Algebra, lam: TCochain):
    """Compare the element-level associativity defect against the residual.

    Returns None when they agree on the shared claim window, else a witness
    (t-power, first differing entry).
    """
    res = mc_residual(lam)
    bound = res.bound()
    defect = StarProduct(A, lam).defect_cochain(bound=bound)
    for p in range(lam.N):
        a, b = defect.term(p), res.term(p)
        if not a.equals(b):
            return (p, a.max_defect(b))
    return None


# -- gauge equivalence, order by order --------------------------------------


def random_gauge(A: Algebra, rng, N: int, n_entries=4) -> TCochain:
    terms = {k: random_cochain(A, 1, rng, n_entries) for k in range(1, N)}
    return TCochain(A, 1, N, terms)


def trivial_deformation(A: Algebra, X: TCochain) -> TCochain:
    """The gauge orbit of zero through X: always Maurer-Cartan."""
    zero = TCochain(A, 2, X.N)
    return gauge_act(X, zero)


def gauge_recover(A: Algebra, base: TCochain, target: TCochain):
    """Find X with e^X(base) = target, order by order.

    Returns (X, None) on success or (partial X, obstruction) where the
    obstruction is the first t-coefficient that is not a coboundary.
    Both inputs must be Maurer-Cartan mod t^N for solvability to be a
    cohomological question; this routine just solves the linear steps.
    """
    N = base.N
    space1 = CochainSpace(A, 1)
    space2 = CochainSpace(A, 2)
    dmat = space1.differential_matrix()
    X = TCochain(A, 1, N)
    for k in range(1, N):
        current = gauge_act(X, base) if not X.is_zero() else base
        c_k = current.term(k) - target.term(k)
        if c_k.is_zero():
            continue
        sol = dmat.solve(space2.vectorize(c_k))
        if sol is None:
            return X, (k, c_k)
        X = X + t_cochain(space1.cochain(sol), k, N)
    return X, None


# -- transport along the cotrace embedding -----------------------------------


def mc_transport(lam: TCochain, M: Algebra) -> TCochain:
    """Transport a deformation parameter over a commutative base R to the
    matrix algebra M = Mat_n(R), applying the cotrace embedding per t-order.

    The cotrace is a chain map compatible with brackets, so residuals map
    to residuals; the output's residual is still verified by callers, not
    assumed.  Each coefficient cochain must be normalized (the cotrace is
    only defined on the normalized complex).
    """
    from .cochains import cotrace_cochain, is_normalized
    for k, coch in lam.terms.items():
        if coch.arity > 0 and not is_normalized(coch):
            raise GerstError("transport needs normalized coefficients "
                             "(t^%d term is not)" % k)
    return TCochain(M, lam.arity, lam.N,
                    {k: cotrace_cochain(coch, M)
                     for k, coch in lam.terms.items()})


def star_table(sp: StarProduct) -> list:
    """Deterministic sparse star-product table: entries
    [i, j, t_power, k, coefficient] for e_i * e_j = sum t^p c e_k."""
    A = sp.algebra
    fmt = A.field.fmt
    out = []
    for i in range(A.dim):
        for j in range(A.dim):
            if (i, j) in A.overflow_pairs:
                continue
            prod = sp.star(sp.basis(i), sp.basis(j))
            for p in sorted(prod):
                for k in sorted(prod[p]):
                    out.append([i, j, p, k, fmt(prod[p][k])])
    return out


# -- the Moyal generator ----------------------------------------------------


class BiDiffOp:
    """Bidifferential operator sum_s c_s (d^alpha_s a)(d^beta_s b) on a
    polynomial algebra, kept as a list of (coeff, alpha, beta)."""

    def __init__(self, nvars: int, parts):
        self.nvars = nvars
        self.parts = [(c, tuple(a), tuple(b)) for (c, a, b) in parts if c != 0]

    def __mul__(self, other: "BiDiffOp") -> "BiDiffOp":
        parts = {}
        for (c1, a1, b1) in self.parts:
            for (c2, a2, b2) in other.parts:
                a = tuple(x + y for x, y in zip(a1, a2))
                b = tuple(x + y for x, y in zip(b1, b2))
                parts[(a, b)] = parts.get((a, b), 0) + c1 * c2
        return BiDiffOp(self.nvars,
                        [(c, a, b) for (a, b), c in parts.items()])

    def order(self) -> int:
        """Total weight the operator removes from its arguments."""
        return max((sum(a) + sum(b) for (_, a, b) in self.parts), default=0)


def _monomial_derivative(exp, alpha):
    """d^alpha applied to x^exp: (coeff, new exponent) or None."""
    coeff = 1
    out = []
    for e, a in zip(exp, alpha):
        if e < a:
            return None
        for i in range(a):
            coeff *= e - i
        out.append(e - a)
    return coeff, tuple(out)


def bidiff_cochain(A: Algebra, op: BiDiffOp) -> Cochain:
    """The arity-2 cochain of a bidifferential operator on a capped
    polynomial algebra, claimed on pairs whose output stays under the cap."""
    cap = A.weight_cap
    bound = None if cap is None else cap + op.order()
    entries = {}
    for i, mi in enumerate(A.monomials):
        for j, mj in enumerate(A.monomials):
            if bound is not None and sum(mi) + sum(mj) > bound:
                continue
            vec = {}
            for (c, alpha, beta) in op.parts:
                da = _monomial_derivative(mi, alpha)
                db = _monomial_derivative(mj, beta)
                if da is None or db is None:
                    continue
                ca, ea = da
                cb, eb = db
                prod = tuple(x + y for x, y in zip(ea, eb))
                if cap is not None and sum(prod) > cap:
                    raise WeightOverflowError(
                        "bidifferential output overflows the cap")
                k = A.monomial_index[prod]
                nv = vec.get(k, A.field.zero) + A.field.of(c * ca * cb)
                if nv == A.field.zero:
                    vec.pop(k, None)
                else:
                    vec[k] = nv
            if vec:
                entries[(i, j)] = vec
    return Cochain(A, 2, entries, bound=bound)


def poisson_op(nvars=2) -> BiDiffOp:
    """P(a, b) = (da/dx)(db/dp) - (da/dp)(db/dx) on two variables."""
    if nvars != 2:
        raise GerstError("the Poisson generator here is the two-variable one")
    return BiDiffOp(2, [(1, (1, 0), (0, 1)), (-1, (0, 1), (1, 0))])


def moyal_parameter(A: Algebra, N: int, order=2) -> TCochain:
    """lambda = (t/2) P + (t^2/8) P^2 + ... up to the given t-order."""
    if getattr(A, "nvars", None) != 2:
        raise GerstError("Moyal parameter needs a two-variable polynomial "
                         "algebra")
    P = poisson_op(2)
    terms = {}
    op = P
    fact = 1
    for k in range(1, order + 1):
        fact *= k
        if k < N:
            coch = bidiff_cochain(A, op)
            terms[k] = coch.scale(Fraction(1, 2 ** k * fact))
        op = op * P
    return TCochain(A, 2, N, terms)
