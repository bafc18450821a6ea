"""Hochschild cochains, the Gerstenhaber bracket, and exact cohomology.

Sign conventions (fixed once, here): for D of arity m and E of arity n,

    (D o E)(a_1..a_{m+n-1}) =
        sum_i (-1)^{(n-1)(i-1)} D(a_1,..,a_{i-1}, E(a_i,..), a_{i+n},..)
    [D, E] = D o E - (-1)^{(m-1)(n-1)} E o D
    delta D = [mu, D]          (mu = multiplication cochain)

This convention is pinned by two test-backed constraints: delta^2 = 0, and
the associativity defect of a*b = ab + lambda(a,b) equals
delta lambda + 1/2 [lambda, lambda] termwise.

For weight-graded capped algebras every cochain carries a bound: the maximal
total argument weight for which its values are claimed.  Operations shrink
the bound so that every claimed value is exact (no product inside the
computation can overflow the cap); comparisons only look inside the bound.
"""

from __future__ import annotations

import itertools

from .algebra import Algebra
from .fields import GerstError
from .linalg import SparseMatrix, dense_rank, echelon_basis, in_span, reduce_mod

_INF = None  # bound value meaning "unrestricted"


def _bmin(*bounds):
    vals = [b for b in bounds if b is not None]
    return min(vals) if vals else None


class Cochain:
    """Sparse multilinear map A^(x)n -> A in basis coordinates."""

    def __init__(self, algebra: Algebra, arity: int, entries=None, bound=_INF):
        self.algebra = algebra
        self.arity = arity
        self.entries = {}
        if entries:
            for args, vec in entries.items():
                clean = {k: v for k, v in vec.items() if v != algebra.field.zero}
                if clean:
                    self.entries[tuple(args)] = clean
        if algebra.weight_cap is not None and bound is None:
            bound = algebra.weight_cap
        self.bound = bound

    # -- inspection ----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Shifted degree in the DGLA C(A)[1]."""
        return self.arity - 1

    def value(self, args) -> dict:
        return dict(self.entries.get(tuple(args), {}))

    def arg_weight(self, args) -> int:
        return sum(self.algebra.weight_of(i) for i in args)

    def wmax(self) -> int:
        """Maximal weight shift (output weight minus argument weight)."""
        if self.algebra.weights is None:
            return 0
        best = 0
        for args, vec in self.entries.items():
            base = self.arg_weight(args)
            for k in vec:
                best = max(best, self.algebra.weight_of(k) - base)
        return best

    def in_bound(self, args) -> bool:
        return self.bound is None or self.arg_weight(args) <= self.bound

    def is_zero(self) -> bool:
        """Zero on every claimed tuple."""
        return all(not vec or not self.in_bound(args)
                   for args, vec in self.entries.items())

    def equals(self, other: "Cochain") -> bool:
        if self.arity != other.arity:
            return self.is_zero() and other.is_zero()
        bound = _bmin(self.bound, other.bound)
        keys = set(self.entries) | set(other.entries)
        for args in keys:
            if bound is not None and self.arg_weight(args) > bound:
                continue
            if self.entries.get(args, {}) != other.entries.get(args, {}):
                return False
        return True

    def max_defect(self, other: "Cochain"):
        """First differing (args, out, lhs, rhs) inside the shared bound."""
        bound = _bmin(self.bound, other.bound)
        zero = self.algebra.field.zero
        for args in sorted(set(self.entries) | set(other.entries)):
            if bound is not None and self.arg_weight(args) > bound:
                continue
            a = self.entries.get(args, {})
            b = other.entries.get(args, {})
            for k in sorted(set(a) | set(b)):
                if a.get(k, zero) != b.get(k, zero):
                    return (args, k, a.get(k, zero), b.get(k, zero))
        return None

    # -- linear structure ----------------------------------------------------

    def _merged(self, other, sign):
        if self.arity != other.arity:
            # an entryless cochain stands in for zero in any arity (brackets
            # of two degree -1 elements land below arity 0)
            if not other.entries:
                other = Cochain(self.algebra, self.arity, {}, bound=other.bound)
            elif not self.entries:
                self = Cochain(other.algebra, other.arity, {}, bound=self.bound)
            else:
                raise GerstError("arity mismatch: %d vs %d"
                                 % (self.arity, other.arity))
        zero = self.algebra.field.zero
        entries = {args: dict(vec) for args, vec in self.entries.items()}
        for args, vec in other.entries.items():
            tgt = entries.setdefault(args, {})
            for k, v in vec.items():
                nv = tgt.get(k, zero) + sign * v
                if nv == zero:
                    tgt.pop(k, None)
                else:
                    tgt[k] = nv
        return Cochain(self.algebra, self.arity, entries,
                       bound=_bmin(self.bound, other.bound))

    def __add__(self, other):
        return self._merged(other, self.algebra.field.one)

    def __sub__(self, other):
        return self._merged(other, -self.algebra.field.one)

    def scale(self, c):
        c = self.algebra.field.of(c)
        entries = {args: {k: c * v for k, v in vec.items()}
                   for args, vec in self.entries.items()}
        return Cochain(self.algebra, self.arity, entries, bound=self.bound)

    def __neg__(self):
        return self.scale(-1)

    # -- Gerstenhaber structure ---------------------------------------------

    def compose(self, other: "Cochain") -> "Cochain":
        """Insertion sum D o E with the convention in the module docstring."""
        D, E = self, other
        m, n = D.arity, E.arity
        if m == 0:
            return Cochain(self.algebra, max(m + n - 1, 0), {},
                           bound=_bmin(D.bound, E.bound))
        field = self.algebra.field
        out_entries = {}
        sign_flip = (n - 1) % 2 == 1
        for d_args, d_vec in D.entries.items():
            for pos in range(m):
                sign = field.one
                if sign_flip and pos % 2 == 1:
                    sign = -field.one
                slot = d_args[pos]
                for e_args, e_vec in E.entries.items():
                    c = e_vec.get(slot)
                    if c is None:
                        continue
                    args = d_args[:pos] + e_args + d_args[pos + 1:]
                    tgt = out_entries.setdefault(args, {})
                    for k, v in d_vec.items():
                        nv = tgt.get(k, field.zero) + sign * c * v
                        if nv == field.zero:
                            tgt.pop(k, None)
                        else:
                            tgt[k] = nv
        bound = _bmin(E.bound,
                      None if D.bound is None else D.bound - E.wmax())
        return Cochain(self.algebra, m + n - 1, out_entries, bound=bound)

    def bracket(self, other: "Cochain") -> "Cochain":
        D, E = self, other
        de = D.compose(E)
        ed = E.compose(D)
        if (D.degree * E.degree) % 2 == 1:
            return de + ed
        return de - ed

    def delta(self) -> "Cochain":
        return mu_cochain(self.algebra).bracket(self)


def mu_cochain(A: Algebra) -> Cochain:
    """The multiplication cochain of A (cached on the algebra)."""
    if A._mu is None:
        entries = {}
        for (i, j), vec in A.table.items():
            if vec:
                entries[(i, j)] = dict(vec)
        A._mu = Cochain(A, 2, entries, bound=A.weight_cap)
    return A._mu


def element_cochain(A: Algebra, vec: dict) -> Cochain:
    return Cochain(A, 0, {(): dict(vec)}, bound=A.weight_cap)


def endo_cochain(A: Algebra, mat: SparseMatrix) -> Cochain:
    entries = {}
    for (r, c), v in mat.entries.items():
        entries.setdefault((c,), {})[r] = v
    return Cochain(A, 1, entries, bound=A.weight_cap)


def random_cochain(A: Algebra, arity: int, rng, n_entries=6) -> Cochain:
    entries = {}
    for _ in range(n_entries):
        args = tuple(rng.randrange(A.dim) for _ in range(arity))
        out = rng.randrange(A.dim)
        coeff = A.field.of(rng.randrange(1, 50))
        entries.setdefault(args, {})[out] = coeff
    return Cochain(A, arity, entries, bound=A.weight_cap)


# -- normalization ----------------------------------------------------------


def is_normalized(D: Cochain) -> bool:
    u = D.algebra.unit_index
    if u is None:
        raise GerstError("unit is not a basis direction; "
                         "change basis first (with_unit_basis)")
    return all(u not in args for args in D.entries if D.entries[args])


def normalize_projection(D: Cochain) -> Cochain:
    """Project onto the normalized subcomplex along the standard complement:
    drop every value with a unit-direction argument."""
    u = D.algebra.unit_index
    if u is None:
        raise GerstError("unit is not a basis direction; "
                         "change basis first (with_unit_basis)")
    entries = {args: vec for args, vec in D.entries.items() if u not in args}
    return Cochain(D.algebra, D.arity, entries, bound=D.bound)


# -- cochain spaces and cohomology ------------------------------------------


class CochainSpace:
    """Ordered basis of C^k(A) (or the normalized subspace)."""

    def __init__(self, A: Algebra, arity: int, normalized=False):
        if A.weight_cap is not None:
            raise GerstError("cohomology of capped algebras lives in the jet "
                             "module; table algebras only here")
        self.algebra = A
        self.arity = arity
        self.normalized = normalized
        indices = range(A.dim)
        if normalized:
            u = A.unit_index
            if u is None:
                raise GerstError("normalized space needs the unit as a basis "
                                 "direction")
            indices = [i for i in range(A.dim) if i != u]
        self.keys = [(args, out)
                     for args in itertools.product(indices, repeat=arity)
                     for out in range(A.dim)]
        self.pos = {key: i for i, key in enumerate(self.keys)}

    @property
    def dim(self):
        return len(self.keys)

    def vectorize(self, D: Cochain) -> dict:
        out = {}
        for args, vec in D.entries.items():
            for k, v in vec.items():
                pos = self.pos.get((args, k))
                if pos is None:
                    if v != self.algebra.field.zero:
                        raise GerstError("cochain has support outside the space "
                                         "at %r -> %d" % (args, k))
                    continue
                out[pos] = v
        return out

    def cochain(self, vec: dict) -> Cochain:
        entries = {}
        for pos, v in vec.items():
            args, out = self.keys[pos]
            entries.setdefault(args, {})[out] = v
        return Cochain(self.algebra, self.arity, entries)

    def basis_cochain(self, pos: int) -> Cochain:
        args, out = self.keys[pos]
        return Cochain(self.algebra, self.arity,
                       {args: {out: self.algebra.field.one}})

    def differential_matrix(self) -> SparseMatrix:
        target = CochainSpace(self.algebra, self.arity + 1, self.normalized)
        cols = []
        for pos in range(self.dim):
            d = self.basis_cochain(pos).delta()
            if self.normalized:
                d = normalize_projection(d)
            cols.append(target.vectorize(d))
        return SparseMatrix.from_columns(cols, target.dim, self.algebra.field)


class CohomologyReport:
    def __init__(self, degree, dim_kernel, dim_image, representatives, space,
                 image_echelon):
        self.degree = degree
        self.dim_kernel = dim_kernel
        self.dim_image = dim_image
        self.dim_hh = dim_kernel - dim_image
        self.representatives = representatives
        self.space = space
        self.image_echelon = image_echelon

    def __repr__(self):
        return ("CohomologyReport(k=%d, ker=%d, im=%d, HH=%d)"
                % (self.degree, self.dim_kernel, self.dim_image, self.dim_hh))


def cohomology(A: Algebra, k: int, normalized=False, max_space=500000) -> CohomologyReport:
    """Exact HH^k with representatives, via sparse kernel/rank computations."""
    space_k = CochainSpace(A, k, normalized)
    if space_k.dim * A.dim > max_space:
        raise GerstError("cochain space too large: C^%d has dim %d "
                         "(estimated matrix %d x %d)"
                         % (k, space_k.dim, space_k.dim * A.dim, space_k.dim))
    dmat = space_k.differential_matrix()
    kernel = dmat.kernel_basis()
    if k == 0:
        image_cols = []
    else:
        prev = CochainSpace(A, k - 1, normalized).differential_matrix()
        cols = [dict() for _ in range(prev.cols)]
        for (r, c), v in prev.entries.items():
            cols[c][r] = v
        image_cols = [c for c in cols if c]
    image_ech = echelon_basis(image_cols, space_k.dim, A.field)
    reps_vecs = []
    span = list(image_ech)
    for vec in kernel:
        red = reduce_mod(vec, span, A.field)
        if red:
            reps_vecs.append(red)
            span = echelon_basis(span + [red], space_k.dim, A.field)
    reps = [space_k.cochain(v) for v in reps_vecs]
    return CohomologyReport(k, len(kernel), len(image_ech), reps, space_k,
                            image_ech)


def dense_cohomology_dims(A: Algebra, k: int, normalized=False):
    """Independent oracle: (dim ker, dim im, dim HH^k) by dense elimination
    on fully materialized differential matrices."""
    space_k = CochainSpace(A, k, normalized)
    dmat = space_k.differential_matrix()
    target_dim = CochainSpace(A, k + 1, normalized).dim
    dense_k = [[A.field.zero] * space_k.dim for _ in range(target_dim)]
    for (r, c), v in dmat.entries.items():
        dense_k[r][c] = v
    rank_k = dense_rank(dense_k, A.field)
    dim_ker = space_k.dim - rank_k
    if k == 0:
        rank_prev = 0
    else:
        space_prev = CochainSpace(A, k - 1, normalized)
        prev = space_prev.differential_matrix()
        dense_prev = [[A.field.zero] * space_prev.dim for _ in range(space_k.dim)]
        for (r, c), v in prev.entries.items():
            dense_prev[r][c] = v
        rank_prev = dense_rank(dense_prev, A.field)
    return dim_ker, rank_prev, dim_ker - rank_prev


# -- chain maps and induced maps on cohomology ------------------------------


def verify_chain_map(f, src_space: CochainSpace, witness_limit=1):
    """Check f(delta b) = delta f(b) on the full basis of the source space.

    Returns None on success, else the first witness basis cochain.
    """
    for pos in range(src_space.dim):
        b = src_space.basis_cochain(pos)
        db = b.delta()
        if src_space.normalized:
            db = normalize_projection(db)
        lhs = f(db)
        rhs = f(b).delta()
        if not lhs.equals(rhs):
            return b
    return None


def induced_cohomology_map(f, src: CohomologyReport, tgt: CohomologyReport,
                           check_chain_map=True):
    """Matrix of the map induced by f on HH^k, in the representative bases.

    Columns: images of source representatives expressed in target
    representatives modulo coboundaries.  Raises if f is not a chain map on
    the source basis or if an image fails to be a cocycle-class combination.
    """
    A_t = tgt.space.algebra
    field = A_t.field
    if check_chain_map:
        witness = verify_chain_map(f, src.space)
        if witness is not None:
            raise GerstError("not a chain map; witness basis cochain %r"
                             % (witness.entries,))
    cols = [dict(v) for v in (tgt.space.vectorize(r) for r in tgt.representatives)]
    n_reps = len(cols)
    cols = cols + [dict(v) for v in tgt.image_echelon]
    mat = SparseMatrix.from_columns(cols, tgt.space.dim, field)
    matrix = {}
    for i, rep in enumerate(src.representatives):
        img = tgt.space.vectorize(f(rep))
        sol = mat.solve(img)
        if sol is None:
            raise GerstError("image of representative %d is not a cocycle "
                             "class in the target" % i)
        for j in range(n_reps):
            v = sol.get(j)
            if v is not None:
                matrix[(j, i)] = v
    return SparseMatrix(n_reps, len(src.representatives), matrix, field)


# -- the cotrace map (finite, table-algebra version) ------------------------


def cotrace_cochain(D: Cochain, M: Algebra) -> Cochain:
    """cotr(D)(E_1 (x) r_1, .., E_q (x) r_q) = E_1..E_q (x) D(r_1..r_q).

    D is a normalized cochain over the commutative base R of the matrix
    algebra M = Mat_n(R); arity 0 maps an element r to r * Id.
    """
    R = M.matrix_base
    n = M.matrix_size
    if D.algebra is not R:
        raise GerstError("cochain is not over the base of the matrix algebra")
    if D.arity > 0 and not is_normalized(D):
        raise GerstError("cotrace is only defined on normalized cochains")
    field = M.field
    dim_r = R.dim
    def idx(a, b, r):
        return (a * n + b) * dim_r + r

    entries = {}
    q = D.arity
    if q == 0:
        vec = D.entries.get((), {})
        out = {}
        for a in range(n):
            for r, v in vec.items():
                out[idx(a, a, r)] = v
        return Cochain(M, 0, {(): out})
    for r_args, vec in D.entries.items():
        for chain in itertools.product(range(n), repeat=q + 1):
            args = tuple(idx(chain[i], chain[i + 1], r_args[i]) for i in range(q))
            out = {idx(chain[0], chain[q], t): v for t, v in vec.items()}
            tgt = entries.setdefault(args, {})
            for k, v in out.items():
                nv = tgt.get(k, field.zero) + v
                if nv == field.zero:
                    tgt.pop(k, None)
                else:
                    tgt[k] = nv
    return Cochain(M, q, entries)
