"""Assembly of the comparison map between scalar jet cochains and matrix
jet cochains: pushforward along an inner automorphism, the cotrace
embedding, and contraction by the connection-difference one-form.

The composite maps the form-valued normalized scalar cochain complex
with differential (canonical connection + Hochschild differential) to
the matrix-valued complex with the same shaped differential, and is a
chain map: the defect is exactly zero on spanning pieces.  Cohomology of
both sides is computed in weight windows by exact linear algebra, and
the induced maps are compared across different choices of automorphism
and connection.
"""

import itertools

from .fields import GerstError
from .jets import JetModel, JetElement, JetForm, JetIsomorphism, \
    compute_F, _cmin
from .compare import JetCochain, Graded, exp_iota, graded_nabla
from .linalg import echelon_basis, reduce_mod, kernel_basis


def scalar_twin(model: JetModel) -> JetModel:
    """The scalar-coefficient jet model with the same base data."""
    return JetModel(model.d, 1, model.x_cap, model.y_cap, model.field,
                    slack=model.slack)


# -- cotrace ----------------------------------------------------------------

def _is_normalized(D: JetCochain) -> bool:
    for args, el in D.entries.items():
        if any(g[2] == 0 for g in args) and not el.is_zero():
            return False
    return True


def cotrace_jet(model: JetModel, D: JetCochain) -> JetCochain:
    """Cotrace of a normalized scalar jet cochain into the matrix model:
    the value on matrix-decorated arguments is the product of the matrix
    parts times the scalar value."""
    sm = D.model
    if sm.n != 1:
        raise GerstError("cotrace expects scalar-coefficient cochains")
    if (sm.d, sm.x_cap, sm.y_cap) != (model.d, model.x_cap, model.y_cap):
        raise GerstError("cotrace models do not match")
    if not _is_normalized(D):
        raise GerstError("cotrace is only defined on normalized cochains")
    q = D.arity
    entries = {}
    n = model.n
    for sargs, el in D.entries.items():
        if any(g[2] == 0 for g in sargs):
            continue
        ys = tuple(g[2] for g in sargs)
        for chain in itertools.product(range(n), repeat=q + 1):
            margs = tuple((chain[i], chain[i + 1], ys[i]) for i in range(q))
            val = JetElement(
                model,
                {(chain[0], chain[q], xi, yi): v
                 for (_, _, xi, yi), v in el.coeffs.items()},
                el.cx, el.cy)
            if val.coeffs:
                entries[margs] = (entries[margs] + val
                                  if margs in entries else val)
    return JetCochain(model, q, entries, aw=D.aw)


def cotrace_graded(model: JetModel, S: Graded) -> Graded:
    out = Graded(model, {})
    for (I, q), D in S.terms.items():
        out = out + Graded.piece(model, I, cotrace_jet(model, D))
    return out


# -- pushforward along sigma ------------------------------------------------

def _sigma_caches(sig: JetIsomorphism):
    if getattr(sig, "_push_rev", None) is None:
        m = sig.model
        rev = {}
        claims = {}
        for gen in m.module_basis(m.yw):
            inv = sig.apply_inverse(m.basis_element(gen[0], gen[1],
                                                    yi=gen[2]))
            claims[gen] = (inv.cx, inv.cy)
            for (mid, xi, c) in inv.module_expand():
                rev.setdefault(mid, []).append((gen, xi, c))
        sig._push_rev = rev
        sig._push_claims = claims
    return sig._push_rev, sig._push_claims


def _y_drop(D: JetCochain) -> int:
    drop = 0
    for args, el in D.entries.items():
        base = D.arg_weight(args)
        if not el.coeffs:
            continue
        low = min(D.model.y_deg(yi) for (_, _, _, yi) in el.coeffs)
        drop = max(drop, base - low)
    return drop


def sigma_push(sig: JetIsomorphism, D: JetCochain) -> JetCochain:
    """Pushforward: conjugate a cochain by the automorphism,
    (sigma_* D)(m_1, ..., m_q) = sigma(D(sigma^{-1} m_1, ...))."""
    m = D.model
    rev, claims = _sigma_caches(sig)
    q = D.arity
    drop = _y_drop(D)
    trunc_claim = None if D.aw is None or D.aw >= m.yw else D.aw - drop
    acc = {}
    for margs, el in D.entries.items():
        sel = sig.apply(el)
        lists = [rev.get(mid) for mid in margs]
        if any(l is None for l in lists):
            continue
        for combo in itertools.product(*lists):
            gens_t = tuple(g for (g, xi, c) in combo)
            mono = (0,) * m.d
            coeff = m.field.one
            cx = cy = None
            overflow = False
            for (g, xi, c) in combo:
                mono = tuple(p + r for p, r in zip(mono, m.x_monos[xi]))
                if sum(mono) > m.xw:
                    overflow = True
                    break
                coeff = coeff * c
                gcx, gcy = claims[g]
                cx = _cmin(cx, gcx)
                cy = _cmin(cy, gcy)
            if overflow:
                continue
            piece = sel.x_shift(m.x_index[mono]).scale(coeff)
            piece = JetElement(m, piece.coeffs,
                               _cmin(piece.cx, cx),
                               _cmin(piece.cy, cy,
                                     None if cy is None else m.yw - drop))
            acc[gens_t] = acc[gens_t] + piece if gens_t in acc else piece
    if trunc_claim is not None:
        acc = {k: JetElement(m, v.coeffs, v.cx, _cmin(v.cy, trunc_claim))
               for k, v in acc.items()}
    return JetCochain(m, q, acc, aw=D.aw)


def sigma_push_graded(sig: JetIsomorphism, S: Graded) -> Graded:
    out = Graded(S.model, {})
    for (I, q), D in S.terms.items():
        out = out + Graded.piece(S.model, I, sigma_push(sig, D))
    return out


def _certify(model: JetModel, T: Graded, drop: int) -> Graded:
    """Re-window a contraction of a cochain whose entries are exact at
    every enumerated argument tuple.  Contraction never shrinks the
    argument window of such a cochain; what it loses is the out-window in
    y: the contracted form is only known up to the working y-window, and
    the missing tail feeds coefficients of y-degree above yw - drop,
    where drop is the largest y-degree drop of the contracted cochain."""
    cy = model.yw - drop
    terms = {}
    for (I, q), D in T.terms.items():
        ent = {args: JetElement(model, el.coeffs, el.cx,
                                _cmin(el.cy, cy))
               for args, el in D.entries.items()}
        terms[(I, q)] = JetCochain(model, q, ent, aw=model.yw)
    return Graded(model, terms)


# -- the comparison map -----------------------------------------------------

# The contraction exponent.  With the sign decoration this package uses
# for the contraction operators (iota is minus the bracket-adjoint), the
# exponent that transports the twisted middle differential to the
# curvature contraction is the negative one; the defect of the positive
# exponent is nonzero on spanning pieces, so the choice is pinned by the
# chain-map tests.  exp_sign=0 is a negative control: dropping the
# exponential breaks the chain property whenever the connection
# difference has positive y-order content.
EXP_SIGN = -1


class ComparisonMap:
    """pushforward o exp(contraction) o cotrace, from normalized scalar
    form-valued cochains to matrix form-valued cochains."""

    def __init__(self, model: JetModel, sigma: JetIsomorphism,
                 gamma: JetForm, exp_sign: int = EXP_SIGN):
        self.model = model
        self.scalar = scalar_twin(model)
        self.sigma = sigma
        self.gamma = gamma
        self.F = compute_F(model, sigma, gamma)
        self.exp_sign = exp_sign
        self._Fs = self.F.scale(exp_sign) if exp_sign else None

    def apply(self, S: Graded) -> Graded:
        if S.model is not self.scalar and S.model.n != 1:
            raise GerstError("comparison map expects scalar cochains")
        T = cotrace_graded(self.model, _retarget(S, self.scalar))
        if self._Fs is not None:
            drop = max((_y_drop(D) for D in T.terms.values()), default=0)
            T = _certify(self.model, exp_iota(self._Fs, T), drop)
        return sigma_push_graded(self.sigma, T)

    def source_diff(self, S: Graded) -> Graded:
        return graded_nabla(S, None) + S.gdelta()

    def target_diff(self, T: Graded) -> Graded:
        return graded_nabla(T, None) + T.gdelta()

    def chain_defect(self, S: Graded) -> Graded:
        return self.apply(self.source_diff(S)) \
            - self.target_diff(self.apply(S))


def _retarget(S: Graded, scalar: JetModel) -> Graded:
    """Rebuild a scalar graded cochain over the twin model instance used
    internally (coefficients are copied verbatim)."""
    if S.model is scalar:
        return S
    out = {}
    for (I, q), D in S.terms.items():
        entries = {args: JetElement(scalar, el.coeffs, el.cx, el.cy)
                   for args, el in D.entries.items()}
        out[(I, q)] = JetCochain(scalar, q, entries, aw=D.aw)
    return Graded(scalar, out)


def scalar_spanning_pieces(scalar: JetModel, q_max: int, arg_win=None,
                           out_y=None):
    """Normalized scalar spanning pieces: one entry per (form index, args
    without unit factors, output key)."""
    m = scalar
    if arg_win is None:
        arg_win = m.y_cap
    if out_y is None:
        out_y = m.y_cap
    gens = [g for g in m.module_basis(arg_win) if g[2] != 0]
    pieces = []
    subsets = [I for r in range(m.d + 1)
               for I in itertools.combinations(range(m.d), r)]
    for I in subsets:
        for q in range(q_max + 1):
            for args in itertools.product(gens, repeat=q):
                if sum(m.y_deg(g[2]) for g in args) > arg_win:
                    continue
                for xi in range(len(m.x_monos)):
                    if m.x_deg(xi) > m.x_cap:
                        continue
                    for yi in range(len(m.y_monos)):
                        if m.y_deg(yi) > out_y:
                            continue
                        el = JetElement(m, {(0, 0, xi, yi): m.field.one})
                        pieces.append(Graded.piece(
                            m, I, JetCochain(m, q, {args: el}, aw=m.yw)))
    return pieces


# -- windowed Hochschild cohomology and induced maps ------------------------

class DeltaComplex:
    """Hochschild complex of the weight-truncated algebra with cochains
    determined by their values on module generators.

    The truncated algebra (monomials above the working weight window
    mapped to zero) is an honest finite-dimensional associative algebra,
    so the Hochschild differential squares to zero exactly and cycles,
    boundaries and induced maps are exact statements about it.
    Coordinates at arity q are pieces (args, out-key): args a tuple of
    module generators, out-key a basis monomial of the algebra.
    """

    def __init__(self, model: JetModel, q_max: int, normalized: bool):
        self.model = model
        self.q_max = q_max
        self.normalized = normalized
        m = model
        self.gens = [g for g in m.module_basis(m.yw)
                     if not (normalized and g[2] == 0)]
        self.keys = [(a, b, xi, yi)
                     for a in range(m.n) for b in range(m.n)
                     for xi in range(len(m.x_monos))
                     for yi in range(len(m.y_monos))]
        self.coords = {}
        self.index = {}
        for q in range(q_max + 2):
            items = [(args, key)
                     for args in itertools.product(self.gens, repeat=q)
                     for key in self.keys]
            self.coords[q] = items
            self.index[q] = {p: i for i, p in enumerate(items)}

    def piece_cochain(self, piece) -> JetCochain:
        (args, key) = piece
        el = JetElement(self.model, {key: self.model.field.one})
        return JetCochain(self.model, len(args), {args: el},
                          aw=self.model.yw)

    def to_vec(self, D: JetCochain, q: int) -> dict:
        """Coordinates of an arity-q cochain.  Values are read as exact
        statements about the truncated algebra, so claims are ignored."""
        idx = self.index[q]
        vec = {}
        zero = self.model.field.zero
        for args, el in D.entries.items():
            for key, v in el.coeffs.items():
                if v == zero:
                    continue
                j = idx.get((args, key))
                if j is None:
                    raise GerstError("cochain escapes the window at %s"
                                     % ((args, key),))
                vec[j] = vec.get(j, zero) + v
        return {k: v for k, v in vec.items() if v != zero}

    def delta_vec(self, piece) -> dict:
        D = self.piece_cochain(piece)
        dD = D.delta()
        if self.normalized:
            dD = JetCochain(self.model, dD.arity,
                            {args: el for args, el in dD.entries.items()
                             if all(g[2] != 0 for g in args)},
                            aw=dD.aw)
        return self.to_vec(dD, len(piece[0]) + 1)

    def cycles(self, q: int):
        cols = [self.delta_vec(p) for p in self.coords[q]]
        return kernel_basis(cols, len(self.coords[q + 1]),
                            self.model.field)

    def image_echelon(self, q: int):
        if q == 0:
            return []
        cols = [self.delta_vec(p) for p in self.coords[q - 1]]
        return echelon_basis(cols, len(self.coords[q]), self.model.field)


def cohomology_basis(cx: DeltaComplex, q: int):
    """Cycle vectors independent modulo boundaries: a basis of the
    windowed degree-q Hochschild cohomology."""
    field = cx.model.field
    ech = [dict(r) for r in cx.image_echelon(q)]
    reps = []
    for kv in cx.cycles(q):
        red = reduce_mod(kv, ech, field)
        if red:
            ech.append(red)
            reps.append(kv)
    return reps


def hh_dims(cx: DeltaComplex, q_max: int):
    return [len(cohomology_basis(cx, q)) for q in range(q_max + 1)]


def hh_image_vec(phi: ComparisonMap, src: DeltaComplex,
                 tgt: DeltaComplex, q: int, rep: dict) -> dict:
    """Arity-q component of the image of a source cohomology class
    representative under the comparison map, in target coordinates.
    The contraction part of the map raises form degree, so the
    Hochschild-level component of the composite is exact."""
    S = Graded(src.model, {})
    for j, v in rep.items():
        S = S + Graded.piece(src.model,
                             (), src.piece_cochain(
                                 src.coords[q][j])).scale(v)
    out = phi.apply(S)
    D = out.terms.get(((), q))
    if D is None:
        return {}
    return tgt.to_vec(D, q)


def induced_matrix(phi: ComparisonMap, src: DeltaComplex,
                   tgt: DeltaComplex, q: int, src_basis=None,
                   tgt_img=None):
    """Canonical matrix of the induced map on windowed degree-q
    Hochschild cohomology: per source basis class, the canonical reduced
    representative of the image class modulo target boundaries."""
    field = phi.model.field
    if src_basis is None:
        src_basis = cohomology_basis(src, q)
    if tgt_img is None:
        tgt_img = tgt.image_echelon(q)
    return tuple(tuple(sorted(reduce_mod(
        hh_image_vec(phi, src, tgt, q, rep), tgt_img, field).items()))
        for rep in src_basis)


def induced_rank(mat, dim: int, field) -> int:
    return len(echelon_basis([dict(row) for row in mat], dim, field))


def compare_choices(maps, src: DeltaComplex, tgt: DeltaComplex,
                    q: int):
    """Induced-map matrices on windowed degree-q Hochschild cohomology
    for several comparison maps over one shared source basis and target
    boundary echelon.  Equal matrices mean equal induced maps."""
    src_basis = cohomology_basis(src, q)
    tgt_img = tgt.image_echelon(q)
    return [induced_matrix(phi, src, tgt, q, src_basis, tgt_img)
            for phi in maps]
