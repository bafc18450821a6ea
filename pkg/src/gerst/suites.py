"""Named verification suites: batches of exact identity checks runnable
from the command line and from tests.

Every check either passes with defect exactly zero (or exactly matching
dimensions) or fails with a witness; there are no tolerances.  A suite is
a list of (check name, thunk) pairs; run_suite executes the thunks,
times them, and returns records ordered by check name so reports are
deterministic.  Random data is drawn from generators seeded only by the
configuration seed.
"""

from __future__ import annotations

import itertools
import os
import random
import time

from .fields import GerstError, field_by_name
from .algebra import dual_numbers, field_algebra, matrix_algebra
from .cochains import (CochainSpace, cotrace_cochain, is_normalized,
                       normalize_projection, random_cochain)
from .jets import (JetElement, JetForm, JetIsomorphism, JetModel, compute_F,
                   curvature_form, formula_F_residual, nabla_tot_form)
from .compare import (Graded, JetCochain, ad_op, exp_iota, graded_nabla,
                      iota, mu_jet)
from .prolong import de_rham_report, jet_prolong
from .phi import (ComparisonMap, DeltaComplex, cohomology_basis,
                  compare_choices, cotrace_graded, cotrace_jet,
                  induced_rank, scalar_spanning_pieces, scalar_twin)

DEFAULT_CONFIG = {
    "d": 2,
    "n": 2,
    "x_weight_cap": 2,
    "y_weight_cap": 2,
    "cochain_arity_max": 3,
    "field": "Q",
    "seed": 0,
}


def full_config(config=None) -> dict:
    cfg = dict(DEFAULT_CONFIG)
    if config:
        unknown = set(config) - set(DEFAULT_CONFIG)
        if unknown:
            raise GerstError("unknown config keys: %s" % sorted(unknown))
        cfg.update(config)
    return cfg


def _rng(cfg, tag: str) -> random.Random:
    return random.Random("%s:%s" % (cfg["seed"], tag))


# -- seeded draws on jet models ----------------------------------------------


def _traceless(m: JetModel, el: JetElement) -> JetElement:
    tr = el.trace()
    inv = m.field.of(1) / m.field.of(m.n)
    idh = JetElement(m, {(c, c, xi, yi): v * inv
                         for (_, _, xi, yi), v in tr.coeffs.items()
                         for c in range(m.n)}, tr.cx, tr.cy)
    return el - idh


def random_generator(m: JetModel, rng, ymax: int, xmax: int,
                     nterms: int = 4) -> JetElement:
    """Traceless automorphism generator with y-order >= 1, never zero:
    a fixed off-diagonal first-order term plus seeded draws."""
    keys = [(a, b, xi, yi)
            for a in range(m.n) for b in range(m.n)
            for xi in range(len(m.x_monos)) if m.x_deg(xi) <= xmax
            for yi in range(len(m.y_monos)) if 1 <= m.y_deg(yi) <= ymax]
    y1 = next(yi for yi in range(len(m.y_monos)) if m.y_deg(yi) == 1)
    coeffs = {(0, m.n - 1, 0, y1): m.field.one}
    for _ in range(nterms):
        k = keys[rng.randrange(len(keys))]
        coeffs[k] = coeffs.get(k, m.field.zero) + m.field.of(
            rng.randrange(1, 7))
    return _traceless(m, JetElement(m, coeffs))


def random_connection(m: JetModel, rng, xmax: int,
                      nterms: int = 3) -> JetForm:
    """Traceless 1-form with x-only coefficients, off-diagonal in every
    direction (nondegenerate by construction)."""
    keys = [(a, b, xi, 0)
            for a in range(m.n) for b in range(m.n)
            for xi in range(len(m.x_monos)) if m.x_deg(xi) <= xmax]
    terms = {}
    for i in range(m.d):
        coeffs = {(0, m.n - 1, 0, 0): m.field.of(i + 1)}
        for _ in range(nterms):
            k = keys[rng.randrange(len(keys))]
            coeffs[k] = coeffs.get(k, m.field.zero) + m.field.of(
                rng.randrange(1, 7))
        terms[(i,)] = _traceless(m, JetElement(m, coeffs))
    return JetForm(m, terms)


def random_form(m: JetModel, rng, degree: int, ymax: int, xmax: int,
                nterms: int = 4) -> JetForm:
    """Algebra-valued form homogeneous of the given form degree."""
    keys = [(a, b, xi, yi)
            for a in range(m.n) for b in range(m.n)
            for xi in range(len(m.x_monos)) if m.x_deg(xi) <= xmax
            for yi in range(len(m.y_monos)) if m.y_deg(yi) <= ymax]
    indices = list(itertools.combinations(range(m.d), degree))
    terms = {}
    I = indices[rng.randrange(len(indices))]
    coeffs = {keys[rng.randrange(len(keys))]: m.field.of(rng.randrange(1, 7))
              for _ in range(nterms)}
    coeffs[(0, 0, 0, 0)] = coeffs.get((0, 0, 0, 0), m.field.zero) \
        + m.field.one
    terms[I] = JetElement(m, coeffs)
    return JetForm(m, terms)


# -- spanning pieces ----------------------------------------------------------


def _arg_tuples(m: JetModel, q: int, win: int):
    gens = m.module_basis(win)
    return [t for t in itertools.product(gens, repeat=q)
            if sum(m.y_deg(g[2]) for g in t) <= win]


def _form_subsets(m: JetModel):
    return [I for r in range(m.d + 1)
            for I in itertools.combinations(range(m.d), r)]


def graded_pieces(m: JetModel, q_max: int, with_x: bool = False,
                  stride: int = 1, phase: int = 0):
    """Single-entry spanning pieces (form index, argument tuple within the
    y-cap, output key).  Outputs run over module generators; with_x also
    enumerates output x-monomials up to the x-cap (needed when the checked
    operators are not linear over the x-polynomials)."""
    xs = [0]
    if with_x:
        xs = [xi for xi in range(len(m.x_monos)) if m.x_deg(xi) <= m.x_cap]
    outs = m.module_basis(m.y_cap)
    i = 0
    for I in _form_subsets(m):
        for q in range(q_max + 1):
            for args in _arg_tuples(m, q, m.y_cap):
                for (a, b, yi) in outs:
                    for xi in xs:
                        if i % stride == phase % stride:
                            el = m.basis_element(a, b, xi=xi, yi=yi)
                            yield Graded.piece(
                                m, I, JetCochain(m, q, {args: el}, aw=m.yw))
                        i += 1


def _sweep(pieces, fn):
    """Run a per-piece predicate; returns (fail count, total, witness)."""
    fails = 0
    total = 0
    witness = None
    for S in pieces:
        total += 1
        if not fn(S):
            fails += 1
            if witness is None:
                witness = repr(sorted(S.terms.keys()))
    return fails, total, witness


def _verdict(fails, total, witness):
    if fails == 0:
        return True, "defect 0 on %d pieces" % total
    return False, "%d/%d pieces fail, first at %s" % (fails, total, witness)


# -- suite: dgla-axioms -------------------------------------------------------


def suite_dgla_axioms(cfg):
    field = field_by_name(cfg["field"])
    A = matrix_algebra(2, field_algebra(field))
    rng = _rng(cfg, "dgla")
    cochains = [random_cochain(A, rng.randrange(0, 5), rng, 5)
                for _ in range(100)]

    def over_all(fn):
        fails = 0
        witness = None
        for i, D in enumerate(cochains):
            E = cochains[(i + 1) % len(cochains)]
            Fc = cochains[(i + 2) % len(cochains)]
            if not fn(D, E, Fc):
                fails += 1
                if witness is None:
                    witness = i
        if fails == 0:
            return True, "defect 0 on %d cochains" % len(cochains)
        return False, "%d fail, first at draw %d" % (fails, witness)

    def d2(D, E, Fc):
        return D.delta().delta().is_zero()

    def anti(D, E, Fc):
        s = (-1) ** (D.degree * E.degree)
        return (D.bracket(E) + E.bracket(D).scale(s)).is_zero()

    def jacobi(D, E, Fc):
        s = (-1) ** (D.degree * E.degree)
        lhs = D.bracket(E.bracket(Fc))
        rhs = D.bracket(E).bracket(Fc) + E.bracket(D.bracket(Fc)).scale(s)
        return (lhs - rhs).is_zero()

    def derivation(D, E, Fc):
        br = D.bracket(E)
        rhs = D.delta().bracket(E) \
            + D.bracket(E.delta()).scale((-1) ** D.degree)
        return (br.delta() - rhs).is_zero()

    return [
        ("differential-squares-to-zero", lambda: over_all(d2)),
        ("graded-antisymmetry", lambda: over_all(anti)),
        ("graded-jacobi", lambda: over_all(jacobi)),
        ("differential-is-bracket-derivation", lambda: over_all(derivation)),
    ]


# -- suite: commutators -------------------------------------------------------


def _commutator_data(cfg):
    field = field_by_name(cfg["field"])
    m = JetModel(cfg["d"], cfg["n"], cfg["x_weight_cap"],
                 cfg["y_weight_cap"], field, slack=4)
    rng = _rng(cfg, "commutators")
    degs = list(range(min(m.d, 2) + 1))
    ymax = min(2, m.y_cap)
    H = {k: random_form(m, rng, k, ymax=ymax, xmax=1) for k in degs}
    G = {k: random_form(m, rng, k, ymax=ymax, xmax=1) for k in degs}
    gamma = random_connection(m, rng, xmax=min(2, m.x_cap))
    q_max = min(3, cfg["cochain_arity_max"])
    return m, degs, H, G, gamma, q_max


def suite_commutators(cfg):
    m, degs, H, G, gamma, q_max = _commutator_data(cfg)

    def id1(k):
        Hk = H[k]

        def fn(S):
            dS = S.gdelta()
            lhs = iota(Hk, dS).scale(-((-1) ** (k - 1))) \
                + iota(Hk, S).gdelta()
            return lhs.equals(ad_op(Hk, S))
        return fn

    def id2(k, l):
        Hk, Gl = H[k], G[l]
        rhs_form = Hk.bracket(Gl)

        def fn(S):
            lhs = ad_op(Hk, iota(Gl, S)) \
                - iota(Gl, ad_op(Hk, S)).scale((-1) ** (k * (l - 1)))
            return lhs.equals(iota(rhs_form, S))
        return fn

    def id3(k, l):
        Hk, Gl = H[k], G[l]

        def fn(S):
            lhs = iota(Hk, iota(Gl, S)) \
                - iota(Gl, iota(Hk, S)).scale((-1) ** ((k - 1) * (l - 1)))
            return lhs.is_zero()
        return fn

    def id4(k):
        Hk = H[k]
        nH = nabla_tot_form(Hk, gamma)

        def fn(S):
            lhs = graded_nabla(iota(Hk, S), gamma) \
                - iota(Hk, graded_nabla(S, gamma)).scale((-1) ** (k - 1))
            return lhs.equals(iota(nH, S))
        return fn

    k1 = 1 if 1 in degs else degs[-1]
    extra1 = [k for k in degs if k != k1]
    pairs_all = [(k, l) for k in degs for l in degs if k + l <= m.d]
    p2 = (0, 1) if (0, 1) in pairs_all else pairs_all[0]
    p3 = (1, 1) if (1, 1) in pairs_all else pairs_all[-1]
    extra2 = [p for p in pairs_all if p != p2][:2]
    extra3 = [p for p in pairs_all if p != p3][:2]

    def strided(fns, with_x=False, stride=7):
        def run():
            fails = total = 0
            witness = None
            for phase, fn in enumerate(fns):
                f, t, w = _sweep(
                    graded_pieces(m, q_max, with_x=with_x,
                                  stride=stride, phase=phase), fn)
                fails += f
                total += t
                witness = witness or w
            return _verdict(fails, total, witness)
        return run

    def xlin():
        rng = _rng(cfg, "xlin")
        H1 = H[k1]
        xs = [xi for xi in range(len(m.x_monos))
              if 0 < m.x_deg(xi) <= m.x_cap]
        gens = m.module_basis(m.y_cap)
        fails = total = 0
        for _ in range(30):
            q = rng.randrange(0, q_max + 1)
            args = tuple(gens[rng.randrange(len(gens))] for _ in range(q))
            if sum(m.y_deg(g[2]) for g in args) > m.y_cap:
                continue
            out = gens[rng.randrange(len(gens))]
            xi = xs[rng.randrange(len(xs))]
            D = JetCochain(m, q, {args: m.basis_element(
                out[0], out[1], yi=out[2])}, aw=m.yw)
            Dx = JetCochain(m, q, {args: m.basis_element(
                out[0], out[1], xi=xi, yi=out[2])}, aw=m.yw)
            for op in (lambda T: T.gdelta(),
                       lambda T: iota(H1, T),
                       lambda T: ad_op(H1, T)):
                lhs = op(Graded.piece(m, (), Dx))
                base = op(Graded.piece(m, (), D))
                shifted = Graded(m, {
                    key: JetCochain(m, key[1], {
                        a: el.x_shift(xi)
                        for a, el in C.entries.items()}, aw=C.aw)
                    for key, C in base.terms.items()})
                total += 1
                if not lhs.equals(shifted):
                    fails += 1
        return _verdict(fails, total, None)

    return [
        ("identity-1-delta-contraction-full",
         lambda: _verdict(*_sweep(graded_pieces(m, q_max), id1(k1)))),
        ("identity-1-delta-contraction-other-degrees",
         strided([id1(k) for k in extra1])),
        ("identity-2-ad-contraction-full",
         lambda: _verdict(*_sweep(graded_pieces(m, q_max), id2(*p2)))),
        ("identity-2-ad-contraction-other-degrees",
         strided([id2(*p) for p in extra2])),
        ("identity-3-contractions-commute-full",
         lambda: _verdict(*_sweep(graded_pieces(m, q_max), id3(*p3)))),
        ("identity-3-contractions-commute-other-degrees",
         strided([id3(*p) for p in extra3])),
        ("identity-4-connection-contraction-full",
         lambda: _verdict(*_sweep(
             graded_pieces(m, q_max, with_x=True), id4(k1)))),
        ("identity-4-connection-contraction-other-degrees",
         strided([id4(k) for k in extra1], with_x=True)),
        ("contraction-operators-x-linearity", xlin),
    ]


# -- suite: adiota ------------------------------------------------------------


def _draw_pair(m, rng):
    f = random_generator(m, rng, ymax=min(2, m.y_cap),
                         xmax=min(2, m.x_cap))
    gamma = random_connection(m, rng, xmax=min(2, m.x_cap))
    return JetIsomorphism(m, f), gamma


def _conjugation_holds(m, F, theta, gamma, S) -> bool:
    lhs = exp_iota(F, graded_nabla(S, gamma) + S.gdelta() + ad_op(F, S))
    T = exp_iota(F, S)
    rhs = graded_nabla(T, gamma) + T.gdelta() + iota(theta, T)
    return lhs.equals(rhs)


def suite_adiota(cfg):
    field = field_by_name(cfg["field"])
    m = JetModel(cfg["d"], cfg["n"], cfg["x_weight_cap"],
                 cfg["y_weight_cap"], field)
    n_draws = 50

    def draw(i):
        return _draw_pair(m, _rng(cfg, "adiota:%d" % i))

    def residuals():
        for i in range(n_draws):
            sig, gamma = draw(i)
            F = compute_F(m, sig, gamma)
            if not formula_F_residual(m, F, gamma).is_zero():
                return False, "nonzero residual at draw %d" % i
        return True, "residual 0 for %d draws" % n_draws

    def conj_full():
        sig, gamma = draw(0)
        F = compute_F(m, sig, gamma)
        theta = curvature_form(m, gamma)
        fails, total, w = _sweep(
            graded_pieces(m, min(2, cfg["cochain_arity_max"])),
            lambda S: _conjugation_holds(m, F, theta, gamma, S))
        return _verdict(fails, total, w)

    def conj_rotating():
        fails = total = 0
        witness = None
        q_max = min(3, cfg["cochain_arity_max"])
        for i in range(1, n_draws):
            sig, gamma = draw(i)
            F = compute_F(m, sig, gamma)
            theta = curvature_form(m, gamma)
            f, t, w = _sweep(
                graded_pieces(m, q_max, stride=40 * (n_draws - 1), phase=i),
                lambda S: _conjugation_holds(m, F, theta, gamma, S))
            fails += f
            total += t
            witness = witness or w
        return _verdict(fails, total, witness)

    def conj_trivial():
        gamma = JetForm(m, {})
        sig = JetIsomorphism(m, m.zero())
        F = compute_F(m, sig, gamma)
        if not F.is_zero():
            return False, "F(id, 0) is not zero"
        theta = curvature_form(m, gamma)
        fails, total, w = _sweep(
            itertools.islice(graded_pieces(m, 2, stride=97), 60),
            lambda S: _conjugation_holds(m, F, theta, gamma, S))
        return _verdict(fails, total, w)

    return [
        ("structure-equation-residual-50-draws", residuals),
        ("conjugation-identity-full-low-arity", conj_full),
        ("conjugation-identity-rotating-sample", conj_rotating),
        ("conjugation-identity-trivial-twist", conj_trivial),
    ]


# -- suite: formula-F ---------------------------------------------------------


def suite_formula_f(cfg):
    field = field_by_name(cfg["field"])
    m = JetModel(cfg["d"], cfg["n"], cfg["x_weight_cap"],
                 cfg["y_weight_cap"], field)

    def diff_op(sig, gamma, i, e):
        out = sig.apply_inverse(sig.apply(e).nabla_can(i)) - e.nabla_can(i)
        g = gamma.coefficient((i,))
        if g.coeffs:
            out = out - g.commutator(e)
        return out

    def reapply(sig, gamma, F):
        for i in range(m.d):
            Fi = F.coefficient((i,))
            for gen in m.module_basis(m.y_cap):
                e = m.basis_element(gen[0], gen[1], yi=gen[2])
                if not Fi.commutator(e).equals(diff_op(sig, gamma, i, e)):
                    return (i, gen)
        return None

    def solves():
        for i in range(10):
            sig, gamma = _draw_pair(m, _rng(cfg, "formulaF:%d" % i))
            F = compute_F(m, sig, gamma)
            w = reapply(sig, gamma, F)
            if w is not None:
                return False, "ad F misses the operator difference " \
                    "at draw %d, %s" % (i, w)
        return True, "ad F equals the operator difference, 10 draws"

    def structure():
        for i in range(10):
            sig, gamma = _draw_pair(m, _rng(cfg, "formulaF:%d" % i))
            F = compute_F(m, sig, gamma)
            if not formula_F_residual(m, F, gamma).is_zero():
                return False, "nonzero structure residual at draw %d" % i
        return True, "residual 0 for 10 draws"

    def trivial():
        sig = JetIsomorphism(m, m.zero())
        F = compute_F(m, sig, JetForm(m, {}))
        return F.is_zero(), "F(id, 0) = 0" if F.is_zero() else "nonzero"

    def first_order():
        rng = _rng(cfg, "formulaF:y1")
        f = random_generator(m, rng, ymax=1, xmax=1)
        sig = JetIsomorphism(m, f)
        gamma = JetForm(m, {})
        F = compute_F(m, sig, gamma)
        w = reapply(sig, gamma, F)
        ok = w is None and not F.is_zero()
        return ok, "pure first-order generator, flat connection" \
            if ok else "witness %s" % (w,)

    return [
        ("f-reproduces-operator-difference", solves),
        ("f-structure-equation-residual", structure),
        ("f-trivial-choices-zero", trivial),
        ("f-first-order-generator", first_order),
    ]


# -- suite: cotrace-morphism --------------------------------------------------


def suite_cotrace_morphism(cfg):
    field = field_by_name(cfg["field"])
    R = dual_numbers(field)
    M = matrix_algebra(cfg["n"], R)

    def table_delta():
        for k in range(3):
            space = CochainSpace(R, k, normalized=True)
            for pos in range(space.dim):
                D = space.basis_cochain(pos)
                lhs = cotrace_cochain(
                    normalize_projection(D.delta()), M)
                if not lhs.equals(cotrace_cochain(D, M).delta()):
                    return False, "arity %d basis cochain %d" % (k, pos)
        return True, "full normalized bases, arities 0..2"

    def table_bracket():
        rng = _rng(cfg, "cotrace")
        for i in range(25):
            D = normalize_projection(random_cochain(R, rng.randrange(0, 3),
                                                    rng, 4))
            E = normalize_projection(random_cochain(R, rng.randrange(1, 3),
                                                    rng, 4))
            lhs = cotrace_cochain(
                normalize_projection(D.bracket(E)), M)
            rhs = cotrace_cochain(D, M).bracket(cotrace_cochain(E, M))
            if not lhs.equals(rhs):
                return False, "pair draw %d" % i
        return True, "25 random normalized pairs"

    m = JetModel(cfg["d"], cfg["n"], cfg["x_weight_cap"],
                 cfg["y_weight_cap"], field)
    s = scalar_twin(m)

    def jet_pieces():
        gens = [g for g in s.module_basis(s.y_cap) if g[2] != 0]
        out = []
        for q in (1, 2):
            for args in itertools.product(gens, repeat=q):
                if sum(s.y_deg(g[2]) for g in args) > s.y_cap:
                    continue
                for yi in range(len(s.y_monos)):
                    if s.y_deg(yi) > s.y_cap:
                        continue
                    el = JetElement(s, {(0, 0, 0, yi): s.field.one})
                    out.append(JetCochain(s, q, {args: el}, aw=s.yw))
        return out

    def _drop_unit_args(D):
        return JetCochain(D.model, D.arity,
                          {a: el for a, el in D.entries.items()
                           if all(g[2] != 0 for g in a)}, aw=D.aw)

    def jet_delta():
        for i, D in enumerate(jet_pieces()):
            lhs = cotrace_jet(m, _drop_unit_args(D.delta()))
            if not lhs.equals(cotrace_jet(m, D).delta()):
                return False, "piece %d" % i
        return True, "jet-level spanning pieces"

    def jet_bracket():
        pieces = jet_pieces()
        rng = _rng(cfg, "cotrace-jet")
        for i in range(25):
            D = pieces[rng.randrange(len(pieces))]
            E = pieces[rng.randrange(len(pieces))]
            lhs = cotrace_jet(m, _drop_unit_args(D.bracket(E)))
            rhs = cotrace_jet(m, D).bracket(cotrace_jet(m, E))
            if not lhs.equals(rhs):
                return False, "pair draw %d" % i
        return True, "25 jet-level pairs"

    def rejects():
        bad = JetCochain(s, 1, {((0, 0, 0),):
                                JetElement(s, {(0, 0, 0, 0): s.field.one})},
                         aw=s.yw)
        try:
            cotrace_jet(m, bad)
        except GerstError:
            return True, "non-normalized input rejected"
        return False, "non-normalized input accepted"

    return [
        ("cotrace-commutes-with-differential", table_delta),
        ("cotrace-commutes-with-bracket", table_bracket),
        ("cotrace-jet-commutes-with-differential", jet_delta),
        ("cotrace-jet-commutes-with-bracket", jet_bracket),
        ("cotrace-rejects-non-normalized", rejects),
    ]


# -- suite: phi-chainmap ------------------------------------------------------


def _canary_choices(field):
    """Fixed nondegenerate instance whose chain defect discriminates the
    contraction exponent (kept as a canary against vacuous windows)."""
    m = JetModel(2, 2, 1, 1, field)
    y1 = m.y_index[(1, 0)]
    y2 = m.y_index[(0, 1)]
    x1 = m.x_index[(1, 0)]
    one = field.one

    def of(v):
        return field.of(v)

    f = JetElement(m, {(0, 1, 0, y1): of(2), (1, 0, 0, y2): of(3),
                       (0, 0, x1, y1): one, (1, 1, x1, y1): of(-1)})
    gamma = JetForm(m, {(0,): JetElement(m, {(0, 1, 0, 0): one,
                                             (1, 0, x1, 0): of(2)}),
                        (1,): JetElement(m, {(0, 0, 0, 0): one,
                                             (1, 1, 0, 0): of(-1)})})
    return m, JetIsomorphism(m, f), gamma


def suite_phi_chainmap(cfg):
    field = field_by_name(cfg["field"])
    m = JetModel(cfg["d"], cfg["n"], cfg["x_weight_cap"],
                 cfg["y_weight_cap"], field)
    q_max = min(2, cfg["cochain_arity_max"])

    def trivial():
        phi = ComparisonMap(m, JetIsomorphism(m, m.zero()), JetForm(m, {}))
        pieces = scalar_spanning_pieces(phi.scalar, q_max)
        fails = 0
        for S in pieces:
            if not phi.apply(S).equals(cotrace_graded(m, S)) \
                    or not phi.chain_defect(S).is_zero():
                fails += 1
        return _verdict(fails, len(pieces), None)

    def chain():
        sig, gamma = _draw_pair(m, _rng(cfg, "phi"))
        phi = ComparisonMap(m, sig, gamma)
        pieces = scalar_spanning_pieces(phi.scalar, q_max)
        fails, total, w = _sweep(pieces,
                                 lambda S: phi.chain_defect(S).is_zero())
        return _verdict(fails, total, w)

    def canary():
        cm, sig, gamma = _canary_choices(field)
        counts = {}
        for sgn in (-1, 1, 0):
            phi = ComparisonMap(cm, sig, gamma, exp_sign=sgn)
            pieces = scalar_spanning_pieces(phi.scalar, 2,
                                            arg_win=1, out_y=1)
            counts[sgn] = sum(0 if phi.chain_defect(S).is_zero() else 1
                              for S in pieces)
        ok = counts[-1] == 0 and counts[1] > 0 and counts[0] > 0
        detail = "nonzero defects by exponent: " + ", ".join(
            "%+d -> %d" % (sgn, counts[sgn]) for sgn in (-1, 1, 0))
        return ok, detail

    def induced_h0():
        lm = JetModel(1, cfg["n"], 1, 1, field)
        sig, gamma = _draw_pair(lm, _rng(cfg, "phi-h0"))
        phi = ComparisonMap(lm, sig, gamma)
        src = DeltaComplex(phi.scalar, 0, normalized=True)
        tgt = DeltaComplex(lm, 0, normalized=False)
        mats = compare_choices([phi], src, tgt, 0)
        dim_src = len(mats[0])
        dim_tgt = len(cohomology_basis(tgt, 0))
        rank = induced_rank(mats[0], len(tgt.coords[0]), field)
        ok = dim_src == dim_tgt == rank
        return ok, "H^0 dims %d -> %d, induced rank %d" % (dim_src,
                                                           dim_tgt, rank)

    return [
        ("phi-trivial-choices-equal-cotrace", trivial),
        ("phi-chain-defect-spanning-set", chain),
        ("phi-exponent-canary", canary),
        ("phi-induced-h0-isomorphism", induced_h0),
    ]


# -- suite: jet-poincare ------------------------------------------------------


def suite_jet_poincare(cfg):
    field = field_by_name(cfg["field"])
    m = JetModel(1, cfg["n"], 2, 2, field)

    def slices():
        rep = de_rham_report(m, 1, 2)
        bad = [(q, w) for (q, w), s in rep.items() if not s.ok()]
        if bad:
            return False, "failing slices: %s" % sorted(bad)
        table = {"%d,%+d" % (q, w): s.dims + [s.flat_dim]
                 for (q, w), s in sorted(rep.items())}
        return True, "dims per (arity, weight): %s" % table

    def prolong_mul():
        def entry(args):
            ((a, b), m1), ((c, d2), m2) = args
            if b != c:
                return {}
            mono = tuple(p + q for p, q in zip(m1, m2))
            return {((a, d2), mono): field.one}
        P = jet_prolong(m, 2, entry)
        ok = P.equals(mu_jet(m))
        return ok, "prolonged multiplication equals jet multiplication" \
            if ok else "mismatch"

    def prolong_id():
        def entry(args):
            (((a, b), mono),) = args
            return {((a, b), mono): field.one}
        P = jet_prolong(m, 1, entry)
        for g in m.module_basis(m.y_cap):
            if not P.value((g,)).equals(
                    m.basis_element(g[0], g[1], yi=g[2])):
                return False, "mismatch at %s" % (g,)
        return True, "prolonged identity equals identity"

    def prolong_flat():
        rng = _rng(cfg, "prolong")
        table = {}

        def entry(args):
            (((a, b), mono),) = args
            key = ((a, b), mono)
            if key not in table:
                table[key] = {((rng.randrange(m.n), rng.randrange(m.n)),
                               (rng.randrange(0, 3),)):
                              field.of(rng.randrange(1, 7))}
            return table[key]
        from .compare import _nabla_dir_cochain
        P = jet_prolong(m, 1, entry)
        nP = _nabla_dir_cochain(P, 0, None)
        ok = all(el.is_zero() for el in nP.entries.values())
        return ok, "prolongation is flat" if ok else "nonzero derivative"

    return [
        ("de-rham-slices-vanish-above-zero", slices),
        ("prolonged-multiplication", prolong_mul),
        ("prolonged-identity", prolong_id),
        ("prolongation-is-flat", prolong_flat),
    ]


# -- suite: choices -----------------------------------------------------------


def suite_choices(cfg):
    field = field_by_name(cfg["field"])
    m = JetModel(1, cfg["n"], 1, 1, field)
    sig0, gamma0 = _draw_pair(m, _rng(cfg, "choices:0"))
    sig1, gamma1 = _draw_pair(m, _rng(cfg, "choices:1"))
    maps = [ComparisonMap(m, JetIsomorphism(m, m.zero()), JetForm(m, {})),
            ComparisonMap(m, sig0, gamma0),
            ComparisonMap(m, sig1, gamma1)]
    src = DeltaComplex(maps[0].scalar, 1, normalized=True)
    tgt = DeltaComplex(m, 1, normalized=False)

    def check(q):
        def run():
            mats = compare_choices(maps, src, tgt, q)
            equal = all(mats[0] == mm for mm in mats[1:])
            dim_src = len(mats[0])
            dim_tgt = len(cohomology_basis(tgt, q))
            rank = induced_rank(mats[0], len(tgt.coords[q]), field)
            ok = equal and dim_src == dim_tgt == rank
            return ok, ("induced maps %s, dims %d -> %d, rank %d"
                        % ("equal" if equal else "DIFFER", dim_src,
                           dim_tgt, rank))
        return run

    return [
        ("induced-map-degree-0", check(0)),
        ("induced-map-degree-1", check(1)),
    ]


# -- runner -------------------------------------------------------------------


SUITES = {
    "dgla-axioms": suite_dgla_axioms,
    "commutators": suite_commutators,
    "adiota": suite_adiota,
    "formula-F": suite_formula_f,
    "cotrace-morphism": suite_cotrace_morphism,
    "phi-chainmap": suite_phi_chainmap,
    "jet-poincare": suite_jet_poincare,
    "choices": suite_choices,
}


def run_suite(name: str, config=None):
    """Execute a suite; returns check records sorted by check name."""
    if name not in SUITES:
        raise GerstError("unknown suite %r (known: %s)"
                         % (name, ", ".join(sorted(SUITES))))
    cfg = full_config(config)
    checks = SUITES[name](cfg)
    threads = max(1, int(os.environ.get("GERST_THREADS", "1") or "1"))

    def run_one(item):
        cname, fn = item
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except GerstError as exc:
            ok, detail = False, "error: %s" % exc
        ms = (time.perf_counter() - t0) * 1000.0
        return {"name": cname, "status": "pass" if ok else "fail",
                "detail": detail, "ms": ms}

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_one, checks))
    else:
        results = [run_one(c) for c in checks]
    return sorted(results, key=lambda r: r["name"])
