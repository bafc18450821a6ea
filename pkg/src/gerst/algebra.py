"""Associative algebras via sparse structure constants.

Covers the finite-dimensional table algebras (matrix algebras, dual numbers)
and the weight-graded polynomial models.  Polynomial models are weight-capped
but never truncated: a product whose degree exceeds the cap raises
WeightOverflowError instead of silently dropping terms, so every identity that
does evaluate is exact.
"""

from __future__ import annotations

import itertools
import json

from .fields import QQ, GerstError, field_by_name
from .linalg import SparseMatrix, echelon_basis, in_span, reduce_mod


class WeightOverflowError(GerstError):
    """A product escaped the weight-capped basis; use a larger cap."""


class Algebra:
    """Finite-dimensional (optionally weight-graded) associative unital algebra.

    table maps (i, j) to the sparse coordinate vector of e_i * e_j.  For a
    capped algebra, pairs whose product overflows the cap are recorded in
    overflow_pairs and multiplying them raises.
    """

    def __init__(self, field, labels, unit, table, weights=None, weight_cap=None,
                 name="", check=True):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.unit = {i: v for i, v in unit.items() if v != field.zero}
        self.table = table
        self.weights = list(weights) if weights is not None else None
        self.weight_cap = weight_cap
        self.name = name
        self.overflow_pairs = set()
        if weight_cap is not None:
            for i in range(self.dim):
                for j in range(self.dim):
                    if (i, j) not in table:
                        self.overflow_pairs.add((i, j))
        self._mu = None
        self._center = None
        self._commutator_submodule = None
        if check:
            self._check_axioms()

    # -- construction-time checks -------------------------------------------

    def _check_axioms(self):
        for i in range(self.dim):
            if self.mul_basis_vec({i: self.field.one}, self.unit) != {i: self.field.one}:
                raise GerstError("unit axiom fails: e_%d * 1" % i)
            if self.mul_basis_vec(self.unit, {i: self.field.one}) != {i: self.field.one}:
                raise GerstError("unit axiom fails: 1 * e_%d" % i)
        for i, j, k in itertools.product(range(self.dim), repeat=3):
            try:
                left = self.mul(self.mul_basis(i, j), {k: self.field.one})
                right = self.mul({i: self.field.one}, self.mul_basis(j, k))
            except WeightOverflowError:
                continue
            if left != right:
                raise GerstError("associativity fails on basis triple (%d,%d,%d)" % (i, j, k))
        if self.weights is not None:
            for (i, j), vec in self.table.items():
                w = self.weights[i] + self.weights[j]
                for k in vec:
                    if self.weights[k] != w:
                        raise GerstError("product is not weight-additive at (%d,%d)" % (i, j))

    # -- multiplication ------------------------------------------------------

    def mul_basis(self, i: int, j: int) -> dict:
        if (i, j) in self.overflow_pairs:
            raise WeightOverflowError(
                "%s: product e_%d * e_%d exceeds weight cap %s"
                % (self.name or "algebra", i, j, self.weight_cap))
        return self.table.get((i, j), {})

    def mul_basis_vec(self, vec: dict, other: dict) -> dict:
        return self.mul(vec, other)

    def mul(self, a: dict, b: dict) -> dict:
        out = {}
        for i, x in a.items():
            for j, y in b.items():
                for k, c in self.mul_basis(i, j).items():
                    nv = out.get(k, self.field.zero) + x * y * c
                    if nv == self.field.zero:
                        out.pop(k, None)
                    else:
                        out[k] = nv
        return out

    def commutator(self, a: dict, b: dict) -> dict:
        ab = self.mul(a, b)
        ba = self.mul(b, a)
        out = dict(ab)
        for k, v in ba.items():
            nv = out.get(k, self.field.zero) - v
            if nv == self.field.zero:
                out.pop(k, None)
            else:
                out[k] = nv
        return out

    @property
    def unit_index(self):
        """Basis index of the unit if the unit is a basis direction, else None."""
        if len(self.unit) == 1:
            (i, v), = self.unit.items()
            if v == self.field.one:
                return i
        return None

    def weight_of(self, i: int) -> int:
        return 0 if self.weights is None else self.weights[i]

    # -- derived structure ---------------------------------------------------

    def center(self):
        """Basis of {z : z e_i = e_i z for all i}, via one stacked kernel."""
        if self._center is not None:
            return self._center
        cols = []
        for z in range(self.dim):
            col = {}
            for i in range(self.dim):
                try:
                    zi = self.mul_basis(z, i)
                    iz = self.mul_basis(i, z)
                except WeightOverflowError:
                    continue
                for k, v in zi.items():
                    key = i * self.dim + k
                    col[key] = col.get(key, self.field.zero) + v
                for k, v in iz.items():
                    key = i * self.dim + k
                    col[key] = col.get(key, self.field.zero) - v
            cols.append({k: v for k, v in col.items() if v != self.field.zero})
        mat = SparseMatrix.from_columns(cols, self.dim * self.dim, self.field)
        basis = mat.kernel_basis()
        self._center = SubspaceBasis(self, basis)
        return self._center

    def commutator_submodule(self):
        """Center-module span of all pairwise basis commutators, echelonized."""
        if self._commutator_submodule is not None:
            return self._commutator_submodule
        gens = []
        comms = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                try:
                    c = self.commutator({i: self.field.one}, {j: self.field.one})
                except WeightOverflowError:
                    continue
                if c:
                    comms.append(c)
        for z in self.center().vectors:
            for c in comms:
                try:
                    gens.append(self.mul(z, c))
                except WeightOverflowError:
                    continue
        gens.extend(comms)
        self._commutator_submodule = SubspaceBasis(self, gens)
        return self._commutator_submodule

    def decompose(self, a: dict):
        """Unique (central, commutator-part) pair summing to a.

        Requires center + [A,A] to span A; raises naming the defect dimension
        otherwise.
        """
        zbasis = self.center().vectors
        cbasis = self.commutator_submodule().vectors
        cols = list(zbasis) + list(cbasis)
        span_dim = len(echelon_basis(cols, self.dim, self.field))
        if span_dim < self.dim:
            raise GerstError(
                "center + [A,A] span only %d of %d dimensions (defect %d)"
                % (span_dim, self.dim, self.dim - span_dim))
        mat = SparseMatrix.from_columns(cols, self.dim, self.field)
        x = mat.solve(a)
        if x is None:
            raise GerstError("decompose: inconsistent solve (should not happen)")
        central = {}
        a0 = {}
        for idx, coeff in x.items():
            vec = cols[idx]
            target = central if idx < len(zbasis) else a0
            for k, v in vec.items():
                nv = target.get(k, self.field.zero) + coeff * v
                if nv == self.field.zero:
                    target.pop(k, None)
                else:
                    target[k] = nv
        return central, a0

    def derivation_ad(self, a: dict) -> SparseMatrix:
        """The map b -> ab - ba as a dim x dim matrix."""
        cols = [self.commutator(a, {j: self.field.one}) for j in range(self.dim)]
        return SparseMatrix.from_columns(cols, self.dim, self.field)

    def derivation_space_dim(self) -> int:
        """dim Der(A) over the scalar field (Leibniz condition as a kernel).

        Unknowns X[r, s]: the e_r-coefficient of D(e_s); one constraint row
        per (i, j, output index k) for D(e_i e_j) - D(e_i)e_j - e_i D(e_j).
        """
        n = self.dim
        cols = []
        for r in range(n):
            for s in range(n):
                col = {}
                def add(i, j, k, v):
                    key = (i * n + j) * n + k
                    nv = col.get(key, self.field.zero) + v
                    if nv == self.field.zero:
                        col.pop(key, None)
                    else:
                        col[key] = nv
                for i in range(n):
                    for j in range(n):
                        if (i, j) in self.overflow_pairs:
                            continue
                        c = self.mul_basis(i, j).get(s)
                        if c is not None:
                            add(i, j, r, c)
                for j in range(n):
                    if (r, j) not in self.overflow_pairs:
                        for k, c in self.mul_basis(r, j).items():
                            add(s, j, k, -c)
                    if (j, r) not in self.overflow_pairs:
                        for k, c in self.mul_basis(j, r).items():
                            add(j, s, k, -c)
                cols.append(col)
        mat = SparseMatrix.from_columns(cols, n ** 3, self.field)
        return len(mat.kernel_basis())

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        table_entries = []
        for (i, j), vec in sorted(self.table.items()):
            for k in sorted(vec):
                table_entries.append([i, j, k, _fmt_exact(vec[k])])
        data = {
            "dim": self.dim,
            "basis": self.labels,
            "unit": [_fmt_exact(self.unit.get(i, self.field.zero)) for i in range(self.dim)],
            "table": table_entries,
        }
        if self.weights is not None:
            data["weights"] = self.weights
        if self.weight_cap is not None:
            data["weight_cap"] = self.weight_cap
            data["zero_pairs"] = sorted(
                [i, j] for (i, j), vec in self.table.items() if not vec)
        return data

    @classmethod
    def from_json(cls, data: dict, field=QQ, name=""):
        labels = data["basis"]
        if len(labels) != data["dim"]:
            raise GerstError("dim does not match basis label count")
        unit = {}
        for i, s in enumerate(data["unit"]):
            v = field.of(s)
            if v != field.zero:
                unit[i] = v
        table = {}
        for i, j, k, s in data["table"]:
            table.setdefault((i, j), {})[k] = field.of(s)
        if data.get("weight_cap") is not None:
            for i, j in data.get("zero_pairs", []):
                table.setdefault((i, j), {})
        weights = data.get("weights")
        return cls(field, labels, unit, table, weights=weights,
                   weight_cap=data.get("weight_cap"), name=name or "json-algebra")


def _fmt_exact(v) -> str:
    s = str(getattr(v, "v", v))
    if "/" not in s:
        s = s + "/1"
    return s


class SubspaceBasis:
    """Echelonized basis of a subspace; canonical for equality tests."""

    def __init__(self, ambient: Algebra, vectors):
        self.ambient = ambient
        self.vectors = echelon_basis(vectors, ambient.dim, ambient.field)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def contains(self, vec: dict) -> bool:
        return in_span(vec, self.vectors, self.ambient.field)

    def reduce(self, vec: dict) -> dict:
        return reduce_mod(vec, self.vectors, self.ambient.field)

    def dims_by_weight(self) -> dict:
        out = {}
        for v in self.vectors:
            w = self.ambient.weight_of(min(v.keys()))
            out[w] = out.get(w, 0) + 1
        return out

    def __eq__(self, other):
        return self.vectors == other.vectors

    def __repr__(self):
        return "SubspaceBasis(dim=%d of %d)" % (self.dim, self.ambient.dim)


# -- constructors -----------------------------------------------------------


def field_algebra(field=QQ) -> Algebra:
    return Algebra(field, ["1"], {0: field.one}, {(0, 0): {0: field.one}}, name="k")


def dual_numbers(field=QQ) -> Algebra:
    """k[x]/(x^2) as a table algebra, basis {1, x}."""
    one = field.one
    table = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}, (1, 1): {}}
    return Algebra(field, ["1", "x"], {0: one}, table, name="dual-numbers")


def monomials_up_to(d: int, cap: int):
    """Exponent tuples in d variables of total degree <= cap, ordered by
    (degree, lex)."""
    out = []
    for deg in range(cap + 1):
        out.extend(sorted(_exponents_of_degree(d, deg)))
    return out


def _exponents_of_degree(d, deg):
    if d == 1:
        return [(deg,)]
    result = []
    for first in range(deg + 1):
        for rest in _exponents_of_degree(d - 1, deg - first):
            result.append((first,) + rest)
    return result


def monomial_label(exps, names=None) -> str:
    if names is None:
        names = ["x%d" % (i + 1) for i in range(len(exps))]
    parts = []
    for n, e in zip(names, exps):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append("%s^%d" % (n, e))
    return "*".join(parts) if parts else "1"


def polynomial_algebra(d: int, weight_cap: int, field=QQ, var_names=None) -> Algebra:
    """Commutative monomial-basis algebra in d variables, graded by total
    degree; products above the cap raise instead of truncating."""
    if d < 1:
        raise GerstError("need at least one variable")
    monos = monomials_up_to(d, weight_cap)
    index = {m: i for i, m in enumerate(monos)}
    table = {}
    for i, mi in enumerate(monos):
        for j, mj in enumerate(monos):
            s = tuple(a + b for a, b in zip(mi, mj))
            if sum(s) <= weight_cap:
                table[(i, j)] = {index[s]: field.one}
    labels = [monomial_label(m, var_names) for m in monos]
    weights = [sum(m) for m in monos]
    alg = Algebra(field, labels, {0: field.one}, table, weights=weights,
                  weight_cap=weight_cap, name="poly(d=%d,cap=%d)" % (d, weight_cap))
    alg.monomials = monos
    alg.monomial_index = index
    alg.nvars = d
    return alg


def matrix_algebra(n: int, base: Algebra) -> Algebra:
    """Mat_n(base) with basis E_ab (x) base-basis, index (a*n+b)*dim(base)+r."""
    if n < 1:
        raise GerstError("matrix size must be >= 1")
    field = base.field
    dim_b = base.dim
    labels = []
    for a in range(n):
        for b in range(n):
            for r in range(dim_b):
                lab = base.labels[r]
                labels.append("E%d%d" % (a + 1, b + 1) + ("" if lab == "1" else "*" + lab))
    def idx(a, b, r):
        return (a * n + b) * dim_b + r

    table = {}
    for a, b, c, d in itertools.product(range(n), repeat=4):
        if b != c:
            for r in range(dim_b):
                for s in range(dim_b):
                    table[(idx(a, b, r), idx(c, d, s))] = {}
            continue
        for r in range(dim_b):
            for s in range(dim_b):
                if (r, s) in base.overflow_pairs:
                    continue
                prod = base.mul_basis(r, s)
                table[(idx(a, b, r), idx(c, d, s))] = {idx(a, d, t): v for t, v in prod.items()}
    unit = {}
    for a in range(n):
        for r, v in base.unit.items():
            unit[idx(a, a, r)] = v
    weights = None
    if base.weights is not None:
        weights = []
        for a in range(n):
            for b in range(n):
                weights.extend(base.weights)
    alg = Algebra(field, labels, unit, table, weights=weights,
                  weight_cap=base.weight_cap,
                  name="Mat%d(%s)" % (n, base.name or "base"))
    alg.matrix_size = n
    alg.matrix_base = base
    return alg


def with_unit_basis(A: Algebra):
    """Change basis so the unit is the first basis vector.

    Returns (B, to_B, from_B): matrices carrying coordinate vectors of A to B
    and back.  Raises if the unit has no usable pivot (cannot happen for a
    unital algebra).
    """
    field = A.field
    if A.unit_index == 0:
        ident = SparseMatrix.from_columns(
            [{i: field.one} for i in range(A.dim)], A.dim, field)
        return A, ident, ident
    pivot = max(A.unit.keys())
    new_from_old_cols = []
    for j in range(A.dim):
        if j == pivot:
            new_from_old_cols.append(dict(A.unit))
        else:
            new_from_old_cols.append({j: field.one})
    order = [pivot] + [j for j in range(A.dim) if j != pivot]
    basis_vectors = [new_from_old_cols[j] for j in order]
    from_B = SparseMatrix.from_columns(basis_vectors, A.dim, field)
    to_cols = []
    for j in range(A.dim):
        sol = from_B.solve({j: field.one})
        to_cols.append(sol)
    to_B = SparseMatrix.from_columns(to_cols, A.dim, field)
    table = {}
    for i in range(A.dim):
        for j in range(A.dim):
            if (i, j) in A.overflow_pairs:
                continue
            prod = A.mul(basis_vectors[i], basis_vectors[j])
            table[(i, j)] = to_B.apply(prod)
    labels = [A.labels[order[j]] if j > 0 else "1" for j in range(A.dim)]
    B = Algebra(field, labels, {0: field.one}, table,
                name=(A.name or "algebra") + "/unit-basis")
    return B, to_B, from_B


def load_algebra(path, field=QQ) -> Algebra:
    with open(path) as fh:
        data = json.load(fh)
    return Algebra.from_json(data, field=field, name=str(path))
