"""Exact sparse linear algebra: rank, kernel bases, solving, echelon forms.

All routines work over any exact field (rationals or a prime field) and are
pure: inputs are never mutated.  Pivots are chosen by a cheap Markowitz-style
rule (fewest entries in the pivot row) to limit fill-in on the sparse cochain
matrices this package produces; the results are field-exact regardless of
pivot order.
"""

from __future__ import annotations

from .fields import GerstError


class SparseMatrix:
    """Immutable sparse matrix: entries maps (row, col) -> nonzero scalar."""

    def __init__(self, rows: int, cols: int, entries: dict, field):
        self.rows = rows
        self.cols = cols
        self.field = field
        self.entries = {k: v for k, v in entries.items() if v != field.zero}
        for (r, c) in self.entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise GerstError("entry (%d,%d) out of bounds" % (r, c))

    @classmethod
    def from_rows(cls, dense_rows, field):
        entries = {}
        cols = len(dense_rows[0]) if dense_rows else 0
        for r, row in enumerate(dense_rows):
            for c, v in enumerate(row):
                v = field.of(v)
                if v != field.zero:
                    entries[(r, c)] = v
        return cls(len(dense_rows), cols, entries, field)

    @classmethod
    def from_columns(cls, columns, rows: int, field):
        """Columns given as sparse dicts row -> scalar."""
        entries = {}
        for c, col in enumerate(columns):
            for r, v in col.items():
                if v != field.zero:
                    entries[(r, c)] = v
        return cls(rows, len(columns), entries, field)

    def row_dicts(self):
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def apply(self, vec: dict) -> dict:
        """Matrix times sparse column vector."""
        out = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x is not None:
                out[r] = out.get(r, self.field.zero) + v * x
        return {r: v for r, v in out.items() if v != self.field.zero}

    def rank(self) -> int:
        rows, _, nrank = _eliminate(self.row_dicts(), self.field)
        return nrank

    def kernel_basis(self):
        """Exact basis of the right null space, as sparse dicts col -> scalar."""
        rows, pivots, _ = _eliminate(self.row_dicts(), self.field)
        pivot_cols = {c for (_, c) in pivots}
        basis = []
        back = _back_substituted(rows, pivots, self.field)
        for free in range(self.cols):
            if free in pivot_cols:
                continue
            vec = {free: self.field.one}
            for (r, c) in pivots:
                coeff = back[r].get(free)
                if coeff is not None:
                    vec[c] = -coeff
            basis.append(vec)
        return basis

    def solve(self, b: dict):
        """Some x with Mx = b, or None if the system is inconsistent.

        The right-hand side rides along as an extra last column that is never
        eligible as a pivot; a row reducing to (0 ... 0 | nonzero) signals
        inconsistency.
        """
        rhs_col = self.cols
        rows = self.row_dicts()
        for r, v in b.items():
            if v != self.field.zero:
                rows[r][rhs_col] = v
        pivots = []
        remaining = list(range(self.rows))
        while True:
            best = None
            for r in remaining:
                row = rows[r]
                if not row or (len(row) == 1 and rhs_col in row):
                    continue
                if best is None or len(row) < len(rows[best]):
                    best = r
            if best is None:
                break
            prow = rows[best]
            pc = min(c for c in prow if c != rhs_col)
            pv = prow[pc]
            pivots.append((best, pc))
            remaining.remove(best)
            for r in remaining:
                f = rows[r].get(pc)
                if f is not None:
                    _axpy(rows[r], prow, -(f / pv), self.field)
        for r in remaining:
            if rows[r]:
                return None
        x = {}
        for (r, pc) in sorted(pivots, key=lambda t: -t[1]):
            s = rows[r].get(rhs_col, self.field.zero)
            for c, v in rows[r].items():
                if c != pc and c != rhs_col and c in x:
                    s = s - v * x[c]
            val = s / rows[r][pc]
            if val != self.field.zero:
                x[pc] = val
        return x

    def __repr__(self):
        return "SparseMatrix(%dx%d, %d entries)" % (self.rows, self.cols, len(self.entries))


def _axpy(target: dict, source: dict, factor, field):
    if factor == field.zero:
        return
    for c, v in source.items():
        nv = target.get(c, field.zero) + factor * v
        if nv == field.zero:
            target.pop(c, None)
        else:
            target[c] = nv


def _eliminate(rows, field):
    """Forward elimination on row dicts (mutated); returns (rows, pivots, rank)."""
    pivots = []
    remaining = list(range(len(rows)))
    while True:
        best = None
        for r in remaining:
            if not rows[r]:
                continue
            if best is None or len(rows[r]) < len(rows[best]):
                best = r
        if best is None:
            break
        prow = rows[best]
        pc = min(prow.keys())
        pv = prow[pc]
        pivots.append((best, pc))
        remaining.remove(best)
        for r in remaining:
            f = rows[r].get(pc)
            if f is not None:
                _axpy(rows[r], prow, -(f / pv), field)
    return rows, pivots, len(pivots)


def _back_substituted(rows, pivots, field):
    """Reduce above pivots and normalize pivot entries to 1."""
    order = sorted(pivots, key=lambda t: t[1])
    for idx, (r, c) in enumerate(order):
        pv = rows[r][c]
        if pv != field.one:
            rows[r] = {k: v / pv for k, v in rows[r].items()}
        for (r2, c2) in order[:idx]:
            f = rows[r2].get(c)
            if f is not None:
                _axpy(rows[r2], rows[r], -f, field)
    return rows


def echelon_basis(vectors, dim: int, field):
    """Canonical reduced echelon basis of the span of sparse vectors.

    Used for deterministic equality of subspaces and elements-mod-subspace.
    """
    rows = [dict(v) for v in vectors if v]
    rows, pivots, _ = _eliminate(rows, field)
    rows = _back_substituted(rows, pivots, field)
    result = [rows[r] for (r, c) in sorted(pivots, key=lambda t: t[1])]
    return result


def reduce_mod(vec: dict, echelon, field):
    """Reduce a sparse vector modulo an echelonized basis (canonical rep)."""
    out = dict(vec)
    for row in echelon:
        pc = min(row.keys())
        f = out.get(pc)
        if f is not None:
            _axpy(out, row, -(f / row[pc]), field)
    return out


def kernel_basis(columns, rows: int, field):
    """Right null space of the matrix with the given sparse columns."""
    return SparseMatrix.from_columns(columns, rows, field).kernel_basis()


def in_span(vec: dict, echelon, field) -> bool:
    return not reduce_mod(vec, echelon, field)


def dense_rank(dense_rows, field) -> int:
    """Independent oracle: textbook dense Gaussian elimination, first nonzero
    pivot in column order, no sparsity tricks.  Kept deliberately separate
    from the sparse path so the two can cross-check each other."""
    m = [[field.of(v) for v in row] for row in dense_rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if m[r][c] != field.zero:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        for r in range(rank + 1, nrows):
            if m[r][c] != field.zero:
                f = m[r][c] / pv
                for cc in range(c, ncols):
                    m[r][cc] = m[r][cc] - f * m[rank][cc]
        rank += 1
    return rank
