"""Small matrix helpers over the Laurent-polynomial model of K and over k.

Matrices are row-major lists of lists.  Entries are LocalElement for
K-matrices and bare field elements for k-matrices (fiber computations).
"""

from __future__ import annotations

from .localring import LocalElement

_Z = LocalElement.zero()


# -- K-matrices (LocalElement entries) ------------------------------------


def identity_matrix(field, n):
    one = LocalElement(0, (field.one,))
    return [[one if i == j else _Z for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, m = len(a), len(b[0]) if b else 0
    inner = len(b)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = _Z
            for k in range(inner):
                e, f = a[i][k], b[k][j]
                if not e.is_zero() and not f.is_zero():
                    acc = acc + e * f
            row.append(acc)
        out.append(row)
    return out


def mat_vec(a, v):
    out = []
    for row in a:
        acc = _Z
        for e, x in zip(row, v):
            if not e.is_zero() and not x.is_zero():
                acc = acc + e * x
        out.append(acc)
    return out


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def mat_eq(a, b):
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))


def scalar_mat_mul(s, a):
    return [[s * e for e in row] for row in a]


# -- k-matrices (field-element entries) -----------------------------------


def rref(field, rows):
    """Reduced row echelon form; returns (rref_rows, pivot_columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    rank = 0
    for c in range(ncols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        m[rank] = [inv * e for e in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c]
                m[r] = [e - f * g for e, g in zip(m[r], m[rank])]
        pivots.append(c)
        rank += 1
        if rank == len(m):
            break
    return m[:rank], pivots


def k_inverse(field, rows):
    """Inverse of a square k-matrix via Gauss-Jordan."""
    n = len(rows)
    aug = [list(r) + [field.one if i == j else field.zero for j in range(n)]
           for i, r in enumerate(rows)]
    red, pivots = rref(field, aug)
    if len(red) != n or pivots != list(range(n)):
        raise ZeroDivisionError("matrix not invertible over k")
    return [row[n:] for row in red]


def k_mat_vec(rows, v):
    return [sum((e * x for e, x in zip(row, v)), 0 * v[0]) if row else 0 for row in rows]


class EchelonTracker:
    """Incremental independence test over k with deterministic reduction."""

    def __init__(self, field, dim):
        self.field = field
        self.dim = dim
        self.rows = []    # reduced vectors, each with a distinct pivot
        self.pivots = []  # pivot index of each row

    def reduce(self, vec):
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            if v[p] != 0:
                f = v[p]
                v = [e - f * g for e, g in zip(v, row)]
        return v

    def try_add(self, vec):
        """Reduce vec against the current rows; add and return the reduced
        vector if independent, else None."""
        v = self.reduce(vec)
        p = None
        for i, e in enumerate(v):
            if e != 0:
                p = i
                break
        if p is None:
            return None
        inv = 1 / v[p]
        v = [inv * e for e in v]
        self.rows.append(v)
        self.pivots.append(p)
        return v

    @property
    def rank(self):
        return len(self.rows)
