"""Full-rank lattices over R = k[t]_(t) inside a generic fiber K^n.

A lattice is stored canonicalized: upper triangular column basis, pivot of
column j at row j equal to a pure power t^{a_j}, and every off-diagonal
entry in row i reduced modulo t^{a_i}.  This form is unique, so lattice
equality is entrywise comparison.

All algorithms run on Laurent-polynomial matrices.  Triangularization uses
only exact column operations (scale by a polynomial unit of R, subtract an
R-multiple); normalization of the triangular form uses truncated power
series at a precision that provably exceeds what the reduced entries can
see, and the result is re-verified exactly by back-substitution.
"""

from __future__ import annotations

from .errors import AmbientMismatch, NotContained, SingularBasis
from .localring import LocalElement

_Z = LocalElement.zero()


class Lattice:
    __slots__ = ("field", "n", "cols", "diag")

    def __init__(self, field, n, cols, diag, _trusted=False):
        """Internal constructor; use from_columns / identity / diagonal."""
        if not _trusted:
            raise TypeError("use Lattice.from_columns")
        self.field = field
        self.n = n
        self.cols = cols
        self.diag = diag

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_columns(cls, field, n, columns):
        """Canonicalize a generating set (list of length-n entry lists)."""
        if n == 0:
            return cls(field, 0, (), (), _trusted=True)
        cols, diag = _canonicalize(field, n, columns)
        return cls(field, n, cols, diag, _trusted=True)

    @classmethod
    def identity(cls, field, n):
        return cls.diagonal(field, [0] * n)

    @classmethod
    def diagonal(cls, field, exps):
        n = len(exps)
        cols = tuple(
            tuple(LocalElement.t_power(field, exps[j]) if i == j else _Z for i in range(n))
            for j in range(n)
        )
        return cls(field, n, cols, tuple(exps), _trusted=True)

    # -- basic views -------------------------------------------------------

    def column(self, j):
        return list(self.cols[j])

    def basis_columns(self):
        return [list(c) for c in self.cols]

    # -- operations --------------------------------------------------------

    def scale(self, d):
        """The lattice t^d * self; canonical form shifts entrywise."""
        if d == 0 or self.n == 0:
            return self if d == 0 else self
        cols = tuple(tuple(e.shift(d) for e in col) for col in self.cols)
        diag = tuple(a + d for a in self.diag)
        return Lattice(self.field, self.n, cols, diag, _trusted=True)

    def solve(self, w):
        """Coordinates x with basis * x = w, by exact back-substitution.

        Always solvable over K (divisions are only by t-powers); membership
        of w in the lattice is equivalent to all coordinates having
        valuation >= 0.
        """
        n = self.n
        x = [_Z] * n
        for j in range(n - 1, -1, -1):
            acc = w[j]
            for k in range(j + 1, n):
                if not x[k].is_zero() and not self.cols[k][j].is_zero():
                    acc = acc - self.cols[k][j] * x[k]
            x[j] = acc.shift(-self.diag[j])
        return x

    def member(self, w):
        return all(e.is_zero() or e.ord >= 0 for e in self.solve(w))

    def contains(self, other):
        """True iff other is a sublattice of self."""
        if not isinstance(other, Lattice):
            raise TypeError(other)
        if other.n != self.n or other.field != self.field:
            raise AmbientMismatch("ambient rank %d vs %d" % (self.n, other.n))
        return all(self.member(list(c)) for c in other.cols)

    def dual(self):
        """The dual lattice {v : <v, self> in R} w.r.t. the standard pairing."""
        n = self.n
        if n == 0:
            return self
        # rows of basis^{-1} are the dual basis vectors
        inv_cols = [self.solve(_unit_vector(self.field, n, j)) for j in range(n)]
        duals = [[inv_cols[j][i] for j in range(n)] for i in range(n)]
        return Lattice.from_columns(self.field, n, duals)

    def det_valuation(self):
        return sum(self.diag)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self.cols == other.cols

    def __hash__(self):
        return hash((self.n, self.cols))

    def __repr__(self):
        return "Lattice(n=%d, diag=%r)" % (self.n, list(self.diag))


def _unit_vector(field, n, j):
    v = [_Z] * n
    v[j] = LocalElement(0, (field.one,))
    return v


# -- canonicalization -----------------------------------------------------


def _canonicalize(field, n, columns):
    """Return (cols, diag) of the canonical basis of the R-span."""
    work = []
    for c in columns:
        col = list(c)
        if len(col) != n:
            raise AmbientMismatch("column length %d != ambient %d" % (len(col), n))
        if any(not e.is_zero() for e in col):
            work.append(col)
    if len(work) < n:
        raise SingularBasis("%d independent generators needed, got %d" % (n, len(work)))

    # triangularize: rows bottom-up, exact column operations only
    avail = list(range(len(work)))
    pivot_col = [None] * n
    for i in range(n - 1, -1, -1):
        cands = [(work[c][i].ord, c) for c in avail if not work[c][i].is_zero()]
        if not cands:
            raise SingularBasis("rank deficiency at row %d" % i)
        vp, cp = min(cands)
        avail.remove(cp)
        pivot_col[i] = cp
        piv = work[cp]
        ptilde = piv[i].unit_poly()
        for c in avail:
            q = work[c][i]
            if q.is_zero():
                continue
            f = q.shift(-vp)  # t^{vq-vp} * unit part of q
            col = work[c]
            for r in range(i + 1):
                col[r] = ptilde * col[r] - f * piv[r]
            assert col[i].is_zero()
    tri = [work[pivot_col[i]] for i in range(n)]
    diag = [tri[i][i].ord for i in range(n)]

    # precision for the unit-normalization phase
    ords = [e.ord for col in tri for e in col if not e.is_zero()]
    m = min(0, min(ords))
    amax = max(0, max(diag))
    prec = amax + n * (amax - m) + abs(m) + 2

    canon = [[_Z] * n for _ in range(n)]
    for j in range(n):
        uinv = tri[j][j].unit_poly().inv_series(prec - m + 1)
        w = [(tri[j][r] * uinv).truncate(prec) for r in range(j)]
        for i in range(j - 1, -1, -1):
            lam = w[i].high_div(diag[i])
            if not lam.is_zero():
                assert lam.ord >= 0
                for r in range(i):
                    cir = canon[i][r]
                    if not cir.is_zero():
                        w[r] = (w[r] - lam * cir).truncate(prec)
                w[i] = w[i].low_part(diag[i])
        col = canon[j]
        for i in range(j):
            col[i] = w[i]
        col[j] = LocalElement.t_power(field, diag[j])

    out = Lattice(field, n, tuple(tuple(c) for c in canon), tuple(diag), _trusted=True)
    # exact a-posteriori check: the triangular basis lies in the canonical
    # span; with equal determinant valuations this forces span equality.
    for col in tri:
        if not out.member(col):
            raise AssertionError("internal: canonical form verification failed")
    return out.cols, out.diag


# -- module-level operations ----------------------------------------------


def canonicalize(lattice):
    """Recanonicalize (idempotent by construction; provided for the contract)."""
    return Lattice.from_columns(lattice.field, lattice.n, lattice.basis_columns())


def lattice_sum(a, b):
    """Smallest lattice containing both."""
    _check_ambient(a, b)
    if a.n == 0:
        return a
    return Lattice.from_columns(a.field, a.n, a.basis_columns() + b.basis_columns())


def lattice_intersect(a, b):
    """Largest lattice contained in both, via duality: (a* + b*)*."""
    _check_ambient(a, b)
    if a.n == 0:
        return a
    return lattice_sum(a.dual(), b.dual()).dual()


def quotient_dim(big, small):
    """Length of big/small over k; requires small <= big."""
    _check_ambient(big, small)
    if not big.contains(small):
        raise NotContained("second lattice is not inside the first")
    return small.det_valuation() - big.det_valuation()


def direct_sum(lattices, field=None, ns=None):
    """Block direct sum; canonical blocks assemble to a canonical basis."""
    lats = list(lattices)
    if not lats:
        if field is None:
            raise ValueError("empty direct sum needs an explicit field")
        return Lattice(field, 0, (), (), _trusted=True)
    field = lats[0].field
    n = sum(l.n for l in lats)
    cols = []
    diag = []
    off = 0
    for l in lats:
        for j in range(l.n):
            col = [_Z] * n
            for i in range(l.n):
                col[off + i] = l.cols[j][i]
            cols.append(tuple(col))
        diag.extend(l.diag)
        off += l.n
    return Lattice(field, n, tuple(cols), tuple(diag), _trusted=True)


def image_columns(rows, lattice, out_rank=None):
    """A * (basis columns) as raw vectors; A given as a list of rows."""
    m = out_rank if out_rank is not None else len(rows)
    gens = []
    for col in lattice.basis_columns():
        img = []
        for i in range(m):
            acc = _Z
            for j, e in enumerate(col):
                if not e.is_zero() and not rows[i][j].is_zero():
                    acc = acc + rows[i][j] * e
            img.append(acc)
        gens.append(img)
    return gens


def apply_matrix(rows, lattice, out_rank=None):
    """Lattice spanned by A * (basis columns); requires A injective."""
    m = out_rank if out_rank is not None else len(rows)
    return Lattice.from_columns(lattice.field, m, image_columns(rows, lattice, m))


def _check_ambient(a, b):
    if a.n != b.n or a.field != b.field:
        raise AmbientMismatch("ambient rank %d vs %d" % (a.n, b.n))
