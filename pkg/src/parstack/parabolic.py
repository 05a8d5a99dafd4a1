"""Parabolic data at marked points: lattice chains, weights, morphisms.

A parabolic point of order r is a decreasing chain

    E^0 >= E^1 >= ... >= E^r = t * E^0

of lattices in a common K^n.  The weight a/r carries multiplicity
dim(E^a / E^{a+1}); multiplicities sum to n.  Chains are stored in full
(length r+1) even when consecutive members coincide, so refinement for the
direct image is a pure index computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidChain, ShapeMismatch
from .lattice import Lattice, direct_sum, image_columns, quotient_dim
from .linalg import EchelonTracker, k_inverse, mat_mul, mat_vec
from .localring import LocalElement

_Z = LocalElement.zero()


def make_weight(numerator, denominator):
    """The weight numerator/denominator as an exact rational in [0, 1)."""
    if denominator <= 0 or not 0 <= numerator < denominator:
        raise ValueError("weight %d/%d outside [0,1)" % (numerator, denominator))
    return Fraction(numerator, denominator)


class ParabolicPoint:
    """A lattice chain at one marked point."""

    __slots__ = ("order", "chain", "n", "field")

    def __init__(self, order, chain):
        chain = tuple(chain)
        if order < 1 or len(chain) != order + 1:
            raise InvalidChain("chain must have order+1 members")
        first = chain[0]
        self.order = order
        self.chain = chain
        self.n = first.n
        self.field = first.field
        for j in range(order):
            if not chain[j].contains(chain[j + 1]):
                raise InvalidChain("chain member %d does not contain member %d" % (j, j + 1))
        if chain[order] != first.scale(1):
            raise InvalidChain("chain endpoint differs from t * E^0")

    @classmethod
    def trivial(cls, field, n, order=1):
        top = Lattice.identity(field, n)
        return cls(order, [top] + [top.scale(1)] * order)

    @classmethod
    def line(cls, field, order, jump, twist=0):
        """Rank-1 chain with weight jump/order, base lattice t^twist * R."""
        if not 0 <= jump < order:
            raise InvalidChain("jump %d outside [0, %d)" % (jump, order))
        top = Lattice.diagonal(field, [twist])
        bot = top.scale(1)
        return cls(order, [top if j <= jump else bot for j in range(order + 1)])

    def weights(self):
        """Weight multiset as a sorted tuple of (Fraction, multiplicity)."""
        out = []
        for a in range(self.order):
            m = quotient_dim(self.chain[a], self.chain[a + 1])
            if m:
                out.append((Fraction(a, self.order), m))
        return tuple(out)

    def weight_sum(self):
        return sum((w * m for w, m in self.weights()), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, ParabolicPoint):
            return NotImplemented
        return self.order == other.order and self.chain == other.chain

    def __hash__(self):
        return hash((self.order, self.chain))

    def __repr__(self):
        return "ParabolicPoint(order=%d, n=%d, weights=%r)" % (
            self.order, self.n, [(str(w), m) for w, m in self.weights()])


def weights_of(point):
    """Weight multiset of a parabolic point (module-level convenience)."""
    return point.weights()


@dataclass(frozen=True)
class ParabolicBundle:
    """Rank, global degree bookkeeping and the per-point chains."""

    rank: int
    underlying_degree: int
    points: dict

    def __post_init__(self):
        for label, pt in self.points.items():
            if pt.n != self.rank:
                raise ShapeMismatch("point %r has ambient rank %d, bundle rank %d"
                                    % (label, pt.n, self.rank))

    def labels(self):
        return sorted(self.points)


def parabolic_degree(bundle):
    """underlying degree + sum of all weights with multiplicity."""
    total = Fraction(bundle.underlying_degree)
    for label in bundle.labels():
        total += bundle.points[label].weight_sum()
    return total


def is_point_morphism(rows, src, dst):
    """True iff rows * src.chain[j] <= dst.chain[j] for every stage j."""
    if src.order != dst.order:
        raise ShapeMismatch("orders %d vs %d" % (src.order, dst.order))
    if len(rows) != dst.n or (rows and len(rows[0]) != src.n):
        raise ShapeMismatch("matrix is %dx%d, expected %dx%d"
                            % (len(rows), len(rows[0]) if rows else 0, dst.n, src.n))
    for j in range(src.order):
        for col in image_columns(rows, src.chain[j], out_rank=dst.n):
            if not dst.chain[j].member(col):
                return False
    return True


def is_morphism(rows, src_bundle, dst_bundle):
    """Filtration-preserving check at every marked point."""
    if src_bundle.labels() != dst_bundle.labels():
        raise ShapeMismatch("bundles are marked at different points")
    for label in src_bundle.labels():
        if not is_point_morphism(rows, src_bundle.points[label], dst_bundle.points[label]):
            return False
    return True


@dataclass
class SplitLines:
    """Adapted-basis splitting of a parabolic point into rank-1 chains."""

    lines: list          # rank-1 ParabolicPoint, base lattice R
    jumps: list          # jump index of each line (weight jump/order)
    matrix: list         # n x n over K: direct sum of lines -> point
    inverse: list        # exact inverse of matrix

    def direct_sum_point(self):
        field = self.lines[0].field if self.lines else None
        order = self.lines[0].order
        chain = [direct_sum([l.chain[j] for l in self.lines]) for j in range(order + 1)]
        return ParabolicPoint(order, chain)


def split_into_lines(point, rng=None):
    """Adapted basis for the chain, as rank-1 lines plus change of basis.

    Works in the fiber V = E^0 / tE^0: the chain members map to a flag of
    subspaces; a basis adapted to the flag (echelon completion, pivots at
    the lowest row index) lifts to a splitting of the chain into lines.
    With rng given, the stagewise completion is randomized over valid
    choices (used for splitting-independence checks).
    """
    n, r, field = point.n, point.order, point.field
    top = point.chain[0]
    bottom = top.scale(1)
    if n == 0:
        return SplitLines([], [], [], [])

    # fiber images of the chain members, as k-row-vectors in B0-coordinates
    fiber = []
    for j in range(1, r):
        vecs = []
        for col in point.chain[j].basis_columns():
            coords = top.solve(col)
            vecs.append([c.coefficient(0) if not c.is_zero() else field.zero
                         for c in coords])
        fiber.append((j, vecs))

    tracker = EchelonTracker(field, n)
    chosen = []  # (k-vector in B0 coordinates, jump)
    for j, vecs in reversed(fiber):
        stage = _stage_vectors(field, vecs, n, rng)
        for v in stage:
            red = tracker.try_add(v)
            if red is not None:
                chosen.append((red, j))
    # complete with the standard basis of the fiber (weight 0 lines)
    basis0 = _stage_vectors(field, [_k_unit(field, n, i) for i in range(n)], n, rng)
    for v in basis0:
        red = tracker.try_add(v)
        if red is not None:
            chosen.append((red, 0))
    assert len(chosen) == n

    # lift through B0: column b of the change of basis is B0 * v_b
    vmat_cols = [v for v, _ in chosen]
    jumps = [j for _, j in chosen]
    b0 = point.chain[0].basis_columns()
    mat = [[_Z] * n for _ in range(n)]
    for b, v in enumerate(vmat_cols):
        for i in range(n):
            acc = _Z
            for c in range(n):
                if v[c] != 0 and not b0[c][i].is_zero():
                    acc = acc + b0[c][i].scalar_mul(v[c])
            mat[i][b] = acc
    # inverse = V^{-1} * B0^{-1}, both exact
    vinv = k_inverse(field, [[vmat_cols[b][c] for b in range(n)] for c in range(n)])
    b0inv_cols = [top.solve(_unit_vec(field, n, j)) for j in range(n)]
    b0inv = [[b0inv_cols[j][i] for j in range(n)] for i in range(n)]
    vinv_loc = [[LocalElement.const(e) for e in row] for row in vinv]
    inv = mat_mul(vinv_loc, b0inv)

    lines = [ParabolicPoint.line(field, r, j) for j in jumps]
    return SplitLines(lines, jumps, mat, inv)


def _stage_vectors(field, vecs, n, rng):
    from .linalg import rref

    basis, _ = rref(field, vecs)
    if rng is None or not basis:
        return basis
    # random invertible recombination of the stage basis
    k = len(basis)
    while True:
        coeffs = [[field.of(rng.randint(-3, 3)) for _ in range(k)] for _ in range(k)]
        try:
            k_inverse(field, coeffs)
        except ZeroDivisionError:
            continue
        break
    return [[sum((coeffs[a][b] * basis[b][i] for b in range(k)), field.zero)
             for i in range(n)] for a in range(k)]


def _k_unit(field, n, i):
    return [field.one if j == i else field.zero for j in range(n)]


def _unit_vec(field, n, j):
    v = [_Z] * n
    v[j] = LocalElement(0, (field.one,))
    return v
