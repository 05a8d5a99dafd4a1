"""Equivariant graded modules on root-stack charts and the correspondence.

A graded module of order s is an ascending lattice chain

    M_0 <= M_1 <= ... <= M_{s-1} <= t^{-1} M_0

inside a common K^n; the inclusions model multiplication by the root T of
the uniformizer, and the wraparound composite is multiplication by t.  The
correspondence with parabolic chains is the index map E^0 = M_0,
E^j = t * M_{s-j}, which is exact in both directions on canonical forms.
"""

from __future__ import annotations

from .errors import InvalidGrading
from .lattice import Lattice, image_columns
from .parabolic import ParabolicPoint, SplitLines, split_into_lines


class GradedModule:
    """Ascending lattice chain with t^{-1}-wraparound."""

    __slots__ = ("order", "pieces", "n", "field")

    def __init__(self, order, pieces):
        pieces = tuple(pieces)
        if order < 1 or len(pieces) != order:
            raise InvalidGrading("need exactly `order` graded pieces")
        first = pieces[0]
        self.order = order
        self.pieces = pieces
        self.n = first.n
        self.field = first.field
        for k in range(order - 1):
            if not pieces[k + 1].contains(pieces[k]):
                raise InvalidGrading("piece %d does not include into piece %d" % (k, k + 1))
        if not pieces[0].scale(-1).contains(pieces[order - 1]):
            raise InvalidGrading("wraparound piece escapes t^{-1} M_0")

    @classmethod
    def trivial(cls, field, n, order=1):
        m0 = Lattice.identity(field, n)
        return cls(order, [m0] * order)

    @classmethod
    def line(cls, field, order, jump, twist=0):
        """Rank-1 module matching ParabolicPoint.line(order, jump, twist):
        pieces t^twist*R below grade order-jump, t^{twist-1}*R from it on.
        jump = 0 gives the constant chain (weight 0)."""
        if not 0 <= jump < order:
            raise InvalidGrading("jump %d outside [0, %d)" % (jump, order))
        top = Lattice.diagonal(field, [twist])
        if jump == 0:
            return cls(order, [top] * order)
        big = top.scale(-1)
        cut = order - jump
        return cls(order, [top if k < cut else big for k in range(order)])

    def __eq__(self, other):
        if not isinstance(other, GradedModule):
            return NotImplemented
        return self.order == other.order and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.order, self.pieces))

    def __repr__(self):
        return "GradedModule(order=%d, n=%d)" % (self.order, self.n)


def to_parabolic(module):
    """Index map M -> E: E^0 = M_0 and E^j = t * M_{s-j}."""
    s = module.order
    chain = [module.pieces[0]]
    for j in range(1, s):
        chain.append(module.pieces[s - j].scale(1))
    chain.append(module.pieces[0].scale(1))
    return ParabolicPoint(s, chain)


def from_parabolic(point):
    """Inverse index map E -> M: M_0 = E^0 and M_k = t^{-1} E^{s-k}."""
    r = point.order
    pieces = [point.chain[0]]
    for k in range(1, r):
        pieces.append(point.chain[r - k].scale(-1))
    return GradedModule(r, pieces)


def is_graded_morphism(rows, src, dst):
    """True iff rows * src.pieces[k] <= dst.pieces[k] for every grade."""
    if src.order != dst.order:
        return False
    for k in range(src.order):
        for col in image_columns(rows, src.pieces[k], out_rank=dst.n):
            if not dst.pieces[k].member(col):
                return False
    return True


def graded_split_into_lines(module, rng=None):
    """Split into rank-1 graded lines through the correspondence.

    The lines are from_parabolic of the adapted-basis lines of
    to_parabolic(module); the change-of-basis matrix is shared.
    """
    sp = split_into_lines(to_parabolic(module), rng=rng)
    glines = [from_parabolic(l) for l in sp.lines]
    return sp, glines
