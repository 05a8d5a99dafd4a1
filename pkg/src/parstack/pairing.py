"""Parabolic symplectic and orthogonal structures and their transport.

A pairing on E valued in a parabolic line L is an (anti)symmetric matrix
over K.  Perfection is a finite list of lattice equalities: at each point,
with L's local data (lattice exponent g, jump c) and chain extension
E^{m} := t * E^{m-r} for m > r, the induced map must satisfy

    form^T * E^a  =  t^{1+g} * (E^{r+c-a})^*        for all levels a.

For the trivial value line this couples the level-a subspace perfectly
against level r-a, which is exactly what the residue functional
(coefficient of t^{e-1}, scaled by 1/u) produces under direct image.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (NotAPairing, ProfileMismatch, ShapeMismatch, SingularBasis,
                     ValueLineMismatch)
from .lattice import Lattice, apply_matrix
from .linalg import mat_eq, transpose
from .localring import LocalElement
from .parabolic import ParabolicBundle, ParabolicPoint, parabolic_degree

_Z = LocalElement.zero()

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"


def _chain_ext(point, m):
    """E^m for 0 <= m <= 2r, with E^{m} = t * E^{m-r} beyond the chain."""
    if m <= point.order:
        return point.chain[m]
    return point.chain[m - point.order].scale(1)


def line_local_data(line_bundle, label, order):
    """(lattice exponent g, jump c) of a rank-1 bundle at a point.

    Unmarked points carry the trivial datum (0, 0); a marked point must
    have the stated order.
    """
    pt = line_bundle.points.get(label)
    if pt is None:
        return 0, 0
    if pt.order != order:
        raise ShapeMismatch("value line has order %d at %r, expected %d"
                            % (pt.order, label, order))
    g = pt.chain[0].diag[0]
    c = 0
    while c + 1 < pt.order and pt.chain[c + 1] == pt.chain[0]:
        c += 1
    return g, c


def hom_chain(point, g, c):
    """The target chain T^a = t^{1+g} * (E^{r+c-a})^* of the induced map."""
    r = point.order
    chain = [_chain_ext(point, r + c - a).dual().scale(1 + g) for a in range(r + 1)]
    return ParabolicPoint(r, chain)


def dual_point(point):
    """Parabolic dual: the a-th member is t * (E^{r-a})^*."""
    return hom_chain(point, 0, 0)


@dataclass
class ParabolicPairing:
    kind: str
    form: list              # n x n rows over K
    value_line: ParabolicBundle

    def __post_init__(self):
        if self.kind not in (SYMMETRIC, ANTISYMMETRIC):
            raise NotAPairing("unknown kind %r" % self.kind)
        if self.value_line.rank != 1:
            raise NotAPairing("value line must have rank 1")
        if parabolic_degree(self.value_line) != 0:
            raise NotAPairing("value line must have parabolic degree 0")


def _symmetry_holds(kind, form):
    ft = transpose(form)
    if kind == SYMMETRIC:
        return mat_eq(ft, form)
    return mat_eq(ft, [[-e for e in row] for row in form])


def check_pairing(pairing, bundle):
    """Kind, K-nondegeneracy and levelwise perfection at every point."""
    n = bundle.rank
    form = pairing.form
    if len(form) != n or (form and len(form[0]) != n):
        raise ShapeMismatch("form is %dx%d for a rank-%d bundle"
                            % (len(form), len(form[0]) if form else 0, n))
    if not _symmetry_holds(pairing.kind, form):
        return False
    if n == 0 or not bundle.points:
        return True
    ft = transpose(form)
    try:
        apply_matrix(ft, _ambient(bundle), out_rank=n)
    except SingularBasis:
        return False
    for label in bundle.labels():
        pt = bundle.points[label]
        g, c = line_local_data(pairing.value_line, label, pt.order)
        target = hom_chain(pt, g, c)
        for a in range(pt.order):
            if apply_matrix(ft, pt.chain[a], out_rank=n) != target.chain[a]:
                return False
    return True


def _ambient(bundle):
    pt = next(iter(bundle.points.values()))
    return Lattice.identity(pt.field, bundle.rank)


# -- transport -------------------------------------------------------------


def pullback_value_line(profile, line_bundle, target_label, branch_label):
    """Pullback of a rank-1 value line along one branch, with aux points
    passed through (one copy per sheet of the cover) to keep the degree
    bookkeeping exact: pardeg(f^* L) = deg f * pardeg(L) = 0."""
    from .functors import pullback_parabolic

    deg_f = sum(br.e for br in profile.branches)
    br = profile.branch(branch_label)
    pts = {}
    twist_sum = 0
    for label, pt in line_bundle.points.items():
        if label == target_label:
            pulled = pullback_parabolic(profile, pt, branch_label)
            pts[branch_label] = pulled
            g, c = line_local_data(line_bundle, label, pt.order)
            twist_sum += c // br.r
        else:
            for i in range(deg_f):
                pts["%s@%d" % (label, i)] = pt
    degree = deg_f * line_bundle.underlying_degree + twist_sum
    return ParabolicBundle(1, degree, pts)


def pullback_pairing(profile, pairing, bundle, target_label):
    """Pullback of a pairing: single-branch profile, substituted form."""
    from .functors import pullback_parabolic, substitute_matrix

    if len(profile.branches) != 1:
        raise ProfileMismatch("pairing pullback works on a single-branch chart")
    br = profile.branches[0]
    if not check_pairing(pairing, bundle):
        raise NotAPairing("input fails check_pairing")
    pt = bundle.points[target_label]
    pulled_pt = pullback_parabolic(profile, pt, br.label)
    twists = sum((c // br.r) * m for c, m in
                 ((w.numerator * pt.order // w.denominator, m) for w, m in pt.weights()))
    degree = br.e * bundle.underlying_degree + twists
    pulled_bundle = ParabolicBundle(bundle.rank, degree, {br.label: pulled_pt})
    # the relative ramification contributes a uniform t^{e-1} twist, the
    # exact counterpart of the residue functional used for direct image
    pulled_form = [[x.shift(br.e - 1) for x in row]
                   for row in substitute_matrix(pairing.form, br.e, br.unit)]
    pulled_line = pullback_value_line(profile, pairing.value_line, target_label, br.label)
    return ParabolicPairing(pairing.kind, pulled_form, pulled_line), pulled_bundle


def expected_branch_value_data(profile, branch, value_line, target_label):
    """Local (g, c) the branch pairing must be valued in: the pullback of
    the target value line along this branch."""
    g, c = line_local_data(value_line, target_label, profile.target_order)
    return branch.e * g - c // branch.r, c % branch.r


def residue_push_form(form, e, u, n):
    """Projection-formula pairing on restricted scalars: the component of
    t^{rho+sigma} * entry along t^{e-1}, scaled by 1/u."""
    from .functors import decompose_element

    uinv = 1 / u
    out = [[_Z] * (n * e) for _ in range(n * e)]
    for i in range(n):
        for i2 in range(n):
            entry = form[i][i2]
            if entry.is_zero():
                continue
            for rho in range(e):
                for sigma in range(e):
                    comps = decompose_element(entry.shift(rho + sigma), e, u)
                    out[i * e + rho][i2 * e + sigma] = comps[e - 1].scalar_mul(uinv)
    return out


def pushforward_pairing(profile, value_line, target_label, branch_pairs):
    """Direct image of branch pairings valued in f^* value_line.

    branch_pairs: list of (ParabolicPoint, form rows, declared (g, c))
    aligned with profile.branches.  Returns (pairing, bundle) on the
    target chart.
    """
    from .functors import pushforward_parabolic

    if len(branch_pairs) != len(profile.branches):
        raise ProfileMismatch("need one branch pairing per branch")
    kinds = set()
    blocks = []
    points = []
    for br, (pt, form, declared) in zip(profile.branches, branch_pairs):
        expected = expected_branch_value_data(profile, br, value_line, target_label)
        if declared != expected:
            raise ValueLineMismatch("branch %r pairing valued in %r, expected the "
                                    "pullback datum %r" % (br.label, declared, expected))
        if not _symmetry_holds(SYMMETRIC, form):
            if not _symmetry_holds(ANTISYMMETRIC, form):
                raise NotAPairing("branch form is neither symmetric nor antisymmetric")
            kinds.add(ANTISYMMETRIC)
        else:
            kinds.add(SYMMETRIC)
        points.append(pt)
        blocks.append(residue_push_form(form, br.e, br.unit, pt.n))
    if len(kinds) != 1:
        raise NotAPairing("branch forms disagree in kind")
    kind = kinds.pop()
    pushed_pt = pushforward_parabolic(profile, points)
    total = pushed_pt.n
    big = [[_Z] * total for _ in range(total)]
    off = 0
    for block in blocks:
        k = len(block)
        for i in range(k):
            for j in range(k):
                big[off + i][off + j] = block[i][j]
        off += k
    bundle = ParabolicBundle(total, 0, {target_label: pushed_pt})
    return ParabolicPairing(kind, big, value_line), bundle
