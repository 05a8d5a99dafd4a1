"""Direct image and pullback on both sides of the correspondence.

A cover profile records the local shape of a finite flat map over one
target point: branches (e, r, u) with the admissibility relation
r * e = s and local uniformizer relation w_y = u * t^e on each branch.
The parabolic direct image refines each branch chain to denominator
r*e and restricts scalars; the graded direct image distributes the
branch grades over grade m = r*l + k with a t^{-l} twist.  Pullback
splits into lines and applies the floor/fractional-part line formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import InadmissibleProfile, InadmissibleWeight, ProfileMismatch
from .lattice import Lattice, direct_sum
from .localring import LocalElement
from .parabolic import ParabolicPoint, split_into_lines
from .rootstack import GradedModule, graded_split_into_lines

_Z = LocalElement.zero()


@dataclass(frozen=True)
class Branch:
    label: str
    e: int
    r: int
    unit: object  # nonzero field element


@dataclass(frozen=True)
class CoverProfile:
    target_order: int
    branches: tuple
    is_marked_target: bool = True

    def __post_init__(self):
        s = self.target_order
        if s < 1:
            raise InadmissibleProfile("target order must be >= 1")
        seen = set()
        for br in self.branches:
            if br.e < 1 or br.r < 1:
                raise InadmissibleProfile("branch %r has nonpositive e or r" % br.label)
            if br.r * br.e != s:
                raise InadmissibleProfile(
                    "branch %r: s != r*e (s=%d, r=%d, e=%d)" % (br.label, s, br.r, br.e))
            if br.unit == 0:
                raise InadmissibleProfile("branch %r has zero unit" % br.label)
            if br.label in seen:
                raise InadmissibleProfile("duplicate branch label %r" % br.label)
            seen.add(br.label)

    def branch(self, label):
        for br in self.branches:
            if br.label == label:
                return br
        raise ProfileMismatch("no branch labelled %r" % label)

    @property
    def ramified(self):
        return tuple(br for br in self.branches if br.e > 1)


def make_profile(s, branch_specs, is_marked_target=True):
    """branch_specs: iterable of (label, e, r, unit)."""
    return CoverProfile(s, tuple(Branch(l, e, r, u) for l, e, r, u in branch_specs),
                        is_marked_target)


# -- scalar restriction ----------------------------------------------------


def decompose_element(x, e, u):
    """Components of x in K_Y * {1, t, ..., t^{e-1}} with w_y = u * t^e.

    Returns a list of e LocalElements in the target uniformizer.
    """
    comps = [[] for _ in range(e)]  # (q, coeff) term lists
    if not x.is_zero():
        uinv = 1 / u
        for i, c in enumerate(x.coeffs):
            if c == 0:
                continue
            m = x.ord + i
            q, rho = divmod(m, e)
            # t^m = t^rho * (w_y / u)^q
            comps[rho].append((q, c * (uinv ** q if q >= 0 else u ** (-q))))
    out = []
    for terms in comps:
        if not terms:
            out.append(_Z)
            continue
        lo = min(q for q, _ in terms)
        hi = max(q for q, _ in terms)
        cs = [0] * (hi - lo + 1)
        for q, c in terms:
            cs[q - lo] = cs[q - lo] + c
        out.append(LocalElement.make(lo, cs))
    return out


def substitute_element(x, e, u):
    """Substitute w_y = u * t^e: inverse direction of decompose_element."""
    if x.is_zero():
        return x
    uinv = 1 / u
    acc = _Z
    for i, c in enumerate(x.coeffs):
        if c == 0:
            continue
        q = x.ord + i
        scaled = c * (u ** q if q >= 0 else uinv ** (-q))
        acc = acc + LocalElement.make(e * q, [scaled])
    return acc


def restrict_scalars(lattice, e, u):
    """View a branch lattice as a target-chart lattice of rank n*e.

    Coordinates are indexed (i, rho) -> i*e + rho for the K_Y-basis
    1, t, ..., t^{e-1} of K_X; t^{eq} contributes u^{-q} w_y^q.
    """
    n = lattice.n
    if e == 1 and u == 1:
        return lattice
    gens = []
    for col in lattice.basis_columns():
        for rho in range(e):
            shifted = [x.shift(rho) for x in col]
            out = [_Z] * (n * e)
            for i, x in enumerate(shifted):
                for rho2, comp in enumerate(decompose_element(x, e, u)):
                    out[i * e + rho2] = comp
            gens.append(out)
    return Lattice.from_columns(lattice.field, n * e, gens)


def restrict_matrix(rows, e, u, n_out, n_in):
    """Restriction of scalars of a K_X-linear map, as an (n_out*e) x (n_in*e)
    matrix over K_Y with the same coordinate convention."""
    out = [[_Z] * (n_in * e) for _ in range(n_out * e)]
    for ii in range(n_in):
        for sigma in range(e):
            for io in range(n_out):
                entry = rows[io][ii]
                if entry.is_zero():
                    continue
                for rho, comp in enumerate(decompose_element(entry.shift(sigma), e, u)):
                    out[io * e + rho][ii * e + sigma] = comp
    return out


def substitute_matrix(rows, e, u):
    return [[substitute_element(x, e, u) for x in row] for row in rows]


# -- refinement ------------------------------------------------------------


def refine_branch_filtration(point, e):
    """Refined chain of length r*e: index a = r*l + k maps to t^l * E^k."""
    r = point.order
    out = []
    for a in range(r * e):
        l, k = divmod(a, r)
        out.append(point.chain[k].scale(l))
    return out


# -- direct image ----------------------------------------------------------


def _check_branches(profile, branch_objects, order_of):
    if len(branch_objects) != len(profile.branches):
        raise ProfileMismatch("expected %d branch objects, got %d"
                              % (len(profile.branches), len(branch_objects)))
    for br, obj in zip(profile.branches, branch_objects):
        if order_of(obj) != br.r:
            raise ProfileMismatch("branch %r: object order %d, profile r=%d"
                                  % (br.label, order_of(obj), br.r))


def pushforward_parabolic(profile, branches):
    """Parabolic direct image over one target point."""
    _check_branches(profile, branches, lambda p: p.order)
    s = profile.target_order
    chain = []
    for a in range(s):
        parts = []
        for br, pt in zip(profile.branches, branches):
            l, k = divmod(a, br.r)
            parts.append(restrict_scalars(pt.chain[k].scale(l), br.e, br.unit))
        chain.append(direct_sum(parts))
    chain.append(chain[0].scale(1))
    return ParabolicPoint(s, chain)


def pushforward_graded(profile, branches):
    """Invariant direct image on the graded side, grade m = r*l + k."""
    _check_branches(profile, branches, lambda m: m.order)
    s = profile.target_order
    pieces = []
    for m in range(s):
        parts = []
        for br, mod in zip(profile.branches, branches):
            l, k = divmod(m, br.r)
            parts.append(restrict_scalars(mod.pieces[k].scale(-l), br.e, br.unit))
        pieces.append(direct_sum(parts))
    return GradedModule(s, pieces)


def pushforward_matrix(profile, branch_mats, n_outs, n_ins):
    """Block direct sum of restricted branch matrices."""
    total_out = sum(n * br.e for n, br in zip(n_outs, profile.branches))
    total_in = sum(n * br.e for n, br in zip(n_ins, profile.branches))
    out = [[_Z] * total_in for _ in range(total_out)]
    ro = ci = 0
    for br, mat, no, ni in zip(profile.branches, branch_mats, n_outs, n_ins):
        block = restrict_matrix(mat, br.e, br.unit, no, ni)
        for i, row in enumerate(block):
            for j, x in enumerate(row):
                out[ro + i][ci + j] = x
        ro += no * br.e
        ci += ni * br.e
    return out


# -- pullback --------------------------------------------------------------


def pullback_parabolic_line(alpha, e, r):
    """Line formula: twist floor(alpha*e), new weight frac(alpha*e)."""
    alpha = Fraction(alpha)
    if not 0 <= alpha < 1:
        raise InadmissibleWeight("weight %s outside [0,1)" % alpha)
    if (r * e) % alpha.denominator != 0:
        raise InadmissibleWeight("weight %s has denominator not dividing %d"
                                 % (alpha, r * e))
    scaled = alpha * e
    twist = scaled.numerator // scaled.denominator
    return twist, scaled - twist


def pullback_parabolic(profile, point, label, rng=None):
    """Pullback of an order-s chain to the branch chart, order r = s/e."""
    br = profile.branch(label)
    if point.order != profile.target_order:
        raise ProfileMismatch("point order %d, profile s=%d"
                              % (point.order, profile.target_order))
    e, r = br.e, br.r
    if e == 1:
        # the identification K_Y = K_X still rescales t by the unit
        if br.unit == 1:
            return point
        chain = [Lattice.from_columns(point.field, point.n,
                                      [[substitute_element(x, 1, br.unit) for x in col]
                                       for col in lat.basis_columns()])
                 for lat in point.chain]
        return ParabolicPoint(r, chain)
    sp = split_into_lines(point, rng=rng)
    mat_x = substitute_matrix(sp.matrix, e, br.unit)
    n = point.n
    chain = []
    for j in range(r):
        gens = []
        for b, c in enumerate(sp.jumps):
            twist, k = c // r, c % r
            exp = -twist + (1 if j > k else 0)
            gens.append([mat_x[i][b].shift(exp) for i in range(n)])
        chain.append(Lattice.from_columns(point.field, n, gens))
    chain.append(chain[0].scale(1))
    return ParabolicPoint(r, chain)


def pullback_graded(profile, module, label, rng=None):
    """Graded-side pullback, computed through the graded line splitting."""
    br = profile.branch(label)
    if module.order != profile.target_order:
        raise ProfileMismatch("module order %d, profile s=%d"
                              % (module.order, profile.target_order))
    e, r = br.e, br.r
    if e == 1:
        if br.unit == 1:
            return module
        pieces = [Lattice.from_columns(module.field, module.n,
                                       [[substitute_element(x, 1, br.unit) for x in col]
                                        for col in lat.basis_columns()])
                  for lat in module.pieces]
        return GradedModule(r, pieces)
    sp, _glines = graded_split_into_lines(module, rng=rng)
    mat_x = substitute_matrix(sp.matrix, e, br.unit)
    n = module.n
    pieces = []
    for k in range(r):
        gens = []
        for b, c in enumerate(sp.jumps):
            twist, jump = c // r, c % r
            exp = -twist - (1 if jump >= 1 and k >= r - jump else 0)
            gens.append([mat_x[i][b].shift(exp) for i in range(n)])
        pieces.append(Lattice.from_columns(module.field, n, gens))
    return GradedModule(r, pieces)


def pullback_matrix(profile, rows, label):
    br = profile.branch(label)
    return substitute_matrix(rows, br.e, br.unit)
