"""Direct image and pullback on both sides: worked examples and laws."""

import random
from fractions import Fraction

import pytest

from parstack import (QQ, CoverProfile, GradedModule, InadmissibleProfile,
                      InadmissibleWeight, Lattice, ParabolicPoint,
                      ProfileMismatch, from_parabolic, is_graded_morphism,
                      is_point_morphism, make_profile, pullback_graded,
                      pullback_matrix, pullback_parabolic,
                      pullback_parabolic_line, pushforward_graded,
                      pushforward_matrix, pushforward_parabolic,
                      restrict_scalars, to_parabolic)
from parstack.functors import (Branch, decompose_element,
                               refine_branch_filtration, substitute_element)
from parstack.harness import gen_graded_module, gen_parabolic_point, gen_profile

from conftest import GF101, el, lat


def _diag_chain(order, jumps, twists=None):
    n = len(jumps)
    tw = twists or [0] * n
    chain = [Lattice.diagonal(QQ, [tw[b] + (1 if j > jumps[b] else 0)
                                   for b in range(n)])
             for j in range(order + 1)]
    return ParabolicPoint(order, chain)


# -- profiles --------------------------------------------------------------


def test_profile_admissibility():
    p = make_profile(4, [("a", 2, 2, QQ.one), ("b", 4, 1, QQ.of(3))])
    assert p.branch("a").e == 2 and p.ramified == p.branches
    with pytest.raises(ProfileMismatch):
        p.branch("c")
    with pytest.raises(InadmissibleProfile):
        make_profile(4, [("a", 2, 3, QQ.one)])
    with pytest.raises(InadmissibleProfile):
        make_profile(4, [("a", 2, 2, QQ.zero)])
    with pytest.raises(InadmissibleProfile):
        make_profile(4, [("a", 2, 2, QQ.one), ("a", 4, 1, QQ.one)])
    with pytest.raises(InadmissibleProfile):
        make_profile(0, [])
    with pytest.raises(InadmissibleProfile):
        CoverProfile(3, (Branch("a", 0, 3, QQ.one),))


# -- scalar restriction and element bookkeeping -----------------------------


def test_decompose_substitute_inverse():
    rng = random.Random(71)
    for _ in range(30):
        e = rng.randint(1, 4)
        u = QQ.random_nonzero(rng)
        from conftest import random_element
        x = random_element(rng)
        comps = decompose_element(x, e, u)
        back = sum((substitute_element(c, e, u).shift(rho)
                    for rho, c in enumerate(comps)),
                   el(0, 0))
        assert back == x


def test_restrict_scalars_examples():
    r = Lattice.identity(QQ, 1)
    assert restrict_scalars(r, 1, QQ.one) == r
    assert restrict_scalars(r, 2, QQ.one) == Lattice.identity(QQ, 2)
    # t*R over e=2: spanned by (0,1) and (w_y, 0)
    assert restrict_scalars(r.scale(1), 2, QQ.one) == Lattice.diagonal(QQ, [1, 0])


def test_restrict_scalars_commutes_with_full_twists():
    rng = random.Random(73)
    from conftest import random_columns
    for _ in range(10):
        e = rng.randint(1, 3)
        u = QQ.random_nonzero(rng)
        n = rng.randint(1, 2)
        l = lat(random_columns(rng, n))
        assert restrict_scalars(l.scale(e), e, u) == \
            restrict_scalars(l, e, u).scale(1)


# -- refinement and parabolic direct image ---------------------------------


def test_refine_branch_filtration_examples():
    line = ParabolicPoint.trivial(QQ, 1)
    assert refine_branch_filtration(line, 1) == [line.chain[0]]
    r = Lattice.identity(QQ, 1)
    assert refine_branch_filtration(line, 2) == [r, r.scale(1)]
    half = ParabolicPoint.line(QQ, 2, 1)
    assert [l.diag[0] for l in refine_branch_filtration(half, 2)] == [0, 0, 1, 1]


def test_pushforward_identity_cover():
    profile = make_profile(3, [("x", 1, 3, QQ.one)])
    pt = gen_parabolic_point(random.Random(1), 2, 3)
    assert pushforward_parabolic(profile, [pt]) == pt
    mod = from_parabolic(pt)
    assert pushforward_graded(profile, [mod]) == mod


def test_pushforward_trivial_line_e2():
    profile = make_profile(2, [("x", 2, 1, QQ.one)])
    pushed = pushforward_parabolic(profile, [ParabolicPoint.trivial(QQ, 1)])
    assert pushed.n == 2
    assert pushed.weights() == ((Fraction(0), 1), (Fraction(1, 2), 1))
    # graded route: both grades carry the branch piece; same parabolic shadow
    pushed_mod = pushforward_graded(profile, [GradedModule.trivial(QQ, 1)])
    assert to_parabolic(pushed_mod) == pushed


def test_pushforward_two_branch_weight_multiset():
    profile = make_profile(4, [("x0", 2, 2, QQ.one), ("x1", 4, 1, QQ.of(2))])
    branches = [ParabolicPoint.line(QQ, 2, 1), ParabolicPoint.trivial(QQ, 1)]
    pushed = pushforward_parabolic(profile, branches)
    assert pushed.n == 6
    assert pushed.weights() == (
        (Fraction(0), 1), (Fraction(1, 4), 2), (Fraction(1, 2), 1),
        (Fraction(3, 4), 2))


def test_pushforward_input_checks():
    profile = make_profile(2, [("x", 2, 1, QQ.one)])
    with pytest.raises(ProfileMismatch):
        pushforward_parabolic(profile, [])
    with pytest.raises(ProfileMismatch):
        pushforward_parabolic(profile, [ParabolicPoint.trivial(QQ, 1, order=2)])
    with pytest.raises(ProfileMismatch):
        pushforward_graded(profile, [GradedModule.trivial(QQ, 1, order=2)])


# -- pullback --------------------------------------------------------------


def test_pullback_line_formula():
    assert pullback_parabolic_line(0, 2, 3) == (0, Fraction(0))
    assert pullback_parabolic_line(Fraction(1, 3), 2, 3) == (0, Fraction(2, 3))
    assert pullback_parabolic_line(Fraction(2, 3), 2, 3) == (1, Fraction(1, 3))
    with pytest.raises(InadmissibleWeight):
        pullback_parabolic_line(Fraction(1, 5), 2, 3)
    with pytest.raises(InadmissibleWeight):
        pullback_parabolic_line(Fraction(3, 2), 2, 3)


def test_pullback_identity_cover_and_trivial():
    profile = make_profile(3, [("x", 1, 3, QQ.one)])
    pt = gen_parabolic_point(random.Random(5), 2, 3)
    assert pullback_parabolic(profile, pt, "x") == pt
    profile2 = make_profile(4, [("x", 2, 2, QQ.one)])
    triv = ParabolicPoint.trivial(QQ, 3, order=4)
    assert pullback_parabolic(profile2, triv, "x") == \
        ParabolicPoint.trivial(QQ, 3, order=2)


def test_pullback_rank2_example():
    # target weights {1/3, 2/3} on an s=6 chart, e=2, r=3
    profile = make_profile(6, [("x", 2, 3, QQ.one)])
    pt = _diag_chain(6, [2, 4])
    pulled = pullback_parabolic(profile, pt, "x")
    assert dict(pulled.weights()) == {Fraction(2, 3): 1, Fraction(1, 3): 1}
    # one line is twisted by t^{-1}
    assert pulled.chain[0].det_valuation() == -1


def test_pullback_graded_line_examples():
    profile = make_profile(6, [("x", 2, 3, QQ.one)])
    assert pullback_graded(profile, GradedModule.line(QQ, 6, 2), "x") == \
        GradedModule.line(QQ, 3, 2)
    assert pullback_graded(profile, GradedModule.line(QQ, 6, 4), "x") == \
        GradedModule.line(QQ, 3, 1, twist=-1)
    with pytest.raises(ProfileMismatch):
        pullback_graded(profile, GradedModule.line(QQ, 3, 1), "x")


def test_nontrivial_unit_enters_both_routes():
    profile = make_profile(4, [("x", 2, 2, QQ.of(3))])
    rng = random.Random(79)
    pt = gen_parabolic_point(rng, 2, 4)
    pulled = pullback_parabolic(profile, pt, "x")
    assert to_parabolic(pullback_graded(profile, from_parabolic(pt), "x")) == pulled


# -- cross-route equalities and naturality ----------------------------------


@pytest.mark.parametrize("field", [QQ, GF101])
def test_direct_image_routes_agree(field):
    rng = random.Random(83)
    for _ in range(6):
        s = rng.randint(1, 8)
        profile, ranks = gen_profile(rng, s, 2, field, rank_bound=6, max_rank=2)
        mods = [gen_graded_module(rng, n, br.r, field)
                for br, n in zip(profile.branches, ranks)]
        assert to_parabolic(pushforward_graded(profile, mods)) == \
            pushforward_parabolic(profile, [to_parabolic(m) for m in mods])


def test_pushforward_matrix_naturality():
    rng = random.Random(89)
    profile = make_profile(4, [("x0", 2, 2, QQ.of(2)), ("x1", 4, 1, QQ.one)])
    srcs = [gen_parabolic_point(rng, 2, 2), gen_parabolic_point(rng, 1, 1)]
    dsts = [gen_parabolic_point(rng, 2, 2), gen_parabolic_point(rng, 1, 1)]
    from parstack.harness import gen_point_morphism
    mats = [gen_point_morphism(rng, s, d) for s, d in zip(srcs, dsts)]
    big = pushforward_matrix(profile, mats, [2, 1], [2, 1])
    assert is_point_morphism(big, pushforward_parabolic(profile, srcs),
                             pushforward_parabolic(profile, dsts))
    assert is_graded_morphism(big,
                              pushforward_graded(profile, [from_parabolic(p) for p in srcs]),
                              pushforward_graded(profile, [from_parabolic(p) for p in dsts]))


def test_pullback_matrix_naturality():
    rng = random.Random(97)
    profile = make_profile(6, [("x", 3, 2, QQ.of(-2))])
    src = gen_parabolic_point(rng, 2, 6)
    dst = gen_parabolic_point(rng, 2, 6)
    from parstack.harness import gen_point_morphism
    mat = gen_point_morphism(rng, src, dst)
    assert is_point_morphism(pullback_matrix(profile, mat, "x"),
                             pullback_parabolic(profile, src, "x"),
                             pullback_parabolic(profile, dst, "x"))


def test_degree_multiplicativity_single_scenario():
    # line of degree 1 with weight 1/2, deg f = 2, one branch with e = 2
    twist, frac = pullback_parabolic_line(Fraction(1, 2), 2, 1)
    pulled_degree = 2 * 1 + twist + frac
    assert pulled_degree == 3 == 2 * (1 + Fraction(1, 2))
