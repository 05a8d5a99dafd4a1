"""Graded modules, the index correspondence, and its functoriality."""

import random
from fractions import Fraction

import pytest

from parstack import (QQ, GradedModule, InvalidGrading, Lattice,
                      ParabolicPoint, from_parabolic, graded_split_into_lines,
                      is_graded_morphism, is_point_morphism, quotient_dim,
                      to_parabolic, weights_of)
from parstack.harness import (gen_graded_module, gen_parabolic_point,
                              gen_point_morphism)
from parstack.linalg import identity_matrix

from conftest import GF101


def test_grading_validation():
    r1 = Lattice.identity(QQ, 1)
    with pytest.raises(InvalidGrading):
        GradedModule(2, [r1])  # wrong length
    with pytest.raises(InvalidGrading):
        GradedModule(2, [r1, r1.scale(1)])  # pieces must ascend
    with pytest.raises(InvalidGrading):
        GradedModule(2, [r1, r1.scale(-2)])  # escapes t^{-1} M_0
    with pytest.raises(InvalidGrading):
        GradedModule.line(QQ, 2, 2)


def test_weight_half_line_correspondence():
    # M_0 = R, M_1 = t^{-1} R  <->  chain R >= R >= tR (weight 1/2)
    mod = GradedModule(2, [Lattice.identity(QQ, 1), Lattice.diagonal(QQ, [-1])])
    assert mod == GradedModule.line(QQ, 2, 1)
    pt = to_parabolic(mod)
    assert pt == ParabolicPoint.line(QQ, 2, 1)
    assert pt.weights() == ((Fraction(1, 2), 1),)
    assert from_parabolic(pt) == mod


def test_line_constructors_match_across_the_correspondence():
    for order in (1, 2, 3, 5):
        for jump in range(order):
            for twist in (-1, 0, 2):
                pt = ParabolicPoint.line(QQ, order, jump, twist)
                assert from_parabolic(pt) == GradedModule.line(QQ, order, jump, twist)
                assert to_parabolic(GradedModule.line(QQ, order, jump, twist)) == pt


@pytest.mark.parametrize("field", [QQ, GF101])
def test_round_trip_is_exact(field):
    rng = random.Random(53)
    for _ in range(40):
        n, s = rng.randint(1, 3), rng.randint(1, 6)
        pt = gen_parabolic_point(rng, n, s, field)
        assert to_parabolic(from_parabolic(pt)) == pt
        mod = gen_graded_module(rng, n, s, field)
        assert from_parabolic(to_parabolic(mod)) == mod


def test_morphism_equivalence_across_the_correspondence():
    rng = random.Random(59)
    for _ in range(12):
        n, s = rng.randint(1, 3), rng.randint(1, 4)
        src = gen_parabolic_point(rng, n, s)
        dst = gen_parabolic_point(rng, rng.randint(1, 3), s)
        good = gen_point_morphism(rng, src, dst)
        assert is_graded_morphism(good, from_parabolic(src), from_parabolic(dst))
        # a matrix is a graded morphism iff it is a parabolic one
        bad = [[e.shift(-1) for e in row] for row in good]
        assert is_point_morphism(bad, src, dst) == \
            is_graded_morphism(bad, from_parabolic(src), from_parabolic(dst))
    assert not is_graded_morphism(identity_matrix(QQ, 1),
                                  GradedModule.trivial(QQ, 1, 2),
                                  GradedModule.trivial(QQ, 1, 3))


def test_weight_dictionary_from_graded_pieces():
    rng = random.Random(61)
    for _ in range(12):
        n, s = rng.randint(1, 3), rng.randint(2, 6)
        mod = gen_graded_module(rng, n, s)
        got = dict(weights_of(to_parabolic(mod)))
        expected = {}
        for a in range(1, s):
            m = quotient_dim(mod.pieces[s - a], mod.pieces[s - a - 1])
            if m:
                expected[Fraction(a, s)] = m
        rest = n - sum(expected.values())
        if rest:
            expected[Fraction(0)] = rest
        assert got == expected


def test_graded_split_transports_the_parabolic_splitting():
    from parstack import split_into_lines

    rng = random.Random(67)
    for _ in range(8):
        n, s = rng.randint(1, 3), rng.randint(1, 5)
        mod = gen_graded_module(rng, n, s)
        sp, glines = graded_split_into_lines(mod)
        sp_par = split_into_lines(to_parabolic(mod))
        assert sp.jumps == sp_par.jumps and sp.matrix == sp_par.matrix
        assert [to_parabolic(g) for g in glines] == sp.lines

    # rank-1 module splits into itself; diagonal module into diagonal lines
    line = GradedModule.line(QQ, 3, 2, 1)
    sp, glines = graded_split_into_lines(line)
    assert len(glines) == 1 and to_parabolic(glines[0]).weights() == \
        to_parabolic(line).weights()
