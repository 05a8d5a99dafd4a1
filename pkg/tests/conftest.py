"""Shared builders and an independent sympy-based oracle for lattice tests.

The oracle never goes through the library's back-substitution or
canonicalization: membership and determinant valuations are recomputed
with sympy rational-function arithmetic in a formal variable t.
"""

import random
from fractions import Fraction

import sympy

from parstack import QQ, Lattice, LocalElement, PrimeField

T = sympy.symbols("t")

GF101 = PrimeField(101)


def el(t_order, *coeffs, field=QQ):
    """LocalElement t^t_order * (c0 + c1 t + ...) with exact coefficients."""
    return LocalElement.make(t_order, [field.of(c) for c in coeffs])


def lat(cols, field=QQ):
    """Lattice from integer-coefficient column shorthand.

    Each column is a list of entries; an entry is an int (constant), a
    string like "2/3", or a (t_order, coeffs...) tuple.
    """
    n = len(cols[0])
    out = []
    for col in cols:
        vec = []
        for x in col:
            if isinstance(x, LocalElement):
                vec.append(x)
            elif isinstance(x, tuple):
                vec.append(el(x[0], *x[1:], field=field))
            else:
                vec.append(el(0, x, field=field))
        out.append(vec)
    return Lattice.from_columns(field, n, out)


def rng_for(seed):
    return random.Random(seed)


# -- sympy oracle (rational coefficients only) ------------------------------


def to_sym(x):
    """LocalElement over the rationals -> sympy expression in T."""
    acc = sympy.Integer(0)
    for i, c in enumerate(x.coeffs):
        fr = Fraction(str(c))
        acc += sympy.Rational(fr.numerator, fr.denominator) * T ** (x.ord + i)
    return acc


def sym_valuation(expr):
    """t-adic valuation of a rational function; None for zero."""
    expr = sympy.cancel(sympy.together(expr))
    if expr == 0:
        return None
    num, den = sympy.fraction(expr)
    num = sympy.Poly(sympy.expand(num), T)
    den = sympy.Poly(sympy.expand(den), T)
    vnum = min(m[0] for m in num.monoms())
    vden = min(m[0] for m in den.monoms())
    return vnum - vden


def oracle_member(lattice, vec):
    """Solve basis * x = vec over QQ(t); member iff all valuations >= 0."""
    basis = sympy.Matrix([[to_sym(lattice.cols[j][i]) for j in range(lattice.n)]
                          for i in range(lattice.n)])
    target = sympy.Matrix([to_sym(x) for x in vec])
    sol = basis.LUsolve(target)
    for x in sol:
        v = sym_valuation(x)
        if v is not None and v < 0:
            return False
    return True


def oracle_det_valuation(lattice):
    basis = sympy.Matrix([[to_sym(lattice.cols[j][i]) for j in range(lattice.n)]
                          for i in range(lattice.n)])
    return sym_valuation(basis.det())


def random_element(rng, field=QQ, zero_chance=0.3):
    if rng.random() < zero_chance:
        return LocalElement.zero()
    ncoef = rng.randint(1, 3)
    coeffs = [field.of(rng.randint(-4, 4)) for _ in range(ncoef)]
    if all(c == field.zero for c in coeffs):
        coeffs[0] = field.one
    return LocalElement.make(rng.randint(-2, 2), coeffs)


def random_columns(rng, n, field=QQ, extra=0):
    """n + extra random columns spanning a full lattice (retried on failure)."""
    from parstack import SingularBasis

    while True:
        cols = [[random_element(rng, field) for _ in range(n)]
                for _ in range(n + extra)]
        try:
            Lattice.from_columns(field, n, cols)
        except SingularBasis:
            continue
        return cols
