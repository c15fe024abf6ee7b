"""Seeded random generators shared by the test suites."""

import random
from fractions import Fraction

from cmht.field_core import load_field, FieldElement
from cmht.ideal_lattice import FracIdeal, torsion_units, prime_ideals_above
from cmht.herm_forms import fmat_mul, fmat_conj_transpose, fmat_det
from cmht.serre_calc import HermLattice, SkewLatticeN, tensor
from cmht.existence import admissible_types


def rng_for(seed):
    return random.Random(seed)


def rand_rational(rng, num=6, den=3):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_elt(rng, field, num=6, den=3):
    return FieldElement(field, [rand_rational(rng, num, den)
                                for _ in range(field.degree)])


def rand_integral_elt(rng, field, num=3):
    coords = [rng.randint(-num, num) for _ in range(field.degree)]
    return field.from_integral(coords)


def rand_matrix(rng, field, n, integral=False):
    make = rand_integral_elt if integral else rand_elt
    return [[make(rng, field) for _ in range(n)] for _ in range(n)]


def rand_invertible(rng, field, n, integral=False):
    while True:
        q = rand_matrix(rng, field, n, integral=integral)
        if not fmat_det(field, q).is_zero():
            return q


def rand_hermitian(rng, field, n, integral=False):
    r = rand_matrix(rng, field, n, integral=integral)
    rs = fmat_conj_transpose(field, r)
    return [[r[i][j] + rs[i][j] for j in range(n)] for i in range(n)]


def rand_unimodular(rng, field, n, shears=4):
    """A product of elementary matrices over O_K (unit determinant)."""
    m = [[field.one() if i == j else field.zero() for j in range(n)]
         for i in range(n)]
    tors = torsion_units(field)
    for _ in range(shears):
        i, j = rng.randrange(n), rng.randrange(n)
        if n > 1:
            while i == j:
                j = rng.randrange(n)
            x = rand_integral_elt(rng, field, 2)
            sh = [[field.one() if p == q else field.zero()
                   for q in range(n)] for p in range(n)]
            sh[i][j] = x
            m = fmat_mul(field, m, sh)
        d = [[field.one() if p == q else field.zero() for q in range(n)]
             for p in range(n)]
        d[i][i] = rng.choice(tors)
        m = fmat_mul(field, m, d)
    return m


def rand_unimodular_herm_gram(rng, field, n, signs=None):
    """Q* D Q with Q unimodular over O_K: hermitian, O_K-valued,
    unimodular; positive-definite iff all signs are +1."""
    if signs is None:
        signs = [1] * n
    q = rand_unimodular(rng, field, n)
    d = [[field.rational(signs[i]) if i == j else field.zero()
          for j in range(n)] for i in range(n)]
    return fmat_mul(field, fmat_conj_transpose(field, q),
                    fmat_mul(field, d, q))


def rand_herm_lattice(rng, field, n, definite=True):
    if definite:
        signs = [1] * n
    else:
        signs = [rng.choice([1, -1]) for _ in range(n)]
        if all(s == 1 for s in signs):
            signs[rng.randrange(n)] = -1
    gram = rand_unimodular_herm_gram(rng, field, n, signs)
    return HermLattice(field, [FracIdeal.ring(field)] * n, gram), \
        all(s == 1 for s in signs)


def witness_for(field, rng=None, type_index=None):
    report = admissible_types(field)
    types = [phi for phi in field.enumerate_cm_types()
             if phi in report.witnesses]
    if type_index is not None:
        return report.witnesses[types[type_index % len(types)]]
    phi = rng.choice(types) if rng is not None else types[0]
    return report.witnesses[phi]


def scaled_skew1(rng, field, w, tries=10):
    """Another valid rank-1 object of the same type: (a c, zeta/(c c^s))."""
    from cmht.serre_calc import make_skew1
    for _ in range(tries):
        c = rand_integral_elt(rng, field, 3)
        if not c.is_zero():
            nrm = c * field.conj(c)
            return make_skew1(field, w.ideal_a.scale(c),
                              w.zeta * nrm.inverse(), w.cm_type)
    raise RuntimeError("could not scale the witness")


def rand_valid_skew(rng, field, n):
    """tensor of a random positive-definite unimodular lattice with a
    random admissible rank-1 object: a valid rank-n skew object."""
    M, _ = rand_herm_lattice(rng, field, n, definite=True)
    A = witness_for(field, rng)
    return tensor(M, A), M, A


def nonprincipal_prime(field):
    for p in (2, 3, 5, 7):
        for P, _f, _e in prime_ideals_above(field, p):
            if P.is_principal() is None:
                return P
    raise RuntimeError("no nonprincipal prime found")
