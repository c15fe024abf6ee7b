"""The CM-type kernel ideal, its Lie quotient, characteristic polynomials."""

from fractions import Fraction

import pytest

from cmht.field_core import load_field, FieldElement
from cmht.ideal_condition import (JPhiError, compute_jphi, charpoly_on_lie,
                                  product_formula, type_stabilizer)
from cmht.linalg import rank

from helpers import rng_for, rand_integral_elt

NAMES = ("Qi", "Qm2", "Qm5", "Qzeta5", "Qzeta12")
REFLEX_DEG = {"Qi": 2, "Qm2": 2, "Qm5": 2, "Qzeta5": 4, "Qzeta12": 2}


def test_qi_kernel_oracle():
    # standard type on Q(i): the kernel is the O_L-span of i(x)1 - 1(x)i
    field = load_field("Qi")
    std = field.enumerate_cm_types()[0]
    data = compute_jphi(field, std)
    assert data.j_phi == [[0, -1, 1, 0], [1, 0, 0, 1]]
    assert data.ol_rank == 1
    assert data.ambient.nl == 2
    cp = charpoly_on_lie(field, std, field.gen())
    assert cp == [-field.gen(), field.one()]          # X - i, ascending


def test_qi_conjugate_type():
    field = load_field("Qi")
    other = field.enumerate_cm_types()[1]
    cp = charpoly_on_lie(field, other, field.gen())
    assert cp == [field.gen(), field.one()]           # X + i


@pytest.mark.parametrize("name", NAMES)
def test_invariants_all_types(name):
    field = load_field(name)
    for phi in field.enumerate_cm_types():
        data = compute_jphi(field, phi)  # construction verifies invariants
        assert data.ol_rank == field.g
        assert data.ambient.nl == REFLEX_DEG[name]
        assert len(data.j_phi) == field.g * data.ambient.nl
        # J and J^sigma intersect trivially over Q
        js = [data.ambient.sigma(v) for v in data.j_phi]
        assert rank([list(r) for r in (data.j_phi + js)]) == \
            2 * len(data.j_phi)


def test_compute_jphi_is_cached():
    field = load_field("Qm2")
    phi = field.enumerate_cm_types()[0]
    assert compute_jphi(field, phi) is compute_jphi(field, phi)


def test_stabilizer_sizes():
    # |Stab(phi)| = deg(K) / deg(reflex field)
    for name in NAMES:
        field = load_field(name)
        for phi in field.enumerate_cm_types():
            stab = type_stabilizer(field, phi)
            assert len(stab) == field.degree // REFLEX_DEG[name]


def test_idempotent_identities():
    field = load_field("Qi")
    data = compute_jphi(field, field.enumerate_cm_types()[0])
    eJ, eL = data.idempotents
    amb = data.ambient
    assert amb.mult(eJ, eJ) == eJ
    assert amb.mult(eL, eL) == eL
    assert amb.mult(eJ, eL) == [Fraction(0)] * amb.dim
    assert [a + b for a, b in zip(eJ, eL)] == amb.one()


@pytest.mark.parametrize("name", NAMES)
def test_charpoly_matches_product_formula(name):
    field = load_field(name)
    rng = rng_for("cp-" + name)
    types = field.enumerate_cm_types()
    for k in range(4):
        phi = types[k % len(types)]
        a = rand_integral_elt(rng, field, 2)
        for n in (1, 2):
            cp = charpoly_on_lie(field, phi, a, n)
            pf = product_formula(field, phi, a, n)
            assert cp == pf
            assert len(cp) == field.g * n + 1
            assert cp[-1] == field.one()              # monic


def test_charpoly_multiplicity_is_power():
    field = load_field("Qzeta5")
    phi = field.enumerate_cm_types()[0]
    a = field.gen() + field.conj(field.gen())
    cp1 = charpoly_on_lie(field, phi, a, 1)
    cp2 = charpoly_on_lie(field, phi, a, 2)
    # cp2 = cp1^2
    sq = [field.zero()] * (len(cp1) * 2 - 1)
    for i, x in enumerate(cp1):
        for j, y in enumerate(cp1):
            sq[i + j] = sq[i + j] + x * y
    assert cp2 == sq


def test_charpoly_rational_element():
    field = load_field("Qm5")
    phi = field.enumerate_cm_types()[0]
    a = field.rational(3)
    cp = charpoly_on_lie(field, phi, a)
    assert cp == [field.rational(-3), field.one()]    # X - 3


def test_charpoly_rejects_nonintegral():
    field = load_field("Qi")
    phi = field.enumerate_cm_types()[0]
    with pytest.raises(JPhiError):
        charpoly_on_lie(field, phi, field.gen() * Fraction(1, 2))
