"""Existence counts, witnesses, transporters, budget behavior."""

from fractions import Fraction

import pytest

from cmht.field_core import load_field, FieldError
from cmht.ideal_lattice import FracIdeal
from cmht.serre_calc import make_skew1
from cmht import existence
from cmht.existence import (BudgetError, group_order, admissible_types,
                            solve, transporter, apply_transporter)

from helpers import witness_for, scaled_skew1, rng_for

ORDERS = {"Qi": 2, "Qm2": 2, "Qm5": 2, "Qzeta5": 4, "Qzeta12": 2}


@pytest.mark.parametrize("name", sorted(ORDERS))
def test_group_order(name):
    assert group_order(load_field(name)) == ORDERS[name]


@pytest.mark.parametrize("name", sorted(ORDERS))
def test_report_consistency(name):
    field = load_field(name)
    report = admissible_types(field)
    assert report.group_order == ORDERS[name]
    assert len(report.admissible_types) == ORDERS[name]
    assert set(report.witnesses) == set(report.admissible_types)
    for phi, w in report.witnesses.items():
        assert w.cm_type == phi
        assert w.violations() == []


def test_report_is_cached():
    field = load_field("Qi")
    r1 = admissible_types(field)
    r2 = admissible_types(field)
    assert r1 is r2


def test_qzeta12_inadmissible_types():
    field = load_field("Qzeta12")
    types = field.enumerate_cm_types()
    report = admissible_types(field)
    missing = [phi for phi in types if phi not in report.witnesses]
    assert len(missing) == 2
    for phi in missing:
        assert solve(field, phi) is None
    # conjugation pairs admissible with admissible
    for phi in report.admissible_types:
        conj = field.conj_type(phi)
        assert (conj in report.witnesses) == (phi in report.witnesses)


def test_solve_oracles():
    field = load_field("Qi")
    std = field.enumerate_cm_types()[0]
    w = solve(field, std)
    assert w.ideal_a == FracIdeal.ring(field)
    assert w.zeta.coords == (Fraction(0), Fraction(1, 2))
    field12 = load_field("Qzeta12")
    types = field12.enumerate_cm_types()
    report = admissible_types(field12)
    adm = sorted(types.index(p) for p in report.admissible_types)
    w2 = report.witnesses[types[adm[1]]]
    assert w2.violations() == []


def test_transporter_roundtrip():
    for name in sorted(ORDERS):
        field = load_field(name)
        rng = rng_for("transp-" + name)
        A = witness_for(field, rng)
        B = scaled_skew1(rng, field, A)
        pair = transporter(A, B)
        c, r = pair
        assert field.is_in_F(r)
        assert (c * c.conj()).inv() == FracIdeal.principal(field, r)
        back = apply_transporter(pair, A)
        assert back == B or (back.ideal_a == B.ideal_a
                             and back.zeta == B.zeta)


def test_budget_error(monkeypatch):
    # an exhausted unit search cannot prove non-existence: the shortfall
    # against the orbit count is reported as BudgetError
    monkeypatch.setattr(existence, "all_units_iter",
                        lambda field, cap: iter(()))
    import cmht.field_core as fc
    path = fc.__file__.replace("field_core.py", "fields/Qi.field")
    with open(path) as fh:
        fresh = fc.parse_field(fh.read(), name="Qi")
    with pytest.raises(BudgetError):
        admissible_types(fresh)


def test_fresh_field_witnesses_deterministic():
    import cmht.field_core as fc
    path = fc.__file__.replace("field_core.py", "fields/Qm5.field")
    results = []
    for _ in range(2):
        with open(path) as fh:
            fresh = fc.parse_field(fh.read(), name="Qm5")
        report = admissible_types(fresh)
        results.append(sorted((w.ideal_a.hnf, w.ideal_a.denom,
                               w.zeta.coords)
                              for w in report.witnesses.values()))
    assert results[0] == results[1]
