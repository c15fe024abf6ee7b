"""Which CM types admit a principally polarized rank-1 ideal lattice.

The count |N_0(K)/N_0^+(K)| comes from unit-sign and class-group data:
|U_F/U_F^+| * |N_K/N_K^+|, with |N_K/N_K^+| equal to |Y| = 2^g /
|U_F/U_F^+| when K/F is ramified at some finite prime and to |Y|/2
otherwise.  Witness search enumerates ideal-class representatives a,
takes the canonical generator of (a a^sigma delta_K)^{-1} when it is
principal, and adjusts by units to reach the required sign pattern.
Non-existence is declared only through the count, never by search
exhaustion.
"""

import os

from .field_core import FieldError
from .ideal_lattice import FracIdeal, different_ideal, class_group, \
    unit_signs, all_units_iter, relative_different_is_trivial, qform_value
from .serre_calc import SkewObject1, make_skew1, ValidationError


class BudgetError(RuntimeError):
    pass


def _unit_cap():
    return int(os.environ.get("CMHT_BUDGET", "3"))


class ExistenceReport:
    __slots__ = ("field", "relative_ramified", "group_order",
                 "admissible_types", "witnesses")

    def __init__(self, field, relative_ramified, group_order,
                 admissible_types, witnesses):
        self.field = field
        self.relative_ramified = relative_ramified
        self.group_order = group_order
        self.admissible_types = admissible_types
        self.witnesses = witnesses


def group_order(field):
    """|N_0(K)/N_0^+(K)|: the number of admissible CM types."""
    idx = unit_signs(field).index
    y = 2 ** field.g // idx
    ramified = not relative_different_is_trivial(field)
    if ramified:
        nk = y
    else:
        if y < 2:
            raise FieldError(
                "bookkeeping discrepancy: K/F unramified at all finite "
                "places but the sign-cokernel Y is trivial")
        nk = y // 2
    return idx * nk


def _candidate_witnesses(field, phi, ideal_a, gen):
    """Valid witnesses (ideal_a, zeta) with zeta = gen * unit, for type
    phi, sorted canonically."""
    out = []
    seen = set()
    for u in all_units_iter(field, _unit_cap()):
        zeta = gen * u
        if zeta.coords in seen:
            continue
        seen.add(zeta.coords)
        if not field.is_totally_imaginary(zeta):
            continue
        if any(field.sign_im(zeta, j) <= 0 for j in phi.indices):
            continue
        out.append(zeta)
    out.sort(key=lambda z: (qform_value(field, z), z.coords))
    return out


def _search_type(field, phi):
    """Canonical witness for phi, or None if the search finds nothing
    (not by itself a proof of non-existence)."""
    delta = different_ideal(field)
    for rep in class_group(field).representatives:
        target = (rep * rep.conj() * delta).inv()
        gen = target.is_principal()
        if gen is None:
            continue
        cands = _candidate_witnesses(field, phi, rep, gen)
        if cands:
            return make_skew1(field, rep, cands[0], phi)
    return None


def admissible_types(field):
    """Full existence report; witnesses for every admissible type."""
    if hasattr(field, "_existence_report"):
        return field._existence_report
    order = group_order(field)
    ramified = not relative_different_is_trivial(field)
    witnesses = {}
    for phi in field.enumerate_cm_types():
        w = _search_type(field, phi)
        if w is not None:
            witnesses[phi] = w
    if len(witnesses) != order:
        raise BudgetError(
            "witness search found %d types but the orbit count is %d; "
            "increase CMHT_BUDGET" % (len(witnesses), order))
    report = ExistenceReport(field, ramified, order,
                             list(witnesses.keys()), witnesses)
    field._existence_report = report
    return report


def solve(field, phi):
    """A validated witness for phi, or None when the orbit count proves
    non-existence.  Budget exhaustion raises BudgetError instead."""
    report = admissible_types(field)
    return report.witnesses.get(phi)


def transporter(w1, w2):
    """(c, r) with c c^sigma = (r^{-1}) relating two witnesses:
    applying it to w1 yields w2's ideal-and-zeta data.  The inverse is
    forced by the defining conditions zeta_k a_k = (a_k^sigma delta)^{-1}
    of the two witnesses."""
    field = w1.field
    c = w1.ideal_a * w2.ideal_a.inv()
    r = w1.zeta * w2.zeta.inverse()
    if not field.is_in_F(r):
        raise ValidationError("transporter scalar not in F")
    if (c * c.conj()).inv() != FracIdeal.principal(field, r):
        raise ValidationError("transporter norm mismatch")
    return c, r


def apply_transporter(pair, w):
    """((c, r), (a, zeta)) -> (a c^{-1}, zeta r^{-1}), a witness for the
    CM type matched by the sign pattern of r."""
    c, r = pair
    field = w.field
    ideal_b = w.ideal_a * c.inv()
    xi = w.zeta * field.coerce(r).inverse()
    reps = {min(i, field.conj_pairs[i]) for i in range(field.degree)}
    choice = []
    for i in sorted(reps):
        j = field.conj_pairs[i]
        choice.append(i if field.sign_im(xi, i) > 0 else j)
    from .field_core import CMType
    phi = CMType(choice)
    return make_skew1(field, ideal_b, xi, phi)
