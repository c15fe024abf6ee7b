"""Rank-1 and rank-n polarized ideal-lattice data and the tensor calculus.

A SkewObject1 is a pair (ideal a, zeta) with zeta totally imaginary,
Im phi(zeta) > 0 for phi in the CM type, and zeta * a = (a^sigma
delta_K)^{-1}.  Rank-n objects are pseudo-lattices: coefficient ideals
a_1..a_n plus a change-of-basis matrix over K (Steinitz style), with a
Gram matrix taken with respect to the pseudo-basis generators.

Gram matrices of skew objects are stored in the polarization
orientation (Im phi > 0 along the type, like zeta itself); the induced
alternating trace form is then a Riemann form for that type, and the
literal negative-imaginary condition holds along the conjugate type.
Validation uses is_positive_imaginary_along accordingly.
"""

from .field_core import FieldError
from .ideal_lattice import FracIdeal, codifferent_ideal, fundamental_unit
from .herm_forms import HermMatrix, SkewMatrix, FormError, fmat, fmat_det, \
    is_positive, is_positive_imaginary_along


class ValidationError(ValueError):
    """A structured rejection: .reason names the violated invariant."""

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class SkewObject1:
    __slots__ = ("field", "ideal_a", "zeta", "cm_type")

    def __init__(self, field, ideal_a, zeta, cm_type):
        self.field = field
        self.ideal_a = ideal_a
        self.zeta = field.coerce(zeta)
        self.cm_type = cm_type

    def violations(self):
        field = self.field
        out = []
        if self.zeta.is_zero() or not field.is_totally_imaginary(self.zeta):
            out.append("zeta not totally imaginary")
            return out
        for j in self.cm_type.indices:
            if field.sign_im(self.zeta, j) <= 0:
                out.append("imaginary sign")
                break
        lhs = self.ideal_a.scale(self.zeta)
        rhs = (self.ideal_a.conj() * _different(field)).inv()
        if lhs != rhs:
            out.append("principality")
        return out

    def conj_object(self):
        """(a^sigma, -zeta): a valid object for the conjugate type."""
        return SkewObject1(self.field, self.ideal_a.conj(), -self.zeta,
                           self.field.conj_type(self.cm_type))

    def __eq__(self, other):
        return (isinstance(other, SkewObject1) and self.field is other.field
                and self.ideal_a == other.ideal_a and self.zeta == other.zeta
                and self.cm_type == other.cm_type)

    def __repr__(self):
        return "SkewObject1(%r, %r, %r)" % (self.ideal_a, self.zeta,
                                            self.cm_type)


def _different(field):
    from .ideal_lattice import different_ideal
    return different_ideal(field)


def make_skew1(field, ideal_a, zeta, cm_type):
    obj = SkewObject1(field, ideal_a, zeta, cm_type)
    bad = obj.violations()
    if bad:
        raise ValidationError(bad[0])
    return obj


class PseudoLattice:
    """Shared shape of rank-n lattice data: coefficient ideals, a change
    matrix over K, and a Gram matrix with respect to the pseudo-basis."""

    __slots__ = ("field", "ideals", "change", "gram", "n")

    def __init__(self, field, ideals, gram, change=None):
        self.field = field
        self.ideals = tuple(ideals)
        self.n = len(self.ideals)
        if change is None:
            change = [[field.one() if i == j else field.zero()
                       for j in range(self.n)] for i in range(self.n)]
        self.change = fmat(field, change)
        self.gram = fmat(field, gram)
        if len(self.gram) != self.n or len(self.change) != self.n:
            raise FormError("rank mismatch between ideals and matrices")

    def det_ideal(self):
        """Determinant ideal of the pseudo-lattice (top exterior power)."""
        d = fmat_det(self.field, self.change)
        acc = FracIdeal.principal(self.field, d)
        for a in self.ideals:
            acc = acc * a
        return acc

    def gram_det(self):
        return fmat_det(self.field, self.gram)

    def _data(self):
        return (self.ideals, self.change, self.gram)


class HermLattice(PseudoLattice):
    """(M, h): O_K-valued hermitian pseudo-lattice."""

    def violations(self):
        field = self.field
        out = []
        try:
            h = HermMatrix(field, self.gram)
        except FormError:
            return ["h not hermitian"]
        OK = FracIdeal.ring(field)
        for i in range(self.n):
            for j in range(self.n):
                g = self.gram[i][j]
                if g.is_zero():
                    continue
                val = self.ideals[i].conj() * self.ideals[j] * \
                    FracIdeal.principal(field, g)
                if not val.subset(OK):
                    out.append("h not O_K-valued on the pseudo-lattice")
                    break
            else:
                continue
            break
        d = self.gram_det()
        if d.is_zero():
            out.append("h degenerate")
        else:
            prod = FracIdeal.principal(field, d)
            for a in self.ideals:
                prod = prod * a * a.conj()
            if prod != OK:
                out.append("h not unimodular (M != M-dual)")
        if not d.is_zero() and not is_positive(h):
            out.append("h not positive-definite")
        return out

    def is_valid(self):
        return not self.violations()

    def __eq__(self, other):
        return (isinstance(other, HermLattice) and self.field is other.field
                and self._data() == other._data())


class SkewLatticeN(PseudoLattice):
    """(H, f): delta_K^{-1}-valued skew pseudo-lattice of CM type cm_type."""

    __slots__ = ("cm_type",)

    def __init__(self, field, ideals, gram, cm_type, change=None):
        super().__init__(field, ideals, gram, change)
        self.cm_type = cm_type

    def violations(self):
        field = self.field
        out = []
        try:
            f = SkewMatrix(field, self.gram)
        except FormError:
            return ["f not skew-hermitian"]
        cod = codifferent_ideal(field)
        for i in range(self.n):
            for j in range(self.n):
                g = self.gram[i][j]
                if g.is_zero():
                    continue
                val = self.ideals[i].conj() * self.ideals[j] * \
                    FracIdeal.principal(field, g)
                if not val.subset(cod):
                    out.append("f not codifferent-valued on the pseudo-lattice")
                    break
            else:
                continue
            break
        d = self.gram_det()
        if d.is_zero():
            out.append("f degenerate")
        else:
            prod = FracIdeal.principal(field, d)
            for a in self.ideals:
                prod = prod * a * a.conj()
            if prod != cod ** self.n:
                out.append("f not unimodular (H != H-star)")
        if not d.is_zero() and not is_positive_imaginary_along(f, self.cm_type):
            out.append("f not definite along the type")
        return out

    def is_valid(self):
        return not self.violations()

    def __eq__(self, other):
        return (isinstance(other, SkewLatticeN) and self.field is other.field
                and self.cm_type == other.cm_type
                and self._data() == other._data())


# ---------------------------------------------------------------------------
# the tensor calculus


def tensor(M, A):
    """(M, h) tensor (a, zeta): multiply coefficient ideals by a and the
    Gram by zeta.  Validation is deferred: the output passes
    SkewLatticeN.violations() exactly when h is positive-definite."""
    if M.field is not A.field:
        raise FieldError("field mismatch")
    field = M.field
    ideals = [ai * A.ideal_a for ai in M.ideals]
    gram = [[g * A.zeta for g in row] for row in M.gram]
    return SkewLatticeN(field, ideals, gram, A.cm_type, change=M.change)


def decompose(X, A):
    """Inverse of tensor: (H, f) tensor (a^{-1}, zeta^{-1}).  The
    canonical contraction a tensor a^{-1} = O_K is automatic on ideal
    data, so decompose(tensor(M, A), A) == M exactly."""
    if X.field is not A.field:
        raise FieldError("field mismatch")
    if X.cm_type != A.cm_type:
        raise ValidationError("CM type mismatch")
    field = X.field
    ainv = A.ideal_a.inv()
    zinv = A.zeta.inverse()
    ideals = [ai * ainv for ai in X.ideals]
    gram = [[g * zinv for g in row] for row in X.gram]
    return HermLattice(field, ideals, gram, change=X.change)


def det_descent(X):
    """Rank 2m+1 -> rank 1: (det H tensor delta_K^m, (-1)^m det f)."""
    if X.n % 2 == 0:
        raise ValidationError("rank must be odd")
    m = X.n // 2
    field = X.field
    ideal = X.det_ideal() * (_different(field) ** m)
    alpha = X.gram_det()
    if m % 2 == 1:
        alpha = -alpha
    return SkewObject1(field, ideal, alpha, X.cm_type)


class HomModuleData:
    __slots__ = ("hom_ideal", "N", "herm")

    def __init__(self, hom_ideal, N, herm):
        self.hom_ideal = hom_ideal
        self.N = N
        self.herm = herm


def _totally_positive_units(field, cap=3):
    """Finite list of totally positive units u (with u = u^sigma)."""
    out = [field.one()]
    if field.g == 1:
        return out
    eps = fundamental_unit(field)
    for k in range(1, cap + 1):
        for u in (eps ** k, eps ** (-k)):
            if field.is_totally_positive(u):
                out.append(u)
    e2 = eps * eps
    for k in range(1, cap + 1):
        for u in (e2 ** k, e2 ** (-k)):
            if u not in out:
                out.append(u)
    return out


def canonical_tp_generator(field, x):
    """Among x * (totally positive units), the representative with minimal
    (trace, coordinates): deterministic and exact."""
    cands = [x * u for u in _totally_positive_units(field)]
    return min(cands, key=lambda c: (field.trace(c), c.coords))


def hom_module(A, B):
    """Hom data for two rank-1 objects of the same CM type."""
    if A.field is not B.field:
        raise FieldError("field mismatch")
    if A.cm_type != B.cm_type:
        raise ValidationError("CM type mismatch (Hom is zero)")
    field = A.field
    c = B.ideal_a * A.ideal_a.inv()
    # (zeta zeta'^{-1}) = c c^sigma, totally positive; this is the scalar
    # that makes f^sigma g N^{-1} integral and unimodular on the Hom ideal
    r = A.zeta * B.zeta.inverse()
    if not field.is_totally_positive(r):
        raise ValidationError("norm generator not totally positive")
    N = canonical_tp_generator(field, r)
    if c * c.conj() != FracIdeal.principal(field, N):
        raise ValidationError("N does not generate the relative norm ideal")
    herm = HermLattice(field, [c], [[N.inverse()]])
    return HomModuleData(c, N, herm)


def rosati_dual(phi_el, A, B):
    """The dual of phi in Hom(A, B): zeta' zeta^{-1} phi^sigma in
    Hom(B, A) = a b^{-1}."""
    field = A.field
    phi_el = field.coerce(phi_el)
    hom_ab = B.ideal_a * A.ideal_a.inv()
    if not hom_ab.contains(phi_el):
        raise ValidationError("element outside the Hom ideal")
    return B.zeta * A.zeta.inverse() * field.conj(phi_el)
