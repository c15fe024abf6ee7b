"""Hermitian and skew-hermitian forms over a CM field K.

A sesquilinear form is stored by its Gram matrix G of FieldElements with
respect to the standard K-basis of K^n; the pairing is

    form(x, y) = sum_{ij} x_i^sigma G_ij y_j

(conjugate-linear in the first slot, matching the trace-dual dictionary
below).  Hermitian means G^{sigma T} = G, skew-hermitian G^{sigma T} = -G.

Positivity of hermitian forms is decided by leading principal minors
(elements of F) being totally positive; definiteness of skew forms along
a CM type by the exact sign pattern of the minors under each embedding.

The Riemann-form dictionary converts between a delta_K^{-1}-valued skew
form F on an O_K-lattice and the integer alternating form E = Tr_{K/Q} F,
using an integral basis {alpha_j} and its trace-dual {beta_j}:
F(x, y) = sum_j E(x, alpha_j y) beta_j.

Sign orientation: a polarization datum zeta has Im phi(zeta) > 0 for
phi in the CM type Phi, while the literal negative-definite-along test
wants Im phi(F(x,x)) < 0.  On every frozen example the two meet through
the conjugate type: E is a Riemann form for Phi exactly when its skew
form is negative-definite along Phi*sigma.  We keep both tests and bridge
them explicitly rather than flipping a sign inside either one.
"""

from fractions import Fraction

from . import linalg
from .ideal_lattice import codifferent_ideal


class FormError(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrices of field elements


def fmat(field, entries):
    return tuple(tuple(field.coerce(x) for x in row) for row in entries)


def fmat_mul(field, a, b):
    n, k, m = len(a), len(b), len(b[0])
    return tuple(tuple(sum((a[i][t] * b[t][j] for t in range(k)),
                           field.zero())
                       for j in range(m)) for i in range(n))


def fmat_conj_transpose(field, a):
    return tuple(tuple(field.conj(a[j][i]) for j in range(len(a)))
                 for i in range(len(a[0])))


def fmat_det(field, a):
    """Determinant over K by Gaussian elimination with exact division."""
    n = len(a)
    m = [list(row) for row in a]
    d = field.one()
    for c in range(n):
        piv = next((r for r in range(c, n) if not m[r][c].is_zero()), None)
        if piv is None:
            return field.zero()
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d = d * m[c][c]
        inv = m[c][c].inverse()
        for r in range(c + 1, n):
            if not m[r][c].is_zero():
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return d


def fmat_eq(a, b):
    return (len(a) == len(b) and len(a[0]) == len(b[0])
            and all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb)))


# ---------------------------------------------------------------------------
# hermitian matrices


class HermMatrix:
    __slots__ = ("field", "n", "entries")

    def __init__(self, field, entries):
        self.field = field
        self.entries = fmat(field, entries)
        self.n = len(self.entries)
        if any(len(row) != self.n for row in self.entries):
            raise FormError("matrix is not square")
        for i in range(self.n):
            for j in range(self.n):
                if self.entries[j][i] != field.conj(self.entries[i][j]):
                    raise FormError("matrix is not hermitian")

    def __eq__(self, other):
        return (isinstance(other, HermMatrix) and self.field is other.field
                and self.entries == other.entries)

    def __repr__(self):
        return "HermMatrix(%r)" % (self.entries,)


class SkewMatrix:
    __slots__ = ("field", "n", "entries", "value_ideal")

    def __init__(self, field, entries, value_ideal=None):
        self.field = field
        self.entries = fmat(field, entries)
        self.n = len(self.entries)
        if any(len(row) != self.n for row in self.entries):
            raise FormError("matrix is not square")
        for i in range(self.n):
            for j in range(self.n):
                if self.entries[j][i] != -field.conj(self.entries[i][j]):
                    raise FormError("matrix is not skew-hermitian")
        if value_ideal is None:
            value_ideal = codifferent_ideal(field)
        if value_ideal != value_ideal.conj():
            raise FormError("value ideal is not sigma-stable")
        self.value_ideal = value_ideal

    def __eq__(self, other):
        return (isinstance(other, SkewMatrix) and self.field is other.field
                and self.entries == other.entries
                and self.value_ideal == other.value_ideal)

    def neg(self):
        return SkewMatrix(self.field,
                          [[-x for x in row] for row in self.entries],
                          self.value_ideal)

    def __repr__(self):
        return "SkewMatrix(%r)" % (self.entries,)


def jordan_product(X, Y):
    if not isinstance(X, HermMatrix) or not isinstance(Y, HermMatrix):
        raise FormError("jordan_product needs hermitian matrices")
    if X.n != Y.n or X.field is not Y.field:
        raise FormError("rank or field mismatch")
    field = X.field
    xy = fmat_mul(field, X.entries, Y.entries)
    yx = fmat_mul(field, Y.entries, X.entries)
    half = Fraction(1, 2)
    return HermMatrix(field, [[(a + b) * half for a, b in zip(r1, r2)]
                              for r1, r2 in zip(xy, yx)])


def leading_minors(field, entries):
    n = len(entries)
    return [fmat_det(field, [row[: k + 1] for row in entries[: k + 1]])
            for k in range(n)]


def is_positive(X):
    """X > 0 in H_n(K) x R: all leading principal minors (elements of F)
    totally positive; exact."""
    field = X.field
    for d in leading_minors(field, X.entries):
        if not field.is_in_F(d):  # pragma: no cover - hermitian guarantees it
            raise FormError("hermitian minor not fixed by sigma")
        if d.is_zero() or not field.is_totally_positive(d):
            return False
    return True


def congruence(T, Q):
    """Q T Q^* as a HermMatrix (Q an n x n matrix over K)."""
    field = T.field
    Q = fmat(field, Q)
    return HermMatrix(field, fmat_mul(field, fmat_mul(field, Q, T.entries),
                                      fmat_conj_transpose(field, Q)))


def property_P_check(field, Q):
    """is_positive(Q^* Q) for invertible Q; always true over a CM field."""
    Q = fmat(field, Q)
    if fmat_det(field, Q).is_zero():
        raise FormError("singular matrix")
    QsQ = fmat_mul(field, fmat_conj_transpose(field, Q), Q)
    return is_positive(HermMatrix(field, QsQ))


def is_negative_definite_along(F, phi):
    """True iff Im(phi(F(x,x))) < 0 for all x != 0 and all phi in the CM
    type; exact, via the sign pattern of the leading minors d_k:
    d_k^sigma = (-1)^k d_k, and i^k phi(d_k) > 0 is required for
    positive-definiteness of i*phi(G)."""
    if not isinstance(F, SkewMatrix):
        raise FormError("expected a SkewMatrix")
    field = F.field
    minors = leading_minors(field, F.entries)
    for j in phi.indices:
        for k1, d in enumerate(minors, start=1):
            if d.is_zero():
                return False
            if k1 % 2 == 0:
                s = field.sign_re(d, j)
                if ((-1) ** (k1 // 2)) * s <= 0:
                    return False
            else:
                s = field.sign_im(d, j)
                if ((-1) ** ((k1 - 1) // 2)) * s >= 0:
                    return False
    return True


def is_positive_imaginary_along(F, phi):
    """True iff Im(phi(F(x,x))) > 0 for all x != 0, phi in the type: the
    polarization-sign orientation.  Equals the literal negative-definite
    test on -F."""
    return is_negative_definite_along(F.neg(), phi)


# ---------------------------------------------------------------------------
# the Riemann-form dictionary


class AltForm:
    """An alternating Q-bilinear form on an O_K-stable lattice in K^n.

    basis: 2gn vectors in K^n (tuples of FieldElements) forming a Z-basis;
    matrix: the 2gn x 2gn rational matrix E[p][q] = E(v_p, v_q).
    """

    __slots__ = ("field", "n", "basis", "matrix", "_binv")

    def __init__(self, field, basis, matrix, check=True):
        self.field = field
        self.basis = tuple(tuple(field.coerce(x) for x in v) for v in basis)
        self.n = len(self.basis[0])
        m = len(self.basis)
        if m != field.degree * self.n:
            raise FormError("basis has wrong cardinality for an O_K-lattice")
        self.matrix = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        if len(self.matrix) != m or any(len(r) != m for r in self.matrix):
            raise FormError("form matrix has wrong shape")
        self._binv = linalg.mat_inv(_basis_columns(field, self.basis))
        if check:
            self._check()

    def _check(self):
        m = len(self.basis)
        for p in range(m):
            for q in range(p, m):
                if self.matrix[p][q] != -self.matrix[q][p]:
                    raise FormError("form is not alternating")
        # O_K-compatibility E(a x, y) = E(x, a^sigma y) on basis vectors,
        # for a running over the integral basis
        for a in self.field.integral_basis_elements():
            asig = self.field.conj(a)
            for p in range(m):
                left = self.eval(_scale_vec(a, self.basis[p]), list(range(m)))
                for q in range(m):
                    lhs = left[q]
                    rhs = self.eval_pair(self.basis[p],
                                         _scale_vec(asig, self.basis[q]))
                    if lhs != rhs:
                        raise FormError("form is not O_K-compatible")

    def coords(self, vec):
        """Rational coordinates of a K^n vector in the lattice basis."""
        col = _vec_coords(self.field, vec)
        return linalg.mat_vec(self._binv, col)

    def eval(self, vec, qs):
        """E(vec, v_q) for each q in qs."""
        c = self.coords(vec)
        out = []
        for q in qs:
            out.append(sum(ci * self.matrix[p][q] for p, ci in enumerate(c)
                           if ci))
        return out

    def eval_pair(self, x, y):
        cx = self.coords(x)
        cy = self.coords(y)
        return sum(cx[p] * self.matrix[p][q] * cy[q]
                   for p in range(len(cx)) if cx[p]
                   for q in range(len(cy)) if cy[q])

    def __eq__(self, other):
        return (isinstance(other, AltForm) and self.field is other.field
                and self.basis == other.basis and self.matrix == other.matrix)


def _vec_coords(field, vec):
    out = []
    for x in vec:
        out.extend(x.coords)
    return [Fraction(c) for c in out]


def _basis_columns(field, basis):
    cols = [_vec_coords(field, v) for v in basis]
    return linalg.transpose(cols)


def _scale_vec(a, vec):
    return tuple(a * x for x in vec)


def form_values_on_basis(field, basis, F):
    """W[p][q] = F(v_p, v_q) for the sesquilinear form with Gram F."""
    G = F.entries if isinstance(F, (HermMatrix, SkewMatrix)) else fmat(field, F)
    out = []
    for vp in basis:
        row = []
        vps = [field.conj(x) for x in vp]
        for vq in basis:
            acc = field.zero()
            for i, xi in enumerate(vps):
                for j, yj in enumerate(vq):
                    acc = acc + xi * G[i][j] * yj
            row.append(acc)
        out.append(row)
    return out


def alt_from_skew(field, basis, F):
    """E = Tr_{K/Q} of the skew form F on the lattice spanned by basis."""
    if not isinstance(F, SkewMatrix):
        raise FormError("expected a SkewMatrix")
    W = form_values_on_basis(field, basis, F)
    E = [[field.trace(w) for w in row] for row in W]
    return AltForm(field, basis, E)


def skew_from_alt(E, value_ideal=None):
    """The delta_K^{-1}-valued skew form recovered from an O_K-compatible
    alternating form: F(x, y) = sum_j E(x, alpha_j y) beta_j."""
    field = E.field
    td = field.trace_dual()
    m = len(E.basis)
    n = E.n
    # values of F on the lattice basis
    W = [[field.zero()] * m for _ in range(m)]
    for q in range(m):
        for a, b in zip(td.alpha, td.beta):
            vals = []
            avq = _scale_vec(a, E.basis[q])
            for p in range(m):
                vals.append(E.eval_pair(E.basis[p], avq))
            for p in range(m):
                if vals[p]:
                    W[p][q] = W[p][q] + vals[p] * b
    if value_ideal is None:
        value_ideal = codifferent_ideal(field)
    for p in range(m):
        for q in range(m):
            if not value_ideal.contains(W[p][q]):
                raise FormError("pairing value escapes the value ideal")
    # Gram matrix on the standard K-basis of K^n, by Q-bilinearity
    ident = []
    for k in range(n):
        e = [field.zero()] * n
        e[k] = field.one()
        ident.append(tuple(e))
    coords = [E.coords(e) for e in ident]
    G = []
    for k in range(n):
        row = []
        for l in range(n):
            acc = field.zero()
            for p in range(m):
                if coords[k][p]:
                    for q in range(m):
                        if coords[l][q]:
                            acc = acc + coords[k][p] * coords[l][q] * W[p][q]
            row.append(acc)
        G.append(row)
    return SkewMatrix(field, G, value_ideal)


def is_riemann(E, phi):
    """Whether E is a Riemann form for the complex structure of type phi.

    Decided through the dictionary: the skew form of E must be
    negative-definite along phi*sigma (see the module docstring on the
    orientation)."""
    F = skew_from_alt(E)
    return is_negative_definite_along(F, E.field.conj_type(phi))


def is_riemann_direct(E, phi):
    """Direct Riemann positivity for g = 1: (x, y) -> E(Jx, y) must be
    symmetric positive-definite, with J the complex structure of type phi
    realized rationally as multiplication by a totally imaginary omega
    (phi(omega) = i * positive real)."""
    field = E.field
    if field.g != 1:
        raise FormError("direct Riemann check implemented for g = 1 only")
    j = phi.indices[0]
    th = field.gen()
    omega = th - field.conj(th)  # totally imaginary, nonzero
    if field.sign_im(omega, j) < 0:
        omega = -omega
    m = len(E.basis)
    S = []
    for p in range(m):
        S.append(E.eval(_scale_vec(omega, E.basis[p]), list(range(m))))
    for p in range(m):
        for q in range(m):
            if S[p][q] != S[q][p]:
                raise FormError("direct Riemann matrix is not symmetric")
    for k in range(1, m + 1):
        d = linalg.det([row[:k] for row in S[:k]])
        if d <= 0:
            return False
    return True
