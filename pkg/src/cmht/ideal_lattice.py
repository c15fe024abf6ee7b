"""Fractional ideals of K as full-rank lattices.

An ideal is stored canonically: an integer matrix in (column) Hermite
normal form whose columns are a Z-basis with respect to the integral
basis of O_K, together with a positive denominator, reduced so that the
gcd of all matrix entries and the denominator is 1.

Also here: the different ideal, principality testing by exact lattice
enumeration under the positive-definite form Q(x) = Tr(x x^sigma),
desk-scale class groups via the Minkowski bound, and unit-group data
(torsion by lattice search, the fundamental unit of the real quadratic
subfield by continued-fraction/Pell solving, and the CM index-two coset).
"""

from fractions import Fraction
from math import gcd, isqrt, factorial, pi, ceil

import sympy

from . import linalg
from .field_core import FieldElement, FieldError


class IdealError(ValueError):
    pass


class FracIdeal:
    __slots__ = ("field", "hnf", "denom")

    def __init__(self, field, hnf, denom=1, check=True):
        self.field = field
        mat = [[int(x) for x in row] for row in hnf]
        denom = int(denom)
        if denom <= 0:
            raise IdealError("denominator must be positive")
        # canonicalize: HNF, then reduce common content against denom
        mat = linalg.hnf(mat)
        if len(mat[0]) != field.degree:
            raise IdealError("zero or rank-deficient ideal")
        g = denom
        for row in mat:
            for x in row:
                g = gcd(g, x)
        if g > 1:
            mat = [[x // g for x in row] for row in mat]
            denom //= g
        self.hnf = tuple(tuple(row) for row in mat)
        self.denom = denom
        if check and not self._is_module():
            raise IdealError("lattice is not an O_K-module")

    # -- constructors --------------------------------------------------

    @staticmethod
    def ring(field):
        return FracIdeal(field, linalg.identity(field.degree), 1, check=False)

    @staticmethod
    def from_generators(field, gens):
        """O_K-module generated by the given field elements."""
        gens = [field.coerce(x) for x in gens]
        gens = [x for x in gens if not x.is_zero()]
        if not gens:
            raise IdealError("zero ideal")
        basis = field.integral_basis_elements()
        vecs = []
        for x in gens:
            for b in basis:
                vecs.append(field.to_integral(x * b))
        return FracIdeal._from_rational_columns(field, vecs)

    @staticmethod
    def principal(field, x):
        return FracIdeal.from_generators(field, [x])

    @staticmethod
    def from_z_basis(field, elements):
        """Lattice spanned over Z by the given elements; must be an
        O_K-module."""
        vecs = [field.to_integral(x) for x in elements]
        return FracIdeal._from_rational_columns(field, vecs, check=True)

    @staticmethod
    def _from_rational_columns(field, vecs, check=False):
        den = linalg.lcm_den([c for v in vecs for c in v])
        cols = [[int(c * den) for c in v] for v in vecs]
        mat = linalg.transpose(cols)  # columns = generators
        return FracIdeal(field, mat, den, check=check)

    # -- basic structure ----------------------------------------------

    def _is_module(self):
        basis = self.basis_elements()
        for b in self.field.integral_basis_elements():
            for x in basis:
                if not self.contains(b * x):
                    return False
        return True

    def basis_elements(self):
        """Z-basis as FieldElements."""
        out = []
        for j in range(self.field.degree):
            col = [Fraction(self.hnf[i][j], self.denom)
                   for i in range(self.field.degree)]
            out.append(self.field.from_integral(col))
        return out

    def basis_matrix(self):
        """Rational matrix, columns = Z-basis in integral coordinates."""
        return [[Fraction(x, self.denom) for x in row] for row in self.hnf]

    def contains(self, x):
        coords = self.field.to_integral(x)
        scaled = [c * self.denom for c in coords]
        sol = linalg.solve_rect([[Fraction(v) for v in row] for row in self.hnf],
                                scaled)
        return sol is not None and all(c.denominator == 1 for c in sol)

    def norm(self):
        """Lattice index [O_K : a] as a positive rational."""
        d = linalg.det([[Fraction(x) for x in row] for row in self.hnf])
        return abs(d) / Fraction(self.denom) ** self.field.degree

    def __eq__(self, other):
        return (isinstance(other, FracIdeal) and self.field is other.field
                and self.hnf == other.hnf and self.denom == other.denom)

    def __hash__(self):
        return hash((self.hnf, self.denom))

    def __repr__(self):
        return "FracIdeal(hnf=%s, denom=%d)" % (self.hnf, self.denom)

    # -- arithmetic ----------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return self.scale(other)
        if not isinstance(other, FracIdeal):
            return self.scale(self.field.coerce(other))
        a, b = self.basis_elements(), other.basis_elements()
        vecs = [self.field.to_integral(x * y) for x in a for y in b]
        return FracIdeal._from_rational_columns(self.field, vecs)

    __rmul__ = __mul__

    def scale(self, x):
        x = self.field.coerce(x)
        if x.is_zero():
            raise IdealError("scaling by zero")
        vecs = [self.field.to_integral(x * b) for b in self.basis_elements()]
        return FracIdeal._from_rational_columns(self.field, vecs)

    def inv(self):
        return colon(FracIdeal.ring(self.field), self)

    def conj(self):
        vecs = [self.field.to_integral(self.field.conj(b))
                for b in self.basis_elements()]
        return FracIdeal._from_rational_columns(self.field, vecs)

    def __pow__(self, k):
        if k == 0:
            return FracIdeal.ring(self.field)
        if k < 0:
            return self.inv() ** (-k)
        acc = FracIdeal.ring(self.field)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def subset(self, other):
        return all(other.contains(b) for b in self.basis_elements())

    # -- principality --------------------------------------------------

    def is_principal(self):
        """Return a canonical generator, or None (definitively, at desk
        scale) if the ideal is not principal."""
        field = self.field
        m = self.denom
        scaled = FracIdeal(field, self.hnf, 1, check=False)  # m * self
        n = scaled.norm()
        assert n.denominator == 1
        n = n.numerator
        gens = _generators_of_integral(scaled, n)
        if not gens:
            return None
        gen = min(gens, key=lambda x: (qform_value(field, x), x.coords))
        return gen * Fraction(1, m)


def colon(I, J):
    """The colon ideal (I : J) = {x in K : x J <= I}."""
    field = I.field
    n = field.degree
    A = I.basis_matrix()
    Ainv = linalg.mat_inv(A)
    rows = []
    for b in J.basis_elements():
        M = field.mult_matrix(b, basis="integral")
        AM = linalg.mat_mul(Ainv, M)
        rows.extend(AM)
    # lattice {xi : rows . xi in Z} = dual of the row lattice
    den = linalg.lcm_den([c for r in rows for c in r])
    int_rows = [[int(c * den) for c in r] for r in rows]
    # row lattice basis: HNF of the columns-of-transpose
    G = linalg.hnf(linalg.transpose(int_rows))
    Gq = [[Fraction(x, den) for x in row] for row in G]
    dual = linalg.transpose(linalg.mat_inv(Gq))
    vecs = [[dual[i][j] for i in range(n)] for j in range(n)]
    return FracIdeal._from_rational_columns(field, vecs)


def different_ideal(field):
    """delta_K = inverse of the trace-dual lattice of O_K."""
    if not hasattr(field, "_different"):
        td = field.trace_dual()
        dinv = FracIdeal.from_z_basis(field, td.beta)
        field._different = dinv.inv()
    return field._different


def codifferent_ideal(field):
    return different_ideal(field).inv()


# ---------------------------------------------------------------------------
# exact lattice enumeration under Q(x) = Tr(x x^sigma)


def qform_value(field, x):
    v = field.trace(x * field.conj(x))
    assert v >= 0
    return v


def _qform_gram(field, basis_elements):
    return [[field.trace(bi * field.conj(bj)) for bj in basis_elements]
            for bi in basis_elements]


def _ldl(gram):
    """Exact LDL^T of a positive-definite rational matrix: returns (d, u)
    with Q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2."""
    n = len(gram)
    g = [[Fraction(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = g[i][i] - sum(d[k] * u[k][i] * u[k][i] for k in range(i))
        if d[i] <= 0:
            raise IdealError("form is not positive definite")
        u[i][i] = Fraction(1)
        for j in range(i + 1, n):
            u[i][j] = (g[i][j] - sum(d[k] * u[k][i] * u[k][j]
                                     for k in range(i))) / d[i]
    return d, u


def _sqrt_upper(q):
    """Exact rational upper bound for sqrt(q), q a nonnegative Fraction."""
    if q < 0:
        return Fraction(0)
    num, den = q.numerator, q.denominator
    return Fraction(isqrt(num * den) + 1, den)


def enumerate_lattice(gram, bound):
    """All nonzero integer vectors x (one per +-pair) with
    x^T gram x <= bound, exactly."""
    n = len(gram)
    d, u = _ldl(gram)
    bound = Fraction(bound)
    results = []
    x = [0] * n

    def rec(i, remaining):
        if i < 0:
            if any(x):
                results.append(list(x))
            return
        t = sum(u[i][j] * x[j] for j in range(i + 1, n))
        s = _sqrt_upper(remaining / d[i])
        lo = int(ceil(-t - s))
        hi = int((-t + s).__floor__())
        for xi in range(lo, hi + 1):
            term = d[i] * (xi + t) ** 2
            if term <= remaining:
                x[i] = xi
                rec(i - 1, remaining - term)
        x[i] = 0

    # fix sign: first nonzero coordinate (from the top) positive
    def rec_top(i, remaining):
        t = sum(u[i][j] * x[j] for j in range(i + 1, n))
        s = _sqrt_upper(remaining / d[i])
        hi = int((-t + s).__floor__())
        for xi in range(0, hi + 1):
            term = d[i] * (xi + t) ** 2
            if term <= remaining:
                x[i] = xi
                if xi == 0 and i > 0:
                    rec_top(i - 1, remaining - term)
                else:
                    rec(i - 1, remaining - term)
        x[i] = 0

    rec_top(n - 1, bound)
    return results


def _generators_of_integral(ideal, n):
    """All generators (up to sign) of an integral ideal of norm n, found by
    exact enumeration; empty list iff not principal."""
    field = ideal.field
    basis = ideal.basis_elements()
    gram = _qform_gram(field, basis)
    if field.g == 1:
        bound = 2 * n
    else:
        lam = balancing_unit(field)
        uhi = _unit_ratio_bound(field, lam)
        bound = int(ceil(4 * uhi * (n ** 0.5))) + 1
    out = []
    for vec in enumerate_lattice(gram, bound):
        x = field.zero()
        for c, b in zip(vec, basis):
            x = x + c * b
        if abs(field.norm(x)) == n and FracIdeal.principal(field, x) == ideal:
            out.append(x)
    return out


def _unit_ratio_bound(field, eps):
    """Float upper bound (with margin) for max_i |psi_i(eps)| /
    min_i |psi_i(eps)| over the archimedean places."""
    vals = []
    reps = sorted({min(i, field.conj_pairs[i]) for i in range(field.degree)})
    for j in reps:
        b = field.embed(eps, j, 64)
        c = b.center()
        vals.append(abs(complex(float(c[0]), float(c[1]))))
    return (max(vals) / min(vals)) * 1.001 + 1e-9


# ---------------------------------------------------------------------------
# units


def torsion_units(field):
    """All roots of unity in O_K, exactly (Q(x) = 2g and |N(x)| = 1)."""
    if hasattr(field, "_torsion"):
        return field._torsion
    basis = field.integral_basis_elements()
    gram = _qform_gram(field, basis)
    out = []
    for vec in enumerate_lattice(gram, 2 * field.g):
        x = field.zero()
        for c, b in zip(vec, basis):
            x = x + c * b
        if qform_value(field, x) == 2 * field.g and abs(field.norm(x)) == 1:
            out.extend([x, -x])
    field._torsion = out
    return out


def _squarefree_decompose(n):
    n = int(n)
    s = 1
    d = 2
    m = n
    while d * d <= m:
        while m % (d * d) == 0:
            m //= d * d
            s *= d
        d += 1
    return m, s  # n = m * s^2, m squarefree


def real_quadratic_data(field):
    """(D0, sqrtD0) for F = Q(sqrt(D0)), D0 squarefree > 0; sqrtD0 given as
    an element of K with positive sign at the first archimedean place."""
    if field.g != 2:
        raise FieldError("totally real subfield is not quadratic")
    t, mp = field.totally_real_subfield()
    c0, c1, _ = mp  # x^2 + c1 x + c0
    D = c1 * c1 - 4 * c0
    assert D > 0 and D.denominator == 1
    D0, s = _squarefree_decompose(D.numerator)
    sq = (2 * t + c1) * Fraction(1, s)  # = +-sqrt(D0)
    reps = sorted({min(i, field.conj_pairs[i]) for i in range(field.degree)})
    if field.sign_re(sq, reps[0]) < 0:
        sq = -sq
    return D0, sq


def fundamental_unit(field):
    """Fundamental unit of O_F (F real quadratic) as an element of K,
    via the minimal solution of x^2 - D0 y^2 = +-4."""
    if hasattr(field, "_fund_unit"):
        return field._fund_unit
    D0, sq = real_quadratic_data(field)
    y = 1
    cap = 10 ** 6
    while y < cap:
        for sgn in (-4, 4):
            x2 = D0 * y * y + sgn
            if x2 > 0:
                x = isqrt(x2)
                if x * x == x2:
                    eps = (field.rational(x) + y * sq) * Fraction(1, 2)
                    assert field.is_integral(eps)
                    field._fund_unit = eps
                    return eps
        y += 1
    raise IdealError("fundamental-unit search exceeded budget")


def balancing_unit(field):
    """A unit of infinite order used to balance archimedean absolute
    values (the fundamental unit of F)."""
    return fundamental_unit(field)


def cm_index_two_unit(field):
    """A unit eta with eta^2 in W_K * eps_F (the nontrivial coset of
    W_K U_F in U_K), or None if the CM unit index is 1."""
    if hasattr(field, "_eta"):
        return field._eta
    if field.g == 1:
        field._eta = None
        return None
    eps = fundamental_unit(field)
    tors = torsion_units(field)
    targets = []
    for w in tors:
        targets.append(w * eps)
        targets.append(w * eps.inverse())
    # |phi(eta)|^2 = |phi(eps)|^{+-1}; float ball bound with margin,
    # candidates verified exactly
    reps = sorted({min(i, field.conj_pairs[i]) for i in range(field.degree)})
    bound = 0.0
    for j in reps:
        c = field.embed(eps, j, 64).center()
        a = abs(complex(float(c[0]), float(c[1])))
        bound += 2 * max(a, 1 / a)
    bound = int(ceil(bound * 1.01)) + 1
    basis = field.integral_basis_elements()
    gram = _qform_gram(field, basis)
    for vec in enumerate_lattice(gram, bound):
        x = field.zero()
        for c, b in zip(vec, basis):
            x = x + c * b
        if abs(field.norm(x)) != 1:
            continue
        if (x * x) in targets:
            field._eta = x
            return x
    field._eta = None
    return None


def all_units_iter(field, exponent_cap=3):
    """Finite slice of the unit group: w * lam^k for torsion w,
    |k| <= cap, with lam running over the free generators available."""
    tors = torsion_units(field)
    if field.g == 1:
        for w in tors:
            yield w
        return
    eps = fundamental_unit(field)
    eta = cm_index_two_unit(field)
    frees = [field.one(), eps, eps.inverse()]
    for k in range(2, exponent_cap + 1):
        frees.append(eps ** k)
        frees.append(eps ** (-k))
    if eta is not None:
        frees = frees + [f * eta for f in frees]
    for f in frees:
        for w in tors:
            yield w * f


class UnitSignData:
    def __init__(self, fundamental_unit, sign_image, index):
        self.fundamental_unit = fundamental_unit
        self.sign_image = sign_image
        self.index = index


def unit_signs(field):
    """Sign data for the unit group of F at the real places of F."""
    g = field.g
    reps = sorted({min(i, field.conj_pairs[i]) for i in range(field.degree)})
    if g == 1:
        image = {(1,), (-1,)}
        return UnitSignData(None, image, 2)
    if g != 2:
        raise FieldError("unit sign data only available for F = Q or quadratic")
    eps = fundamental_unit(field)
    gens = [field.rational(-1), eps]
    vecs = [tuple(field.sign_re(u, j) for j in reps) for u in gens]
    image = {tuple([1] * g)}
    frontier = True
    while frontier:
        frontier = False
        for v in list(image):
            for w in vecs:
                nv = tuple(a * b for a, b in zip(v, w))
                if nv not in image:
                    image.add(nv)
                    frontier = True
    return UnitSignData(eps, image, len(image))


# ---------------------------------------------------------------------------
# class group


class ClassGroupData:
    def __init__(self, bound, generators, relations, order, representatives):
        self.bound = bound
        self.generators = generators
        self.relations = relations
        self.order = order
        self.representatives = representatives


def field_discriminant(field):
    basis = field.integral_basis_elements()
    gram = [[field.trace(bi * bj) for bj in basis] for bi in basis]
    return linalg.det(gram)


def minkowski_bound(field):
    n = field.degree
    disc = abs(field_discriminant(field))
    return (factorial(n) / n ** n) * (4 / pi) ** field.g * float(disc) ** 0.5


def prime_ideals_above(field, p):
    """Kummer-Dedekind splitting of a rational prime (requires p coprime to
    the index [O_K : Z[theta]])."""
    disc_pow = linalg.det([[field.trace(field.gen() ** (i + j))
                            for j in range(field.degree)]
                           for i in range(field.degree)])
    index_sq = disc_pow / field_discriminant(field)
    assert index_sq.denominator == 1
    index = isqrt(index_sq.numerator)
    if index % p == 0:
        raise IdealError("prime %d divides the power-basis index; "
                         "Kummer splitting unavailable" % p)
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Integer(c) for c in reversed(field.min_poly)], x)
    fl = sympy.factor_list(poly.as_expr(), x, modulus=p)
    out = []
    for fac, mult in fl[1]:
        fp = sympy.Poly(fac, x)
        coeffs = [int(c) % p for c in reversed(fp.all_coeffs())]
        gx = field.zero()
        pw = field.one()
        for c in coeffs:
            gx = gx + c * pw
            pw = pw * field.gen()
        P = FracIdeal.from_generators(field, [field.rational(p), gx])
        out.append((P, fp.degree(), mult))
    return out


def class_group(field):
    """Desk-scale class group from primes below the Minkowski bound."""
    if hasattr(field, "_class_group"):
        return field._class_group
    bound = minkowski_bound(field)
    primes = []
    for p in sympy.primerange(2, int(bound) + 1):
        for P, f, e in prime_ideals_above(field, p):
            if p ** f <= bound:  # every class has an integral ideal of
                primes.append(P)  # norm below the Minkowski bound
    OK = FracIdeal.ring(field)
    reps = [OK]

    def known(I):
        for r in reps:
            if (I * r.inv()).is_principal() is not None:
                return True
        return False

    changed = True
    while changed:
        changed = False
        for P in primes:
            for r in list(reps):
                I = P * r
                if not known(I):
                    reps.append(I)
                    changed = True
    orders = []
    for P in primes:
        k = 1
        I = P
        while I.is_principal() is None:
            k += 1
            I = I * P
        orders.append(k)
    data = ClassGroupData(bound, primes, orders, len(reps), reps)
    field._class_group = data
    return data


# ---------------------------------------------------------------------------
# relative ramification of K / F


def relative_different_is_trivial(field):
    """True iff K/F is unramified at every finite place, decided by
    delta_K == delta_F * O_K."""
    if field.g == 1:
        # K imaginary quadratic over F = Q: delta_K = (sqrt(disc)) != O_K
        return False
    D0, sq = real_quadratic_data(field)
    if D0 % 4 == 1:
        # O_F = Z[(1+sqrt(D0))/2], f = x^2 - x - (D0-1)/4, f'(omega) = sq
        dF_gen = sq
    else:
        # O_F = Z[sqrt(D0)], f = x^2 - D0, f'(omega) = 2 sqrt(D0)
        dF_gen = 2 * sq
    dF_lift = FracIdeal.principal(field, dF_gen)
    return different_ideal(field) == dF_lift
