"""Exact arithmetic in a CM field K of degree 2g.

Elements live in the power basis of a root theta of the defining monic
integer polynomial.  The ring of integers is given by an explicit
integral basis (columns, power-basis coordinates).  Complex conjugation
sigma is a matrix on the power basis, supplied or inferred.

Sign decisions about embeddings are exact: intervals are refined until
zero is excluded, and the zero cases have algebraic certificates
(phi is injective, so Re phi(x) = 0 iff x^sigma = -x, and
Im phi(x) = 0 iff x^sigma = x).
"""

import os
from fractions import Fraction
from itertools import product

import sympy

from . import linalg
from .boxes import Box, eval_poly

DEFAULT_PREC = int(os.environ.get("CMHT_PREC", "128"))


class FieldError(ValueError):
    pass


class FieldElement:
    """An element of K in power-basis coordinates (tuple of Fractions)."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        if len(coords) != field.degree:
            raise FieldError("coordinate vector has wrong length")
        self.field = field
        self.coords = tuple(Fraction(c) for c in coords)

    def __eq__(self, other):
        return (isinstance(other, FieldElement)
                and self.field is other.field and self.coords == other.coords)

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field,
                            [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return self.field.coerce(other) + (-self)

    def __mul__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field,
                            self.field._mul_coords(self.coords, other.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self.field.coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.field.coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.field.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("zero element of K")
        m = self.field.mult_matrix(self)
        inv_col = linalg.solve(m, [Fraction(1)] + [Fraction(0)] * (self.field.degree - 1))
        return FieldElement(self.field, inv_col)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def conj(self):
        return self.field.conj(self)

    def __repr__(self):
        return "FieldElement(%s)" % (list(map(str, self.coords)),)


class CMType:
    """g embedding indices, one per conjugate pair."""

    __slots__ = ("indices",)

    def __init__(self, indices):
        self.indices = tuple(sorted(indices))

    def __eq__(self, other):
        return isinstance(other, CMType) and self.indices == other.indices

    def __hash__(self):
        return hash(self.indices)

    def __repr__(self):
        return "CMType%s" % (self.indices,)


class TraceDualPair:
    """O_K-basis alpha and the trace-dual basis beta of delta_K^{-1}."""

    def __init__(self, alpha, beta):
        self.alpha = alpha
        self.beta = beta


class _Root:
    """A certified complex root of the defining polynomial, refinable.

    Isolation rectangles come from sympy's exact complex root isolator;
    refinement re-isolates the whole polynomial at smaller eps (cheap at
    the degrees we care about)."""

    def __init__(self, field, index):
        self.field = field
        self.index = index

    def box(self):
        return self.field._rects[self.index]

    def refine(self):
        self.field._refine_roots()

    def value(self, mpmath, dps):
        """mpmath.mpc approximation good to ~dps digits (box center)."""
        self.field._refine_to(Fraction(1, 10 ** (dps + 2)))
        b = self.box()
        re = (b.re_lo + b.re_hi) / 2
        im = (b.im_lo + b.im_hi) / 2
        return mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator,
                          mpmath.mpf(im.numerator) / im.denominator)


def _fr(x):
    return Fraction(int(x.numerator), int(x.denominator))


class CMField:
    def __init__(self, min_poly, integral_basis, conj_matrix=None, name=None):
        """min_poly: list of ints, lowest first, monic, degree 2g.

        integral_basis: square rational matrix, columns = O_K basis in the
        power basis.  conj_matrix: matrix of sigma on the power basis, or
        None to infer sigma.
        """
        self.min_poly = [int(c) for c in min_poly]
        if self.min_poly[-1] != 1:
            raise FieldError("defining polynomial must be monic")
        self.degree = len(self.min_poly) - 1
        if self.degree % 2 != 0 or self.degree < 2:
            raise FieldError("CM field degree must be even and >= 2")
        self.g = self.degree // 2
        self.name = name

        x = sympy.Symbol("x")
        self._spoly = sympy.Poly([sympy.Integer(c) for c in reversed(self.min_poly)], x)
        if not self._spoly.is_irreducible:
            raise FieldError("defining polynomial is reducible")
        if sympy.real_roots(self._spoly):
            raise FieldError("defining polynomial has a real root; not totally imaginary")

        # reduction table: theta^k mod f for k = 2g .. 4g-2
        self._pow_red = self._build_pow_table()

        self.integral_basis = [[Fraction(c) for c in row] for row in integral_basis]
        if len(self.integral_basis) != self.degree or linalg.det(self.integral_basis) == 0:
            raise FieldError("integral basis is not a full-rank square matrix")
        self._ib_inv = linalg.mat_inv(self.integral_basis)

        self._dup = [sympy.ZZ(c) for c in reversed(self.min_poly)]
        self._eps = Fraction(1, 64)
        self._rects = self._isolate(self._eps, order=True)
        self.roots = [_Root(self, i) for i in range(self.degree)]
        self.conj_pairs = self._pair_roots()

        if conj_matrix is None:
            self.conj_matrix = self._infer_sigma()
        else:
            self.conj_matrix = [[Fraction(c) for c in row] for row in conj_matrix]
        self._check_invariants()

    # -- construction helpers -----------------------------------------

    def _build_pow_table(self):
        n = self.degree
        table = {}
        cur = [Fraction(-c) for c in self.min_poly[:-1]]  # theta^n
        table[n] = list(cur)
        for k in range(n + 1, 2 * n - 1):
            shifted = [Fraction(0)] + cur
            lead = shifted[n]
            cur = [shifted[i] + lead * (-self.min_poly[i]) for i in range(n)]
            table[k] = list(cur)
        return table

    def _mul_coords(self, a, b):
        n = self.degree
        prod = [Fraction(0)] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        res = prod[:n]
        for k in range(n, 2 * n - 1):
            if prod[k]:
                red = self._pow_red[k]
                for i in range(n):
                    res[i] += prod[k] * red[i]
        return res

    def _isolate(self, eps, order=False):
        from sympy.polys.rootisolation import dup_isolate_complex_roots_sqf
        rects = dup_isolate_complex_roots_sqf(
            self._dup, sympy.ZZ,
            eps=sympy.Rational(eps.numerator, eps.denominator))
        boxes = [Box(_fr(u[0]), _fr(v[0]), _fr(u[1]), _fr(v[1]))
                 for u, v in rects]
        if len(boxes) != self.degree:
            raise FieldError("complex root isolation failed")
        if order:
            boxes.sort(key=lambda b: (b.re_lo, b.im_lo))
        return boxes

    def _refine_roots(self):
        self._refine_to(self._eps / 2 ** 8)

    def _refine_to(self, width):
        if self._eps <= width:
            return
        target = width
        while True:
            self._eps = target
            new = self._isolate(self._eps)
            matched = []
            ok = True
            for old in self._rects:
                hits = [b for b in new if b.intersects(old)]
                if len(hits) > 1:
                    # a tiny box straddling the old boundary without holding
                    # the old root; disambiguate by containment
                    hits = [b for b in hits if old.contains(b)]
                if len(hits) != 1:
                    ok = False
                    break
                matched.append(hits[0])
            if ok:
                self._rects = matched
                return
            target = target / 2 ** 8

    def _pair_roots(self):
        """partner[j] = index of the complex-conjugate root of root j."""
        n = self.degree
        partner = [None] * n
        for i in range(n):
            if partner[i] is not None:
                continue
            while True:
                bi = self.roots[i].box().conj()
                cands = [j for j in range(n) if j != i
                         and self.roots[j].box().intersects(bi)]
                if len(cands) == 1:
                    break
                self.roots[i].refine()
                for j in cands:
                    self.roots[j].refine()
            j = cands[0]
            partner[i] = j
            partner[j] = i
        if any(partner[i] == i for i in range(n)):
            raise FieldError("real embedding detected while pairing roots")
        return partner

    def _infer_sigma(self):
        """Find sigma(theta) in K as a polynomial in theta.

        Numerically guided guess (high-precision conjugate root expressed in
        the power basis), then verified exactly.
        """
        import mpmath
        n = self.degree
        for dps in (30, 60, 120):
            with mpmath.workdps(dps):
                vals = [r.value(mpmath, dps) for r in self.roots]
                V = mpmath.matrix([[vals[i] ** k for k in range(n)]
                                   for i in range(n)])
                t = mpmath.matrix([mpmath.conj(vals[i]) for i in range(n)])
                c = mpmath.lu_solve(V, t)
            coeffs = []
            ok = True
            for k in range(n):
                re = float(mpmath.re(c[k]))
                im = float(mpmath.im(c[k]))
                if abs(im) > 1e-10:
                    ok = False
                    break
                coeffs.append(Fraction(re).limit_denominator(10 ** 9))
            if not ok:
                continue
            cand = FieldElement(self, coeffs)
            if self._is_conjugation_image(cand):
                return self._matrix_of_substitution(cand)
        raise FieldError("could not infer complex conjugation")

    def _is_conjugation_image(self, ts):
        """Exact check that theta |-> ts defines complex conjugation."""
        # f(ts) = 0
        acc = self.zero()
        for c in reversed(self.min_poly):
            acc = acc * ts + self.rational(c)
        if not acc.is_zero():
            return False
        # involution: substituting twice returns theta
        m = self._matrix_of_substitution(ts)
        if not linalg.mat_eq(linalg.mat_mul(m, m), linalg.identity(self.degree)):
            return False
        if linalg.mat_eq(m, linalg.identity(self.degree)):
            return False
        # fixed space has rank g
        diff = linalg.mat_sub(m, linalg.identity(self.degree))
        if linalg.rank(diff) != self.g:
            return False
        # acts as complex conjugation under every embedding: phi(ts) must be
        # the conjugate root of phi(theta); certified by disjoint isolation
        for i in range(self.degree):
            j = self.conj_pairs[i]
            while True:
                b = self._embed_box(ts.coords, i)
                others = [k for k in range(self.degree)
                          if self.roots[k].box().intersects(b)]
                if len(others) <= 1:
                    break
                self.roots[i].refine()
                for k in others:
                    self.roots[k].refine()
            if others != [j]:
                return False
        return True

    def _matrix_of_substitution(self, ts):
        """Matrix (on the power basis) of the map theta^k |-> ts^k."""
        cols = []
        p = self.one()
        for _ in range(self.degree):
            cols.append(p.coords)
            p = p * ts
        return linalg.transpose(cols)

    def _check_invariants(self):
        n = self.degree
        m = self.conj_matrix
        if not linalg.mat_eq(linalg.mat_mul(m, m), linalg.identity(n)):
            raise FieldError("sigma candidate is not an involution")
        if linalg.rank(linalg.mat_sub(m, linalg.identity(n))) != self.g:
            raise FieldError("sigma does not fix a subfield of degree g")
        theta_sigma = FieldElement(self, [row[1] for row in m])
        if not self._is_conjugation_image(theta_sigma):
            raise FieldError("sigma is not complex conjugation under the embeddings")
        # integral basis: contains 1, closed under multiplication
        one_coords = self.to_integral(self.one())
        if any(c.denominator != 1 for c in one_coords):
            raise FieldError("integral basis does not contain 1")
        basis = self.integral_basis_elements()
        for i, bi in enumerate(basis):
            for bj in basis[i:]:
                if not self.is_integral(bi * bj):
                    raise FieldError("integral basis is not multiplicatively closed")

    # -- basic element constructors -----------------------------------

    def element(self, coords):
        return FieldElement(self, coords)

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field is not self:
                raise FieldError("element from a different field")
            return x
        return self.rational(x)

    def rational(self, q):
        return FieldElement(self, [Fraction(q)] + [Fraction(0)] * (self.degree - 1))

    def zero(self):
        return self.rational(0)

    def one(self):
        return self.rational(1)

    def gen(self):
        coords = [Fraction(0)] * self.degree
        coords[1] = Fraction(1)
        return FieldElement(self, coords)

    def integral_basis_elements(self):
        return [FieldElement(self, [row[j] for row in self.integral_basis])
                for j in range(self.degree)]

    # -- ring structure ------------------------------------------------

    def mult_matrix(self, x, basis="power"):
        """Matrix of multiplication by x, on the chosen basis."""
        x = self.coerce(x)
        if basis == "power":
            cols = []
            p = self.one()
            for _ in range(self.degree):
                cols.append((x * p).coords)
                p = p * self.gen()
            return linalg.transpose(cols)
        elif basis == "integral":
            m = self.mult_matrix(x, "power")
            return linalg.mat_mul(self._ib_inv, linalg.mat_mul(m, self.integral_basis))
        raise FieldError("unknown basis %r" % basis)

    def trace(self, x):
        m = self.mult_matrix(x)
        return sum(m[i][i] for i in range(self.degree))

    def norm(self, x):
        return linalg.det(self.mult_matrix(x))

    def conj(self, x):
        x = self.coerce(x)
        return FieldElement(self, linalg.mat_vec(self.conj_matrix, list(x.coords)))

    def to_integral(self, x):
        return linalg.mat_vec(self._ib_inv, list(self.coerce(x).coords))

    def from_integral(self, coords):
        return FieldElement(self, linalg.mat_vec(self.integral_basis,
                                                 [Fraction(c) for c in coords]))

    def is_integral(self, x):
        return all(c.denominator == 1 for c in self.to_integral(x))

    def trace_dual(self):
        """TraceDualPair for the integral basis: Tr(alpha_i beta_j) = delta_ij."""
        basis = self.integral_basis_elements()
        gram = [[self.trace(bi * bj) for bj in basis] for bi in basis]
        ginv = linalg.mat_inv(gram)
        beta = []
        for j in range(self.degree):
            b = self.zero()
            for k in range(self.degree):
                b = b + ginv[k][j] * basis[k]
            beta.append(b)
        return TraceDualPair(basis, beta)

    # -- embeddings ----------------------------------------------------

    def _embed_box(self, coords, j):
        return eval_poly(list(coords), self.roots[j].box())

    def embed(self, x, j, prec_bits=None):
        """Certified Box containing phi_j(x), of width <= 2^-prec_bits."""
        x = self.coerce(x)
        prec = DEFAULT_PREC if prec_bits is None else prec_bits
        target = Fraction(1, 2 ** prec)
        b = self._embed_box(x.coords, j)
        while b.width() > target:
            self.roots[j].refine()
            b = self._embed_box(x.coords, j)
        return b

    def sign_re(self, x, j):
        """Exact sign of Re phi_j(x) in {-1, 0, +1}."""
        x = self.coerce(x)
        if self.conj(x) == -x:
            return 0
        while True:
            s = self._embed_box(x.coords, j).sign_re()
            if s != 0:
                return s
            self.roots[j].refine()

    def sign_im(self, x, j):
        """Exact sign of Im phi_j(x) in {-1, 0, +1}."""
        x = self.coerce(x)
        if self.conj(x) == x:
            return 0
        while True:
            s = self._embed_box(x.coords, j).sign_im()
            if s != 0:
                return s
            self.roots[j].refine()

    def is_totally_imaginary(self, x):
        x = self.coerce(x)
        return self.conj(x) == -x

    def is_in_F(self, x):
        x = self.coerce(x)
        return self.conj(x) == x

    def is_totally_positive(self, x):
        x = self.coerce(x)
        if not self.is_in_F(x):
            raise FieldError("element is not fixed by sigma")
        if x.is_zero():
            return False
        reps = [min(i, self.conj_pairs[i]) for i in range(self.degree)]
        return all(self.sign_re(x, j) > 0 for j in sorted(set(reps)))

    def upper_root_index(self, i):
        """Of the conjugate pair {i, partner}, the index whose root lies in
        the upper half plane (certified)."""
        j = self.conj_pairs[i]
        while True:
            s = self.roots[i].box().sign_im()
            if s > 0:
                return i
            if s < 0:
                return j
            self.roots[i].refine()

    def enumerate_cm_types(self):
        """All 2^g CM types, in a deterministic order: per conjugate pair
        the upper-half-plane root is listed first, and types are produced
        in lexicographic product order, so type 0 is the all-upper type."""
        pairs = sorted({(min(i, self.conj_pairs[i]), max(i, self.conj_pairs[i]))
                        for i in range(self.degree)})
        assert len(pairs) == self.g
        ordered = []
        for i, j in pairs:
            up = self.upper_root_index(i)
            ordered.append((up, i if up == j else j))
        return [CMType(choice) for choice in product(*ordered)]

    def conj_type(self, phi):
        return CMType(tuple(self.conj_pairs[i] for i in phi.indices))

    # -- totally real subfield -----------------------------------------

    def totally_real_subfield(self):
        """(generator t of F as a FieldElement, min poly of t over Q,
        lowest first).  For g = 1 the generator is 0 and F = Q."""
        if self.g == 1:
            return self.zero(), [Fraction(0), Fraction(1)]
        th = self.gen()
        candidates = [th + self.conj(th), th * self.conj(th)]
        candidates += [th + self.conj(th) + k * (th * self.conj(th))
                       for k in (1, 2, 3)]
        for t in candidates:
            if self.conj(t) != t:
                continue
            mp = self.min_poly_of(t)
            if len(mp) - 1 == self.g:
                return t, mp
        raise FieldError("could not find a generator of the totally real subfield")

    def min_poly_of(self, x):
        """Monic minimal polynomial of x over Q, coefficients lowest first."""
        x = self.coerce(x)
        rows = []
        p = self.one()
        for k in range(self.degree + 1):
            rows.append(list(p.coords))
            p = p * x
        # find the first power linearly dependent on earlier ones
        for d in range(1, self.degree + 1):
            sub = rows[: d + 1]
            ker = linalg.nullspace(linalg.transpose(sub))
            # we want a relation with nonzero coefficient on x^d
            for v in ker:
                if v[d] != 0:
                    lead = v[d]
                    return [c / lead for c in v]
        raise FieldError("minimal polynomial not found")  # pragma: no cover

    def find_roots_in_self(self, poly=None):
        """All roots of poly (default: min_poly) that lie in K, as elements.

        Factors over the extension via sympy, then verifies each candidate
        exactly.  For Galois K and poly = min_poly this returns all 2g
        conjugates of theta.
        """
        if poly is None:
            poly = [Fraction(c) for c in self.min_poly]
        return self._roots_numeric(poly)

    def automorphisms(self):
        """All field automorphisms of K, as substitution matrices on the
        power basis.  Complete iff K is Galois over Q (the matrix count
        equals the degree)."""
        if not hasattr(self, "_auts"):
            self._auts = [self._matrix_of_substitution(t)
                          for t in self.find_roots_in_self()]
        return self._auts

    def _eval_poly_at(self, poly, el):
        acc = self.zero()
        for c in reversed(poly):
            acc = acc * el + self.rational(c)
        return acc

    def _roots_numeric(self, poly):
        """Roots of poly lying in K.

        An element t in K is determined by its vector of embedding values
        (phi_i(t)); each phi_i(t) must be a complex root of poly.  We try
        assignments of roots of poly to embeddings at high precision, solve
        the Vandermonde system for power-basis coordinates, rationalize, and
        keep only candidates verified exactly.
        """
        import mpmath
        from itertools import product as iproduct
        n = self.degree
        x = sympy.Symbol("x")
        p = sympy.Poly([sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
                        for c in reversed(poly)], x)
        deg_p = p.degree()
        found = []
        seen = set()
        for dps in (30, 60):
            with mpmath.workdps(dps):
                vals = [r.value(mpmath, dps) for r in self.roots]
                V = mpmath.matrix([[vals[i] ** k for k in range(n)]
                                   for i in range(n)])
                proots = [mpmath.mpc(r.evalf(dps)) for r in p.all_roots()]
                for assign in iproduct(range(deg_p), repeat=n):
                    t = mpmath.matrix([proots[m] for m in assign])
                    try:
                        c = mpmath.lu_solve(V, t)
                    except ZeroDivisionError:  # pragma: no cover
                        continue
                    coeffs = []
                    ok = True
                    for k in range(n):
                        if abs(mpmath.im(c[k])) > 1e-12:
                            ok = False
                            break
                        coeffs.append(Fraction(float(mpmath.re(c[k])))
                                      .limit_denominator(10 ** 9))
                    if not ok:
                        continue
                    el = FieldElement(self, coeffs)
                    if el.coords in seen:
                        continue
                    if self._eval_poly_at(poly, el).is_zero():
                        seen.add(el.coords)
                        found.append(el)
            if len(found) == deg_p:
                break
        return found


# ---------------------------------------------------------------------------
# parsing


def parse_field(text, name=None):
    """Parse a line-oriented field definition.

    Keys: `minpoly = [c0, c1, ..., 1]`, `basis = [[...], ...]` (rational
    entries as "p/q" or integers), optional `sigma = [[...], ...]`.
    """
    data = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FieldError("line %d: expected key = value" % lineno)
        key, _, val = line.partition("=")
        data[key.strip()] = val.strip()
    if "minpoly" not in data or "basis" not in data:
        raise FieldError("field definition needs 'minpoly' and 'basis'")
    minpoly = _parse_list(data["minpoly"])
    if any(c.denominator != 1 for c in minpoly):
        raise FieldError("minpoly coefficients must be integers")
    basis = _parse_matrix(data["basis"])
    sigma = _parse_matrix(data["sigma"]) if "sigma" in data else None
    return CMField([int(c) for c in minpoly], basis, sigma, name=name)


_FIELD_CACHE = {}

BUNDLED_FIELDS = ("Qi", "Qm2", "Qm5", "Qzeta5", "Qzeta12")


def load_field(name_or_path):
    """Load a bundled field by name (Qi, Qm2, Qm5, Qzeta5, Qzeta12) or any
    field-definition file by path.  Parsed fields are cached per process."""
    if name_or_path in _FIELD_CACHE:
        return _FIELD_CACHE[name_or_path]
    path = name_or_path
    if not os.path.exists(path):
        cand = os.path.join(os.path.dirname(__file__), "fields",
                            name_or_path + ".field")
        if os.path.exists(cand):
            path = cand
        else:
            raise FieldError("unknown field %r (not a bundled name or a file)"
                             % name_or_path)
    with open(path) as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(path))[0]
    field = parse_field(text, name=name)
    _FIELD_CACHE[name_or_path] = field
    return field


def _parse_rat(tok):
    tok = tok.strip()
    try:
        return Fraction(tok)
    except ValueError:
        raise FieldError("bad rational %r" % tok)


def _parse_list(s):
    s = s.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise FieldError("expected a [...] list")
    body = s[1:-1].strip()
    if not body:
        return []
    return [_parse_rat(t) for t in body.split(",")]


def _parse_matrix(s):
    s = s.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise FieldError("expected a [[...], ...] matrix")
    body = s[1:-1].strip()
    rows = []
    depth = 0
    cur = ""
    for ch in body:
        if ch == "[":
            depth += 1
            cur = ""
        elif ch == "]":
            depth -= 1
            rows.append([_parse_rat(t) for t in cur.split(",") if t.strip()])
        elif depth == 1:
            cur += ch
    if not rows:
        raise FieldError("empty matrix")
    return rows
