"""Certified complex boxes with exact rational endpoints.

A Box is an axis-aligned rectangle [re_lo, re_hi] x [im_lo, im_hi] in the
complex plane, all four bounds Fractions.  Arithmetic is outward-exact
(no rounding at all: endpoints stay rational), so containment statements
are certificates.
"""

from fractions import Fraction


class Box:
    __slots__ = ("re_lo", "re_hi", "im_lo", "im_hi")

    def __init__(self, re_lo, re_hi, im_lo=0, im_hi=0):
        self.re_lo = Fraction(re_lo)
        self.re_hi = Fraction(re_hi)
        self.im_lo = Fraction(im_lo)
        self.im_hi = Fraction(im_hi)
        assert self.re_lo <= self.re_hi and self.im_lo <= self.im_hi

    @staticmethod
    def point(re, im=0):
        return Box(re, re, im, im)

    def __repr__(self):
        return "Box([%s, %s] + [%s, %s]i)" % (
            self.re_lo, self.re_hi, self.im_lo, self.im_hi)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return Box(self.re_lo + other.re_lo, self.re_hi + other.re_hi,
                   self.im_lo + other.im_lo, self.im_hi + other.im_hi)

    __radd__ = __add__

    def __neg__(self):
        return Box(-self.re_hi, -self.re_lo, -self.im_hi, -self.im_lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        # real part: a*c - b*d, imag part: a*d + b*c, via interval products
        ac = _imul(self.re_lo, self.re_hi, other.re_lo, other.re_hi)
        bd = _imul(self.im_lo, self.im_hi, other.im_lo, other.im_hi)
        ad = _imul(self.re_lo, self.re_hi, other.im_lo, other.im_hi)
        bc = _imul(self.im_lo, self.im_hi, other.re_lo, other.re_hi)
        return Box(ac[0] - bd[1], ac[1] - bd[0], ad[0] + bc[0], ad[1] + bc[1])

    __rmul__ = __mul__

    def conj(self):
        return Box(self.re_lo, self.re_hi, -self.im_hi, -self.im_lo)

    # -- queries ------------------------------------------------------

    def width(self):
        return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    def contains_zero(self):
        return (self.re_lo <= 0 <= self.re_hi) and (self.im_lo <= 0 <= self.im_hi)

    def contains(self, other):
        return (self.re_lo <= other.re_lo and other.re_hi <= self.re_hi
                and self.im_lo <= other.im_lo and other.im_hi <= self.im_hi)

    def intersects(self, other):
        return not (self.re_hi < other.re_lo or other.re_hi < self.re_lo
                    or self.im_hi < other.im_lo or other.im_hi < self.im_lo)

    def center(self):
        return ((self.re_lo + self.re_hi) / 2, (self.im_lo + self.im_hi) / 2)

    def sign_re(self):
        """+1 / -1 if the real part is certainly positive / negative, else 0."""
        if self.re_lo > 0:
            return 1
        if self.re_hi < 0:
            return -1
        return 0

    def sign_im(self):
        if self.im_lo > 0:
            return 1
        if self.im_hi < 0:
            return -1
        return 0


def _coerce(x):
    if isinstance(x, Box):
        return x
    return Box.point(Fraction(x))


def _imul(a, b, c, d):
    """Exact interval product [a,b]*[c,d]."""
    vals = (a * c, a * d, b * c, b * d)
    return (min(vals), max(vals))


def eval_poly(coeffs, box):
    """Evaluate a polynomial (coeffs lowest-first, rationals) at a Box
    by Horner's rule."""
    acc = Box.point(0)
    for c in reversed(coeffs):
        acc = acc * box + Box.point(Fraction(c))
    return acc
