"""Exact linear algebra over the rationals and the integers.

Matrices are lists of rows; entries are ints or fractions.Fraction.
Everything here is small (dimension <= 16 or so), so plain Gaussian
elimination over Fraction is fine.
"""

from fractions import Fraction
from math import gcd


def frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def zeros(m, n):
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n):
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def mat_copy(a):
    return [list(row) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    bt = transpose(b)
    return [[sum(ra[t] * cb[t] for t in range(k)) for cb in bt] for ra in a]


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def mat_eq(a, b):
    if len(a) != len(b) or len(a[0]) != len(b[0]):
        return False
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def det(a):
    """Determinant by fraction Gaussian elimination."""
    n = len(a)
    m = [[frac(x) for x in row] for row in a]
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return d


def mat_inv(a):
    n = len(a)
    m = [[frac(x) for x in row] + list(ri) for row, ri in zip(a, identity(n))]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def solve(a, b):
    """Solve a x = b for a square invertible a; b is a vector."""
    return mat_vec(mat_inv(a), b)


def rank(a):
    if not a or not a[0]:
        return 0
    m = [[frac(x) for x in row] for row in a]
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def nullspace(a):
    """Basis (list of vectors) of the rational kernel of a."""
    if not a:
        return []
    m = [[frac(x) for x in row] for row in a]
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# integer lattice routines


def hnf(a):
    """Column-style Hermite normal form of an integer matrix.

    Columns are the generators.  Returns a matrix whose nonzero columns
    form the canonical upper-triangular basis: pivot entries positive,
    entries to the right of each pivot reduced mod the pivot.
    Zero columns are dropped.
    """
    m = [[int(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    # work on columns: transpose, row-reduce, transpose back
    w = [list(col) for col in zip(*m)]  # list of columns as rows
    # integer row echelon (on w's rows == a's columns)
    r = 0
    for c in range(rows):
        # find row with nonzero entry in position c
        while True:
            piv = None
            for i in range(r, len(w)):
                if w[i][c] != 0:
                    piv = i if piv is None or abs(w[i][c]) < abs(w[piv][c]) else piv
            if piv is None:
                break
            w[r], w[piv] = w[piv], w[r]
            done = True
            for i in range(r + 1, len(w)):
                if w[i][c] != 0:
                    q = w[i][c] // w[r][c]
                    w[i] = [x - q * y for x, y in zip(w[i], w[r])]
                    if w[i][c] != 0:
                        done = False
            if done:
                break
        if piv is None:
            continue
        if w[r][c] < 0:
            w[r] = [-x for x in w[r]]
        r += 1
        if r == len(w):
            break
    w = [row for row in w if any(row)]
    # back-reduce above pivots
    pivcol = []
    for row in w:
        pivcol.append(next(i for i, x in enumerate(row) if x != 0))
    for i in range(len(w)):
        for j in range(i + 1, len(w)):
            c = pivcol[j]
            q = w[i][c] // w[j][c]
            if q:
                w[i] = [x - q * y for x, y in zip(w[i], w[j])]
    return [list(col) for col in zip(*w)]


def int_kernel(a):
    """Basis of the integer kernel {v in Z^n : a v = 0} of an integer matrix.

    Returned as a list of vectors; the basis generates the full (saturated)
    kernel lattice.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    # column operations on a, tracked in u (cols x cols identity)
    m = [list(r) for r in a]
    u = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def colop(j, k, q):
        # col_j -= q * col_k
        for i in range(rows):
            m[i][j] -= q * m[i][k]
        for i in range(cols):
            u[i][j] -= q * u[i][k]

    def colswap(j, k):
        for i in range(rows):
            m[i][j], m[i][k] = m[i][k], m[i][j]
        for i in range(cols):
            u[i][j], u[i][k] = u[i][k], u[i][j]

    rr = 0
    for r in range(rows):
        while True:
            piv = None
            for j in range(rr, cols):
                if m[r][j] != 0 and (piv is None or abs(m[r][j]) < abs(m[r][piv])):
                    piv = j
            if piv is None:
                break
            colswap(rr, piv)
            done = True
            for j in range(rr + 1, cols):
                if m[r][j] != 0:
                    q = m[r][j] // m[r][rr]
                    colop(j, rr, q)
                    if m[r][j] != 0:
                        done = False
            if done:
                break
        if piv is not None:
            rr += 1
            if rr == cols:
                break
    kernel = []
    for j in range(rr, cols):
        if all(m[i][j] == 0 for i in range(rows)):
            kernel.append([u[i][j] for i in range(cols)])
    return kernel


def lattice_contains(basis_cols, v):
    """Whether vector v lies in the lattice spanned (over Z) by the columns."""
    if not basis_cols or not basis_cols[0]:
        return all(x == 0 for x in v)
    a = [[frac(x) for x in row] for row in basis_cols]
    try:
        x = solve_rect(a, [frac(t) for t in v])
    except ValueError:
        return False
    return x is not None and all(c.denominator == 1 for c in x)


def solve_rect(a, b):
    """Solve a x = b where a is m x n (m >= n, full column rank).

    Returns x or None if inconsistent.  Raises ValueError on rank
    deficiency.
    """
    m, n = len(a), len(a[0])
    aug = [[frac(x) for x in row] + [frac(bb)] for row, bb in zip(a, b)]
    r = 0
    pivots = []
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            raise ValueError("rank-deficient system")
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x


def charpoly_berkowitz(a):
    """Characteristic polynomial of a square matrix by Berkowitz's
    division-free algorithm.

    Works over any commutative ring: entries only need +, -, *.
    Returns coefficients [c0, c1, ..., 1] of det(X*I - A), lowest first.
    """
    n = len(a)
    if n == 0:
        return [1]
    one = 1
    # Berkowitz: iteratively build the char poly of leading principal blocks.
    # polys stored highest-degree-first
    poly = [one, -a[0][0]]
    for k in range(1, n):
        # R = row a[k][0:k], C = column a[0:k][k], M = leading k x k block
        R = a[k][:k]
        C = [a[i][k] for i in range(k)]
        M = [row[:k] for row in a[:k]]
        # Toeplitz column: [1, -a[k][k], -R*C, -R*M*C, -R*M^2*C, ...]
        t = [one, -a[k][k]]
        v = C
        for _ in range(k - 1):
            t.append(-sum(x * y for x, y in zip(R, v)))
            v = mat_vec_ring(M, v)
        t.append(-sum(x * y for x, y in zip(R, v)))
        # multiply: new_poly[i] = sum_j t[j] * poly[i-j]
        new = [0] * (len(poly) + len(t) - 1)
        for i, pi in enumerate(poly):
            for j, tj in enumerate(t):
                new[i + j] = new[i + j] + pi * tj
        poly = new[: k + 2]
    return list(reversed(poly))


def mat_vec_ring(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def lcm_den(entries):
    l = 1
    for x in entries:
        d = frac(x).denominator
        l = l * d // gcd(l, d)
    return l
