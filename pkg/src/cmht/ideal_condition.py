"""The CM-type kernel ideal J_Phi inside O_K tensor O_L, exactly.

All bundled fields are Galois over Q, so the splitting field of the
defining polynomial is K itself; embeddings are identified with field
automorphisms through the distinguished first root.  The reflex ring
O_L is the fixed sublattice of O_K under the stabilizer of the CM type.

J_Phi is the saturated integer kernel of the evaluation map
(a tensor b) -> (phi(a) * b) for phi in the type; the quotient is the
Lie lattice, on which characteristic polynomials of the O_K-action are
computed over L and compared with the product formula.
"""

from fractions import Fraction

from . import linalg
from .field_core import FieldError, FieldElement


class JPhiError(FieldError):
    pass


def _embedding_automorphism_indices(field):
    """perm[q] = index (into field.automorphisms()) of the automorphism
    tau_q with phi_0(tau_q(theta)) = theta_q, identifying each embedding
    of K with an automorphism through the first root."""
    auts = field.automorphisms()
    if len(auts) != field.degree:
        raise JPhiError("field is not Galois; splitting-field degree "
                        "exceeds the supported budget")
    base = field.upper_root_index(0)
    out = []
    for q in range(field.degree):
        hit = None
        for t, m in enumerate(auts):
            img = FieldElement(field, linalg.mat_vec(m, list(field.gen().coords)))
            if _embeds_as_root(field, img, base, q):
                hit = t
                break
        if hit is None:
            raise JPhiError("could not match embedding %d" % q)
        out.append(hit)
    return out


def _embeds_as_root(field, x, j, q):
    """Exact test: phi_j(x) == theta_q (both algebraic; decided by
    checking x's image is a root candidate and separating boxes)."""
    # phi_j(x) is a root of min_poly iff x is a conjugate of theta;
    # compare certified boxes, refining until at most one root fits.
    while True:
        b = field._embed_box(x.coords, j)
        hits = [k for k in range(field.degree)
                if _boxes_overlap(b, field.roots[k].box())]
        if hits == [q]:
            return True
        if q not in hits:
            return False
        field.roots[q].refine()
        for k in hits:
            field.roots[k].refine()


def _boxes_overlap(a, b):
    return not (a.re_hi < b.re_lo or b.re_hi < a.re_lo or
                a.im_hi < b.im_lo or b.im_hi < a.im_lo)


def apply_automorphism(field, m, x):
    return FieldElement(field, linalg.mat_vec(m, list(field.coerce(x).coords)))


def type_stabilizer(field, phi):
    """Automorphism matrices tau with {phi_j o tau : j in Phi} = Phi."""
    auts = field.automorphisms()
    perms = []
    for m in auts:
        perm = []
        for j in range(field.degree):
            t = apply_automorphism(field, m, field.gen())
            # phi_j o tau sends theta to phi_j(tau(theta)); find its index
            hit = None
            for k in range(field.degree):
                if _embeds_as_root(field, t, j, k):
                    hit = k
                    break
            if hit is None:
                raise JPhiError("automorphism does not permute the roots")
            perm.append(hit)
        perms.append(perm)
    want = set(phi.indices)
    return [auts[i] for i, perm in enumerate(perms)
            if {perm[j] for j in want} == want]


def reflex_ring_basis(field, phi):
    """Z-basis of O_L = (O_K)^{stabilizer of Phi}, as field elements."""
    stab = type_stabilizer(field, phi)
    n = field.degree
    stacked = []
    for m in stab:
        # action on the integral basis, minus identity
        a_int = linalg.mat_mul(field._ib_inv,
                               linalg.mat_mul(m, field.integral_basis))
        for i in range(n):
            row = [a_int[i][j] - (1 if i == j else 0) for j in range(n)]
            stacked.append([int(x) for x in row])
    ker = linalg.int_kernel(stacked)
    return [field.from_integral(v) for v in ker]


class AmbientAlgebra:
    """O_K tensor O_L as a free Z-lattice with ring structure.

    Basis: e_i tensor f_j for e_i the integral basis of O_K and f_j the
    Z-basis of O_L; an element is a coordinate vector of length
    2g * [L:Q].
    """

    def __init__(self, field, ol_basis):
        self.field = field
        self.ol_basis = ol_basis
        self.nk = field.degree
        self.nl = len(ol_basis)
        self.dim = self.nk * self.nl
        e = field.integral_basis_elements()
        # f_j f_l expanded back in the f-basis (O_L is a ring)
        fmatx = [[Fraction(c) for c in field.to_integral(f)]
                 for f in ol_basis]
        fcols = linalg.transpose(fmatx)  # nk x nl
        self._fprod = {}
        for j in range(self.nl):
            for l in range(j, self.nl):
                target = field.to_integral(ol_basis[j] * ol_basis[l])
                sol = linalg.solve_rect(fcols, [Fraction(c) for c in target])
                if sol is None or any(c.denominator != 1 for c in sol):
                    raise JPhiError("reflex basis is not multiplicatively "
                                    "closed")
                self._fprod[(j, l)] = sol
                self._fprod[(l, j)] = sol
        self._eprod = {}
        for i in range(self.nk):
            for k in range(i, self.nk):
                c = field.to_integral(e[i] * e[k])
                self._eprod[(i, k)] = c
                self._eprod[(k, i)] = c
        # sigma tensor 1 on the integral basis
        self._sig = [field.to_integral(field.conj(ei)) for ei in e]

    def idx(self, i, j):
        return i * self.nl + j

    def one(self):
        v = [Fraction(0)] * self.dim
        f = self.field
        one_k = f.to_integral(f.one())
        one_l = linalg.solve_rect(
            linalg.transpose([[Fraction(c) for c in f.to_integral(x)]
                              for x in self.ol_basis]),
            [Fraction(c) for c in f.to_integral(f.one())])
        for i in range(self.nk):
            for j in range(self.nl):
                v[self.idx(i, j)] = Fraction(one_k[i]) * one_l[j]
        return v

    def mult(self, u, v):
        out = [Fraction(0)] * self.dim
        for i in range(self.nk):
            for j in range(self.nl):
                cu = u[self.idx(i, j)]
                if cu == 0:
                    continue
                for k in range(self.nk):
                    for l in range(self.nl):
                        cv = v[self.idx(k, l)]
                        if cv == 0:
                            continue
                        c = cu * cv
                        ec = self._eprod[(i, k)]
                        fc = self._fprod[(j, l)]
                        for m in range(self.nk):
                            if ec[m] == 0:
                                continue
                            cm = c * ec[m]
                            for p in range(self.nl):
                                if fc[p] != 0:
                                    out[self.idx(m, p)] += cm * fc[p]
        return out

    def sigma(self, u):
        out = [Fraction(0)] * self.dim
        for i in range(self.nk):
            for j in range(self.nl):
                c = u[self.idx(i, j)]
                if c == 0:
                    continue
                for m in range(self.nk):
                    s = self._sig[i][m]
                    if s != 0:
                        out[self.idx(m, j)] += c * s
        return out

    def scale_by_ol(self, j, u):
        """Multiply by 1 tensor f_j."""
        out = [Fraction(0)] * self.dim
        for i in range(self.nk):
            for l in range(self.nl):
                c = u[self.idx(i, l)]
                if c == 0:
                    continue
                fc = self._fprod[(j, l)]
                for p in range(self.nl):
                    if fc[p] != 0:
                        out[self.idx(i, p)] += c * fc[p]
        return out


class LieData:
    """Lie_Phi as the image lattice of the evaluation map, with the
    diagonal O_K-action (component q multiplies by tau_q(a))."""

    __slots__ = ("field", "phi", "image_vectors", "ol_basis", "lbasis")

    def __init__(self, field, phi, image_vectors, ol_basis, lbasis):
        self.field = field
        self.phi = phi
        self.image_vectors = image_vectors
        self.ol_basis = ol_basis
        self.lbasis = lbasis


class JPhiData:
    __slots__ = ("field", "phi", "ambient", "j_phi", "lie_phi",
                 "ol_rank", "idempotents")

    def __init__(self, field, phi, ambient, j_phi, lie_phi, ol_rank,
                 idempotents):
        self.field = field
        self.phi = phi
        self.ambient = ambient
        self.j_phi = j_phi
        self.lie_phi = lie_phi
        self.ol_rank = ol_rank
        self.idempotents = idempotents


def _eval_map_rows(field, phi, amb, taus):
    """Rational matrix of (a tensor b) -> (tau_q(a) * b)_q on the ambient
    basis; rows grouped by q in Phi, power-basis coordinates."""
    e = field.integral_basis_elements()
    rows = [[] for _ in range(len(phi.indices) * field.degree)]
    for i in range(amb.nk):
        for j in range(amb.nl):
            col = []
            for qi, q in enumerate(phi.indices):
                val = apply_automorphism(field, taus[q], e[i]) * amb.ol_basis[j]
                col.extend(val.coords)
            for r, c in enumerate(col):
                rows[r].append(c)
    return rows


def compute_jphi(field, phi):
    """J_Phi with its invariants verified; raises JPhiError on failure."""
    cache = getattr(field, "_jphi_cache", None)
    if cache is None:
        cache = field._jphi_cache = {}
    if phi.indices in cache:
        return cache[phi.indices]
    data = _compute_jphi(field, phi)
    cache[phi.indices] = data
    return data


def _compute_jphi(field, phi):
    auts = field.automorphisms()
    perm = _embedding_automorphism_indices(field)
    taus = [auts[perm[q]] for q in range(field.degree)]
    ol_basis = reflex_ring_basis(field, phi)
    amb = AmbientAlgebra(field, ol_basis)
    rows = _eval_map_rows(field, phi, amb, taus)
    den = linalg.lcm_den([c for row in rows for c in row])
    int_rows = [[int(c * den) for c in row] for row in rows]
    jbasis = linalg.int_kernel(int_rows)

    g, dl = field.g, amb.nl
    if len(jbasis) != g * dl:
        raise JPhiError("J_Phi has unexpected Z-rank %d" % len(jbasis))
    # O_L-stability: (1 tensor f_j) J subset J
    jq = linalg.transpose([list(map(Fraction, v)) for v in jbasis])
    for j in range(dl):
        for v in jbasis:
            w = amb.scale_by_ol(j, list(map(Fraction, v)))
            if linalg.solve_rect(jq, w) is None:
                raise JPhiError("J_Phi is not an O_L-submodule")
    ol_rank = len(jbasis) // dl

    # J * J^sigma = 0 and J intersect J^sigma = 0
    sig_basis = [amb.sigma(list(map(Fraction, v))) for v in jbasis]
    for u in jbasis:
        uu = list(map(Fraction, u))
        for w in sig_basis:
            if any(c != 0 for c in amb.mult(uu, w)):
                raise JPhiError("J_Phi * J_Phi^sigma != 0")
    both = [list(map(Fraction, v)) for v in jbasis] + sig_basis
    if linalg.rank(both) != 2 * len(jbasis):
        raise JPhiError("J_Phi meets J_Phi^sigma")

    # Lie_Phi: images of the ambient basis; rank must complement J's
    cols = linalg.transpose(rows)  # one image vector per ambient basis elt
    if linalg.rank(cols) != amb.dim - len(jbasis):
        raise JPhiError("rank of the evaluation image is off")
    lbasis = _greedy_l_basis(field, phi, cols, ol_basis)
    lie = LieData(field, phi, cols, ol_basis, lbasis)

    idem = _idempotents(amb, jbasis)
    return JPhiData(field, phi, amb, jbasis, lie, ol_rank, idem)


def _l_span_rows(field, phi, vecs, ol_basis):
    """Q-span rows of {f_j * v} for v in vecs (componentwise mult)."""
    rows = []
    for v in vecs:
        for f in ol_basis:
            rows.append(_scale_components(field, phi, v, [f] * len(phi.indices)))
    return rows


def _scale_components(field, phi, v, factors):
    """Multiply component q of v (a vector in prod_{q in Phi} K, power
    coordinates) by factors[qi]."""
    d = field.degree
    out = []
    for qi in range(len(phi.indices)):
        x = FieldElement(field, list(v[qi * d:(qi + 1) * d]))
        out.extend((x * factors[qi]).coords)
    return out


def _greedy_l_basis(field, phi, image_vectors, ol_basis):
    """Vectors v_1..v_g whose L-span is all of Lie_Phi tensor Q."""
    g, dl = field.g, len(ol_basis)
    chosen = []
    rows = []
    for v in image_vectors:
        cand = _l_span_rows(field, phi, [v], ol_basis)
        if linalg.rank(rows + cand) == len(chosen) * dl + dl:
            chosen.append(v)
            rows = rows + cand
            if len(chosen) == g:
                break
    if len(chosen) != g:
        raise JPhiError("could not extract an L-basis of Lie_Phi")
    return chosen


def _idempotents(amb, jbasis):
    """(eps_j, eps_lie) with eps_j + eps_lie = 1, eps_j eps_lie = 0 and
    eps_j * ambient spanning J_Phi tensor Q."""
    jq = [list(map(Fraction, v)) for v in jbasis]
    # annihilator of J in the Q-algebra
    stacked = []
    # x * j = 0 for every j: rows indexed by (j, coordinate)
    basis_vecs = []
    for i in range(amb.dim):
        e = [Fraction(0)] * amb.dim
        e[i] = Fraction(1)
        basis_vecs.append(e)
    for jv in jq:
        cols = [amb.mult(e, jv) for e in basis_vecs]
        m = linalg.transpose(cols)
        stacked.extend(m)
    ann = linalg.nullspace(stacked)
    if len(ann) + len(jq) != amb.dim:
        raise JPhiError("annihilator does not complement J_Phi")
    # write 1 = eps_j + eps_lie with eps_j in span(J), eps_lie in span(ann)
    cols = linalg.transpose(jq + ann)
    sol = linalg.solve_rect(cols, amb.one())
    if sol is None:
        raise JPhiError("idempotent decomposition failed")
    eps_j = [Fraction(0)] * amb.dim
    for c, v in zip(sol[:len(jq)], jq):
        for i in range(amb.dim):
            eps_j[i] += c * v[i]
    eps_lie = [a - b for a, b in zip(amb.one(), eps_j)]
    if amb.mult(eps_j, eps_j) != eps_j:
        raise JPhiError("eps_J not idempotent")
    if any(c != 0 for c in amb.mult(eps_j, eps_lie)):
        raise JPhiError("idempotents do not annihilate each other")
    # eps_j * ambient spans J tensor Q
    span = [amb.mult(eps_j, e) for e in basis_vecs]
    if linalg.rank(span) != len(jq) or \
            linalg.rank(span + jq) != len(jq):
        raise JPhiError("eps_J does not cut out J_Phi")
    return eps_j, eps_lie


def _action_matrix(field, phi, lie, a, taus):
    """g x g matrix over L of a acting diagonally on Lie_Phi, in the
    greedy L-basis."""
    g = field.g
    dl = len(lie.ol_basis)
    a = field.coerce(a)
    factors = [apply_automorphism(field, taus[q], a) for q in phi.indices]
    # unknowns: coefficients c_{i,j} with a.v_i = sum_i' (sum_j c f_j) v_i'
    cols = []
    for i in range(g):
        for j in range(dl):
            fac = [lie.ol_basis[j]] * len(phi.indices)
            cols.append(_scale_components(field, phi, lie.lbasis[i], fac))
    m = linalg.transpose(cols)
    out = [[None] * g for _ in range(g)]
    for i in range(g):
        target = _scale_components(field, phi, lie.lbasis[i], factors)
        sol = linalg.solve_rect(m, target)
        if sol is None:
            raise JPhiError("action does not stabilize Lie_Phi")
        for ip in range(g):
            c = field.zero()
            for j in range(dl):
                c = c + sol[ip * dl + j] * lie.ol_basis[j]
            out[ip][i] = c
    return out


def _poly_mul(field, p, q):
    out = [field.zero()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def charpoly_on_lie(field, phi, a, n=1):
    """Char poly (lowest first, coefficients in O_L as field elements) of
    a in O_K acting on Lie_Phi tensor a free rank-n module."""
    a = field.coerce(a)
    if not field.is_integral(a):
        raise JPhiError("element is not integral")
    data = compute_jphi(field, phi)
    auts = field.automorphisms()
    perm = _embedding_automorphism_indices(field)
    taus = [auts[perm[q]] for q in range(field.degree)]
    m = _action_matrix(field, phi, data.lie_phi, a, taus)
    g = field.g
    big = [[field.zero()] * (g * n) for _ in range(g * n)]
    for b in range(n):
        for i in range(g):
            for j in range(g):
                big[b * g + i][b * g + j] = m[i][j]
    coeffs = linalg.charpoly_berkowitz(big)  # lowest first
    return [field.coerce(c) for c in coeffs]


def product_formula(field, phi, a, n=1):
    """prod_{q in Phi} (X - tau_q(a))^n expanded in K, lowest first."""
    a = field.coerce(a)
    auts = field.automorphisms()
    perm = _embedding_automorphism_indices(field)
    poly = [field.one()]
    for q in phi.indices:
        root = apply_automorphism(field, auts[perm[q]], a)
        for _ in range(n):
            poly = _poly_mul(field, poly, [-root, field.one()])
    return poly
