"""Morphism words in a tensor product of categories over a 2-group.

Objects are formal products  X a_1 .. a_r  (tensor)  b_1 .. b_s Y  with
flattened, left-first parenthesization (coherence makes this sound).
Words are sequences of generators: pure tensors f (tensor) p, and
associators A / A' that move a group factor across the tensor sign.

Normalization: every associator equals a canonical contraction omega
composed with a structural mu-insertion; omega slides to the end past
pure tensors by naturality (picking up whiskers), adjacent omegas merge,
and pure tensors fuse.  The result is the normal form
omega_a o (f tensor p), with at most one contraction.  Each slide is one
application of the reduction lemma (associator count drops by one), so
the procedure terminates on every word.

Evaluation: a concrete model maps base objects to fractional ideals,
group labels to invertible ideals, and morphism labels to
multiplication-by-scalar maps; structural morphisms evaluate to the
canonical identifications (the contraction a * a^{-1} = O_K is literal
in ideal arithmetic, I_a playing the role of the kappa map).
"""

from fractions import Fraction

from .ideal_lattice import FracIdeal


class WordError(ValueError):
    """Malformed word or label mismatch."""


# ---------------------------------------------------------------------------
# group-element words: tuples of (label, +-1), with formal inverses


def parse_elt(s):
    out = []
    for part in s.split("*"):
        part = part.strip()
        if not part:
            raise WordError("empty group label")
        if part.endswith("^-1"):
            out.append((part[:-3], -1))
        else:
            out.append((part, 1))
    return tuple(out)


def elt_str(c):
    if not c:
        return "e"
    return "*".join(l + ("^-1" if e < 0 else "") for l, e in c)


def inv_elt(c):
    return tuple((l, -e) for l, e in reversed(c))


def reduce_elt(c):
    out = []
    for f in c:
        if out and out[-1][0] == f[0] and out[-1][1] == -f[1]:
            out.pop()
        else:
            out.append(f)
    return tuple(out)


class ObjLabel:
    """X a_1..a_r tensor b_1..b_s Y."""

    __slots__ = ("xbase", "xf", "yf", "ybase")

    def __init__(self, xbase, xf, yf, ybase):
        self.xbase = xbase
        self.xf = tuple(xf)
        self.yf = tuple(yf)
        self.ybase = ybase

    def key(self):
        return (self.xbase, self.xf, self.yf, self.ybase)

    def __eq__(self, other):
        return isinstance(other, ObjLabel) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        left = " ".join([self.xbase] + [elt_str((f,)) for f in self.xf])
        right = " ".join([elt_str((f,)) for f in self.yf] + [self.ybase])
        return "%s (x) %s" % (left, right)


# ---------------------------------------------------------------------------
# one-sided morphism expressions
#
# An expression is a tuple of atoms in application order:
#   ("gen", name)            named morphism of the side category; base
#                            objects change per the model, factors pass
#                            through (naturality of whiskering)
#   ("struct", src, tgt)     canonical structural morphism between factor
#                            tuples with the same free-group reduction
#                            (mu insertions/contractions, unitors)


def struct_atom(src, tgt):
    src, tgt = tuple(src), tuple(tgt)
    if reduce_elt(src) != reduce_elt(tgt):
        raise WordError("structural morphism between non-isomorphic factors")
    return ("struct", src, tgt)


def canon_expr(atoms):
    out = []
    for a in atoms:
        if a[0] == "struct":
            if a[1] == a[2]:
                continue
            if out and out[-1][0] == "struct":
                prev = out.pop()
                if prev[2] != a[1]:
                    raise WordError("structural morphisms do not chain")
                merged = ("struct", prev[1], a[2])
                if merged[1] != merged[2]:
                    out.append(merged)
                continue
        out.append(a)
    return tuple(out)


def expr_apply(atoms, factors):
    """Resulting factor tuple after applying the expression."""
    cur = tuple(factors)
    for a in atoms:
        if a[0] == "struct":
            if cur != a[1]:
                raise WordError("structural morphism source mismatch")
            cur = a[2]
    return cur


def whisker_x(atoms, c):
    """Right-whisker an X-side expression by c (factors appended)."""
    out = []
    for a in atoms:
        if a[0] == "struct":
            out.append(("struct", a[1] + c, a[2] + c))
        else:
            out.append(a)
    return tuple(out)


def whisker_y(atoms, cinv):
    """Left-whisker a Y-side expression by cinv (factors prepended)."""
    out = []
    for a in atoms:
        if a[0] == "struct":
            out.append(("struct", cinv + a[1], cinv + a[2]))
        else:
            out.append(a)
    return tuple(out)


def expr_str(atoms):
    if not atoms:
        return "id"
    parts = []
    for a in atoms:
        if a[0] == "gen":
            parts.append(a[1])
        else:
            parts.append("[%s=>%s]" % (elt_str(a[1]), elt_str(a[2])))
    return ";".join(parts)


# ---------------------------------------------------------------------------
# word symbols


class PureTensor:
    __slots__ = ("fx", "fy")

    def __init__(self, fx, fy):
        self.fx = canon_expr(fx)
        self.fy = canon_expr(fy)

    def apply(self, obj):
        return ObjLabel(obj.xbase, expr_apply(self.fx, obj.xf),
                        expr_apply(self.fy, obj.yf), obj.ybase)

    def __repr__(self):
        return "PT(%s, %s)" % (expr_str(self.fx), expr_str(self.fy))


class Assoc:
    """direction +1: A_{X,c,Y}: Xc (x) Y -> X (x) cY.
    direction -1: the inverse A'."""

    __slots__ = ("direction", "elt")

    def __init__(self, direction, elt):
        self.direction = direction
        self.elt = tuple(elt)

    def apply(self, obj):
        k = len(self.elt)
        if self.direction > 0:
            if obj.xf[len(obj.xf) - k:] != self.elt:
                raise WordError("associator source mismatch")
            return ObjLabel(obj.xbase, obj.xf[:len(obj.xf) - k],
                            self.elt + obj.yf, obj.ybase)
        if obj.yf[:k] != self.elt:
            raise WordError("associator-inverse source mismatch")
        return ObjLabel(obj.xbase, obj.xf + self.elt, obj.yf[k:], obj.ybase)

    def __repr__(self):
        return "%s(%s)" % ("A" if self.direction > 0 else "A'",
                           elt_str(self.elt))


class MorphismWord:
    """Symbols in application order, with a declared source object."""

    __slots__ = ("src", "symbols", "tgt")

    def __init__(self, src, symbols):
        self.src = src
        self.symbols = list(symbols)
        cur = src
        for s in self.symbols:
            cur = s.apply(cur)
        self.tgt = cur

    def __repr__(self):
        return "MorphismWord(%r, %r)" % (self.src, self.symbols)


def identity_word(obj):
    return MorphismWord(obj, [])


def compose(w1, w2):
    """w2 after w1 (application order)."""
    if w1.tgt != w2.src:
        raise WordError("words do not chain: %r vs %r" % (w1.tgt, w2.src))
    return MorphismWord(w1.src, w1.symbols + w2.symbols)


# ---------------------------------------------------------------------------
# normalization


class _Omega:
    """omega_{c,X,Y}: Xc (x) c^{-1}Y -> X (x) Y, the canonical
    contraction built from an associator and a mu (eq. in module doc)."""

    __slots__ = ("elt",)

    def __init__(self, elt):
        self.elt = tuple(elt)

    def apply(self, obj):
        k = len(self.elt)
        cinv = inv_elt(self.elt)
        if obj.xf[len(obj.xf) - k:] != self.elt or obj.yf[:k] != cinv:
            raise WordError("contraction source mismatch")
        return ObjLabel(obj.xbase, obj.xf[:len(obj.xf) - k],
                        obj.yf[k:], obj.ybase)


class NormalForm:
    """omega_a o (fx tensor fy); a = () means no contraction (unit)."""

    __slots__ = ("src", "tgt", "elt", "fx", "fy", "direction", "trace")

    def __init__(self, src, tgt, elt, fx, fy, trace):
        self.src = src
        self.tgt = tgt
        self.elt = tuple(elt)
        self.fx = fx
        self.fy = fy
        self.direction = "omega-post"
        self.trace = trace

    def key(self):
        return (self.src.key(), self.tgt.key(), self.elt, self.fx, self.fy)

    def __eq__(self, other):
        return isinstance(other, NormalForm) and self.key() == other.key()

    def as_word(self):
        syms = [PureTensor(self.fx, self.fy)]
        if self.elt:
            mid = PureTensor(self.fx, self.fy).apply(self.src)
            c, cinv = self.elt, inv_elt(self.elt)
            # omega = (1 tensor mu) o A_{X,c,c^{-1}Y}
            after_a = ObjLabel(mid.xbase, mid.xf[:len(mid.xf) - len(c)],
                               c + mid.yf, mid.ybase)
            syms.append(Assoc(+1, c))
            syms.append(PureTensor((), [struct_atom(after_a.yf,
                                                    after_a.yf[2 * len(c):])]))
        return MorphismWord(self.src, syms)

    def __repr__(self):
        return "NormalForm(a=%s, fx=%s, fy=%s)" % (
            elt_str(self.elt), expr_str(self.fx), expr_str(self.fy))


def normalize(word):
    trace = []
    # 1. expand associators: A = omega o (1 tensor mu^{-1}),
    #    A' = omega_{c^{-1}} o (mu^{-1} tensor 1)
    items = []  # ("pt", fx, fy) | ("om", elt), in application order
    cur = word.src
    for s in word.symbols:
        nxt = s.apply(cur)
        if isinstance(s, PureTensor):
            items.append(("pt", s.fx, s.fy))
        elif isinstance(s, Assoc):
            if s.direction > 0:
                c, cinv = s.elt, inv_elt(s.elt)
                items.append(("pt", (),
                              (struct_atom(cur.yf, cinv + s.elt + cur.yf),)))
                items.append(("om", c))
                trace.append("expand %r = omega(%s) o (1 (x) mu^-1)"
                             % (s, elt_str(c)))
            else:
                c, cinv = s.elt, inv_elt(s.elt)
                items.append(("pt",
                              (struct_atom(cur.xf, cur.xf + c + cinv),), ()))
                items.append(("om", cinv))
                trace.append("expand %r = omega(%s) o (mu^-1 (x) 1)"
                             % (s, elt_str(cinv)))
        else:
            raise WordError("unknown symbol %r" % (s,))
        cur = nxt
    # 2. slide contractions rightward past pure tensors (naturality;
    #    each pass is one reduction-lemma step)
    changed = True
    while changed:
        changed = False
        for i in range(len(items) - 1):
            if items[i][0] == "om" and items[i + 1][0] == "pt":
                c = items[i][1]
                _, fx, fy = items[i + 1]
                items[i] = ("pt", whisker_x(fx, c),
                            whisker_y(fy, inv_elt(c)))
                items[i + 1] = ("om", c)
                trace.append("slide omega(%s) past a pure tensor"
                             % elt_str(c))
                changed = True
    # 3. merge adjacent contractions: omega_b o omega_a = omega_{b a}
    i = 0
    while i + 1 < len(items):
        if items[i][0] == "om" and items[i + 1][0] == "om":
            a, b = items[i][1], items[i + 1][1]
            items[i:i + 2] = [("om", b + a)]
            trace.append("merge omega(%s) then omega(%s) = omega(%s)"
                         % (elt_str(a), elt_str(b), elt_str(b + a)))
        else:
            i += 1
    # 4. fuse pure tensors (relation I)
    fx, fy = (), ()
    elt = ()
    for it in items:
        if it[0] == "pt":
            fx = canon_expr(fx + it[1])
            fy = canon_expr(fy + it[2])
        else:
            elt = it[1]
    if sum(1 for it in items if it[0] == "om") > 1:
        raise WordError("internal: more than one contraction left")
    trace.append("fuse pure tensors")
    return NormalForm(word.src, word.tgt, elt, fx, fy, trace)


# ---------------------------------------------------------------------------
# the pentagon / triangle comparison words


def pentagon_words(xbase, a_label, b_label, ybase):
    """The two canonical words (X a b) (x) Y -> X (x) (a b Y): one factor
    at a time, vs. the composite element with the relation-IV
    reassociations (identities after flattening)."""
    a, b = (a_label, 1), (b_label, 1)
    src = ObjLabel(xbase, (a, b), (), ybase)
    w1 = MorphismWord(src, [Assoc(+1, (b,)), Assoc(+1, (a,))])
    w2 = MorphismWord(src, [PureTensor((), ()), Assoc(+1, (a, b)),
                            PureTensor((), ())])
    return w1, w2


def triangle_words(xbase, label, ybase):
    """X a (x) Y -> X (x) a Y: directly, vs. through inserting and then
    contracting the unit e = a^{-1} a (triangle/unitor compatibility)."""
    f, finv = (label, 1), (label, -1)
    src = ObjLabel(xbase, (f,), (), ybase)
    w1 = MorphismWord(src, [Assoc(+1, (f,))])
    w2 = MorphismWord(src, [
        PureTensor((), (struct_atom((), (finv, f)),)),
        Assoc(+1, (f,)),
        PureTensor((), (struct_atom((f, finv, f), (f,)),)),
    ])
    return w1, w2


# ---------------------------------------------------------------------------
# evaluation on a concrete ideal-lattice model


class ConcreteModel:
    """field; xobjects/yobjects: base label -> FracIdeal; elements:
    group label -> invertible FracIdeal; gens_x/gens_y: morphism label ->
    (scalar FieldElement, src base, tgt base)."""

    __slots__ = ("field", "xobjects", "yobjects", "elements",
                 "gens_x", "gens_y")

    def __init__(self, field, xobjects, yobjects, elements, gens_x, gens_y):
        self.field = field
        self.xobjects = xobjects
        self.yobjects = yobjects
        self.elements = elements
        self.gens_x = gens_x
        self.gens_y = gens_y

    def factor_ideal(self, factors):
        acc = FracIdeal.ring(self.field)
        for label, e in factors:
            if label not in self.elements:
                raise WordError("unassigned group label %r" % label)
            ideal = self.elements[label]
            acc = acc * (ideal if e > 0 else ideal.inv())
        return acc

    def side_module(self, base, factors, side):
        table = self.xobjects if side == "x" else self.yobjects
        if base not in table:
            raise WordError("unassigned object label %r" % base)
        return table[base] * self.factor_ideal(factors)


class Evaluation:
    """Multiplication maps (scalar_x, scalar_y) between side modules."""

    __slots__ = ("scalar_x", "scalar_y", "src_x", "src_y", "tgt_x", "tgt_y")

    def __init__(self, scalar_x, scalar_y, src_x, src_y, tgt_x, tgt_y):
        self.scalar_x = scalar_x
        self.scalar_y = scalar_y
        self.src_x = src_x
        self.src_y = src_y
        self.tgt_x = tgt_x
        self.tgt_y = tgt_y

    def key(self):
        return (self.scalar_x, self.scalar_y, self.src_x, self.src_y,
                self.tgt_x, self.tgt_y)

    def __eq__(self, other):
        return isinstance(other, Evaluation) and self.key() == other.key()


def _eval_side(model, atoms, base, factors, side):
    field = model.field
    scalar = field.one()
    gens = model.gens_x if side == "x" else model.gens_y
    cur_base, cur_f = base, tuple(factors)
    for a in atoms:
        if a[0] == "gen":
            if a[1] not in gens:
                raise WordError("unassigned morphism label %r" % a[1])
            c, src_b, tgt_b = gens[a[1]]
            if src_b != cur_base:
                raise WordError("morphism %r applied at wrong object" % a[1])
            before = model.side_module(cur_base, cur_f, side)
            after = model.side_module(tgt_b, cur_f, side)
            if not before.scale(c).subset(after):
                raise WordError("morphism %r is not module-valued" % a[1])
            scalar = scalar * c
            cur_base = tgt_b
        else:
            if cur_f != a[1]:
                raise WordError("structural source mismatch in evaluation")
            m1 = model.side_module(cur_base, a[1], side)
            m2 = model.side_module(cur_base, a[2], side)
            if m1 != m2:
                raise WordError("structural morphism changes the module")
            cur_f = a[2]
    return scalar, cur_base, cur_f


def evaluate(model, word):
    """Evaluate a word; every atom is checked for well-definedness.
    Concrete base objects evolve with the named morphisms while the
    group factors follow the word's object labels."""
    field = model.field
    cur = word.src
    bx, by = cur.xbase, cur.ybase
    src_x = model.side_module(bx, cur.xf, "x")
    src_y = model.side_module(by, cur.yf, "y")
    sx, sy = field.one(), field.one()
    for s in word.symbols:
        if isinstance(s, PureTensor):
            cx, bx, _ = _eval_side(model, s.fx, bx, cur.xf, "x")
            cy, by, _ = _eval_side(model, s.fy, by, cur.yf, "y")
            sx, sy = sx * cx, sy * cy
        # associators and contractions are canonical identifications:
        # the ideal products are literally equal
        cur = s.apply(cur)
    return Evaluation(sx, sy, src_x, src_y,
                      model.side_module(bx, cur.xf, "x"),
                      model.side_module(by, cur.yf, "y"))


# ---------------------------------------------------------------------------
# word-file grammar: one symbol per line
#   PT f3 p7   |   A X a Y   |   A' X a Y


def parse_word(lines):
    src = None
    symbols = []
    cur = None
    for ln, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "PT" and len(parts) == 3:
                fx = () if parts[1] == "id" else (("gen", parts[1]),)
                fy = () if parts[2] == "id" else (("gen", parts[2]),)
                sym = PureTensor(fx, fy)
                if cur is None:
                    cur = ObjLabel("X", (), (), "Y")
                    src = cur
            elif parts[0] in ("A", "A'") and len(parts) == 4:
                xb, elt, yb = parts[1], parse_elt(parts[2]), parts[3]
                if parts[0] == "A":
                    sym = Assoc(+1, elt)
                    if cur is None:
                        cur = ObjLabel(xb, elt, (), yb)
                        src = cur
                else:
                    sym = Assoc(-1, elt)
                    if cur is None:
                        cur = ObjLabel(xb, (), elt, yb)
                        src = cur
                if cur.xbase != xb or cur.ybase != yb:
                    raise WordError("object labels do not chain")
            else:
                raise WordError("unrecognized symbol")
            cur = sym.apply(cur)
            symbols.append(sym)
        except WordError as e:
            raise WordError("line %d: %s" % (ln, e))
    if src is None:
        raise WordError("empty word")
    return MorphismWord(src, symbols)
