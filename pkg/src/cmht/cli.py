"""Command-line front end: field database, JSON I/O, exit codes.

Exit codes: 0 success; 1 validation failure (the violated invariant is
named in the JSON error); 2 budget exhaustion; 3 malformed input.

Environment: CMHT_PREC sets the default certified-embedding precision in
bits (default 128); CMHT_BUDGET caps unit-search enumeration sizes.
All commands are deterministic; the randomized property suites live in
the test suite and take seeds there.
"""

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction

from .field_core import (FieldError, FieldElement, CMType, load_field,
                         parse_field, BUNDLED_FIELDS)
from .ideal_lattice import (FracIdeal, IdealError, different_ideal,
                            class_group)
from .herm_forms import (FormError, HermMatrix, SkewMatrix, is_positive,
                         is_negative_definite_along, AltForm, skew_from_alt,
                         alt_from_skew)
from .serre_calc import (ValidationError, SkewObject1, make_skew1,
                         HermLattice, SkewLatticeN, tensor, decompose,
                         det_descent, hom_module)
from .existence import BudgetError, admissible_types
from .ideal_condition import (JPhiError, compute_jphi, charpoly_on_lie,
                              product_formula)
from .tensor_cat import (WordError, parse_word, normalize, evaluate,
                         ConcreteModel, elt_str, expr_str)


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# field database with checksum manifest


def _fields_dir():
    return os.path.join(os.path.dirname(__file__), "fields")


def verify_manifest():
    """Check bundled field files against the checksum manifest."""
    path = os.path.join(_fields_dir(), "MANIFEST")
    with open(path) as fh:
        lines = [l.strip() for l in fh if l.strip()]
    out = {}
    for line in lines:
        digest, name = line.split()
        with open(os.path.join(_fields_dir(), name), "rb") as fh:
            actual = hashlib.sha256(fh.read()).hexdigest()
        if actual != digest:
            raise InputError("field file %s does not match its checksum"
                             % name)
        out[name] = digest
    return out


def get_field(spec):
    if spec in BUNDLED_FIELDS:
        verify_manifest()
    return load_field(spec)


# ---------------------------------------------------------------------------
# element / ideal / matrix JSON


def parse_element(field, s):
    """Parse an element expression such as "-i/2", "t+1", "zeta^3/5".

    `t` and `zeta` name the distinguished generator; `i` names it when
    its square is -1.  The expression must be polynomial in the
    generator with rational coefficients."""
    import sympy
    x = sympy.Symbol("x")
    names = {"t": x, "zeta": x}
    if field.gen() * field.gen() == -field.one():
        names["i"] = x
    try:
        expr = sympy.sympify(s, locals=names, rational=True)
        poly = sympy.Poly(sympy.expand(expr), x)
        coeffs = [sympy.Rational(c) for c in poly.all_coeffs()]
    except (sympy.SympifyError, sympy.PolynomialError, TypeError,
            ValueError) as e:
        raise InputError("bad element expression %r: %s" % (s, e))
    acc = field.zero()
    for c in coeffs:
        acc = acc * field.gen() + field.rational(Fraction(int(c.p), int(c.q)))
    return acc


def elt_to_json(e):
    return [str(c) for c in e.coords]


def json_to_elt(field, data):
    if isinstance(data, str):
        return parse_element(field, data)
    if not isinstance(data, list):
        raise InputError("element must be a string or coordinate list")
    try:
        return FieldElement(field, [Fraction(str(c)) for c in data])
    except (ValueError, FieldError) as e:
        raise InputError("bad element coordinates: %s" % e)


def ideal_to_json(I):
    return {"hnf": I.hnf, "denom": I.denom}


def json_to_ideal(field, data):
    if data == "OK":
        return FracIdeal.ring(field)
    if isinstance(data, dict) and "gens" in data:
        gens = [json_to_elt(field, g) for g in data["gens"]]
        return FracIdeal.from_generators(field, gens)
    if isinstance(data, dict) and "hnf" in data:
        try:
            return FracIdeal(field, [[int(c) for c in row]
                                     for row in data["hnf"]],
                            int(data.get("denom", 1)))
        except (ValueError, IdealError) as e:
            raise InputError("bad ideal JSON: %s" % e)
    raise InputError('ideal must be "OK", {"hnf":..,"denom":..} or '
                     '{"gens": [...]}')


def json_to_matrix(field, data):
    if not isinstance(data, list) or not all(isinstance(r, list)
                                             for r in data):
        raise InputError("matrix must be a nested array")
    return [[json_to_elt(field, c) for c in row] for row in data]


def matrix_to_json(m):
    return [[elt_to_json(c) for c in row] for row in m]


def get_type(field, k):
    types = field.enumerate_cm_types()
    if not 0 <= k < len(types):
        raise InputError("type index %d out of range (0..%d)"
                         % (k, len(types) - 1))
    return types[k]


def type_index(field, phi):
    return field.enumerate_cm_types().index(phi)


def skew1_to_json(w):
    return {"ideal": ideal_to_json(w.ideal_a), "zeta": elt_to_json(w.zeta),
            "type": type_index(w.field, w.cm_type)}


def json_to_skew1(field, data):
    return make_skew1(field, json_to_ideal(field, data["ideal"]),
                      json_to_elt(field, data["zeta"]),
                      get_type(field, int(data["type"])))


def lattice_common(field, data):
    ideals = [json_to_ideal(field, d) for d in data["ideals"]]
    gram = json_to_matrix(field, data["gram"])
    change = json_to_matrix(field, data["change"]) if "change" in data \
        else None
    return ideals, gram, change


def json_to_herm_lattice(field, data):
    ideals, gram, change = lattice_common(field, data)
    return HermLattice(field, ideals, gram, change=change)


def json_to_skew_lattice(field, data):
    ideals, gram, change = lattice_common(field, data)
    return SkewLatticeN(field, ideals, gram,
                        get_type(field, int(data["type"])), change=change)


def herm_lattice_to_json(M):
    return {"ideals": [ideal_to_json(a) for a in M.ideals],
            "gram": matrix_to_json(M.gram),
            "change": matrix_to_json(M.change)}


def skew_lattice_to_json(X):
    out = herm_lattice_to_json(X)
    out["type"] = type_index(X.field, X.cm_type)
    return out


def _load_json_arg(s):
    if os.path.exists(s):
        with open(s) as fh:
            s = fh.read()
    try:
        return json.loads(s)
    except json.JSONDecodeError as e:
        raise InputError("bad JSON: %s" % e)


def emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_field(args):
    if args.action == "check":
        with open(args.arg) as fh:
            field = parse_field(fh.read())
        emit({"ok": True, "degree": field.degree, "g": field.g})
    elif args.action == "embeddings":
        field = get_field(args.arg)
        prec = args.prec
        boxes = []
        for j in range(field.degree):
            b = field.embed(field.gen(), j, prec_bits=prec)
            boxes.append({"re": [str(b.re_lo), str(b.re_hi)],
                          "im": [str(b.im_lo), str(b.im_hi)]})
        emit({"field": field.name, "generator_boxes": boxes})
    elif args.action == "classgroup":
        field = get_field(args.arg)
        cg = class_group(field)
        emit({"field": field.name, "class_number": cg.order,
              "representatives": [ideal_to_json(a)
                                  for a in cg.representatives]})
    elif args.action == "different":
        field = get_field(args.arg)
        emit({"field": field.name,
              "different": ideal_to_json(different_ideal(field))})
    else:
        raise InputError("unknown field action %r" % args.action)


def cmd_ideal(args):
    field = get_field(args.field)
    ideals = [json_to_ideal(field, _load_json_arg(s)) for s in args.ideal]
    if args.op == "mul":
        if len(ideals) != 2:
            raise InputError("mul needs two ideals")
        emit(ideal_to_json(ideals[0] * ideals[1]))
    elif args.op == "inv":
        emit(ideal_to_json(ideals[0].inv()))
    elif args.op == "conj":
        emit(ideal_to_json(ideals[0].conj()))
    elif args.op == "principal":
        gen = ideals[0].is_principal()
        emit({"principal": gen is not None,
              "generator": elt_to_json(gen) if gen is not None else None})
    else:
        raise InputError("unknown ideal op %r" % args.op)


def cmd_herm(args):
    field = get_field(args.field)
    h = HermMatrix(field, json_to_matrix(field, _load_json_arg(args.matrix)))
    emit({"positive_definite": is_positive(h)})


def cmd_skew(args):
    field = get_field(args.field)
    f = SkewMatrix(field, json_to_matrix(field, _load_json_arg(args.matrix)))
    phi = get_type(field, args.type)
    emit({"negative_definite_along_type": is_negative_definite_along(f, phi)})


def cmd_form(args):
    field = get_field(args.field)
    data = _load_json_arg(args.form)
    basis = [tuple(json_to_elt(field, x) for x in vec)
             for vec in data["basis"]]
    mat = [[Fraction(str(c)) for c in row] for row in data["matrix"]]
    E = AltForm(field, basis, mat)
    F = skew_from_alt(E)
    E2 = alt_from_skew(field, E.basis, F)
    emit({"gram": matrix_to_json(F.entries),
          "roundtrip_exact": E2.matrix == E.matrix})


def cmd_skew1(args):
    field = get_field(args.field)
    obj = make_skew1(field, json_to_ideal(field, args.ideal
                                          if args.ideal == "OK"
                                          else _load_json_arg(args.ideal)),
                     parse_element(field, args.zeta),
                     get_type(field, args.type))
    emit(skew1_to_json(obj))


def cmd_serre(args):
    field = get_field(args.field)
    if args.action == "tensor":
        M = json_to_herm_lattice(field, _load_json_arg(args.args[0]))
        A = json_to_skew1(field, _load_json_arg(args.args[1]))
        bad = M.violations()
        if bad:
            raise ValidationError(bad[0])
        X = tensor(M, A)
        bad = X.violations()
        if bad:
            raise ValidationError(bad[0])
        emit(skew_lattice_to_json(X))
    elif args.action == "decompose":
        X = json_to_skew_lattice(field, _load_json_arg(args.args[0]))
        A = json_to_skew1(field, _load_json_arg(args.args[1]))
        emit(herm_lattice_to_json(decompose(X, A)))
    elif args.action == "det-descent":
        X = json_to_skew_lattice(field, _load_json_arg(args.args[0]))
        bad = X.violations()
        if bad:
            raise ValidationError(bad[0])
        out = det_descent(X)
        bad = out.violations()
        if bad:
            raise ValidationError(bad[0])
        emit(skew1_to_json(out))
    elif args.action == "hom":
        A = json_to_skew1(field, _load_json_arg(args.args[0]))
        B = json_to_skew1(field, _load_json_arg(args.args[1]))
        data = hom_module(A, B)
        emit({"hom_ideal": ideal_to_json(data.hom_ideal),
              "N": elt_to_json(data.N),
              "herm": herm_lattice_to_json(data.herm)})
    else:
        raise InputError("unknown serre action %r" % args.action)


def cmd_exists(args):
    field = get_field(args.field)
    report = admissible_types(field)
    types = field.enumerate_cm_types()
    if args.type is not None:
        phi = get_type(field, args.type)
        w = report.witnesses.get(phi)
        out = {"field": field.name, "type": args.type,
               "admissible": w is not None}
        if args.witness and w is not None:
            out["witness"] = skew1_to_json(w)
        emit(out)
        return
    emit({"field": field.name,
          "group_order": report.group_order,
          "relative_ramified": report.relative_ramified,
          "admissible_types": sorted(types.index(phi)
                                     for phi in report.admissible_types),
          "witnesses": {str(types.index(phi)): skew1_to_json(w)
                        for phi, w in report.witnesses.items()}})


def cmd_jphi(args):
    if args.args[0] == "charpoly":
        if len(args.args) != 2:
            raise InputError("usage: cmht jphi charpoly <field> --type k "
                             "--elem ... [--n N]")
        args.action, fieldname = "charpoly", args.args[1]
    elif len(args.args) == 1:
        args.action, fieldname = "report", args.args[0]
    else:
        raise InputError("usage: cmht jphi [charpoly] <field> --type k")
    field = get_field(fieldname)
    phi = get_type(field, args.type)
    if args.action == "charpoly":
        if args.elem is None:
            raise InputError("charpoly needs --elem")
        a = parse_element(field, args.elem)
        coeffs = charpoly_on_lie(field, phi, a, args.n)
        pf = product_formula(field, phi, a, args.n)
        emit({"coeffs": [elt_to_json(c) for c in coeffs],
              "matches_product_formula":
                  all(x == y for x, y in zip(coeffs, pf))})
        return
    data = compute_jphi(field, phi)
    emit({"field": field.name, "type": args.type,
          "ambient_rank": data.ambient.dim,
          "reflex_degree": data.ambient.nl,
          "j_basis": [list(v) for v in data.j_phi],
          "ol_rank": data.ol_rank,
          "invariants": "verified"})


def _model_from_json(data):
    field = get_field(data["field"])

    def ideals(d):
        return {k: json_to_ideal(field, v) for k, v in d.items()}

    def gens(d):
        return {k: (parse_element(field, v["scalar"]), v["src"], v["tgt"])
                for k, v in d.items()}

    return field, ConcreteModel(field, ideals(data.get("xobjects", {})),
                                ideals(data.get("yobjects", {})),
                                ideals(data.get("elements", {})),
                                gens(data.get("gens_x", {})),
                                gens(data.get("gens_y", {})))


def cmd_cat(args):
    with open(args.word_file) as fh:
        word = parse_word(fh.readlines())
    nf = normalize(word)
    if args.action == "normalize":
        emit({"normal_form": {"a": elt_str(nf.elt),
                              "fx": expr_str(nf.fx),
                              "fy": expr_str(nf.fy),
                              "src": repr(nf.src), "tgt": repr(nf.tgt),
                              "direction": nf.direction},
              "trace": nf.trace})
    elif args.action == "eval":
        field, model = _model_from_json(_load_json_arg(args.model))
        ev1 = evaluate(model, word)
        ev2 = evaluate(model, nf.as_word())
        emit({"scalar_x": elt_to_json(ev1.scalar_x),
              "scalar_y": elt_to_json(ev1.scalar_y),
              "src_x": ideal_to_json(ev1.src_x),
              "src_y": ideal_to_json(ev1.src_y),
              "tgt_x": ideal_to_json(ev1.tgt_x),
              "tgt_y": ideal_to_json(ev1.tgt_y),
              "normal_form_agrees": ev1 == ev2})
    else:
        raise InputError("unknown cat action %r" % args.action)


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="cmht",
                                description="exact CM ideal-lattice toolkit")
    sub = p.add_subparsers(dest="cmd", required=True)

    fp = sub.add_parser("field")
    fp.add_argument("action",
                    choices=["check", "embeddings", "classgroup",
                             "different"])
    fp.add_argument("arg")
    fp.add_argument("--prec", type=int, default=None)
    fp.set_defaults(func=cmd_field)

    ip = sub.add_parser("ideal")
    ip.add_argument("op", choices=["mul", "inv", "conj", "principal"])
    ip.add_argument("field")
    ip.add_argument("ideal", nargs="+")
    ip.set_defaults(func=cmd_ideal)

    hp = sub.add_parser("herm")
    hp.add_argument("action", choices=["posdef"])
    hp.add_argument("field")
    hp.add_argument("matrix")
    hp.set_defaults(func=cmd_herm)

    sp = sub.add_parser("skew")
    sp.add_argument("action", choices=["negdef"])
    sp.add_argument("field")
    sp.add_argument("matrix")
    sp.add_argument("--type", type=int, required=True)
    sp.set_defaults(func=cmd_skew)

    fo = sub.add_parser("form")
    fo.add_argument("action", choices=["roundtrip"])
    fo.add_argument("field")
    fo.add_argument("form")
    fo.set_defaults(func=cmd_form)

    s1 = sub.add_parser("skew1")
    s1.add_argument("action", choices=["make"])
    s1.add_argument("field")
    s1.add_argument("--ideal", required=True)
    s1.add_argument("--zeta", required=True)
    s1.add_argument("--type", type=int, required=True)
    s1.set_defaults(func=cmd_skew1)

    se = sub.add_parser("serre")
    se.add_argument("action",
                    choices=["tensor", "decompose", "det-descent", "hom"])
    se.add_argument("field")
    se.add_argument("args", nargs="+")
    se.set_defaults(func=cmd_serre)

    ex = sub.add_parser("exists")
    ex.add_argument("field")
    ex.add_argument("--type", type=int, default=None)
    ex.add_argument("--witness", action="store_true")
    ex.set_defaults(func=cmd_exists)

    jp = sub.add_parser("jphi")
    jp.add_argument("args", nargs="+",
                    help="[charpoly] <field>")
    jp.add_argument("--type", type=int, required=True)
    jp.add_argument("--elem", default=None)
    jp.add_argument("--n", type=int, default=1)
    jp.set_defaults(func=cmd_jphi)

    ct = sub.add_parser("cat")
    ct.add_argument("action", choices=["normalize", "eval"])
    ct.add_argument("word_file")
    ct.add_argument("model", nargs="?", default=None)
    ct.set_defaults(func=cmd_cat)

    return p


def run(argv):
    parser = build_parser()
    # let option values start with "-" (e.g. --zeta "-i/2")
    merged = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok in ("--zeta", "--elem", "--ideal") and i + 1 < len(argv):
            merged.append("%s=%s" % (tok, argv[i + 1]))
            skip = True
        else:
            merged.append(tok)
    argv = merged
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 3 if e.code not in (0, None) else 0
    try:
        args.func(args)
        return 0
    except (ValidationError,) as e:
        emit({"error": e.reason})
        return 1
    except FormError as e:
        emit({"error": str(e)})
        return 1
    except BudgetError as e:
        emit({"error": str(e)})
        return 2
    except (InputError, WordError, JPhiError, json.JSONDecodeError,
            FileNotFoundError, KeyError, IndexError) as e:
        emit({"error": str(e)})
        return 3
    except (FieldError, IdealError) as e:
        emit({"error": str(e)})
        return 3


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
