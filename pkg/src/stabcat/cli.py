"""Command-line front end.

Every subcommand prints structured JSON with a stable key order. Exit codes:
0 when all checks pass, 1 when a violation is found (the report names the
axiom and a witness), 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import ambient as amb
from .corpus import generate_corpus, parse_corpus
from .errors import InputError, PreconditionError, StabcatError, TruncationWarning
from .pretorsion import DEFAULT_MAX_CHAIN, theory as get_theory

OK, VIOLATION, INPUT_ERROR = 0, 1, 2


def _emit(obj, out):
    out.write(json.dumps(obj, indent=2, ensure_ascii=False, default=str) + "\n")


def _report(rep, args, out):
    _emit(rep.to_dict(verbose=args.verbose), out)
    return OK if rep.passed else VIOLATION


def _corpus(text):
    return generate_corpus(parse_corpus(text))


def _default_theory(objects, given):
    if given:
        return given
    return amb.kind_of(objects[0]) if objects else "preord"


def _system(name):
    """A system kind, or ``fault:<name>`` for one of the seeded faulty systems."""
    if name.startswith("fault:"):
        from . import faults
        table = {"open-minus-ab": faults.open_minus_ab, "open-minus-ab-discrete": faults.open_minus_ab_discrete}
        fn = table.get(name[len("fault:"):])
        if fn is None:
            raise InputError(f"unknown fault {name!r}; known: {', '.join('fault:' + k for k in table)}")
        return fn()
    return name


def _write_dot(path, text):
    with open(path, "w") as fh:
        fh.write(text)


# -- subcommands -----------------------------------------------------------------------------

def cmd_validate(args, out):
    from .dot import category_dot, preord_dot
    from .io import load_file
    from .preord import FinPreord
    from .category import FinCat
    obj = load_file(args.file, strict=True if args.strict else None)
    desc = obj.describe() if hasattr(obj, "describe") else {"kind": type(obj).__name__, "table": obj.table()}
    _emit({"valid": True, "object": desc}, out)
    if args.dot:
        if isinstance(obj, FinCat):
            _write_dot(args.dot, category_dot(obj))
        elif isinstance(obj, FinPreord):
            _write_dot(args.dot, preord_dot(obj))
    return OK


def cmd_subobjects(args, out):
    from .dot import lattice_dot
    from .io import load_object
    from .systems import system
    A = load_object(args.file)
    sys_ = system(args.system)
    sys_.check_applicable(A)
    L = sys_.lattice(A)
    _emit({"object": A.name, "system": sys_.name, "members": L.labels(),
           "covers": [[L.labels()[i], L.labels()[j]] for i, j in L.hasse()]}, out)
    if args.dot:
        _write_dot(args.dot, lattice_dot(L))
    return OK


def cmd_pretorsion(args, out):
    from .io import load_object
    A = load_object(args.file)
    th = get_theory(args.theory or amb.kind_of(A), args.max_chain)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        seq = th.canonical_sequence(A)
    T, F = seq.torsion_part, seq.torsionfree_part
    res = {"object": A.name, "theory": th.name, "max_chain": args.max_chain,
           "torsion": th.is_torsion(A), "torsion_free": th.is_torsion_free(A),
           "trivial": th.is_trivial_object(A),
           "tau": T.describe(), "eps": seq.counit.table()}
    if hasattr(F, "describe"):
        res["phi"] = F.describe()
        res["eta"] = seq.unit.table()
    else:
        res["phi"] = {"objects": list(F.objects), "arrows_up_to_bound": [F.label(c) for c in F.chains()]}
        res["eta"] = {"objects": {x: F.objects[k] for x, k in zip(A.objects, F.class_of)}}
    res["truncated"] = bool(seq.truncated)
    res["warnings"] = [str(w.message) for w in caught if issubclass(w.category, TruncationWarning)]
    _emit(res, out)
    return OK


def cmd_verify_cs(args, out):
    from .suites.systems import verify_cs
    corpus = _corpus(args.corpus)
    battery = _corpus(args.battery) if args.battery else None
    return _report(verify_cs(corpus, _system(args.system), battery), args, out)


def cmd_verify_pt(args, out):
    from .suites.pretorsion import verify_pt
    corpus = _corpus(args.corpus)
    battery = _corpus(args.battery) if args.battery else None
    return _report(verify_pt(corpus, _default_theory(corpus, args.theory), battery, args.max_chain), args, out)


def cmd_verify_cc(args, out):
    from .suites.pretorsion import verify_cc
    corpus = _corpus(args.corpus)
    battery = _corpus(args.battery) if args.battery else None
    rep = verify_cc(corpus, args.system, _default_theory(corpus, args.theory), battery, args.max_chain)
    return _report(rep, args, out)


def cmd_stable_hom(args, out):
    from .io import load_object
    from .stable import StableCategory
    A, B = load_object(args.source), load_object(args.target)
    st = StableCategory(args.system, args.theory or amb.kind_of(A), max_chain=args.max_chain)
    h = st.hom(A, B)
    classes = []
    for c in h:
        d = c.describe()
        members = []
        for p in c.class_members:
            w = st.find_congruence(c.representative, p)
            # None would mean the member is only related through a chain of diagrams
            members.append({"partial": p.describe(), "witness": w.describe() if w is not None else None})
        d["members"] = members
        classes.append(d)
    _emit({"source": A.name, "target": B.name, "config": st.config(), "classes": classes,
           "partials": len(h.partials)}, out)
    return OK


def cmd_verify_stable(args, out):
    from .suites.stable import verify_stable
    corpus = _corpus(args.corpus)
    battery = _corpus(args.battery) if args.battery else None
    rep = verify_stable(corpus, args.system, _default_theory(corpus, args.theory), battery, args.max_chain)
    return _report(rep, args, out)


def cmd_fractions(args, out):
    from .fractions import indiscrete_stable_description, verify_fractions
    corpus = _corpus(args.corpus)
    th = _default_theory(corpus, args.theory)
    _, rep = indiscrete_stable_description(corpus, th, args.max_chain)
    rep.extend(verify_fractions(corpus, theory=th, max_chain=args.max_chain))
    return _report(rep, args, out)


def cmd_sierpinski(args, out):
    from .presheaf import sierpinski_demo
    return _report(sierpinski_demo(not args.no_point_stage, args.intersect), args, out)


def cmd_verify_internal(args, out):
    from .presheaf import verify_internal_saturation
    return _report(verify_internal_saturation(_corpus(args.corpus)), args, out)


# -- parser -------------------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="stabcat", description="Coherent systems, pretorsion theories "
                                "and stable categories on finite preorders and categories.")
    p.add_argument("--verbose", action="store_true", help="include passing records in reports")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(run=fn)
        s.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS,
                       help="include passing records in reports")
        return s

    def corpus_opts(s, system=True, theory=True, default="gen:preord<=3"):
        s.add_argument("--corpus", default=default,
                       help="gen:preord<=N, gen:cat[:Name,...], gen:presheaf, fixtures:preord or a directory")
        if system:
            s.add_argument("--system", default="saturated",
                           help="open, closed, saturated, indiscrete, left-saturated, right-saturated; "
                                "verify-cs also takes fault:open-minus-ab and fault:open-minus-ab-discrete")
        if theory:
            s.add_argument("--theory", choices=("preord", "cat"), help="default: the corpus kind")
            s.add_argument("--max-chain", type=int, default=DEFAULT_MAX_CHAIN)
        s.add_argument("--battery", help="corpus reference for test objects")

    s = add("validate", cmd_validate, "load and check a file")
    s.add_argument("file")
    s.add_argument("--strict", action="store_true", help="require a preorder relation to be closed already")
    s.add_argument("--dot", help="write a DOT diagram of the object")

    s = add("subobjects", cmd_subobjects, "distinguished subobjects of an object")
    s.add_argument("file")
    s.add_argument("--system", default="saturated")
    s.add_argument("--dot", help="write the Hasse diagram in DOT")

    s = add("pretorsion", cmd_pretorsion, "canonical sequence tau -> A -> phi")
    s.add_argument("file")
    s.add_argument("--theory", choices=("preord", "cat"))
    s.add_argument("--max-chain", type=int, default=DEFAULT_MAX_CHAIN)

    corpus_opts(add("verify-cs", cmd_verify_cs, "coherent system axioms"), theory=False)
    corpus_opts(add("verify-pt", cmd_verify_pt, "pretorsion theory axioms"), system=False)
    corpus_opts(add("verify-cc", cmd_verify_cc, "compatibility of a system and a theory"))

    s = add("stable-hom", cmd_stable_hom, "stable morphisms between two objects")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--system", default="saturated")
    s.add_argument("--theory", choices=("preord", "cat"))
    s.add_argument("--max-chain", type=int, default=DEFAULT_MAX_CHAIN)

    corpus_opts(add("verify-stable", cmd_verify_stable, "stable category suites"))
    s = add("fractions", cmd_fractions, "explicit description and fractions for the indiscrete system")
    corpus_opts(s, system=False)

    s = add("sierpinski-demo", cmd_sierpinski, "saturated but not complemented subobjects")
    s.add_argument("--no-point-stage", action="store_true", help="drop the point stage (plain sets)")
    s.add_argument("--intersect", action="store_true", help="also check the intersection")

    s = add("verify-internal", cmd_verify_internal, "left, right and full saturation in presheaves")
    s.add_argument("--corpus", default="gen:presheaf")
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    try:
        return args.run(args, out)
    except InputError as e:
        _emit({"error": "input", "type": type(e).__name__, "message": str(e)}, out)
        return INPUT_ERROR
    except PreconditionError as e:
        _emit({"error": "precondition", "type": type(e).__name__, "message": str(e)}, out)
        return INPUT_ERROR
    except StabcatError as e:
        _emit({"error": "violation", "type": type(e).__name__, "message": str(e)}, out)
        return VIOLATION


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
