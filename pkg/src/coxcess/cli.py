"""``coxcess`` command line.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys

from . import __version__
from .errors import BudgetExceeded, CacheError, CoxcessError, CoxeterTypeError, WordError

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

_GLOBAL_DEFAULTS = {
    "type": None,
    "profile": "default",
    "cache_dir": None,
    "format": "json",
    "threads": 1,
    "seed": 0,
    "timing": False,
    "verbose": False,
}


class _Mismatch(Exception):
    pass


def _common_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the subcommand from being reset after it
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--type", "-t", default=argparse.SUPPRESS, help="Coxeter type, e.g. F4, A2xB2, I2(7)")
    g.add_argument("--profile", choices=["default", "extended"], default=argparse.SUPPRESS)
    g.add_argument("--cache-dir", default=argparse.SUPPRESS, help="class-structure cache (overridden by COXCESS_CACHE)")
    g.add_argument("--format", "-f", choices=["json", "csv", "text"], default=argparse.SUPPRESS)
    g.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for sampled runs")
    g.add_argument("--timing", action="store_true", default=argparse.SUPPRESS, help="record runtime_ms")
    g.add_argument("--verbose", "-v", action="store_true", default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="coxcess", parents=[common], description="Excess in finite Coxeter groups")
    parser.add_argument("--version", action="version", version=f"coxcess {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    add("info", "group order, roots, Coxeter matrix")
    p = add("classes", "conjugacy classes with minimal lengths")
    p.add_argument("--excess", action="store_true", help="also count X0_min per class")
    add("cuspidal-report", "cuspidal classes with |X_min|, |X0_min| and a representative")
    p = add("excess", "e(w) and E(w) with certificates")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--word", help="generator word, e.g. 1324")
    src.add_argument("--perm", help="signed permutation (A/B/D), one-line or cycles")
    src.add_argument("--random", type=int, metavar="K", help="K elements sampled with --seed")
    p = add("certify", "re-check a factorization w = x y")
    p.add_argument("--word", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    add("verify-theorem", "every class has a minimal element with e = E = 0")
    p = add("construct-min", "minimal cuspidal element of B_n / D_n from a partition")
    p.add_argument("--family", choices=["B", "D"], required=True)
    p.add_argument("--partition", required=True, help="cycle lengths, e.g. 3,2")
    add("coxeter", "bicolored Coxeter element x y")
    p = add("bigxs", "zero excess with large reflection excess in Sym(4k)")
    p.add_argument("--k", type=int, required=True)
    add("table1", "all involution factorizations of (145)(236) in Sym(6)")
    p = add("verify-table", "compare a cuspidal report with the bundled table")
    p.add_argument("--expected", help="expected JSON file (default: bundled table for --type)")
    return parser


# -- commands --------------------------------------------------------------------


def _system(args):
    from .coxeter import build_system

    if not args.type:
        raise CoxeterTypeError("--type is required for this command")
    return build_system(args.type)


def _budget(args) -> int:
    from .report import profile_budget

    return profile_budget(args.profile)


def _structure(args, system):
    from .conjugacy import structure

    return structure(system, _budget(args), cache_dir=args.cache_dir)


def cmd_info(args):
    s = _system(args)
    return {
        "type": s.descriptor,
        "rank": s.rank,
        "positive_roots": s.npos,
        "group_order": s.group_order,
        "coxeter_matrix": [list(r) for r in s.coxeter_matrix],
        "bilinear_form": None if s.bilinear_form is None else [[str(x) for x in row] for row in s.bilinear_form.entries],
        "longest_element": _fmt(s.longest_element().reduced_word()),
        "enumerable": s.group_order <= _budget(args),
    }


def _fmt(word):
    from .report import format_word

    return format_word(word)


def cmd_classes(args):
    from .excess import x0_min

    s = _system(args)
    cs = _structure(args, s)
    rows = []
    for c in cs.classes:
        fp = c.fingerprint
        row = {
            "id": c.id,
            "size": c.size,
            "l_min": c.l_min,
            "x_min": int(c.x_min.size),
            "L": c.reflection_length,
            "order": fp.order,
            "cuspidal": cs.is_cuspidal(c),
            "rep": _fmt(c.representative.reduced_word()),
            "charpoly": list(fp.charpoly),
        }
        if args.excess:
            row["x0_min"] = x0_min(c, threads=args.threads).count
        rows.append(row)
    return {"type": s.descriptor, "classes": len(rows), "rows": rows}


def cmd_cuspidal_report(args):
    from .report import cuspidal_report

    return cuspidal_report(args.type, args.profile, args.threads, args.cache_dir, args.timing).as_dict()


def _excess_row(s, w, args):
    from .excess import excess_report

    r = excess_report(w, budget=_budget(args))
    return {
        "word": _fmt(r.word),
        "length": r.length,
        "L": r.reflection_length,
        "e": r.e,
        "E": r.E,
        "x": _fmt(r.best_plain.x_word),
        "y": _fmt(r.best_plain.y_word),
        "x_E": _fmt(r.best_reflective.x_word),
        "y_E": _fmt(r.best_reflective.y_word),
    }


def cmd_excess(args):
    from .report import parse_word

    s = _system(args)
    _structure(args, s)
    if args.random:
        from .conjugacy import structure

        t = structure(s, _budget(args)).table
        rng = random.Random(args.seed)
        idx = sorted(rng.randrange(len(t)) for _ in range(args.random))
        els = [t.element(i) for i in idx]
    elif args.perm:
        from .signedperm import SignedPermutation, to_element

        els = [to_element(SignedPermutation.parse(args.perm), s)]
    else:
        els = [s.element(parse_word(args.word or "", s.rank))]
    return {"type": s.descriptor, "rows": [_excess_row(s, w, args) for w in els]}


def cmd_certify(args):
    from .excess import ExcessCertificate, check_certificate
    from .report import parse_word

    s = _system(args)
    w = s.element(parse_word(args.word, s.rank))
    x = s.element(parse_word(args.x, s.rank))
    y = s.element(parse_word(args.y, s.rank))
    defect = s.length(x) + s.length(y) - s.length(w)
    additive = s.reflection_length(x) + s.reflection_length(y) == s.reflection_length(w)
    cert = ExcessCertificate(tuple(x.reduced_word()), tuple(y.reduced_word()), defect, additive)
    problems = check_certificate(s, w, cert)
    doc = {"type": s.descriptor, "valid": not problems, "problems": problems, "defect": defect,
           "reflection_additive": additive}
    if problems:
        raise _Mismatch(doc)
    return doc


def cmd_verify_theorem(args):
    from .excess import verify_theorem

    s = _system(args)
    _structure(args, s)
    rep = verify_theorem(s, _budget(args), threads=args.threads)
    if not rep.complete:
        raise BudgetExceeded(f"{s.descriptor} exceeds the {args.profile} profile")
    doc = {
        "type": s.descriptor,
        "passed": rep.passed,
        "classes": len(rep.verdicts),
        "rows": [
            {"id": v.class_id, "size": v.size, "l_min": v.l_min, "x_min": v.x_min, "x0_min": v.x0_min,
             "rep": _fmt(v.representative)}
            for v in rep.verdicts
        ],
    }
    if not rep.passed:
        raise _Mismatch(doc)
    return doc


def cmd_construct_min(args):
    from .coxeter import build_system
    from .excess import ExcessCertificate, check_certificate, excess_report
    from .signedperm import CuspidalPartition, construct_min_cuspidal, cuspidal_min_length, to_element

    lam = CuspidalPartition.parse(args.partition)
    mc = construct_min_cuspidal(lam, args.family)
    s = build_system(f"{args.family}{lam.n}")
    tau, sigma, w = (to_element(p, s) for p in (mc.tau, mc.sigma, mc.w))
    formula = cuspidal_min_length(lam, args.family)
    cert = ExcessCertificate(tuple(tau.reduced_word()), tuple(sigma.reduced_word()),
                             tau.length() + sigma.length() - w.length(),
                             tau.reflection_length() + sigma.reflection_length() == w.reflection_length())
    problems = check_certificate(s, w, cert)
    doc = {
        "type": s.descriptor,
        "partition": list(lam.parts),
        "w": mc.w.cycle_string(),
        "w_one_line": mc.w.one_line(),
        "cycle_type": str(mc.w.cycle_type()),
        "tau": mc.tau.cycle_string(),
        "sigma": mc.sigma.cycle_string(),
        "word": _fmt(w.reduced_word()),
        "length": w.length(),
        "formula": formula,
        "l_tau": tau.length(),
        "l_sigma": sigma.length(),
        "certificate_problems": problems,
    }
    if s.group_order <= _budget(args):
        r = excess_report(w, budget=_budget(args))
        doc.update({"e": r.e, "E": r.E})
    if problems or doc["length"] != formula or doc.get("e", 0) or doc.get("E", 0):
        raise _Mismatch(doc)
    return doc


def cmd_coxeter(args):
    from .signedperm import coxeter_bicolored

    s = _system(args)
    b = coxeter_bicolored(s)
    w = b.w
    return {
        "type": s.descriptor,
        "R1": list(b.colour_classes[0]),
        "R2": list(b.colour_classes[1]),
        "x": _fmt(b.x.reduced_word()),
        "y": _fmt(b.y.reduced_word()),
        "w": _fmt(w.reduced_word()),
        "length": w.length(),
        "reflection_length": s.reflection_length(w),
        "order": s.order(w),
    }


def cmd_bigxs(args):
    from .signedperm import bigxs, symmetric_excess

    b = bigxs(args.k)
    res = symmetric_excess(b.w)
    doc = {
        "k": b.k,
        "n": b.n,
        "degenerate": b.degenerate,
        "w1": b.w1.cycle_string(False),
        "w2": b.w2.cycle_string(False),
        "w": b.w.cycle_string(False),
        "x": b.x.cycle_string(False),
        "y": b.y.cycle_string(False),
        "length": b.w.inversions(),
        "l_x": b.x.inversions(),
        "l_y": b.y.inversions(),
        "e_certificate_valid": b.x * b.y == b.w and b.x.squares_to_one() and b.y.squares_to_one()
        and b.x.inversions() + b.y.inversions() == b.w.inversions(),
        "e": res.e,
        "E": res.E,
        "bound": b.bound,
        "centralizer_order": res.centralizer_order,
        "reverser_involutions": res.reverser_involutions,
    }
    if not doc["e_certificate_valid"] or res.e != 0 or res.E < b.bound:
        raise _Mismatch(doc)
    return doc


def cmd_table1(args):
    from .report import table1_report

    doc = table1_report()
    if not doc["checks_passed"]:
        raise _Mismatch(doc)
    return doc


def cmd_verify_table(args):
    from .coxeter import build_system
    from .report import OUT_OF_SCOPE, compare_report, cuspidal_report, load_expected

    expected = load_expected(args.expected or _system(args).descriptor)
    descriptor = build_system(expected["type"]).descriptor
    if args.type and build_system(args.type).descriptor != descriptor:
        raise CoxeterTypeError(f"expected table is for {descriptor}, not {args.type}")
    if descriptor in OUT_OF_SCOPE or not expected.get("runnable", True):
        from .report import out_of_scope_checks

        rows = out_of_scope_checks(expected)
        ok = all(r["rep_check"].startswith(("ok", "parsed, reduced")) and "NOT" not in r["rep_check"] for r in rows)
        doc = {"type": descriptor, "ok": ok, "partial": True, "rows": rows}
        if not ok:
            raise _Mismatch(doc)
        return doc
    actual = cuspidal_report(descriptor, args.profile, args.threads, args.cache_dir)
    diff = compare_report(actual, expected)
    doc = diff.as_dict()
    if not diff.ok:
        raise _Mismatch(doc)
    return doc


COMMANDS = {
    "info": cmd_info,
    "classes": cmd_classes,
    "cuspidal-report": cmd_cuspidal_report,
    "excess": cmd_excess,
    "certify": cmd_certify,
    "verify-theorem": cmd_verify_theorem,
    "construct-min": cmd_construct_min,
    "coxeter": cmd_coxeter,
    "bigxs": cmd_bigxs,
    "table1": cmd_table1,
    "verify-table": cmd_verify_table,
}


def main(argv=None) -> int:
    import os

    from .report import render

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    for k, v in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    args.cache_dir = os.environ.get("COXCESS_CACHE") or args.cache_dir
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    out = sys.stdout
    try:
        doc = COMMANDS[args.command](args)
        code = EXIT_OK
    except _Mismatch as m:
        doc, code = m.args[0], EXIT_MISMATCH
    except BudgetExceeded as exc:
        print(f"coxcess: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CoxeterTypeError, WordError, ValueError, IndexError, FileNotFoundError) as exc:
        print(f"coxcess: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CacheError as exc:
        print(f"coxcess: cache error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CoxcessError as exc:
        print(f"coxcess: internal error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    out.write(render(doc, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
