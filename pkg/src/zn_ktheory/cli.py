"""Command line interface: ``zn-ktheory <verb> ...``.

Exit status: 0 success, 1 I/O failure, 2 invalid input (syntax, validation,
or a formula that is undefined on the input), 3 disagreement or missed
expectation under ``--strict``.
"""

from __future__ import annotations

import argparse
import sys

from . import catalog as cat
from .families import conjugate, cyclotomic, direct_sum, permutation, trivial
from .lattice_actions import ActionValidationError, free_outside_origin, prime_split
from .oracles import cross_check, delocalized_rank
from .rank_formulas import (
    DEFAULT_VARIANT,
    LITERAL_VARIANTS,
    FormulaUndefinedError,
    assembled_rank,
    literal_rank,
    pure_p_ranks,
)

MODES = ("literal", "assembled", "oracle", "pure-p", "all")


class _Exit(Exception):
    def __init__(self, status: int, message: str = ""):
        super().__init__(message)
        self.status = status
        self.message = message


def _read_spec(path: str):
    try:
        text = cat.read_text(path)
    except OSError as exc:
        raise _Exit(cat.EXIT_IO, f"cannot read {path}: {exc}") from None
    try:
        return cat.parse_spec(text)
    except (cat.SpecSyntaxError, ActionValidationError) as exc:
        raise _Exit(cat.EXIT_VALIDATION, f"{path}: {exc}") from None


def _emit(obj, out: str | None):
    text = cat.dumps(obj)
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _Exit(cat.EXIT_IO, f"cannot write {out}: {exc}") from None


def cmd_validate(args):
    spec = _read_spec(args.spec)
    obj = cat.spec_to_obj(spec)
    obj.update(order=spec.order, primes=list(spec.primes),
               free_outside_origin=free_outside_origin(spec))
    obj["splits"] = []
    for p in spec.primes:
        split = prime_split(spec, p)
        obj["splits"].append({"p": p, "l": split.l, "k_l": split.k_l,
                              "k_l_value": str(split.k_l_value), "flags": list(split.flags)})
    _emit(obj, args.out)
    return cat.EXIT_OK


def cmd_compute(args):
    spec = _read_spec(args.spec)
    primes = [args.prime] if args.prime is not None else list(spec.primes)
    if args.prime is not None and args.prime not in spec.primes:
        raise _Exit(cat.EXIT_VALIDATION, f"prime {args.prime} does not divide m={spec.m}")
    variants = LITERAL_VARIANTS if args.variant == "all" else (args.variant,)
    modes = ("oracle", "assembled", "pure-p", "literal") if args.mode == "all" else (args.mode,)
    reports = []
    skipped = []
    for mode in modes:
        if mode == "oracle":
            reports.append(delocalized_rank(spec))
        for p in primes:
            if mode == "assembled":
                reports.append(assembled_rank(spec, p))
            elif mode == "pure-p":
                reports.append(pure_p_ranks(prime_split(spec, p)))
            elif mode == "literal":
                for v in variants:
                    try:
                        reports.append(literal_rank(spec, p, v))
                    except FormulaUndefinedError as exc:
                        if args.mode == "literal":
                            raise _Exit(cat.EXIT_VALIDATION, str(exc)) from None
                        skipped.append({"mode": "literal", "prime": p, "variant": v, "reason": str(exc)})
    doc = cat.rank_document(spec, reports, args.alpha)
    doc["skipped"] = skipped
    _emit(doc, args.out)
    comparable = [r for r in reports if r.mode != "pure-p" or _pure_p_comparable(spec, r.prime_used)]
    if args.strict and len({r.ranks for r in comparable}) > 1:
        return cat.EXIT_MISMATCH
    return cat.EXIT_OK


def _pure_p_comparable(spec, p) -> bool:
    return spec.m == p and prime_split(spec, p).free_outside_origin_at_p


def cmd_cross_check(args):
    spec = _read_spec(args.spec)
    report = cross_check(spec)
    _emit(cat.consistency_document(spec, report), args.out)
    if args.strict and report.divergences:
        return cat.EXIT_MISMATCH
    return cat.EXIT_OK


def cmd_catalog_run(args):
    try:
        text = cat.bundled_catalog_text() if args.catalog is None else cat.read_text(args.catalog)
    except OSError as exc:
        raise _Exit(cat.EXIT_IO, f"cannot read {args.catalog}: {exc}") from None
    try:
        status, report = cat.run_batch(text, modes=tuple(args.modes), strict=args.strict, jobs=args.jobs)
    except cat.SpecSyntaxError as exc:
        raise _Exit(cat.EXIT_VALIDATION, str(exc)) from None
    _emit(report, args.out)
    return status


def cmd_catalog_show(args):
    sys.stdout.write(cat.bundled_catalog_text())
    return cat.EXIT_OK


def cmd_generate(args):
    try:
        if args.family == "cyclotomic":
            spec = cyclotomic(args.p)
            meta = {"family": "cyclotomic", "p": args.p}
        elif args.family == "trivial":
            spec = trivial(args.n, args.m)
            meta = {"family": "trivial", "n": args.n, "m": args.m}
        elif args.family == "permutation":
            spec = permutation(args.cycles, m=args.m)
            meta = {"family": "permutation", "cycles": args.cycles, "m": args.m}
        elif args.family == "direct-sum":
            spec = direct_sum(*[_read_spec(p) for p in args.specs])
            meta = {"family": "direct-sum", "summands": args.specs}
        else:
            spec = conjugate(_read_spec(args.spec), args.seed, args.steps)
            meta = {"family": "conjugate", "seed": args.seed, "steps": args.steps}
    except ActionValidationError as exc:
        raise _Exit(cat.EXIT_VALIDATION, str(exc)) from None
    obj = cat.spec_to_obj(spec)
    obj["generator"] = meta
    _emit(obj, args.out)
    return cat.EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zn-ktheory",
        description="Ranks of K_*(C*_r(Z^n x| Z/m)) for square-free m, by several independent routes.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def with_out(p):
        p.add_argument("--out", help="write the JSON document here instead of stdout")
        return p

    p = with_out(sub.add_parser("validate", help="validate an action spec and describe its splits"))
    p.add_argument("spec", help="action-spec JSON file, or - for stdin")
    p.set_defaults(func=cmd_validate)

    p = with_out(sub.add_parser("compute", help="compute ranks in one or all modes"))
    p.add_argument("spec")
    p.add_argument("--mode", choices=MODES, default="oracle")
    p.add_argument("--prime", type=int, help="restrict to one prime factor of m")
    p.add_argument("--alpha", type=int, choices=(0, 1), help="only show the breakdown for K_alpha")
    p.add_argument("--variant", choices=LITERAL_VARIANTS + ("all",), default=DEFAULT_VARIANT)
    p.add_argument("--strict", action="store_true", help="exit 3 if the computed modes disagree")
    p.set_defaults(func=cmd_compute)

    p = with_out(sub.add_parser("cross-check", help="tabulate every mode and compare"))
    p.add_argument("spec")
    p.add_argument("--strict", action="store_true", help="exit 3 on any divergence")
    p.set_defaults(func=cmd_cross_check)

    p = sub.add_parser("catalog", help="regression catalog")
    csub = p.add_subparsers(dest="action", required=True)
    run = with_out(csub.add_parser("run", help="run a catalog (default: the bundled one)"))
    run.add_argument("catalog", nargs="?")
    run.add_argument("--modes", nargs="+", choices=("oracle", "assembled", "all"), default=["oracle"])
    run.add_argument("--strict", action="store_true")
    run.add_argument("--jobs", type=int, default=1)
    run.set_defaults(func=cmd_catalog_run)
    show = csub.add_parser("show", help="print the bundled catalog")
    show.set_defaults(func=cmd_catalog_show)

    p = sub.add_parser("generate", help="emit an action spec from a family")
    gsub = p.add_subparsers(dest="family", required=True)
    g = with_out(gsub.add_parser("cyclotomic"))
    g.add_argument("p", type=int)
    g = with_out(gsub.add_parser("trivial"))
    g.add_argument("n", type=int)
    g.add_argument("--m", type=int, required=True)
    g = with_out(gsub.add_parser("permutation"))
    g.add_argument("cycles", type=int, nargs="+")
    g.add_argument("--m", type=int)
    g = with_out(gsub.add_parser("direct-sum"))
    g.add_argument("specs", nargs="+")
    g = with_out(gsub.add_parser("conjugate"))
    g.add_argument("spec")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--steps", type=int, default=8)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        if exc.message:
            print(f"zn-ktheory: {exc.message}", file=sys.stderr)
        return exc.status


if __name__ == "__main__":
    sys.exit(main())
