"""Command-line entry point.

Subcommands: term, classify, measure, convolve, substitute, refute, obstruct.
Documents are JSON; every rational is written "num/den".  Errors go to
stderr with a prefix naming their kind, and the exit status is nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import FreeMagmaError, VerificationError
from .limits import ENV_MAX_LEVEL, ENV_MAX_SUPPORT, Limits
from .measure import (convolve, dumps_mean, format_rational, fubini_measure, load_mean,
                      measure_of, parse_rational, uniform_level)
from .obstruction import walkthrough
from .refutation import (BUILTIN_SEQUENCES, DEFAULT_PREFIX, check_certificate, get_sequence,
                         refute_hindman)
from .sets import format_set, in_Z, member, parse_set, t_depth
from .substitution import IndexSeq, SubstitutionInstance, is_admissible
from .terms import GeneratorSet, TermStore


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _indices(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad index list {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_term(args, store, limits):
    out = {}
    if args.level is not None:
        out["level"] = args.level
        out["count"] = store.count_level(args.level)
        if not args.count_only:
            out["terms"] = [str(t) for t in store.enumerate_level(args.level)]
    if args.chain is not None:
        out["right_chain"] = str(store.right_chain(args.chain))
    terms = []
    for text in args.terms:
        t = store.parse(text)
        parts = store.decompose(t)
        terms.append({
            "term": str(t),
            "size": t.size,
            "decompose": None if parts is None else [str(parts[0]), str(parts[1])],
        })
    if terms:
        out["terms_parsed"] = terms
    if not out:
        raise FreeMagmaError("nothing to do: give a term, --level or --chain")
    _emit(_dump(out), args.emit)
    return 0


def cmd_classify(args, store, limits):
    t = store.parse(args.term)
    depth = t_depth(t)
    out = {
        "term": str(t),
        "size": t.size,
        "in_Z": in_Z(t),
        "in_T": list(range(depth + 1)),
        "t_depth": depth,
    }
    for text in args.set or ():
        A = parse_set(text, store)
        out.setdefault("member", {})[format_set(A)] = member(t, A)
    _emit(_dump(out), args.emit)
    return 0


def _mean_source(args, store):
    if args.mean and args.uniform:
        raise FreeMagmaError("give either --mean or --uniform, not both")
    if args.mean:
        return load_mean(args.mean, store)
    if args.uniform:
        return uniform_level(args.uniform, store)
    raise FreeMagmaError("give --mean FILE or --uniform LEVEL")


def cmd_measure(args, store, limits):
    mu = _mean_source(args, store)
    if args.set:
        A = parse_set(args.set, store)
        sys.stdout.write(format_rational(measure_of(mu, A)) + "\n")
        if args.emit:
            _emit(dumps_mean(mu), args.emit)
    else:
        _emit(dumps_mean(mu), args.emit)
    return 0


def cmd_convolve(args, store, limits):
    mu = load_mean(args.left, store)
    nu = load_mean(args.right, store)
    out = convolve(mu, nu, limits.max_support)
    if args.set:
        A = parse_set(args.set, store)
        direct = measure_of(out, A)
        iterated = fubini_measure(mu, nu, A)
        if direct != iterated:
            raise VerificationError(f"direct {direct} != iterated {iterated}")
        sys.stderr.write(f"{format_set(A)}: {format_rational(direct)}\n")
    _emit(dumps_mean(out), args.emit)
    return 0


def cmd_substitute(args, store, limits):
    skeleton = store.parse(args.skeleton)
    if args.seq and args.means:
        raise FreeMagmaError("give either --seq or --means, not both")
    if args.means:
        means = [load_mean(path, store) for path in args.means]
        seq = None
    else:
        seq = get_sequence(args.seq or "uniform-levels", store, args.prefix)
    indices = args.indices
    if len(indices) != skeleton.size:
        raise FreeMagmaError(f"{len(indices)} indices for a skeleton with {skeleton.size} leaves")
    admissible = is_admissible(skeleton, indices, args.offset)
    if seq is None:
        try:
            sources = [means[i] for i in indices]
        except IndexError:
            raise FreeMagmaError(f"index out of range for {len(means)} mean files") from None
    else:
        sources = [seq[i] for i in indices]
    inst = SubstitutionInstance(skeleton, IndexSeq(indices, args.offset), sources)
    result = inst.result(limits.max_support)
    info = {"skeleton": str(skeleton), "indices": indices, "offset": args.offset,
            "admissible": admissible, "level": result.level,
            "support_size": len(result)}
    sys.stderr.write(json.dumps(info) + "\n")
    _emit(dumps_mean(result), args.emit)
    if not admissible and not args.allow_inadmissible:
        raise VerificationError(f"indices {indices} are not admissible for {skeleton} "
                                f"at offset {args.offset}")
    return 0


def cmd_refute(args, store, limits):
    if args.check:
        with open(args.check, encoding="utf-8") as fh:
            doc = json.load(fh)
        seq = get_sequence(args.seq or doc.get("sequence"), store, args.prefix)
        checks = check_certificate(doc, seq, limits.max_support)
        _emit(_dump({"certificate": args.check, "verified": True, "checks": checks}), None)
        return 0
    if args.epsilon is None or args.seq is None:
        raise FreeMagmaError("refute needs --epsilon and --seq (or --check CERT)")
    seq = get_sequence(args.seq, store, args.prefix)
    cert = refute_hindman(args.epsilon, seq, args.window, limits.max_support)
    _emit(cert.to_json(), args.emit)
    if args.emit:
        sys.stdout.write(cert.verdict + "\n")
    return 0


def cmd_obstruct(args, store, limits):
    mu = _mean_source(args, store)
    rep = walkthrough(mu, args.depth, limits.max_support)
    _emit(rep.to_json(), args.emit)
    if not rep.consistent:
        raise VerificationError("an identity or bound failed; see the report")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freemagma", description=__doc__.splitlines()[0])
    parser.add_argument("--max-support", type=int, default=None,
                        help=f"support cap for convolution (env {ENV_MAX_SUPPORT})")
    parser.add_argument("--max-level", type=int, default=None,
                        help=f"level cap for enumeration (env {ENV_MAX_LEVEL})")
    parser.add_argument("--generators", type=int, default=1,
                        help="number of generators (1: 'x'; otherwise g0, g1, ...)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("term", help="parse, print, enumerate and count terms")
    p.add_argument("terms", nargs="*")
    p.add_argument("--level", type=int)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--chain", type=int, help="print the right chain with this many leaves")
    p.add_argument("--emit")
    p.set_defaults(func=cmd_term)

    p = sub.add_parser("classify", help="Z / T membership of a term")
    p.add_argument("term")
    p.add_argument("--set", action="append", help="also test membership in a set expression")
    p.add_argument("--emit")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("measure", help="measure a set under a mean, or write a mean file")
    p.add_argument("--mean")
    p.add_argument("--uniform", type=int, help="use the uniform mean on this level")
    p.add_argument("--set")
    p.add_argument("--emit")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("convolve", help="convolve two mean files")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--set", help="report the product's mass of a set (checked both ways)")
    p.add_argument("--emit")
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("substitute", help="substitute means into a skeleton term")
    p.add_argument("skeleton")
    p.add_argument("--indices", type=_indices, required=True)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--means", nargs="+", help="mean files forming the sequence mu_0, mu_1, ...")
    p.add_argument("--seq", help=f"built-in sequence ({', '.join(BUILTIN_SEQUENCES)}) or file")
    p.add_argument("--prefix", type=int)
    p.add_argument("--allow-inadmissible", action="store_true")
    p.add_argument("--emit")
    p.set_defaults(func=cmd_substitute)

    p = sub.add_parser("refute", help="emit or check a refutation certificate")
    p.add_argument("--epsilon", type=_rational)
    p.add_argument("--seq", help=f"built-in sequence ({', '.join(BUILTIN_SEQUENCES)}) or file")
    p.add_argument("--prefix", type=int, help=f"materialized prefix (default {DEFAULT_PREFIX})")
    p.add_argument("--window", type=int, help="indices inspected when choosing r")
    p.add_argument("--emit")
    p.add_argument("--check", metavar="CERT", help="re-verify an emitted certificate")
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("obstruct", help="idempotent-mean diagnostics for a mean")
    p.add_argument("--mean")
    p.add_argument("--uniform", type=int)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--emit")
    p.set_defaults(func=cmd_obstruct)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    env = Limits.from_env()
    limits = Limits(
        max_level=args.max_level if args.max_level is not None else env.max_level,
        max_support=args.max_support if args.max_support is not None else env.max_support,
    )
    store = TermStore(GeneratorSet.numbered(args.generators), max_level=limits.max_level)
    try:
        return args.func(args, store, limits)
    except FreeMagmaError as exc:
        sys.stderr.write(f"{exc.prefix}: {exc}\n")
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
