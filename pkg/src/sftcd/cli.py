"""Command-line front end.

Machine-readable JSON goes to standard output, human notes to standard
error.  Exit status: 0 success, 1 a check failed or a runtime limit was
hit, 2 usage or input errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from .bridge import bounded_bridge_exists, fixed_point_class_oracle
from .codes import recode_to_one_block, SlidingBlockCode
from .core import parse_block_text, parse_point_text
from .depth import class_degree, depth, relative_class_degree, relative_depth
from .documents import (
    canonical_json,
    dot_graph,
    load_code,
    load_system,
    load_triple,
    to_jsonable,
)
from .errors import (
    AlphabetMismatch,
    EmptyFiber,
    ImageMismatch,
    InvalidBlock,
    NoFixedPoint,
    ParseError,
    PreconditionUnmet,
    SftcdError,
    UnknownSymbol,
)
from .fiber import find_magic_block
from .harness import (
    CheckResult,
    HarnessCase,
    TheoremReport,
    TripleGenSpec,
    generate_triple,
    run_case,
    run_suite,
    spec_for_seed,
)

_USAGE_ERRORS = (
    ParseError,
    InvalidBlock,
    UnknownSymbol,
    AlphabetMismatch,
    PreconditionUnmet,
    EmptyFiber,
    NoFixedPoint,
    ImageMismatch,
)


def _emit(payload):
    print(json.dumps(to_jsonable(payload), indent=2, sort_keys=True))


def _note(text):
    print(text, file=sys.stderr)


def _triple_from_arg(value):
    if value.startswith("builtin:"):
        from .corpus import builtin_triple

        return builtin_triple(value.split(":", 1)[1])
    loaded = load_triple(value)
    for w in loaded.warnings:
        _note(f"warning: {w}")
    return loaded.triple


def _code_from_arg(value):
    """A code document path, or builtin:NAME[/phi|psi|pi]."""
    if value.startswith("builtin:"):
        rest = value.split(":", 1)[1]
        name, _, which = rest.partition("/")
        from .corpus import builtin_triple

        return getattr(builtin_triple(name), which or "phi")
    try:
        doc = json.loads(Path(value).read_text())
    except OSError as e:
        raise ParseError(f"cannot read {value}: {e}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {value}: {e}") from None
    code = load_code(doc)
    if isinstance(code, SlidingBlockCode):
        _note("warning: sliding-block code recoded onto its window shift")
        code = recode_to_one_block(code).code
    return code


def _pick(triple, which):
    return {"phi": triple.phi, "psi": triple.psi, "pi": triple.pi}[which]


def cmd_depth(args):
    t = _triple_from_arg(args.triple)
    code = _pick(t, args.code)
    w = parse_block_text(code.codomain_alphabet, args.block)
    r = depth(code, w)
    _emit(
        {
            "block": w,
            "value": r.value,
            "coordinate": r.certificate.n,
            "routing_set": list(r.certificate.M),
            "mode": r.certificate.mode,
        }
    )
    _note(f"depth {r.value} through {list(r.certificate.M)} at {r.certificate.n}")
    return 0


def cmd_rdepth(args):
    t = _triple_from_arg(args.triple)
    w = parse_block_text(t.Y.alphabet, args.block)
    r = relative_depth(t, w)
    _emit(
        {
            "block": w,
            "value": r.value,
            "coordinate": r.certificate.n,
            "routing_set": list(r.certificate.M),
            "mode": r.certificate.mode,
        }
    )
    _note(f"relative depth {r.value} at {r.certificate.n}")
    return 0


def _emit_estimate(est):
    _emit(
        {
            "value": est.value,
            "block": est.minimal_block,
            "scanned_length": est.scanned_length,
            "stabilized": est.stabilized,
        }
    )


def cmd_class_degree(args):
    t = _triple_from_arg(args.triple)
    est = class_degree(_pick(t, args.code), args.max_len, args.plateau)
    _emit_estimate(est)
    _note(
        f"class degree {est.value} ({'stabilized' if est.stabilized else 'not stabilized'})"
    )
    return 0


def cmd_relative(args):
    t = _triple_from_arg(args.triple)
    est = relative_class_degree(t, args.max_len, args.plateau)
    _emit_estimate(est)
    _note(
        f"relative class degree {est.value} "
        f"({'stabilized' if est.stabilized else 'not stabilized'})"
    )
    return 0


def cmd_magic(args):
    if args.code:
        code = _code_from_arg(args.code)
    else:
        code = _pick(_triple_from_arg(args.triple), args.which)
    res = find_magic_block(code, args.max_len, args.plateau)
    _emit(res)
    _note(f"preimage symbol count {res.value} at coordinate {res.coordinate}")
    return 0


def cmd_bridge(args):
    code = _code_from_arg(args.code)
    x = parse_point_text(code.domain.alphabet, args.src)
    xp = parse_point_text(code.domain.alphabet, args.dst)
    search = bounded_bridge_exists(code, x, xp, args.m, args.window)
    _emit(search)
    _note("bridge found" if search.found else search.note)
    return 0 if search.found else 1


def cmd_classes_fixed(args):
    code = _code_from_arg(args.code)
    res = fixed_point_class_oracle(code, args.z)
    _emit(res)
    _note(f"{res.count} class(es); {res.caveat}")
    return 0


def cmd_generate(args):
    spec = TripleGenSpec(
        seed=args.seed,
        y_symbols=args.y_symbols,
        blowup_min=args.blowup_min,
        blowup_max=args.blowup_max,
        z_symbols=args.z_symbols,
        edge_density=args.density,
    )
    print(canonical_json(generate_triple(spec)), end="")
    return 0


def cmd_dump(args):
    if args.triple:
        t = _triple_from_arg(args.triple)
        if args.format == "dot":
            print(dot_graph(t.X, t.phi, "X"), end="")
            print(dot_graph(t.Y, t.psi, "Y"), end="")
        else:
            print(canonical_json(t), end="")
        return 0
    try:
        doc = json.loads(Path(args.system).read_text())
    except OSError as e:
        raise ParseError(f"cannot read {args.system}: {e}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {args.system}: {e}") from None
    shift = load_system(doc)
    if args.format == "dot":
        print(dot_graph(shift, None, "shift"), end="")
    else:
        print(canonical_json(shift), end="")
    return 0


def _parse_seed_range(text):
    lo, _, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi or lo)
    except ValueError:
        raise ParseError(f"bad seed range {text!r}") from None
    if b < a:
        raise ParseError(f"bad seed range {text!r}")
    return range(a, b + 1)


def _verify_cases(args):
    cases = []
    if args.corpus:
        if args.corpus == "builtin":
            from .corpus import builtin_cases

            cases.extend(builtin_cases())
        else:
            root = Path(args.corpus)
            if not root.is_dir():
                raise ParseError(f"{args.corpus} is not a directory")
            for path in sorted(root.glob("*.json")):
                cases.append(
                    HarnessCase(
                        case_id=f"file:{path.name}",
                        kind="file",
                        name=str(path),
                        checks=("main", "special"),
                    )
                )
    if args.gen:
        try:
            spec_doc = json.loads(Path(args.gen).read_text())
        except OSError as e:
            raise ParseError(f"cannot read {args.gen}: {e}") from None
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON in {args.gen}: {e}") from None
        if not isinstance(spec_doc, list):
            raise ParseError("generator spec file must hold a list of specs")
        for entry in spec_doc:
            try:
                gen = TripleGenSpec(**entry)
            except TypeError as e:
                raise ParseError(f"bad generator spec {entry!r}: {e}") from None
            cases.append(
                HarnessCase(
                    case_id=f"gen:{gen.seed}",
                    kind="generated",
                    gen=gen,
                    checks=("main", "special", "chain"),
                    chain_seed=gen.seed,
                )
            )
    if args.seeds:
        for seed in _parse_seed_range(args.seeds):
            cases.append(
                HarnessCase(
                    case_id=f"seed:{seed}",
                    kind="generated",
                    gen=spec_for_seed(seed),
                    checks=("main", "special", "chain"),
                    chain_seed=seed,
                )
            )
    if not cases:
        raise ParseError("nothing to verify: give --corpus, --gen, or --seeds")
    return cases


def _case_key(case, L, plateau):
    text = repr((case, L, plateau))
    return hashlib.sha256(text.encode()).hexdigest()


def _report_from_dict(d):
    checks = tuple(
        CheckResult(c["name"], c["verdict"], c.get("detail", ""))
        for c in d["checks"]
    )
    return TheoremReport(d["case_id"], d.get("values") or {}, checks)


def _run_with_cache(cases, L, plateau, jobs, archive, cache_dir):
    cache = Path(cache_dir)
    cache.mkdir(parents=True, exist_ok=True)
    reports = []
    misses = []
    for case in cases:
        entry = None
        if case.kind != "file":
            path = cache / (_case_key(case, L, plateau) + ".json")
            if path.is_file():
                entry = json.loads(path.read_text())
        if entry is None:
            misses.append(case)
        else:
            reports.extend(_report_from_dict(d) for d in entry)
    fresh = {}
    for case in misses:
        case_reports = run_case(case, L, plateau, archive)
        fresh[case.case_id] = case_reports
        if case.kind != "file":
            path = cache / (_case_key(case, L, plateau) + ".json")
            path.write_text(
                json.dumps([to_jsonable(r) for r in case_reports], sort_keys=True)
            )
        reports.extend(case_reports)
    from .harness import SuiteSummary

    return SuiteSummary(tuple(reports))


def cmd_verify(args):
    cases = _verify_cases(args)
    cache_dir = os.environ.get("SFTCD_CACHE_DIR")
    if cache_dir:
        summary = _run_with_cache(
            cases, args.max_len, args.plateau, args.jobs, args.archive, cache_dir
        )
    else:
        summary = run_suite(
            cases, args.max_len, args.plateau, jobs=args.jobs, archive_dir=args.archive
        )
    for report in summary.reports:
        print(json.dumps(to_jsonable(report), sort_keys=True))
    totals = summary.to_dict()
    _note(
        "cases {cases}: {passed} passed, {failed} failed, "
        "{inconclusive} inconclusive, {skipped} skipped".format(**totals)
    )
    return 0 if summary.ok else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="sftcd",
        description="degrees, class degrees, and routing witnesses of "
        "letter-to-letter codes between shifts of finite type",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, triple=True, scan=False):
        if triple:
            p.add_argument(
                "--triple", required=True, help="triple document path or builtin:NAME"
            )
        if scan:
            p.add_argument("--max-len", type=int, default=8)
            p.add_argument("--plateau", type=int, default=3)

    p = sub.add_parser("depth", help="depth of a codomain block")
    common(p)
    p.add_argument("--block", required=True)
    p.add_argument("--code", choices=("phi", "psi", "pi"), default="pi")
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("rdepth", help="relative depth of a Y block")
    common(p)
    p.add_argument("--block", required=True)
    p.set_defaults(func=cmd_rdepth)

    p = sub.add_parser("class-degree", help="stabilized depth minimum of a code")
    common(p, scan=True)
    p.add_argument("--code", choices=("phi", "psi", "pi"), default="phi")
    p.set_defaults(func=cmd_class_degree)

    p = sub.add_parser("relative", help="relative class degree of a triple")
    common(p, scan=True)
    p.set_defaults(func=cmd_relative)

    p = sub.add_parser("magic", help="minimizing block for preimage symbol counts")
    p.add_argument("--code", help="code document path or builtin:NAME[/phi|psi|pi]")
    p.add_argument("--triple", help="triple document path or builtin:NAME")
    p.add_argument("--which", choices=("phi", "psi", "pi"), default="phi")
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--plateau", type=int, default=3)
    p.set_defaults(func=cmd_magic)

    p = sub.add_parser("bridge", help="bounded bridge search between periodic points")
    p.add_argument("--code", required=True)
    p.add_argument("--from", dest="src", required=True, help='point like "(00)" or "(0·1)@1"')
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--window", type=int, default=None)
    p.set_defaults(func=cmd_bridge)

    p = sub.add_parser("classes-fixed", help="class oracle over a fixed codomain symbol")
    p.add_argument("--code", required=True)
    p.add_argument("--z", required=True)
    p.set_defaults(func=cmd_classes_fixed)

    p = sub.add_parser("verify", help="run the property-check suite")
    p.add_argument("--corpus", help='"builtin" or a directory of triple documents')
    p.add_argument("--gen", help="JSON file with a list of generator specs")
    p.add_argument("--seeds", help='seed range "A..B" for the default sweep')
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--plateau", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--archive", help="directory for failed-case dumps")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="emit a deterministic random triple")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--y-symbols", type=int, default=2)
    p.add_argument("--blowup-min", type=int, default=1)
    p.add_argument("--blowup-max", type=int, default=2)
    p.add_argument("--z-symbols", type=int, default=1)
    p.add_argument("--density", type=float, default=0.5)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("dump", help="canonical JSON or DOT for documents")
    p.add_argument("--triple", help="triple document path or builtin:NAME")
    p.add_argument("--system", help="system document path")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_dump)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    if args.command == "magic" and not (args.code or args.triple):
        _note("error: magic needs --code or --triple")
        return 2
    if args.command == "dump" and not (args.triple or args.system):
        _note("error: dump needs --triple or --system")
        return 2
    try:
        return args.func(args)
    except _USAGE_ERRORS as e:
        _note(f"error: {e}")
        return 2
    except SftcdError as e:
        _note(f"error: {e}")
        return 1


def entry():
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
