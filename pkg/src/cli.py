#!/usr/bin/env python3
"""
Command-line interface for AKZeta
Index, word and poset operations, rigorous evaluation and identity verification

Exit codes: 0 success/pass, 1 verification failure, 2 usage or domain error.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

try:
    # When run as a package
    from .core.interfaces import AKZetaError, DomainError
    from .services import get_service_factory, initialize_services
    from .services.analysis import FunctionKind, a_near_one, derivative_check, li_near_one, limit_lemma_report
    from .services.index_core import (
        dual, format_index, hoffman_dual, k_minus, parse_index, reverse_blocks, to_blocks
    )
    from .services.oracles import run_preflight
    from .services.poset_algebra import TwoPoset, is_admissible_poset, is_semi_admissible, transpose, w_map
    from .services.realball import RealBall
    from .services.series import to_fraction
    from .services.settings import CliConfig, load_config
    from .services.suites import SUITES, SuiteResult
    from .services.verification import IDENTITIES, VerificationReport
    from .services.word_algebra import WordSum, check_word, shuffle, word_dual
except ImportError:
    # When run as a script
    from src.core.interfaces import AKZetaError, DomainError
    from src.services import get_service_factory, initialize_services
    from src.services.analysis import FunctionKind, a_near_one, derivative_check, li_near_one, limit_lemma_report
    from src.services.index_core import (
        dual, format_index, hoffman_dual, k_minus, parse_index, reverse_blocks, to_blocks
    )
    from src.services.oracles import run_preflight
    from src.services.poset_algebra import TwoPoset, is_admissible_poset, is_semi_admissible, transpose, w_map
    from src.services.realball import RealBall
    from src.services.series import to_fraction
    from src.services.settings import CliConfig, load_config
    from src.services.suites import SUITES, SuiteResult
    from src.services.verification import IDENTITIES, VerificationReport
    from src.services.word_algebra import WordSum, check_word, shuffle, word_dual

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

INDEX_OPS = {
    'dual': dual,
    'hdual': hoffman_dual,
    'rev': reverse_blocks,
    'minus': k_minus,
}


def index_arg(text: str) -> Tuple[int, ...]:
    """argparse type for indices; ParseError is a ValueError, so argparse reports it"""
    return parse_index(text)


def z_grid_arg(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(',') if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid z-grid: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug")
    common.add_argument("--prec", type=int, help="precision in bits (default 128)")
    common.add_argument("--tol", type=float, help="verification tolerance")
    common.add_argument("--z-grid", type=z_grid_arg, help="comma separated sample points in [0.05, 0.95]")
    common.add_argument("--cache", help="constant cache file")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the constant cache")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--mzv-method", choices=["holder", "direct"], help="MZV evaluation method")
    common.add_argument("--jobs", type=int, help="worker processes for suites")

    parser = argparse.ArgumentParser(
        prog="akzeta", description="Arakawa-Kaneko multiple zeta functions: evaluation and identity checks"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", parents=[common], help="index operations")
    p.add_argument("op", choices=sorted(INDEX_OPS) + ["blocks"])
    p.add_argument("k", type=index_arg)

    p = sub.add_parser("word", parents=[common], help="word operations over 0/1")
    p.add_argument("op", choices=["shuffle", "dual"])
    p.add_argument("words", nargs="+")

    p = sub.add_parser("poset", parents=[common], help="2-poset operations on JSON descriptions")
    p.add_argument("op", choices=["wmap", "admissible", "transpose"])
    p.add_argument("poset", help="JSON text, or @file to read it from a file")

    p = sub.add_parser("eval", parents=[common], help="evaluate a function or constant")
    p.add_argument("kind", choices=["li", "a", "zeta", "t", "xi", "psi"])
    p.add_argument("k", type=index_arg)
    p.add_argument("--z", help="argument for li and a (exact decimal or fraction)")
    p.add_argument("--m", type=int, help="integer argument for xi and psi")

    p = sub.add_parser("verify", parents=[common], help="verify one identity")
    p.add_argument("identity", choices=sorted(IDENTITIES))
    p.add_argument("--k", type=index_arg)
    p.add_argument("--m", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--kk", type=int, help="depth-one index for ak-dep1")
    p.add_argument("--ks", type=index_arg, help="entries >= 2 for xu-thm3-3")
    p.add_argument("--reading", choices=["printed", "shifted", "mirrored"])
    p.add_argument("--route", choices=["expansion", "poset"], default="expansion",
                   help="how xi/psi constants are computed")
    p.add_argument("--perturb", type=float, help="add this amount to the right-hand side")

    p = sub.add_parser("suite", parents=[common], help="run a verification suite")
    p.add_argument("name", choices=SUITES)
    p.add_argument("--max-weight", type=int, default=5)

    p = sub.add_parser("analyze", parents=[common], help="derivative and limit checks")
    p.add_argument("check", choices=["derivative", "limit"])
    p.add_argument("--kind", choices=["li", "a"], default="li")
    p.add_argument("--k", type=index_arg, help="index (derivative) or l (limit)")
    p.add_argument("--z", default="0.5")
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--level", type=int, choices=[1, 2], default=1)

    p = sub.add_parser("cache", parents=[common], help="constant cache maintenance")
    p.add_argument("op", choices=["stats", "clear", "path"])

    p = sub.add_parser("preflight", parents=[common], help="check split-at-1/2 MZVs against direct sums")
    p.add_argument("--max-weight", type=int, default=5)
    p.add_argument("--level1-only", action="store_true", help="skip the multiple T-values")

    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def config_from_args(args: argparse.Namespace) -> CliConfig:
    overrides: Dict[str, Any] = {
        'precision_bits': args.prec,
        'z_grid': args.z_grid,
        'cache_path': args.cache,
        'mzv_method': args.mzv_method,
        'jobs': args.jobs,
        'tolerance_level1': args.tol,
        'tolerance_level2': args.tol,
    }
    if args.no_cache:
        overrides['use_cache'] = False
    if args.json:
        overrides['output_format'] = 'json'
    return load_config(overrides)


def emit(config: CliConfig, text: str, data: Any) -> None:
    """Print text or JSON on stdout according to the configured format."""
    if config.output_format == 'json':
        print(json.dumps(data, indent=2))
    else:
        print(text)


def _word_sum_text(words: WordSum) -> str:
    if not words:
        return "0"
    return "\n".join(f"{coeff} {word}" for word, coeff in words)


# --- commands ---------------------------------------------------------------------

def cmd_index(args: argparse.Namespace, config: CliConfig) -> int:
    if args.op == "blocks":
        blocks = to_blocks(args.k)
        text = " ".join(f"({a},{b})" for a, b in blocks)
        emit(config, text, {'index': format_index(args.k), 'blocks': [list(b) for b in blocks]})
    else:
        result = INDEX_OPS[args.op](args.k)
        emit(config, format_index(result),
             {'op': args.op, 'index': format_index(args.k), 'result': format_index(result)})
    return EXIT_OK


def cmd_word(args: argparse.Namespace, config: CliConfig) -> int:
    words = [check_word(w) for w in args.words]
    if args.op == "dual":
        if len(words) != 1:
            raise DomainError("word dual takes exactly one word")
        result = word_dual(words[0])
        emit(config, result, {'word': words[0], 'dual': result})
        return EXIT_OK
    if len(words) != 2:
        raise DomainError("word shuffle takes exactly two words")
    product = shuffle(words[0], words[1])
    emit(config, _word_sum_text(product), product.to_dict())
    return EXIT_OK


def _read_poset(text: str) -> TwoPoset:
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text(encoding='utf-8')
        except OSError as e:
            raise DomainError(f"Cannot read poset file: {e}") from e
    return TwoPoset.from_json(text)


def cmd_poset(args: argparse.Namespace, config: CliConfig) -> int:
    poset = _read_poset(args.poset)
    if args.op == "wmap":
        words = w_map(poset)
        emit(config, _word_sum_text(words), words.to_dict())
    elif args.op == "admissible":
        semi, full = is_semi_admissible(poset), is_admissible_poset(poset)
        emit(config, f"semi-admissible: {semi}\nadmissible: {full}",
             {'semi_admissible': semi, 'admissible': full})
    else:
        flipped = transpose(poset)
        emit(config, flipped.to_json(), flipped.to_dict())
    return EXIT_OK


def _eval_value(args: argparse.Namespace, config: CliConfig) -> RealBall:
    evaluator = get_service_factory().get_evaluator()
    kind = args.kind
    if kind in ("li", "a"):
        if args.z is None:
            raise DomainError(f"eval {kind} needs --z")
        z = to_fraction(args.z)
        if not 0 < z < 1:
            raise DomainError(f"z must lie in (0, 1), got {args.z}")
        if z <= evaluator.z_cap:
            fn = evaluator.li_eval if kind == "li" else evaluator.a_eval
            return fn(args.k, z)
        if kind == "li":
            return li_near_one(args.k, 1 - z, evaluator=evaluator)
        return a_near_one(args.k, (1 - z) / (1 + z), evaluator=evaluator)
    if kind == "zeta":
        return evaluator.mzv(args.k)
    if kind == "t":
        return evaluator.mtv(args.k)
    if args.m is None:
        raise DomainError(f"eval {kind} needs --m")
    return evaluator.xi_int(args.k, args.m) if kind == "xi" else evaluator.psi_int(args.k, args.m)


def cmd_eval(args: argparse.Namespace, config: CliConfig) -> int:
    value = _eval_value(args, config)
    data = {'kind': args.kind, 'index': format_index(args.k), 'value': value.to_dict()}
    if args.z is not None:
        data['z'] = args.z
    if args.m is not None:
        data['m'] = args.m
    emit(config, str(value), data)
    return EXIT_OK


def _verify_params(args: argparse.Namespace) -> Dict[str, Any]:
    params = {}
    for name in ("k", "m", "a", "b", "kk", "ks", "reading"):
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    return params


def _report_text(report: VerificationReport) -> str:
    lines = [report.summary()]
    for point in report.points:
        where = f"z={float(point.z):g}  " if point.z is not None else ""
        lines.append(f"  {where}lhs {point.lhs}  rhs {point.rhs}  dev {float(point.deviation):.2e}")
    return "\n".join(lines)


def cmd_verify(args: argparse.Namespace, config: CliConfig) -> int:
    verifier = get_service_factory().get_verifier()
    perturb = Fraction(repr(args.perturb)) if args.perturb else None
    report = verifier.verify(args.identity, _verify_params(args),
                             const_route=args.route, perturb=perturb)
    emit(config, _report_text(report), report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


def _suite_text(result: SuiteResult) -> str:
    lines = [f"suite {result.name} (max weight {result.max_weight})"]
    for group, (ok, total) in result.groups().items():
        lines.append(f"  {group:<16} {ok:>5}/{total:<5} {'PASS' if ok == total else 'FAIL'}")
    for check in result.checks:
        if not check.passed:
            lines.append(f"  FAIL {check.group}: {check.label}  {check.detail}")
    if result.aborted:
        lines.append(f"  aborted: {result.aborted}")
    lines.append("PASS" if result.passed else "FAIL")
    return "\n".join(lines)


def cmd_suite(args: argparse.Namespace, config: CliConfig) -> int:
    verifier = get_service_factory().get_verifier()
    result = verifier.run_suite(args.name, args.max_weight,
                                status_callback=lambda message: logger.info(message))
    emit(config, _suite_text(result), result.to_dict())
    return EXIT_OK if result.passed else EXIT_FAIL


def _tol_kwargs(args: argparse.Namespace) -> Dict[str, Any]:
    return {'tol': args.tol} if args.tol is not None else {}


def cmd_analyze(args: argparse.Namespace, config: CliConfig) -> int:
    evaluator = get_service_factory().get_evaluator()
    if args.k is None:
        raise DomainError("analyze needs --k")
    if args.check == "derivative":
        passed = derivative_check(FunctionKind(args.kind), args.k, to_fraction(args.z),
                                  max(config.precision_bits, 256), evaluator,
                                  **_tol_kwargs(args))
        emit(config, f"derivative {args.kind}{format_index(args.k)} at z={args.z}: "
                     f"{'PASS' if passed else 'FAIL'}",
             {'check': 'derivative', 'kind': args.kind, 'index': format_index(args.k),
              'z': args.z, 'pass': passed})
        return EXIT_OK if passed else EXIT_FAIL
    report = limit_lemma_report(args.k, args.a, args.level, config.precision_bits, evaluator,
                                **_tol_kwargs(args))
    lines = [f"limit l={format_index(args.k)} a={args.a} level {args.level}: target {report.target}"]
    lines += [f"  z=1-1e-{j}  dev {d:.2e}  ({route})"
              for j, d, route in zip(report.exponents, report.deviations, report.routes)]
    lines.append("PASS" if report.passed else "FAIL")
    emit(config, "\n".join(lines), report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_cache(args: argparse.Namespace, config: CliConfig) -> int:
    if args.op == "path":
        emit(config, str(config.cache_path), {'path': config.cache_path})
        return EXIT_OK
    cache = get_service_factory().get_constant_cache()
    if args.op == "clear":
        cache.clear()
        emit(config, "cache cleared", {'cleared': True})
        return EXIT_OK
    stats = cache.stats()
    emit(config, "\n".join(f"{key}: {value}" for key, value in stats.items()), stats)
    return EXIT_OK


def cmd_preflight(args: argparse.Namespace, config: CliConfig) -> int:
    evaluator = get_service_factory().get_evaluator()
    report = run_preflight(evaluator, args.max_weight, include_mtv=not args.level1_only,
                           status_callback=lambda message: logger.info(message))
    lines = [f"pre-flight: {report.checked} values checked up to weight {report.max_weight}"]
    lines += [f"  {failure}" for failure in report.failures]
    lines.append("PASS" if report.passed else "FAIL")
    emit(config, "\n".join(lines), report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {
    'index': cmd_index,
    'word': cmd_word,
    'poset': cmd_poset,
    'eval': cmd_eval,
    'verify': cmd_verify,
    'suite': cmd_suite,
    'analyze': cmd_analyze,
    'cache': cmd_cache,
    'preflight': cmd_preflight,
}


def main(argv: Optional[List[str]] = None) -> None:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    try:
        config = config_from_args(args)
        initialize_services(config)
        code = COMMANDS[args.command](args, config)
        get_service_factory().shutdown()
    except AKZetaError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_USAGE)
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_USAGE)

    sys.exit(code)


if __name__ == "__main__":
    main()
