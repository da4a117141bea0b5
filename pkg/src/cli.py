# cli.py
"""
Command-line entry point
python cli.py <subcommand> [options]; --json switches every subcommand to machine-readable output
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional

import sympy as sp

from errors import CapabilityError, DomainError, LocsolError, ResourceError, UsageError
from exact_math import DyadicInterval, format_decimal
from finite_field_counts import count_gbq_types, count_quartic_patterns
from global_density import REPORT_SCHEMA, rho_interval
from local_density_recursion import (
    ModelKind, density_table, local_density, solve_recursion, solve_recursion_symbolic,
)
from padic_solubility import GBQInt, decide, monte_carlo_local
from real_density_bounds import BoundsMethod, bounds_table, monte_carlo_real, run_bounds
from settings import SETTINGS, configure_logging

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if not sp.isprime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 0:
        raise argparse.ArgumentTypeError(f"{value} must be non-negative")
    return value


def _positive(text: str) -> int:
    value = _non_negative(text)
    if value == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _depth_list(text: str) -> List[int]:
    return [_non_negative(part) for part in text.split(',') if part]


def _model(text: str) -> ModelKind:
    try:
        return ModelKind(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"model must be 'quartic' or 'gbq', not {text!r}")


def _method(text: str) -> BoundsMethod:
    try:
        return BoundsMethod(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"method must be 'plain5d' or 'scaled4d', not {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help="Machine-readable output")
    common.add_argument('--decimals', type=_non_negative, default=SETTINGS.decimals)
    common.add_argument('--quiet', action='store_true', help="No progress bars")
    common.add_argument('--log-level', default='WARNING')

    parser = _Parser(prog='locsol', description="Densities of locally soluble genus one curves")
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    p = sub.add_parser('r-of-p', parents=[common], help="Local density at a prime")
    p.add_argument('p', type=_prime)
    p.add_argument('--model', type=_model, default=ModelKind.GENERALIZED)

    p = sub.add_parser('recursion', parents=[common], help="Solve the recursion")
    p.add_argument('primes', type=_prime, nargs='*')
    p.add_argument('--symbolic', action='store_true', help="Solve over Q(t) instead")

    p = sub.add_parser('fp-counts', parents=[common], help="Count tables over F_p")
    p.add_argument('p', type=_prime)
    p.add_argument('--model', type=_model, default=ModelKind.GENERALIZED)
    p.add_argument('--restricted', action='store_true',
                   help="Starred column (gbq) or monic column (quartic)")
    p.add_argument('--mode', choices=['auto', 'enumerate', 'formula'], default='auto')

    p = sub.add_parser('padic-decide', parents=[common], help="Decide Q_p-solubility of one curve")
    p.add_argument('p', type=_prime)
    p.add_argument('coefficients', type=int, nargs='+', help="a b c d e, or l m n a b c d e")
    p.add_argument('--max-depth', type=_positive, default=None)
    p.add_argument('--digits', type=_positive, default=None, help="Coefficients known mod p^digits")
    p.add_argument('--decision-method', choices=['auto', 'generic', 'discriminant'], default='auto')

    p = sub.add_parser('padic-mc', parents=[common], help="Monte Carlo estimate of a local density")
    p.add_argument('p', type=_prime)
    p.add_argument('--model', type=_model, default=ModelKind.GENERALIZED)
    p.add_argument('--n', type=_positive, default=10_000)
    p.add_argument('--seed', type=_non_negative, default=0)
    p.add_argument('--workers', type=_positive, default=None)
    p.add_argument('--digits', type=_positive, default=None)

    p = sub.add_parser('real-bounds', parents=[common], help="Rigorous bounds for the real density")
    p.add_argument('--depth', type=_non_negative, default=20)
    p.add_argument('--method', type=_method, default=BoundsMethod.SCALED4D)
    p.add_argument('--workers', type=_positive, default=None)
    p.add_argument('--checkpoint', default=None)
    p.add_argument('--resume', action='store_true')
    p.add_argument('--table', type=_depth_list, default=None, help="Comma separated depths")

    p = sub.add_parser('real-mc', parents=[common], help="Monte Carlo estimate of the real density")
    p.add_argument('--model', type=_model, default=ModelKind.PLAIN)
    p.add_argument('--n', type=_positive, default=1_000_000)
    p.add_argument('--seed', type=_non_negative, default=0)

    p = sub.add_parser('rho', parents=[common], help="Global density")
    p.add_argument('--model', type=_model, default=ModelKind.PLAIN)
    p.add_argument('--real-depth', type=_non_negative, default=20)
    p.add_argument('--method', type=_method, default=BoundsMethod.SCALED4D)
    p.add_argument('--real-interval', default=None, help="Trusted real factor as LO,HI")
    p.add_argument('--n', type=_positive, default=1_000_000, help="Real samples for the gbq model")
    p.add_argument('--seed', type=_non_negative, default=0)
    p.add_argument('--pmax', type=_non_negative, default=10_000)
    p.add_argument('--precision', type=_positive, default=SETTINGS.precision)
    p.add_argument('--workers', type=_positive, default=None)
    return parser


def _parameters(args) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in ('handler', 'json', 'quiet', 'log_level'):
            continue
        if isinstance(value, (ModelKind, BoundsMethod)):
            value = value.value
        out[key] = value
    return out


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        document = {'schema': REPORT_SCHEMA, 'command': args.command, 'parameters': _parameters(args)}
        document.update(payload)
        print(json.dumps(document, indent=2, sort_keys=True))
    else:
        header = ' '.join(f"{k}={v}" for k, v in _parameters(args).items() if k != 'command')
        print(f"# {args.command} {header}".rstrip())
        print(text)


def _cmd_r_of_p(args) -> None:
    rho = local_density(args.p, args.model)
    _emit(args, f"{rho} ≈ {format_decimal(rho, args.decimals)}",
          {'p': args.p, 'model': args.model.value, 'rho': str(rho),
           'rho_decimal': format_decimal(rho, args.decimals)})


def _cmd_recursion(args) -> None:
    if args.symbolic:
        rho = solve_recursion_symbolic().rho
        _emit(args, f"R(t) = {rho}", {'rho': repr(rho)})
        return
    if not args.primes:
        raise UsageError("recursion needs at least one prime unless --symbolic is given")
    if len(args.primes) == 1:
        report = solve_recursion(args.primes[0])
        frame = report.to_frame(args.decimals)
    else:
        frame = density_table(args.primes)
    _emit(args, frame.to_string(index=False), {'rows': frame.to_dict(orient='records')})


def _cmd_fp_counts(args) -> None:
    count = count_gbq_types if args.model is ModelKind.GENERALIZED else count_quartic_patterns
    mode = 'enumerate' if args.mode == 'auto' else args.mode
    try:
        table = count(args.p, args.restricted, mode=mode)
    except CapabilityError as exc:
        if args.mode != 'auto':
            raise
        logger.warning(f"{exc}; falling back to the closed forms")
        table = count(args.p, args.restricted, mode='formula')
    _emit(args, table.to_frame().to_string(index=False),
          {'p': table.p, 'kind': table.kind, 'source': table.source,
           'counts': table.counts, 'total': table.total})


def _cmd_padic_decide(args) -> None:
    if len(args.coefficients) == 5:
        q = GBQInt.plain(*args.coefficients)
    elif len(args.coefficients) == 8:
        q = GBQInt(*args.coefficients)
    else:
        raise UsageError(f"Expected 5 or 8 coefficients, got {len(args.coefficients)}")
    verdict = decide(args.p, q, max_depth=args.max_depth, method=args.decision_method,
                     precision=args.digits)
    payload = {'verdict': verdict.kind.value, 'depth_used': verdict.depth_used, 'witness': None}
    text = verdict.kind.value
    if verdict.witness is not None:
        w = verdict.witness
        payload['witness'] = {'chart': w.chart, 'point': [str(c) for c in w.point()],
                              'variable': w.variable, 'valuation': w.valuation}
        text += f" at {tuple(str(c) for c in w.point())}"
    _emit(args, text, payload)


def _cmd_padic_mc(args) -> None:
    report = monte_carlo_local(args.p, args.model, args.n, args.seed, digits=args.digits,
                               workers=args.workers, progress=not args.quiet)
    exact = local_density(args.p, args.model)
    payload = report.to_dict()
    payload['exact'] = str(exact)
    text = (f"estimate {float(report.soluble_frac):.{args.decimals}f} +/- {report.error_bar():.{args.decimals}f}"
            f" (exact {format_decimal(exact, args.decimals)}), undecided {report.undecided_frac}")
    _emit(args, text, payload)


def _cmd_real_bounds(args) -> None:
    if args.table:
        frame = bounds_table(args.table, args.method, workers=args.workers, places=args.decimals)
        _emit(args, frame.to_string(index=False), {'rows': frame.to_dict(orient='records')})
        return
    report = run_bounds(args.depth, args.method, workers=args.workers, checkpoint=args.checkpoint,
                        resume=args.resume, progress=not args.quiet)
    text = (f"{format_decimal(report.rho_inf_lower, args.decimals, 'down')} <= rho(inf) <= "
            f"{format_decimal(report.rho_inf_upper, args.decimals, 'up')}")
    _emit(args, text, report.to_dict(args.decimals))


def _cmd_real_mc(args) -> None:
    report = monte_carlo_real(args.model, args.n, args.seed, progress=not args.quiet)
    _emit(args, f"estimate {report.estimate:.{args.decimals}f} +/- {report.error_bar():.{args.decimals}f}",
          report.to_dict(args.decimals))


def _parse_interval(text: str, precision: int) -> DyadicInterval:
    try:
        lo, hi = (Fraction(part) for part in text.split(','))
    except ValueError:
        raise UsageError(f"--real-interval must look like LO,HI, got {text!r}")
    return DyadicInterval.from_bounds(lo, hi, precision)


def _cmd_rho(args) -> None:
    provenance = {'pmax': args.pmax}
    if args.real_interval:
        real_part = _parse_interval(args.real_interval, args.precision)
        rigorous_real = True
        provenance.update(real_source='trusted-input', real_interval=args.real_interval)
    elif args.model is ModelKind.GENERALIZED:
        sample = monte_carlo_real(args.model, args.n, args.seed, progress=not args.quiet)
        real_part = sample.enclosure(args.precision)
        rigorous_real = False
        provenance.update(real_source='monte-carlo', samples=args.n, seed=args.seed)
    else:
        bounds = run_bounds(args.real_depth, args.method, workers=args.workers, progress=not args.quiet)
        real_part = bounds.enclosure(args.precision)
        rigorous_real = True
        provenance.update(real_source='bounds', real_depth=args.real_depth, method=args.method.value)

    report = rho_interval(args.model, real_part, args.pmax, args.precision, real_part_rigorous=rigorous_real,
                          provenance=provenance, progress=not args.quiet)
    text = report.to_frame(args.decimals).to_string(index=False)
    if not report.rigorous:
        text += "\n(estimate, not a rigorous enclosure)"
    payload = report.to_dict(args.decimals)
    payload.pop('schema')
    _emit(args, text, payload)


HANDLERS = {
    'r-of-p': _cmd_r_of_p,
    'recursion': _cmd_recursion,
    'fp-counts': _cmd_fp_counts,
    'padic-decide': _cmd_padic_decide,
    'padic-mc': _cmd_padic_mc,
    'real-bounds': _cmd_real_bounds,
    'real-mc': _cmd_real_mc,
    'rho': _cmd_rho,
}


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, dispatch, and map errors to exit codes (2 usage, 3 resources, 1 other)"""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"locsol: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return exc.code or 0

    configure_logging(args.log_level)
    try:
        HANDLERS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"locsol: error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"locsol: {exc}", file=sys.stderr)
        return 3
    except LocsolError as exc:
        logger.error(f"{args.command} failed: {exc}")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
