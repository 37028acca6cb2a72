"""Command-line front end for trispec.

Expose a single ``run`` function so both ``python -m trispec`` and the
console script entry point behave identically. Exit codes: 0 on success,
1 when a verification fails, 2 on usage errors (bad arguments, wrong
geometry, unsupported hyperbolic input).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__, prefs
from .core import (DomainError, GeometryClass, TriangleSignature, TrispecError, canonical,
                   classify, describe, require, spectrum)
from .export import OutputRecord, default_metadata, write_record
from .settings import DEFAULTS

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def signature_entry(text: str) -> int:
    """argparse type for one signature entry; rejects infinite entries."""
    if text.strip().lower() in ('inf', 'infinity', '∞'):
        raise argparse.ArgumentTypeError('signatures with an infinite entry are not co-compact')
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not an integer') from None
    if value < 2:
        raise argparse.ArgumentTypeError(f'signature entries must be >= 2, got {value}')
    return value


def non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not an integer') from None
    if value < 0:
        raise argparse.ArgumentTypeError('must be non-negative')
    return value


def eigenvalue(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f'{text!r} is not a number') from None
    if value < 0:
        raise argparse.ArgumentTypeError('eigenvalues are non-negative')
    return value


def _add_signature(parser: argparse.ArgumentParser) -> None:
    for name in ('p', 'q', 'r'):
        parser.add_argument(name.upper(), type=signature_entry, metavar=name.upper())


def _add_output(parser: argparse.ArgumentParser, formats: Sequence[str]) -> None:
    parser.add_argument('--format', choices=formats, default=None,
                        help='output format (default from preferences)')
    parser.add_argument('--output', metavar='PATH', default=None,
                        help='write to PATH instead of stdout')


def get_arguments_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='trispec',
        description='Exact Laplace spectra of spherical and euclidean triangle orbifolds.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('-v', '--verbose', action='count', default=None,
                        help='log progress to stderr (-vv for debug)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('classify', help='geometry class of a signature')
    _add_signature(p)
    p.add_argument('--describe', action='store_true', help='also print the catalog entry')

    p = sub.add_parser('spectrum', help='eigenvalues with multiplicities')
    _add_signature(p)
    p.add_argument('--max', type=non_negative, required=True, dest='max_value',
                   help='largest eigenvalue (or degree with --by-degree)')
    p.add_argument('--by-degree', action='store_true', help='read --max as a bound on l')
    p.add_argument('--include-zeros', action='store_true', default=None,
                   help='list eigenvalues of multiplicity zero')
    _add_output(p, ('text', 'json', 'csv'))

    p = sub.add_parser('multiplicity', help='multiplicity of a single eigenvalue')
    _add_signature(p)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument('--lambda', type=eigenvalue, dest='lam', metavar='L')
    which.add_argument('--degree', type=non_negative, metavar='l')

    p = sub.add_parser('census', help='rotation-angle census or lattice model')
    _add_signature(p)
    _add_output(p, ('text', 'json', 'csv'))

    p = sub.add_parser('count', help='counting function and its Weyl leading term')
    _add_signature(p)
    p.add_argument('--max', type=non_negative, required=True, dest='max_value',
                   help='degree L (spherical) or eigenvalue bound (euclidean)')

    p = sub.add_parser('verify', help='run the invariant suites')
    p.add_argument('--suite', action='append', default=None,
                   choices=('all', 'charsum', 'lattice', 'eisenstein', 'relations', 'weyl',
                            'eigenlab'))
    p.add_argument('--max', type=non_negative, default=None, dest='max_value',
                   help='cap the degree / eigenvalue range of the sweeps')
    p.add_argument('--jobs', type=non_negative, default=None, help='worker processes')
    p.add_argument('--seed', type=int, default=None)

    p = sub.add_parser('config', help='show or edit preferences')
    csub = p.add_subparsers(dest='action', required=True)
    csub.add_parser('show')
    csub.add_parser('reset')
    cset = csub.add_parser('set')
    cset.add_argument('key', choices=sorted(prefs.DEFAULT_PREFS))
    cset.add_argument('value')
    return parser


def _signature(args) -> TriangleSignature:
    return canonical(args.P, args.Q, args.R)


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, 'w', encoding='utf-8', newline='') as fh:
            fh.write(text)


def _fmt(x: float) -> str:
    return f'{x:.{DEFAULTS["float_digits"]}g}'


def cmd_classify(args, user_prefs) -> int:
    sig = _signature(args)
    print(classify(sig))
    if args.describe:
        for key, value in describe(sig).items():
            if key not in ('group', 'geometry'):
                print(f'{key}: {value}')
    return EXIT_OK


def cmd_spectrum(args, user_prefs) -> int:
    sig = _signature(args)
    fmt = args.format or user_prefs['format']
    include_zeros = user_prefs['include_zeros'] if args.include_zeros is None else True
    entries = spectrum(sig, args.max_value, by_degree=args.by_degree, include_zeros=include_zeros)
    info = describe(sig)
    meta = default_metadata(geometry_name=info.get('name'), max_value=args.max_value,
                            by_degree=bool(args.by_degree))
    record = OutputRecord(list(sig.as_tuple()), str(classify(sig)), entries, meta)
    if args.output:
        write_record(record, args.output, fmt)
    else:
        _emit(record.render(fmt), None)
    return EXIT_OK


def cmd_multiplicity(args, user_prefs) -> int:
    sig = _signature(args)
    geometry = classify(sig)
    if geometry is GeometryClass.SPHERICAL:
        from .spherical import multiplicity_closed

        if args.degree is not None:
            print(multiplicity_closed(sig, args.degree))
            return EXIT_OK
        lam = args.lam
        l = (math.isqrt(int(4 * lam + 1)) - 1) // 2 if lam.denominator == 1 else -1
        print(multiplicity_closed(sig, l) if l >= 0 and l * (l + 1) == lam else 0)
        return EXIT_OK
    require(sig, GeometryClass.EUCLIDEAN)
    if args.degree is not None:
        raise DomainError('--degree applies to spherical signatures; use --lambda')
    from .euclidean import orbifold_multiplicity

    print(orbifold_multiplicity(sig, args.lam))
    return EXIT_OK


def _census_rows(sig: TriangleSignature):
    if classify(sig) is GeometryClass.SPHERICAL:
        from .spherical import angle_census

        census = angle_census(sig)
        rows = [{'turn': str(e.turn), 'angle': round(e.chi, DEFAULTS['float_digits']),
                 'count': e.count} for e in census.entries]
        return ('turn', 'angle', 'count'), rows, {'order': census.total}
    require(sig, GeometryClass.EUCLIDEAN)
    from .euclidean import lattice_model

    model = lattice_model(sig)
    summary = {
        'kind': model.kind,
        'tau': [round(float(x), DEFAULTS['float_digits']) for x in model.tau],
        'sigma': [round(float(x), DEFAULTS['float_digits']) for x in model.sigma],
        'dual_form': list(model.dual_form.coefficients),
        'quotient_order': model.quotient_order,
        'divisor_formula': [model.divisor_formula.scale, model.divisor_formula.modulus,
                            model.divisor_formula.plus, model.divisor_formula.minus],
    }
    rows = [{'key': k, 'value': json.dumps(v)} for k, v in summary.items()]
    return ('key', 'value'), rows, {'lattice': summary}


def cmd_census(args, user_prefs) -> int:
    sig = _signature(args)
    fmt = args.format or 'text'
    header, rows, extra = _census_rows(sig)
    if fmt == 'json':
        meta = default_metadata(geometry_name=describe(sig).get('name'), **extra)
        if 'turn' in header:
            meta['census'] = rows
        record = OutputRecord(list(sig.as_tuple()), str(classify(sig)), [], meta)
        text = record.to_json() + '\n'
    else:
        buf = io.StringIO()
        if fmt == 'csv':
            writer = csv.DictWriter(buf, fieldnames=header, lineterminator='\n')
            writer.writeheader()
            writer.writerows(rows)
        else:
            buf.write(f'# group {sig} ({classify(sig)})\n')
            for row in rows:
                buf.write(' '.join(f'{k}={row[k]}' for k in header) + '\n')
        text = buf.getvalue()
    _emit(text, args.output)
    return EXIT_OK


def cmd_count(args, user_prefs) -> int:
    sig = _signature(args)
    if classify(sig) is GeometryClass.SPHERICAL:
        from .spherical import counting_spherical, leading_weyl_coefficient

        L = args.max_value
        count = counting_spherical(sig, L)
        coeff = leading_weyl_coefficient(sig)
        leading = coeff * (L + 1) ** 2
        print(f'N({L}) = {count}')
        print(f'leading coefficient = {coeff}')
        print(f'leading term = {_fmt(float(leading))}')
        print(f'remainder = {_fmt(float(count - leading))}')
        return EXIT_OK
    from .euclidean import counting_euclidean

    result = counting_euclidean(sig, args.max_value)
    print(f'N({result.Lambda}) = {result.count}')
    print(f'leading coefficient = {_fmt(result.coefficient)}')
    print(f'leading term = {_fmt(result.coefficient * result.Lambda)}')
    print(f'remainder = {_fmt(result.remainder)}')
    return EXIT_OK


def cmd_verify(args, user_prefs) -> int:
    from .verify import run_suites

    seed = prefs.resolve_seed(args.seed, user_prefs)
    jobs = user_prefs['jobs'] if args.jobs is None else args.jobs
    if jobs == 0:
        jobs = os.cpu_count() or 1
    results = run_suites(args.suite or ['all'], limit=args.max_value, jobs=jobs, seed=seed)
    for result in results:
        print(('PASS ' if result.passed else 'FAIL ') + result.summary())
        for failure in result.failures:
            print(f'  {failure.name}: {failure.detail}')
    print(f'seed = {seed}')
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_config(args, user_prefs) -> int:
    if args.action == 'reset':
        current = prefs.reset_prefs()
    elif args.action == 'set':
        current = prefs.set_pref(args.key, args.value)
    else:
        current = user_prefs
    for key in sorted(current):
        print(f'{key} = {json.dumps(current[key])}')
    return EXIT_OK


COMMANDS = {
    'classify': cmd_classify,
    'spectrum': cmd_spectrum,
    'multiplicity': cmd_multiplicity,
    'census': cmd_census,
    'count': cmd_count,
    'verify': cmd_verify,
    'config': cmd_config,
}


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level,
                        format='%(levelname)s %(name)s: %(message)s')


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` (default ``sys.argv[1:]``), run the command, return its exit code."""
    parser = get_arguments_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    user_prefs = prefs.load_prefs()
    _configure_logging(user_prefs['verbose'] if args.verbose is None else args.verbose)
    try:
        return COMMANDS[args.command](args, user_prefs)
    except DomainError as exc:
        print(f'trispec: error: {exc}', file=sys.stderr)
        return EXIT_USAGE
    except TrispecError as exc:
        print(f'trispec: verification failed: {exc}', file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(run())
