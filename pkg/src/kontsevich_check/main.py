from __future__ import print_function
import argparse
import json
import logging
import sys
from collections import OrderedDict
from fractions import Fraction

from kontsevich_check.config import Config
from kontsevich_check.core.algebra import (compute_basis, coordinates,
                                           export_basis, primitive_dimension)
from kontsevich_check.core.associator import solve_associator
from kontsevich_check.core.comparison import (compare, exact_json,
                                              normalize_exact,
                                              normalize_numeric,
                                              round_circle, rows_to_json,
                                              tolerance, unknot_word,
                                              v2_weight)
from kontsevich_check.core.curve import Curve
from kontsevich_check.core.diagram import Skeleton
from kontsevich_check.core.evaluator import evaluate_tangle
from kontsevich_check.core.integrator import (McConfig, frame_normalize,
                                              gauss_framing, linking_number,
                                              z_numeric)
from kontsevich_check.core.tangle import TangleWord
from kontsevich_check.errors import (KontsevichError, PreconditionError,
                                     SkeletonMismatchError)
from kontsevich_check.util.gauss_code import (format_gauss_code,
                                              gauss_code_from_word,
                                              v2_from_gauss_code)
from kontsevich_check.util.manifest import RunManifest
from kontsevich_check.util.statistics import Statistics
from kontsevich_check.util.visualization import render_basis

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2
EXIT_REJECTIONS = 3


def common_arguments():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        '-d',
        '--debug',
        dest='debug',
        action='store_true',
        default=False,
        help='Print debug information')
    parser.add_argument(
        '--silent',
        dest='silent',
        action='store_true',
        default=False,
        help='Only print error messages')
    parser.add_argument(
        '--record-statistics',
        dest='record_statistics',
        action='store_true',
        default=False,
        help='Record statistics', )
    parser.add_argument(
        '-N',
        '--degree',
        dest='degree',
        type=int,
        default=None,
        help='Truncation degree (default: 2)')
    parser.add_argument(
        '--degree-cap',
        dest='degree_cap',
        type=int,
        default=None,
        help=
        """Refuse to enumerate diagrams above this degree (default: 4).  The number of diagrams grows super-exponentially with the degree.""")
    parser.add_argument(
        '--manifest',
        dest='manifest',
        type=str,
        default=None,
        help=
        """Also write the run manifest, including timing, to this file.  The manifest echoed on stdout leaves timing out so that output bytes only depend on inputs, flags and seed.""")
    return parser


def symbolic_arguments():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        '--framing',
        dest='framing',
        type=str,
        action='append',
        help=
        """Framing of a link component, in the form '<component>:<framing>' with 1-based components.  May be repeated.  Components without one keep the blackboard framing of the tangle word.""")
    parser.add_argument(
        '--no-cache',
        dest='no_cache',
        action='store_true',
        default=False,
        help='Do not read or write the associator cache')
    parser.add_argument(
        '--cache-dir',
        dest='cache_dir',
        type=str,
        default=None,
        help='Directory of the associator cache')
    parser.add_argument(
        '--full-relations',
        dest='full_relations',
        action='store_true',
        default=None,
        help=
        """Build bases by eliminating all AS, IHX and STU relations among all diagrams instead of 4T relations among chord diagrams.  Slower; gives the same dimensions.""")
    parser.add_argument(
        '--oracle-file',
        dest='oracle_file',
        type=str,
        default=None,
        help=
        """JSON file with {"v2": value} or {"gauss_code": "O1+,U2+,..."} to check the degree-2 knot invariant against.  Without it the Gauss code of the tangle word itself is used.""")
    return parser


def numeric_arguments():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        '--seed',
        dest='seed',
        type=int,
        default=None,
        help='Seed of the sample streams (default: 0)')
    parser.add_argument(
        '--samples',
        dest='samples',
        type=int,
        default=None,
        help='Samples per diagram integral (default: 100000)')
    parser.add_argument(
        '--radius',
        dest='radius',
        type=float,
        default=None,
        help=
        """Trivalent vertices are sampled in a ball of this radius, in units of the curve diameter, around the curve centroid (default: 8).  The part of the integral outside is dropped.""")
    parser.add_argument(
        '--workers',
        dest='workers',
        type=int,
        default=None,
        help=
        """Number of sampling processes.  Each worker draws from its own stream spawned from the seed, so results depend on the worker count but not on scheduling.""")
    return parser


def build_parser():
    common = common_arguments()
    symbolic = symbolic_arguments()
    numeric = numeric_arguments()
    parser = argparse.ArgumentParser(
        description='Kontsevich integral of links, two ways')
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    basis = commands.add_parser(
        'basis', parents=[common],
        help='Basis of the space of diagrams of one degree')
    basis.add_argument(
        '--skeleton',
        dest='skeleton',
        type=str,
        default=None,
        help="'circle', 'circles:k' or 'strands:k' (default: circle)")
    basis.add_argument(
        '--full-relations',
        dest='full_relations',
        action='store_true',
        default=None,
        help='Eliminate all AS, IHX and STU relations')
    basis.add_argument(
        '--render',
        dest='render_diagrams',
        action='store_true',
        default=None,
        help='Render every basis diagram with Graphviz')
    basis.set_defaults(func=cmd_basis)

    kontsevich = commands.add_parser(
        'kontsevich', parents=[common, symbolic],
        help='Combinatorial invariant of a tangle word')
    kontsevich.add_argument(
        dest='tangle_file', type=str, help='Tangle word file')
    kontsevich.set_defaults(func=cmd_kontsevich)

    integrate = commands.add_parser(
        'integrate', parents=[common, numeric],
        help='Configuration space integral of a Fourier curve')
    integrate.add_argument(
        dest='curve_file', type=str, help='Curve file (JSON)')
    integrate.set_defaults(func=cmd_integrate)

    comp = commands.add_parser(
        'compare', parents=[common, symbolic, numeric],
        help='Both invariants of the same link, coefficient by coefficient')
    comp.add_argument(
        dest='curve_file', type=str, help='Curve file (JSON)')
    comp.add_argument(
        dest='tangle_file', type=str, help='Tangle word file')
    comp.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        Config().load_args(args)
    except ValueError as e:
        parser.error(str(e))

    # This is useful if you want file name and line number info of
    # where each log message was generated.
    #logging.basicConfig(
    #    format='%(levelname)s: [%(filename)s:%(lineno)s] %(message)s', level=logging.INFO)
    logging.basicConfig(
        format='%(levelname)s: %(message)s', level=logging.INFO)
    if Config().get_debug():
        logging.getLogger().setLevel(logging.DEBUG)
    elif Config().get_silent():
        logging.getLogger().setLevel(logging.ERROR)

    manifest = RunManifest(args.command, argv)
    try:
        result, code = args.func(args, manifest)
    except (KontsevichError, IOError) as e:
        logging.error('%s', e)
        return EXIT_ERROR
    result['manifest'] = manifest.to_json(include_timing=False)
    print(json.dumps(result, indent=2))
    if args.manifest:
        manifest.write(args.manifest)
    Statistics().dump()
    return code


def cmd_basis(args, manifest):
    skeleton = Skeleton.parse(Config().get_skeleton())
    n = Config().get_degree()
    manifest.add_input('skeleton', repr(skeleton))
    basis = compute_basis(skeleton, n)
    result = export_basis(basis)
    # For strands this is the span of diagrams joining two strands, the
    # number of t_ij in degree 1.
    result['primitive_dimension'] = primitive_dimension(skeleton, n)
    if Config().get_render_diagrams():
        render_basis(basis, 'basis_{}_{}'.format(
            repr(skeleton).replace(':', '_'), n))
    return result, EXIT_OK


def load_v2_oracle(word):
    """(v2, source) from --oracle-file, or from the Gauss code of `word`."""
    path = Config().get_oracle_file()
    if path is not None:
        with open(path) as f:
            try:
                data = json.load(f)
            except ValueError as e:
                raise PreconditionError('{}: {}'.format(path, e))
        if not isinstance(data, dict) or not ('v2' in data or
                                              'gauss_code' in data):
            raise PreconditionError('{}: expected an object with "v2" or '
                                    '"gauss_code"'.format(path))
        if 'v2' in data:
            try:
                return Fraction(data['v2']), path
            except (TypeError, ValueError) as e:
                raise PreconditionError('{}: bad v2: {}'.format(path, e))
        return v2_from_gauss_code(data['gauss_code']), path
    code = gauss_code_from_word(word)
    return v2_from_gauss_code(code), format_gauss_code(code)


def _is_knot(word):
    return word.is_closed() and len(word.components()) == 1


def cmd_kontsevich(args, manifest):
    word = TangleWord.from_file(args.tangle_file)
    n = Config().get_degree()
    manifest.add_input('tangle_file', args.tangle_file)
    data = solve_associator(n)
    value = evaluate_tangle(word, data, n)
    result = OrderedDict([
        ('skeleton', repr(value.skeleton)),
        ('truncation', n),
        ('basis', [[d.to_json() for d in compute_basis(value.skeleton,
                                                       k).elements]
                   for k in range(n + 1)]),
        ('coordinates', exact_json(value)),
    ])
    code = EXIT_OK
    if _is_knot(word) and n >= 2:
        zero = evaluate_tangle(word, data, n, {0: 0})
        unknot = evaluate_tangle(unknot_word(), data, n, {0: 0})
        normalized = normalize_exact(zero, unknot)
        v2 = v2_weight(coordinates(normalized, 2),
                       compute_basis(normalized.skeleton, 2))
        oracle, source = load_v2_oracle(word)
        result['v2'] = str(v2)
        result['v2_oracle'] = OrderedDict([('value', str(oracle)),
                                           ('source', source)])
        if v2 != oracle:
            logging.error('v2 from the invariant is %s, oracle says %s'
                          % (v2, oracle))
            code = EXIT_MISMATCH
    return result, code


def _framing_estimates(curve, mc):
    return OrderedDict((i, gauss_framing(curve, i, mc))
                       for i in range(len(curve)))


def _numeric_invariant(curve, n, mc):
    """Frame-normalized numeric invariant and the estimates behind it."""
    z = z_numeric(curve, n, mc)
    framings = _framing_estimates(curve, mc)
    flagged = z.flagged or any(f.flagged() for f in framings.values())
    return z, framings, frame_normalize(z, framings), flagged


def cmd_integrate(args, manifest):
    curve = Curve.from_file(args.curve_file).check()
    n = Config().get_degree()
    mc = McConfig.from_config()
    manifest.add_input('curve_file', args.curve_file)
    manifest.add_seed(mc.seed)
    z, framings, z0, flagged = _numeric_invariant(curve, n, mc)
    links = OrderedDict()
    for i in range(len(curve)):
        for j in range(i + 1, len(curve)):
            estimate = linking_number(curve, i, j, mc)
            flagged = flagged or estimate.flagged()
            links['{}-{}'.format(i + 1, j + 1)] = estimate.to_json()
    result = OrderedDict([
        ('z', z.to_json()),
        ('framings', OrderedDict((str(i + 1), f.to_json())
                                 for i, f in framings.items())),
        ('linking_numbers', links),
        ('z0', z0.to_json()),
    ])
    if flagged:
        logging.warning('more than %.1f%% of the samples of some integral '
                        'were rejected' % (100 * mc.rejection_limit))
        return result, EXIT_REJECTIONS
    return result, EXIT_OK


def cmd_compare(args, manifest):
    curve = Curve.from_file(args.curve_file).check()
    word = TangleWord.from_file(args.tangle_file)
    n = Config().get_degree()
    mc = McConfig.from_config()
    manifest.add_input('curve_file', args.curve_file)
    manifest.add_input('tangle_file', args.tangle_file)
    manifest.add_seed(mc.seed)
    if not word.is_closed() or len(word.components()) != len(curve):
        raise SkeletonMismatchError(
            'curve has {} components, tangle word {}'.format(
                len(curve), len(word.components())))
    data = solve_associator(n)
    exact = evaluate_tangle(word, data, n,
                            dict((i, 0) for i in range(len(curve))))
    _, _, numeric, flagged = _numeric_invariant(curve, n, mc)
    rows = compare(exact, numeric)
    passed = all(r.passed for r in rows)
    result = OrderedDict([('skeleton', repr(exact.skeleton)),
                          ('truncation', n),
                          ('rows', rows_to_json(rows))])
    if n >= 2:
        # Reported only; each side is divided by its own unknot.
        exact_norm = normalize_exact(exact, evaluate_tangle(
            unknot_word(), data, n, {0: 0}))
        _, _, unknot, unknot_flagged = _numeric_invariant(round_circle(), n,
                                                          mc)
        numeric_norm = normalize_numeric(numeric, unknot)
        flagged = flagged or unknot_flagged
        result['normalized_rows'] = rows_to_json(compare(exact_norm,
                                                         numeric_norm))
    if _is_knot(word) and n >= 2:
        basis = compute_basis(exact.skeleton, 2)
        v2_numeric = v2_weight(numeric_norm.values[2], basis)
        v2_err = v2_weight(numeric_norm.errors[2], basis)
        oracle, source = load_v2_oracle(word)
        v2_ok = abs(v2_numeric - float(oracle)) <= tolerance(float(oracle),
                                                             v2_err)
        result['v2'] = OrderedDict([
            ('exact', str(v2_weight(coordinates(exact_norm, 2), basis))),
            ('numeric', v2_numeric), ('stderr', v2_err),
            ('oracle', str(oracle)), ('oracle_source', source),
            ('passed', v2_ok)])
        passed = passed and v2_ok
    result['passed'] = passed
    if not passed:
        logging.error('the two invariants disagree; see rows')
        return result, EXIT_MISMATCH
    if flagged:
        logging.warning('more than %.1f%% of the samples of some integral '
                        'were rejected' % (100 * mc.rejection_limit))
        return result, EXIT_REJECTIONS
    return result, EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
