"""
Master Sampling Pipeline
Command-line entry point: sample, bench, extract-test, batch-bench and bounds

Exit codes: 0 pass, 1 bound-check (or sampling) failure, 2 usage error
"""

import argparse
import math
import re
import sys
import os
from datetime import datetime
from fractions import Fraction

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from src.bounds.bounds import (
    lower_bound_bits, norm_index, partition_gap, partition_gap_stirling, partition_upper_bound,
)
from src.bounds.catalog import catalog_names, density_model
from src.continuous.inversion import parse_epsilon
from src.discrete.distribution import load_distribution
from src.discrete.entropy import entropy_discrete
from src.export.report_writer import FORMATS, render_report, render_table, write_output
from src.orchestrator.bench_runner import BenchRunner, format_norm
from src.orchestrator.law_registry import (
    DISCRETE_METHODS, TrialSpec, build_sampler, default_method, resolve_law, validate_spec,
)
from src.recycle.batch import batch_generate
from src.recycle.bit_tests import extractor_output_tests
from src.recycle.conditional_model import ConditionalModel, build_conditional_model
from src.recycle.extractor import extract_stream
from src.source.bit_source import ReplaySource, SeededBitSource
from src.source.tape_io import read_tape
from src.utils.exceptions import (
    InvalidDistribution, InvalidEpsilon, SamplingError, TapeExhausted, TooFewBits, UnknownLaw,
)
from src.utils.logger import setup_logger
from src.utils.settings import load_settings

logger = setup_logger('main_pipeline')

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

EPS_FRACTION_BITS = 64
_DYADIC_EPS = re.compile(r'^\s*(\d+)\s*/\s*2\s*\^\s*(\d+)\s*$')

SAMPLE_COLUMNS = ['trial', 'value', 'bits', 'leaf']
EXTRACT_COLUMNS = ['model', 'n', 'emitted', 'rate', 'target', 'monobit_z', 'runs_z', 'pass']
BATCH_COLUMNS = ['n', 'bits_per_sample', 'entropy', 'gap', 'max_queue']
BOUNDS_COLUMNS = [
    'law', 'd', 'p', 'eps', 'entropy', 'lower', 'upper_ky', 'upper_hh', 'gap_ky', 'gap_hh', 'gap_stirling_hh',
]


def parse_eps_text(text):
    """
    Read '1/2^k', 'a/2^k' or a decimal as a positive dyadic

    Decimals are floored to 64 fractional bits, so a parsed epsilon is
    never larger than the one written.
    """
    match = _DYADIC_EPS.match(str(text))
    if match:
        value = Fraction(int(match.group(1)), 1 << int(match.group(2)))
    else:
        try:
            exact = Fraction(str(text).strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidEpsilon(f"Cannot read epsilon {text!r}: {e}")
        value = Fraction(math.floor(exact * (1 << EPS_FRACTION_BITS)), 1 << EPS_FRACTION_BITS)
    return parse_epsilon(value)


def _eps_arg(text):
    try:
        return parse_eps_text(text)
    except InvalidEpsilon as e:
        raise argparse.ArgumentTypeError(str(e))


def _norm_arg(text):
    try:
        return norm_index(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"Invalid norm index {text!r}: {e}")


def _seed_arg(text):
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Seed must be an integer (hex allowed), got {text!r}")


def _scale_arg(text):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"Scale must be a positive rational, got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"Scale must be positive, got {text!r}")
    return value


def format_leaf(leaf):
    """'depth:rank' for an exit leaf, the piece name for split laws, blank otherwise"""
    if leaf is None:
        return None
    if hasattr(leaf, 'depth'):
        return f"{leaf.depth}:{leaf.rank}"
    return str(leaf)


def resolve_model(name, algorithm='hh'):
    """
    Conditional model for extract-test

    Args:
        name: 'fair-coin', 'uniform-<m>', 'degenerate' / 'degenerate-<n>',
              or any discrete law (its sampler tree is enumerated)
    """
    if name == 'fair-coin':
        return ConditionalModel.fair_coin()
    uniform = re.fullmatch(r'uniform-(\d+)', name)
    if uniform:
        return ConditionalModel.uniform_leaves(int(uniform.group(1)))
    degenerate = re.fullmatch(r'degenerate(?:-(\d+))?', name)
    if degenerate:
        return ConditionalModel.degenerate(int(degenerate.group(1) or 2))
    return build_conditional_model(load_distribution(name), algorithm)


def _lo(real, k=40):
    return float(real.enclose(k).lo)


def _hi(real, k=40):
    return float(real.enclose(k).hi)


def _mid(real, k=40):
    return float(real.enclose(k))


class SamplingPipeline:
    """Runs one CLI subcommand and renders its table"""

    def __init__(self, config_path=None):
        self.config_path = config_path
        self.settings = load_settings('bench', config_path)
        self.start_time = None
        logger.info("SamplingPipeline initialized")

    def run(self, args):
        handlers = {
            'sample': self.cmd_sample,
            'bench': self.cmd_bench,
            'extract-test': self.cmd_extract_test,
            'batch-bench': self.cmd_batch_bench,
            'bounds': self.cmd_bounds,
        }
        self.start_time = datetime.now()
        logger.info("=" * 80)
        logger.info(f"RUNNING {args.command.upper()}")
        logger.info("=" * 80)
        status = handlers[args.command](args)
        duration = (datetime.now() - self.start_time).total_seconds()
        mark = "✓" if status == EXIT_PASS else "✗"
        logger.info(f"{mark} {args.command} finished in {duration:.1f} seconds (exit {status})")
        return status

    def _trial_spec(self, args, eps):
        kind = resolve_law(args.law)
        method = args.method or default_method(args.law)
        spec = TrialSpec(
            law=args.law,
            method=method,
            eps=None if kind == 'discrete' else eps,
            p=args.p,
            scale=args.scale,
            route=args.route,
            integer_method=args.integer,
            variant=args.variant,
        )
        return validate_spec(spec)

    def cmd_sample(self, args):
        """Print each trial's value, bit count and exit leaf"""
        spec = self._trial_spec(args, args.eps[0] if args.eps else None)
        sampler = build_sampler(spec)
        src = ReplaySource(read_tape(args.tape)) if args.tape else SeededBitSource(args.seed)
        trials = args.trials or 1
        records = []
        for trial in range(1, trials + 1):
            try:
                outcome = sampler(src)
            except TapeExhausted:
                logger.warning(f"⚠ Tape ran out after {trial - 1} trials")
                break
            records.append({
                'trial': trial, 'value': outcome.value, 'bits': outcome.bits_used, 'leaf': format_leaf(outcome.leaf),
            })
        write_output(render_table(records, SAMPLE_COLUMNS, args.format), args.out)
        logger.info(f"✓ Drew {len(records)} samples of {spec.law} ({spec.method})")
        return EXIT_PASS

    def cmd_bench(self, args):
        """One report row per epsilon; exit 1 when any mean leaves its bound band"""
        runner = BenchRunner(
            config_path=self.config_path, workers=args.workers, record_wall_time=args.timings or None,
        )
        trials = args.trials or self.settings['defaults']['trials']
        eps_grid = args.eps or [None]
        if resolve_law(args.law) == 'discrete':
            eps_grid = [None]

        rows = []
        for eps in eps_grid:
            spec = self._trial_spec(args, eps)
            if args.tape:
                bits = runner.replay_bits(spec, read_tape(args.tape))
                if not bits:
                    raise ValueError(f"Tape {args.tape} is too short for a single trial")
                rows.append(runner.summarize(spec, bits))
            else:
                rows.append(runner.bench(spec, trials, args.seed))

        write_output(render_report(rows, args.format), args.out)
        failed = [row for row in rows if not row.passed]
        for row in failed:
            logger.error(f"✗ {row.law} / {row.method} at eps={row.eps}: mean {row.mean_T:.4f} outside [{row.lower:.4f}, {row.upper:.4f}]")
        return EXIT_FAIL if failed else EXIT_PASS

    def cmd_extract_test(self, args):
        """Extraction rate against E(Y | X) plus monobit and runs tests"""
        extraction = self.settings['extraction']
        model = resolve_model(args.model or 'fair-coin', args.method or 'hh')
        n = args.n[0] if args.n else extraction['default_n']
        logger.info(f"Extracting from {n:,} pairs of {model.name}")
        state = extract_stream(model, SeededBitSource(args.seed), n)

        emitted = state.emitted_count
        rate = emitted / n if n else 0.0
        target = model.conditional_entropy()
        passed = abs(rate - target) <= extraction['rate_tolerance']
        monobit_z = runs_z = None
        try:
            report = extractor_output_tests(state.emitted, extraction['min_bits'])
            report.print_report(extraction['z_threshold'])
            monobit_z, runs_z = report.monobit_z, report.runs_z
            passed = passed and report.passed(extraction['z_threshold'])
        except TooFewBits as e:
            logger.warning(f"⚠ Bit tests skipped: {e}")
        if args.tape:
            state.dump_emitted(args.tape)

        record = {
            'model': model.name, 'n': n, 'emitted': emitted, 'rate': rate, 'target': target,
            'monobit_z': monobit_z, 'runs_z': runs_z, 'pass': passed,
        }
        write_output(render_table([record], EXTRACT_COLUMNS, args.format), args.out)
        return EXIT_PASS if passed else EXIT_FAIL

    def cmd_batch_bench(self, args):
        """Fresh bits per sample N_n / n against H(X) over the n grid"""
        if resolve_law(args.law) != 'discrete':
            raise UnknownLaw(f"batch-bench needs a discrete law, got {args.law}")
        method = args.method or 'hh'
        if method not in DISCRETE_METHODS:
            raise ValueError(f"batch-bench runs {DISCRETE_METHODS}, not {method}")
        dist = load_distribution(args.law)
        entropy = float(entropy_discrete(dist))
        grid = self.settings['batch']['n_grid'] if args.n is None else args.n

        records = []
        for position, n in enumerate(grid):
            result = batch_generate(dist, method, n, SeededBitSource(args.seed, stream=position))
            rate = result.bits_per_sample
            records.append({
                'n': n, 'bits_per_sample': rate, 'entropy': entropy,
                'gap': abs(rate - entropy), 'max_queue': result.max_queue,
            })
            logger.info(f"✓ n={n:,}: N/n = {rate:.6f}, queue peaked at {result.max_queue}")
        write_output(render_table(records, BATCH_COLUMNS, args.format), args.out)
        return EXIT_PASS

    def cmd_bounds(self, args):
        """
        Lower and partition upper bounds per catalog law, dimension, norm and epsilon

        A one-dimensional law at dimension d stands for d independent copies.
        """
        laws = [args.law] if args.law else catalog_names()
        dims = args.d or [1]
        norms = args.p_grid or [args.p]
        eps_grid = args.eps or [Fraction(1, 256)]

        records = []
        ordered = True
        for law in laws:
            model = density_model(law)
            for d in dims:
                if d % model.dimension:
                    logger.warning(f"⚠ {law} is {model.dimension}-dimensional; skipping d={d}")
                    continue
                entropy = (d // model.dimension) * model.entropy
                for p in norms:
                    stirling = partition_gap_stirling(d, p, 'hh') if p != math.inf else None
                    for eps in eps_grid:
                        lower = _lo(lower_bound_bits(entropy, d, eps, p))
                        upper_ky = _hi(partition_upper_bound(entropy, d, eps, p, 'ky'))
                        upper_hh = _hi(partition_upper_bound(entropy, d, eps, p, 'hh'))
                        ordered = ordered and lower <= upper_ky <= upper_hh
                        records.append({
                            'law': law, 'd': d, 'p': format_norm(p), 'eps': str(eps),
                            'entropy': _mid(entropy), 'lower': lower, 'upper_ky': upper_ky, 'upper_hh': upper_hh,
                            'gap_ky': _mid(partition_gap(d, p, 'ky')), 'gap_hh': _mid(partition_gap(d, p, 'hh')),
                            'gap_stirling_hh': _hi(stirling) if stirling is not None else None,
                        })
        write_output(render_table(records, BOUNDS_COLUMNS, args.format), args.out)
        if not ordered:
            logger.error("✗ A lower bound exceeded its upper bound")
        return EXIT_PASS if ordered else EXIT_FAIL


def build_parser():
    defaults = load_settings('bench')['defaults']

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--law', help="Law name, 'dyadic:1/2,1/4,1/4', or a distribution JSON file")
    common.add_argument('--method', help='Sampling method (defaults per law)')
    common.add_argument('--eps', type=_eps_arg, nargs='+', help="Accuracy: '1/2^k', 'a/2^k' or a decimal")
    common.add_argument('--trials', type=int, help='Number of trials')
    common.add_argument('--seed', type=_seed_arg, default=defaults['seed'], help='Master seed (hex allowed)')
    common.add_argument('--p', type=_norm_arg, default=math.inf, help="Norm index p >= 1 or 'inf'")
    common.add_argument('--format', choices=FORMATS, default=defaults['format'])
    common.add_argument('--tape', help='Replay tape (sample, bench) or emitted-bit dump (extract-test)')
    common.add_argument('--out', help='Write the report here instead of stdout')
    common.add_argument('--scale', type=_scale_arg, default=Fraction(1), help='Sample a * X instead of X')
    common.add_argument('--route', choices=('inversion', 'convolution'), default='inversion',
                        help='Fractional-part route for exponential split sampling')
    common.add_argument('--variant', choices=('raw', 'ky'), default='raw', help='Convolution variant')
    common.add_argument('--integer', choices=DISCRETE_METHODS, default='hh',
                        help='Integer-part sampler for exponential split sampling')

    parser = argparse.ArgumentParser(description='Entropy-efficient random variate sampling from fair coins')
    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('sample', parents=[common], help='Draw samples and print their bit costs')

    bench = commands.add_parser('bench', parents=[common], help='Compare mean bit cost against the bounds')
    bench.add_argument('--workers', type=int, help='Worker processes')
    bench.add_argument('--timings', action='store_true', help='Fill the seconds column')

    extract = commands.add_parser('extract-test', parents=[common], help='Measure and test extracted bits')
    extract.add_argument('--model', help="'fair-coin', 'uniform-<m>', 'degenerate[-<n>]' or a discrete law")
    extract.add_argument('--n', type=int, nargs='*', help='Number of pairs fed')

    batch = commands.add_parser('batch-bench', parents=[common], help='Recycled bits per sample over an n grid')
    batch.add_argument('--n', type=int, nargs='*', help='Batch sizes (config grid when omitted)')

    bounds = commands.add_parser('bounds', parents=[common], help='Print bound tables for catalog laws')
    bounds.add_argument('--d', type=int, nargs='+', help='Dimensions')
    bounds.add_argument('--p-grid', type=_norm_arg, nargs='+', help='Norm indices for the table')
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command not in ('extract-test', 'bounds') and not args.law:
        parser.error(f"{args.command} needs --law")
    if args.trials is not None and args.trials < 1:
        parser.error("--trials must be at least 1")

    try:
        return SamplingPipeline().run(args)
    except (InvalidEpsilon, UnknownLaw, InvalidDistribution, ValueError, OSError) as e:
        logger.error(f"✗ {args.command} failed: {e}")
        return EXIT_USAGE
    except SamplingError as e:
        logger.error(f"✗ {args.command} failed: {e}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
