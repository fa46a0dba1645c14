import argparse
import json
import logging
import statistics
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from pydantic import ValidationError

from kcore_peel.cli.views import BenchRecord, ExitCode
from kcore_peel.engine.service import PeelEngine
from kcore_peel.engine.views import PeelConfig
from kcore_peel.graph.generators import gen_ba, gen_cube, gen_er, gen_grid, gen_hcns
from kcore_peel.graph.service import load_graph, save_graph
from kcore_peel.graph.views import CapacityError, CsrGraph, GeneratorParameterError, GraphError
from kcore_peel.oracle.service import bz_coreness, load_coreness, save_coreness, verify_coreness
from kcore_peel.oracle.views import CorenessFormatError, CorenessLengthError
from kcore_peel.sampler.views import SamplingParams
from kcore_peel.telemetry.service import ProductTelemetry
from kcore_peel.telemetry.views import BenchTelemetryEvent, size_class

logger = logging.getLogger(__name__)


class CliError(Exception):
	def __init__(self, message: str, exit_code: ExitCode):
		self.exit_code = exit_code
		super().__init__(message)


def _validation_message(error: ValidationError) -> str:
	return '; '.join(e['msg'].removeprefix('Value error, ') for e in error.errors())


def _generate(args: argparse.Namespace) -> CsrGraph:
	generators: dict[str, Callable[[], CsrGraph]] = {
		'grid': lambda: gen_grid(args.w, args.h),
		'cube': lambda: gen_cube(args.x, args.y, args.z),
		'hcns': lambda: gen_hcns(args.kmax, args.seed),
		'ba': lambda: gen_ba(args.n, args.a, args.seed),
		'er': lambda: gen_er(args.n, args.avg, args.seed),
	}
	return generators[args.kind]()


def cmd_gen(args: argparse.Namespace) -> ExitCode:
	try:
		graph = _generate(args)
	except (GeneratorParameterError, CapacityError) as e:
		raise CliError(str(e), ExitCode.CONFIG) from e
	save_graph(graph, args.out, edge_list=args.edge_list)
	print(f'n={graph.n} m2={graph.m2}')
	return ExitCode.OK


def _config_from_args(args: argparse.Namespace) -> PeelConfig:
	fields = {
		'peel': args.peel,
		'bucketing': args.bucketing,
		'seed': args.seed,
		'sampling': SamplingParams(c=args.c, seed=args.seed) if args.sampling == 'on' else None,
	}
	if args.vgc is not None:
		fields['vgc'] = args.vgc
	if args.threads is not None:
		fields['threads'] = args.threads
	try:
		return PeelConfig(**fields)
	except ValidationError as e:
		raise CliError(f'invalid configuration: {_validation_message(e)}', ExitCode.CONFIG) from e


def _read_graph(path: str) -> CsrGraph:
	try:
		return load_graph(path)
	except (GraphError, OSError) as e:
		raise CliError(f'cannot read graph {path}: {e}', ExitCode.FORMAT) from e


def cmd_run(args: argparse.Namespace) -> ExitCode:
	config = _config_from_args(args)
	graph = _read_graph(args.graph)
	engine = PeelEngine(config)

	if args.kprime is not None:
		if args.kprime < 0:
			raise CliError(f'--kprime must be non-negative, got {args.kprime}', ExitCode.CONFIG)
		core = engine.kcore_subgraph(graph, args.kprime)
		lines = ''.join(f'{v}\n' for v in core)
		if args.subgraph_out:
			Path(args.subgraph_out).write_text(lines)
			print(f'{len(core)} vertices in the {args.kprime}-core')
		else:
			sys.stdout.write(lines)
		return ExitCode.OK

	coreness, stats = engine.decompose(graph)
	if args.coreness_out:
		with open(args.coreness_out, 'wb') as f:
			save_coreness(coreness, f)
	if args.stats_out:
		Path(args.stats_out).write_text(json.dumps(stats.to_json_dict(), indent=2))
	print(f'kmax={stats.kmax} rounds={stats.rounds} subrounds={stats.subrounds} wall_ms={stats.wall_ms:.1f}')
	return ExitCode.OK


def cmd_verify(args: argparse.Namespace) -> ExitCode:
	graph = _read_graph(args.graph)
	try:
		with open(args.coreness, 'rb') as f:
			coreness = load_coreness(f)
	except (CorenessFormatError, OSError) as e:
		raise CliError(f'cannot read coreness {args.coreness}: {e}', ExitCode.FORMAT) from e
	try:
		result = verify_coreness(graph, coreness)
	except CorenessLengthError as e:
		raise CliError(str(e), ExitCode.FORMAT) from e
	print(result.describe())
	return ExitCode.OK if result.passed else ExitCode.MISMATCH


def cmd_bench(args: argparse.Namespace) -> ExitCode:
	graph = _read_graph(args.graph)
	overrides = {'threads': args.threads} if args.threads is not None else {}
	try:
		if args.configs:
			configs = [PeelConfig.from_label(label, **overrides) for label in args.configs.split(',')]
		else:
			configs = list(PeelConfig.matrix(**overrides))
	except (ValidationError, ValueError) as e:
		message = _validation_message(e) if isinstance(e, ValidationError) else str(e)
		raise CliError(f'invalid configuration: {message}', ExitCode.CONFIG) from e

	expected = bz_coreness(graph)
	records: list[BenchRecord] = []
	for config in configs:
		engine = PeelEngine(config)
		# the first warm-up run is the verified one
		coreness, _ = engine.decompose(graph)
		if coreness != expected:
			result = verify_coreness(graph, coreness)
			raise CliError(f'{config.label}: {result.describe()}', ExitCode.MISMATCH)
		for _ in range(args.warmup - 1):
			engine.decompose(graph)
		runs = [engine.decompose(graph)[1].to_json_dict() for _ in range(args.repeat)]
		mean = statistics.fmean(run['wall_ms'] for run in runs) if runs else 0.0
		records.append(BenchRecord(label=config.label, verified=True, mean_wall_ms=mean, runs=runs))
		print(f'{config.label:<32} mean_wall_ms={mean:10.2f} subrounds={runs[0]["subrounds"] if runs else 0}')

	report = json.dumps([record.model_dump(mode='json') for record in records], indent=2)
	if args.report_out:
		Path(args.report_out).write_text(report)
	else:
		print(report)
	ProductTelemetry().capture(
		BenchTelemetryEvent(
			n_class=size_class(graph.n),
			m2_class=size_class(graph.m2),
			configs=[c.label for c in configs],
			repeat=args.repeat,
			verified=True,
		)
	)
	return ExitCode.OK


def cmd_info(args: argparse.Namespace) -> ExitCode:
	graph = _read_graph(args.graph)
	kmax = bz_coreness(graph).kmax
	print(f'n={graph.n} m={graph.m} m2={graph.m2} dmax={graph.dmax} avg_degree={graph.average_degree:.3f} kmax={kmax}')
	return ExitCode.OK


def _non_negative(text: str) -> int:
	value = int(text)
	if value < 0:
		raise argparse.ArgumentTypeError(f'expected a non-negative integer, got {text}')
	return value


def build_parser() -> argparse.ArgumentParser:
	parser = argparse.ArgumentParser(prog='kcore-peel', description='Parallel k-core decomposition by peeling')
	commands = parser.add_subparsers(dest='command', required=True)

	gen = commands.add_parser('gen', help='generate a graph')
	gen.add_argument('kind', choices=['grid', 'cube', 'hcns', 'ba', 'er'])
	gen.add_argument('--w', type=int, default=100)
	gen.add_argument('--h', type=int, default=100)
	gen.add_argument('--x', type=int, default=10)
	gen.add_argument('--y', type=int, default=10)
	gen.add_argument('--z', type=int, default=10)
	gen.add_argument('--kmax', type=int, default=16)
	gen.add_argument('--n', type=int, default=1000)
	gen.add_argument('--a', type=int, default=4, help='edges per new vertex (ba)')
	gen.add_argument('--avg', type=float, default=4.0, help='average degree (er)')
	gen.add_argument('--seed', type=int, default=0)
	gen.add_argument('-o', '--out', required=True)
	gen.add_argument('--edge-list', action='store_true', help='write a text edge list instead of KCG1')
	gen.set_defaults(handler=cmd_gen)

	run = commands.add_parser('run', help='decompose a graph')
	run.add_argument('graph')
	run.add_argument('--peel', choices=['online', 'offline'], default='online')
	run.add_argument('--sampling', choices=['off', 'on'], default='off')
	run.add_argument('--c', type=float, default=1.0, help='sampling confidence constant')
	run.add_argument('--vgc', type=_non_negative, default=None, help='local queue capacity, 0 disables')
	run.add_argument('--bucketing', default='auto', help='single | fixed:<b> | hbs | auto')
	run.add_argument('--threads', type=int, default=None)
	run.add_argument('--seed', type=int, default=0)
	run.add_argument('--kprime', type=int, default=None, help="emit the k'-core vertex ids instead")
	run.add_argument('--coreness-out')
	run.add_argument('--stats-out')
	run.add_argument('--subgraph-out')
	run.set_defaults(handler=cmd_run)

	verify = commands.add_parser('verify', help='check a coreness file against the sequential oracle')
	verify.add_argument('graph')
	verify.add_argument('coreness')
	verify.set_defaults(handler=cmd_verify)

	bench = commands.add_parser('bench', help='time a matrix of configurations')
	bench.add_argument('graph')
	bench.add_argument('--configs', help="comma-separated labels such as 'online:vgc128:hbs'; default is every legal combination")
	bench.add_argument('--warmup', type=_non_negative, default=1)
	bench.add_argument('--repeat', type=_non_negative, default=5)
	bench.add_argument('--threads', type=int, default=None)
	bench.add_argument('--report-out')
	bench.set_defaults(handler=cmd_bench)

	info = commands.add_parser('info', help='print graph statistics')
	info.add_argument('graph')
	info.set_defaults(handler=cmd_info)
	return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
	parser = build_parser()
	try:
		args = parser.parse_args(argv)
	except SystemExit as e:
		return ExitCode.OK if e.code == 0 else ExitCode.CONFIG
	try:
		return int(args.handler(args))
	except CliError as e:
		print(f'error: {e}', file=sys.stderr)
		return int(e.exit_code)
	finally:
		ProductTelemetry().flush()


if __name__ == '__main__':
	sys.exit(main())
