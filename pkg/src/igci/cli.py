"""Command-line entry point: ``igci {infer,benchmark,verify,generate}``.

Reports are key-sorted JSON.  Exit codes: 0 success, 1 unreadable or
ill-formed input (or a failed verify suite), 2 degenerate data.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .density import SamplePair
from .errors import DegenerateDataError, IGCIError
from .harness import SUITES, report_header, run_benchmark, run_verify
from .inference import infer_direction
from .pairfile import PairFileError, format_pairs, read_pair_file, write_pair_file
from .synth import GeneratorConfig, draw_instance

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n"


def _emit(report: dict, out: str | None) -> None:
    text = dumps(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _noise_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _config(args) -> GeneratorConfig:
    cfg = GeneratorConfig.load(args.config) if args.config else GeneratorConfig()
    cfg = cfg.with_seed(args.seed)
    if args.bins is not None:
        cfg = replace(cfg, bins=args.bins)
    return cfg


def cmd_infer(args) -> int:
    verdicts = []
    for path in args.input:
        try:
            pf = read_pair_file(path)
        except PairFileError as exc:
            print(f"igci: {path}: {exc}", file=sys.stderr)
            return EXIT_INPUT
        try:
            v = infer_direction(SamplePair.from_arrays(pf.xs, pf.ys), args.method, args.ordering,
                                args.reference)
        except DegenerateDataError as exc:
            lines = [pf.line_numbers[r] for r in exc.rows]
            where = f" (file lines {', '.join(map(str, lines))})" if lines else ""
            print(f"igci: {path}: degenerate data: {exc}{where}", file=sys.stderr)
            return EXIT_DEGENERATE
        verdicts.append({"input": str(path), "format": pf.format, "header": pf.header,
                         "rows": len(pf.rows), **v.to_dict()})
    params = {"method": args.method, "ordering": args.ordering, "reference": args.reference}
    report = report_header("infer", args.seed, params)
    report["verdicts"] = verdicts
    _emit(report, args.out)
    return EXIT_OK


def cmd_benchmark(args) -> int:
    if args.trials < 1:
        print("igci: --trials must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    _emit(run_benchmark(_config(args), args.trials, args.n, args.noise), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verify(args.suite, args.seed, args.trials)
    _emit(report, args.out)
    if not report["passed"]:
        failed = [c["name"] for checks in report["results"].values() for c in checks
                  if not c["passed"]]
        print(f"igci: verify failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_generate(args) -> int:
    cfg = _config(args)
    noise = args.noise[0] if args.noise else cfg.noise_level
    _, _, s = draw_instance(cfg, args.n, noise)
    # restore draw order so the file does not reveal which column was sorted
    order = np.argsort(s.source_index)
    if args.out:
        write_pair_file(args.out, s.xs[order], s.ys[order])
    else:
        sys.stdout.write(format_pairs(s.xs[order], s.ys[order]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="igci", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"igci {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, noise_default):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the report here instead of stdout")
        if noise_default is not None:
            p.add_argument("--n", type=int, default=1000, help="samples per pair")
            p.add_argument("--noise", type=_noise_list, default=noise_default,
                           help="comma-separated noise levels")
            p.add_argument("--bins", type=int, default=None)
            p.add_argument("--config", help="generator config file (key=value lines)")

    p = sub.add_parser("infer", help="decide the causal direction for two-column data files")
    p.add_argument("--input", action="append", required=True, help="data file (repeatable)")
    p.add_argument("--method", choices=("slope", "entropy"), default="slope")
    p.add_argument("--ordering", choices=("det", "noisy"), default="det")
    p.add_argument("--reference", choices=("uniform", "gaussian"), default="uniform")
    common(p, noise_default=None)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("benchmark", help="accuracy of every method on generated pairs")
    p.add_argument("--trials", type=int, default=200)
    common(p, noise_default=[0.0, 0.01, 0.05])
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("verify", help="run the invariant suites against their oracles")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--trials", type=int, default=100_000, help="Monte Carlo draws per check")
    common(p, noise_default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a synthetic pair file from the generator")
    common(p, noise_default=[])
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IGCIError as exc:
        print(f"igci: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
