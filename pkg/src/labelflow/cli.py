"""Command-line entry points: lattice-gen, conformance, demo."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .conformance import HarnessError, default_corpus_dir, run_corpus
from .errors import LatticeError
from .lattice import generate_lattice, render_declarations


def lattice_gen_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lattice-gen",
        description="Generate the secrecy-label family over base policies "
                    "as a declarations module.")
    parser.add_argument("--policies", required=True,
                        help="comma-separated policy names, e.g. a,b,c")
    parser.add_argument("--out", required=True, help="output module path")
    args = parser.parse_args(argv)
    names = [p for p in args.policies.split(",") if p]
    try:
        family = generate_lattice(names)
    except LatticeError as err:
        print(f"lattice-gen: {err}", file=sys.stderr)
        return 2
    text = render_declarations(family)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {len(family.labels)} labels "
          f"({len(family.order)} order constraints) to {args.out}")
    return 0


def conformance_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="conformance",
        description="Compile the corpus and check every expectation.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the corpus")
    run.add_argument("--corpus", default=None,
                     help="corpus directory (defaults to the shipped corpus)")
    run.add_argument("--filter", default=None, help="entry-name glob")
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--summary", default=None,
                     help="write the machine-readable summary to this file")
    args = parser.parse_args(argv)
    corpus = Path(args.corpus) if args.corpus else default_corpus_dir()
    try:
        report = run_corpus(corpus, pattern=args.filter, jobs=args.jobs)
    except HarnessError as err:
        print(f"conformance: {err}", file=sys.stderr)
        return 2
    print(report.text_report())
    summary = "\n".join(report.summary_lines()) + "\n"
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            fh.write(summary)
    return 0 if report.passed else 1


def _demo_calendar(args) -> int:
    from .transform import load_secret_module
    demos = Path(__file__).parent / "demos"
    module = load_secret_module(demos / "calendar_secret.py",
                                "labelflow_demo_calendar")
    module.main(args.seed)
    return 0


def _demo_battleship(args) -> int:
    from .transform import load_secret_module
    from .demos.session import battleship_session, parse_script
    demos = Path(__file__).parent / "demos"
    backend = load_secret_module(demos / "battleship_secret.py",
                                 "labelflow_demo_battleship")
    script = None
    if args.script:
        script = parse_script(Path(args.script).read_text(encoding="utf-8"))
    transcript = battleship_session(backend, args.seed_a, args.seed_b,
                                    script=script,
                                    interactive=args.interactive)
    for line in transcript:
        print(line)
    return 0


def _demo_bench(args) -> int:
    from .demos.bench import KERNEL_NAMES, bench_kernel, render_report
    if args.kernel not in KERNEL_NAMES:
        print(f"demo bench: unknown kernel {args.kernel!r} "
              f"(choose from {', '.join(KERNEL_NAMES)})", file=sys.stderr)
        return 2
    row = bench_kernel(args.kernel, args.mode, args.reps)
    report = render_report([row])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report)
    print(report)
    return 0


def demo_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="demo", description="End-to-end demo applications.")
    sub = parser.add_subparsers(dest="command", required=True)

    cal = sub.add_parser("calendar", help="two-calendar overlap")
    cal.add_argument("--seed", type=int, default=0)
    cal.set_defaults(func=_demo_calendar)

    bs = sub.add_parser("battleship", help="labeled battleship game")
    bs.add_argument("--script", default=None,
                    help="guess script file (row col per line, alternating)")
    bs.add_argument("--seed-a", type=int, default=1)
    bs.add_argument("--seed-b", type=int, default=2)
    bs.add_argument("--interactive", action="store_true",
                    help="prompt player A's guesses on the terminal")
    bs.set_defaults(func=_demo_battleship)

    bench = sub.add_parser("bench", help="plain vs secret-wrapped kernels")
    bench.add_argument("--kernel", required=True)
    bench.add_argument("--mode", choices=("plain", "secret"), required=True)
    bench.add_argument("--reps", type=int, default=10)
    bench.add_argument("--out", default=None)
    bench.set_defaults(func=_demo_bench)

    args = parser.parse_args(argv)
    return args.func(args)
