"""Command-line entry point: ``contextkernel <command> [options]``."""
from __future__ import annotations

import argparse
import sys

from context_kernel.features.vector import KERNEL_FAMILIES
from context_kernel.loop.contracts import ConfigError, RunConfig
from context_kernel.loop.orchestrator import COMMANDS, EXIT_CONFIG, run
from context_kernel.oracle.tree_visit import DEFAULT_BUDGET


def parse_heights(text: str) -> list[int]:
    """``"1..10"`` (inclusive range) or a comma list ``"1,2,5"``."""
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            return list(range(int(low), int(high) + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad height list {text!r} (use 1..10 or 1,2,3)") from None


def parse_kernels(text: str) -> list[str]:
    kernels = [part.strip().lower() for part in text.split(",") if part.strip()]
    unknown = [k for k in kernels if k not in KERNEL_FAMILIES]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown kernel(s) {unknown}; choose from {KERNEL_FAMILIES}")
    return kernels


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threads", type=int, default=1, help="Worker count (output is identical for any value).")
    parser.add_argument("--seed", type=int, default=0, help="Seed for every random choice of the run.")
    parser.add_argument("--verbose", action="store_true", help="Print progress.")


def _dataset(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--dataset", required=required, help="TU directory or JSONL file.")
    parser.add_argument("--format", dest="fmt", choices=["tu", "jsonl"], default="tu", help="Dataset format.")


def _kernel(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kernel", choices=KERNEL_FAMILIES, default="tck", help="Kernel family.")
    parser.add_argument("--height", dest="h", type=int, default=3, help="Maximum visit height h (>= 1).")
    parser.add_argument("--lambda", dest="lam", type=float, default=1.0, help="Subtree weight λ (> 0).")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contextkernel",
        description="Tree Context Kernel, ODD and WL graph kernels: features, Gram matrices, nested CV.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="{" + ",".join(COMMANDS) + "}")

    p = sub.add_parser("validate", help="Parse and validate a dataset.")
    _dataset(p)
    _common(p)

    p = sub.add_parser("features", help="Dump explicit feature vectors as JSONL.")
    _dataset(p)
    _kernel(p)
    p.add_argument("--out", default=None, help="Output JSONL path.")
    _common(p)

    p = sub.add_parser("gram", help="Compute and export a Gram matrix.")
    _dataset(p)
    _kernel(p)
    p.add_argument("--engine", choices=["explicit", "implicit"], default="explicit", help="Gram engine.")
    p.add_argument("--normalize", action="store_true", help="Cosine-normalize the matrix.")
    p.add_argument("--out", default=None, help="Output CSV path.")
    _common(p)

    p = sub.add_parser("cv", help="Repeated nested cross-validation.")
    _dataset(p)
    p.add_argument("--kernel", choices=KERNEL_FAMILIES, default="tck", help="Kernel family.")
    p.add_argument("--grid", default="default", help="'default' or a JSON file with heights/lambdas/cs.")
    p.add_argument("--repeats", type=int, default=10, help="Repetitions with different splits.")
    p.add_argument("--outer-folds", type=int, default=10, help="Outer stratified folds.")
    p.add_argument("--inner-folds", type=int, default=10, help="Inner stratified folds.")
    p.add_argument("--engine", choices=["explicit", "implicit"], default="explicit", help="Gram engine.")
    p.add_argument("--normalize", action="store_true", help="Cosine-normalize every Gram matrix.")
    p.add_argument("--out", default=None, help="Report JSON path.")
    _common(p)

    p = sub.add_parser("oracle-check", help="Compare explicit kernels with the brute-force oracle.")
    p.add_argument("--graphs", type=int, default=50, help="Random graphs (and pairs) to generate.")
    p.add_argument("--max-nodes", type=int, default=10, help="Largest random graph.")
    p.add_argument("--h", "--height", dest="h", type=int, default=3, help="Maximum visit height.")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="Subtree weight λ.")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="Tree-visit node budget.")
    p.add_argument("--out", default=None, help="Optional report JSON path.")
    _common(p)

    p = sub.add_parser("bench", help="Gram timing table per kernel and height.")
    _dataset(p, required=False)
    p.add_argument("--synthetic", type=int, default=None, help="Use N synthetic molecule-like graphs.")
    p.add_argument("--kernels", type=parse_kernels, default=["odd", "tck"], help="Comma list, e.g. odd,tck.")
    p.add_argument("--heights", type=parse_heights, default=list(range(1, 11)), help="1..10 or 1,2,3.")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="Subtree weight λ.")
    p.add_argument("--out", default=None, help="Output CSV path.")
    _common(p)

    p = sub.add_parser("visit", help="Print the DAG visit of one graph node.")
    _dataset(p)
    p.add_argument("--graph", dest="graph_index", type=int, default=0, help="Graph index in the dataset.")
    p.add_argument("--root", type=int, default=0, help="Root node index.")
    p.add_argument("--height", dest="h", type=int, default=3, help="Visit height.")
    _common(p)

    p = sub.add_parser("summarize", help="Accuracy table from CV reports (+ bench ratios).")
    p.add_argument("--reports", nargs="+", required=True, help="CV report JSON files.")
    p.add_argument("--bench", default=None, help="Bench CSV to reduce to TCK/ODD ratios.")
    p.add_argument("--out", default=None, help="Output CSV path.")
    _common(p)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if v is not None and k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except ConfigError as exc:
        print(f"[{args.command}] ERROR (config): {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
