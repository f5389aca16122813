"""Command line entry point: ``rectlimsup <task> --config FILE --out DIR [--seed N]``.

Exit status 0 on success, 2 for invalid configuration, 3 when a size cap is exceeded,
1 for I/O and other failures.  Errors are printed to stderr as JSON and, when the output
directory is writable, also saved as error.json there.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..exceptions import SizeError, ValidationError
from .config import TASKS, load_config
from .report import emit_reports
from .runner import run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rectlimsup", description="Limsup-set measure experiments.")
    sub = parser.add_subparsers(dest="task", required=True)
    for task in TASKS:
        p = sub.add_parser(task, help=f"run the {task} task")
        p.add_argument("--config", required=True, help="INI configuration file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the configured seed (u64)")
        p.add_argument("--format", choices=("csv", "structured-text"), default="csv")
    return parser


def _fail(out, code, payload):
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text, file=sys.stderr)
    try:
        Path(out).mkdir(parents=True, exist_ok=True)
        (Path(out) / "error.json").write_text(text + "\n")
    except OSError:
        pass
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, task=args.task, seed=args.seed)
        bundle = run_experiment(cfg)
        paths = emit_reports(bundle, args.out, args.format)
    except ValidationError as e:
        return _fail(args.out, 2, {"status": "error", "kind": "validation",
                                   "problems": [{"field": f, "message": m} for f, m in e.problems]})
    except SizeError as e:
        return _fail(args.out, 3, {"status": "error", "kind": "size", "message": str(e),
                                   "level": getattr(e, "level", None)})
    except OSError as e:
        return _fail(args.out, 1, {"status": "error", "kind": "io", "message": str(e)})
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
