"""Command-line entry points: run, validate, demo, serve."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import ConfigurationError
from .harness import load_config, run_experiment, write_outputs

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fishery",
        description="Deterministic evolutionary fishery simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a batch experiment from a config file")
    run_p.add_argument("config", help="path to a JSON experiment config")
    _add_output_flags(run_p)

    val_p = sub.add_parser("validate", help="check a config file without running it")
    val_p.add_argument("config", help="path to a JSON experiment config")

    demo_p = sub.add_parser(
        "demo", help="run the built-in size-greedy harvest scenario"
    )
    _add_output_flags(demo_p)
    demo_p.add_argument("--days", type=int, default=100, help="days to simulate")

    serve_p = sub.add_parser("serve", help="start the interactive session service")
    serve_p.add_argument("--port", type=int, default=8000)
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--data-dir", default="sessions", help="session snapshot directory")
    serve_p.add_argument("--presets", default=None, help="JSON file of session presets")
    serve_p.add_argument(
        "--ui-dir",
        default=None,
        help="directory of built UI assets to serve at / (default: ./frontend/static if present)",
    )
    return parser


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="run only this seed")
    p.add_argument("--out-dir", default="out", help="output directory")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--quiet", action="store_true")


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage and 0 on --help
        return int(exc.code or 0)
    try:
        if args.command == "run":
            return _cmd_run(load_config(args.config), args)
        if args.command == "validate":
            load_config(args.config)
            print(f"ok: {args.config}")
            return EXIT_OK
        if args.command == "demo":
            from .presets import demo_config

            config = demo_config(days=args.days)
            return _cmd_run(config, args)
        if args.command == "serve":
            return _cmd_serve(args)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # runtime failures (I/O and otherwise) exit 1
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def _cmd_run(config, args) -> int:
    if args.seed is not None:
        from dataclasses import replace

        config = replace(config, seeds=(args.seed,))
    result = run_experiment(config)
    written = write_outputs(result, args.out_dir, args.format)
    if not args.quiet:
        for run in result.runs:
            for sid, final in run.final_stats.items():
                initial = run.initial_stats[sid]
                if final.count == 0:
                    print(f"seed {run.seed} {sid}: extinct (started {initial.count})")
                else:
                    print(
                        f"seed {run.seed} {sid}: mean length "
                        f"{initial.mean:.2f} -> {final.mean:.2f} in, "
                        f"count {initial.count} -> {final.count}, "
                        f"money {run.total_money}"
                    )
        for path in written:
            print(f"wrote {path}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import SessionManager, create_app, load_presets_file

    presets = None
    if args.presets is not None:
        presets_path = Path(args.presets)
        if not presets_path.exists():
            raise ConfigurationError(f"presets file not found: {presets_path}")
        try:
            presets = load_presets_file(presets_path)
        except (ValueError, KeyError) as exc:
            raise ConfigurationError(f"malformed presets file {presets_path}: {exc}") from exc
    ui_dir = args.ui_dir
    if ui_dir is None:
        default_ui = Path("frontend/static")
        if default_ui.is_dir():
            ui_dir = default_ui
    manager = SessionManager(data_dir=args.data_dir, presets=presets)
    app = create_app(manager, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
