"""Command line entry points: `soundplot analyze` and `soundplot serve`."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .audio_io import CorruptHeaderError, EmptyAudioError, UnsupportedFormatError
from .pipeline import AnalysisOptions, analyze_file
from .session import CollisionError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soundplot",
        description="Birdsong analysis-synthesis pipeline with 3D trajectory export",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="run the full pipeline on a WAV file")
    analyze.add_argument("input", help="path to a RIFF/WAVE file")
    analyze.add_argument("--out", default="data/sessions", help="session root directory")
    analyze.add_argument("--no-trim", action="store_true", help="disable the 5-minute cap")
    analyze.add_argument(
        "--remove-silence", action="store_true", help="trim leading/trailing silence"
    )
    analyze.add_argument("--gl-iters", type=int, default=32, help="Griffin-Lim iterations")
    analyze.add_argument("--fmin", type=float, default=65.0, help="pitch range low (Hz)")
    analyze.add_argument("--fmax", type=float, default=2093.0, help="pitch range high (Hz)")
    analyze.add_argument("--seed", type=int, default=None, help="session id RNG seed")

    serve = sub.add_parser("serve", help="run the HTTP service and viewer")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--data-dir", default="data/sessions", help="session root to serve")
    serve.add_argument(
        "--frontend-dir", default=None, help="built viewer directory (defaults to ./frontend)"
    )
    return parser


def run_analyze(args: argparse.Namespace) -> int:
    options = AnalysisOptions(
        out_dir=Path(args.out),
        trim=not args.no_trim,
        remove_silence=args.remove_silence,
        gl_iterations=args.gl_iters,
        f_min=args.fmin,
        f_max=args.fmax,
        seed=args.seed,
    )
    try:
        record = analyze_file(args.input, options)
    except FileNotFoundError:
        print(f"error: input file not found: {args.input}", file=sys.stderr)
        return 2
    except (UnsupportedFormatError, CorruptHeaderError, EmptyAudioError, CollisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    m = record.metrics
    print(f"session: {record.folder}")
    print(f"snr_db: {m.snr_db:.4f}")
    print(f"waveform_corr: {m.waveform_corr:.4f}")
    print(f"spectral_corr: {m.spectral_corr:.4f}")
    print(f"mel_corr: {m.mel_corr:.4f}")
    return 0


def run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=Path(args.data_dir), frontend_dir=args.frontend_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "analyze":
        return run_analyze(args)
    return run_serve(args)


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
