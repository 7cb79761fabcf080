import argparse
import sys

from .errors import SchemaError
from .render import render_observables, render_phase_space


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psfigures", description="render diracps run directories"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("phase-space", help="Wigner-representation heatmap of one frame")
    ps.add_argument("run")
    ps.add_argument("--frame", type=int, default=-1, help="frame index (default: last)")
    ps.add_argument("--dots", help="ensemble run directory for the particle overlay")
    ps.add_argument("--out", required=True)

    obs = sub.add_parser("observables", help="overlay mean-x and antiparticle series")
    obs.add_argument("runs", nargs="+")
    obs.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "phase-space":
            info = render_phase_space(args.run, args.frame, args.out, dots_run=args.dots)
            print(info["out"])
        else:
            info = render_observables(args.runs, args.out)
            print(info["out"])
    except (SchemaError, FileNotFoundError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
