"""Command-line entry point: ``proxheat --preset NAME | --config FILE``."""

import argparse
import sys

from .materials import MaterialError
from .plotting import PlotError, emit_plot, render_ascii
from .rates import NoMechanismError
from .scenario import PRESETS, ConfigError, emit_csv, load_preset, load_scenario, run_scenario

EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_NO_MECHANISM = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="proxheat",
        description="Heating rates of trapped particles near room-temperature surfaces.",
    )
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=PRESETS, help="built-in scenario")
    src.add_argument("--config", metavar="FILE", help="scenario TOML file")
    parser.add_argument("--out", metavar="FILE", default="-",
                        help="CSV output path (default: stdout)")
    parser.add_argument("--plot", metavar="FILE",
                        help="log-log plot: *.svg for SVG, 'ascii' for a text plot, "
                             "any other path for a text plot file")
    parser.add_argument("--format", choices=("csv",), default="csv",
                        help="table format (only csv)")
    parser.add_argument("--quiet", action="store_true", help="suppress notices on stderr")
    return parser


def _fail(category, message, code):
    print(f"proxheat: error[{category}]: {message}", file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)

    def notify(msg):
        if not args.quiet:
            print(msg, file=sys.stderr)

    try:
        scenario = load_preset(args.preset) if args.preset else load_scenario(args.config)
        table = run_scenario(scenario)
    except NoMechanismError as exc:
        return _fail("no_mechanism", exc, EXIT_NO_MECHANISM)
    except OSError as exc:
        return _fail("io", exc, EXIT_IO)
    except (ConfigError, MaterialError, ValueError) as exc:
        return _fail("config", exc, EXIT_CONFIG)

    try:
        emit_csv(table, args.out)
        if args.plot == "ascii":
            # keep stdout clean for the CSV when it goes there
            stream = sys.stdout if args.out != "-" else sys.stderr
            stream.write(render_ascii(table, notify))
        elif args.plot:
            emit_plot(table, args.plot, notify=notify)
    except OSError as exc:
        return _fail("io", exc, EXIT_IO)
    except PlotError as exc:
        return _fail("plot", exc, EXIT_CONFIG)
    if args.out != "-":
        notify(f"wrote {len(table)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
