"""Command-line entry point: ``dipolar-squeeze <subcommand> [flags]``.

Exit codes: 0 success, 1 oracle property failure, 2 I/O or configuration
error, 3 numerical failure (including oracle size-cap violations).
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from typing import Dict, List, Optional

from .errors import DomainError, NumericalError, ResourceError
from .sweeps import RUNNERS, build_config, load_config_file, run_oracle_check, write_table

log = logging.getLogger("dipolar_squeeze")

_NEG_VALUE = re.compile(r"^-\.?\d")
_VALUE_FLAGS = {"--c", "--c-start", "--c-stop", "--window-lo", "--window-hi", "--t-max"}

EXIT_OK, EXIT_PROPERTY, EXIT_IO, EXIT_NUMERICAL = 0, 1, 2, 3

# per-subcommand defaults, applied beneath config-file values and flags
MODE_DEFAULTS: Dict[str, Dict[str, str]] = {
    "ground_scan": {"n_atoms": "100", "c_start": "-1", "c_stop": "2", "c_count": "121"},
    "dynamics": {"n_atoms": "2000", "c_list": "1.05", "initial_kind": "polar", "t_max": "10"},
    "steady_scan": {"n_atoms": "2000", "c_start": "0.5", "c_stop": "1.5", "c_count": "21",
                    "initial_kind": "polar,twin_fock"},
    "bogoliubov_compare": {"n_atoms": "1000", "c_list": "1.05,1.1,1.2", "samples": "401"},
    "oracle_check": {"n_atoms": "8"},
}


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value config file; flags override it")
    parser.add_argument("--output", dest="output_path", help="output file (default: stdout)")
    parser.add_argument("--format", dest="output_format", choices=("csv", "json"))
    parser.add_argument("--jobs", dest="parallelism", type=int, help="worker processes")
    parser.add_argument("--n", dest="n_atoms", help="atom number(s), comma separated")
    parser.add_argument("--c", dest="c_list", help="explicit c value(s), comma separated")
    parser.add_argument("--c-start", dest="c_start", type=float)
    parser.add_argument("--c-stop", dest="c_stop", type=float)
    parser.add_argument("--c-count", dest="c_count", type=int)
    parser.add_argument("--t-max", dest="t_max", type=float)
    parser.add_argument("--samples", type=int, help="time samples in [0, t_max]")
    parser.add_argument("--initial", dest="initial_kind",
                        help="polar, twin-fock, or a comma-separated list")
    parser.add_argument("--window-lo", dest="window_lo", type=float)
    parser.add_argument("--window-hi", dest="window_hi", type=float)
    parser.add_argument("--window-samples", dest="window_samples", type=int)
    parser.add_argument("-v", "--verbose", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dipolar-squeeze",
        description="Spin-nematic squeezing and QFI of spin-1 dipolar condensates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "ground-scan": "ground-state squeezing and QFI over a c grid",
        "dynamics": "time trace of squeezing, QFI and populations from an m=0 initial state",
        "steady-scan": "quasi-steady time averages over a c grid",
        "bogoliubov-compare": "exact dynamics against the Bogoliubov closed forms",
        "oracle-check": "dense-oracle equivalence suites for small N",
    }
    for name, text in helps.items():
        _common(sub.add_parser(name, help=text, description=text))
    return parser


def _merge(mode: str, args: argparse.Namespace) -> Dict[str, str]:
    values: Dict[str, object] = dict(MODE_DEFAULTS[mode])
    if args.config:
        from_file = load_config_file(args.config)
        if any(k in from_file for k in ("c_list", "c_start", "c_stop", "c_count")):
            for k in ("c_list", "c_start", "c_stop", "c_count"):
                values.pop(k, None)
        values.update(from_file)
    flags = {k: v for k, v in vars(args).items()
             if v is not None and k not in ("command", "config", "verbose")}
    if "c_list" in flags and any(k in flags for k in ("c_start", "c_stop", "c_count")):
        raise DomainError("--c cannot be combined with --c-start/--c-stop/--c-count")
    if any(k in flags for k in ("c_list", "c_start", "c_stop", "c_count")):
        if "c_list" not in flags:
            values.pop("c_list", None)
        else:
            for k in ("c_start", "c_stop", "c_count"):
                values.pop(k, None)
    values.update(flags)
    return values


def _attach_negative_values(argv: List[str]) -> List[str]:
    # argparse reads "--c -1,0" as two flags; glue such values on with "="
    out: List[str] = []
    i = 0
    while i < len(argv):
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv) and _NEG_VALUE.match(argv[i + 1]):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = make_parser().parse_args(_attach_negative_values(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    mode = args.command.replace("-", "_")
    try:
        config = build_config(mode, _merge(mode, args))
        if mode == "oracle_check":
            table, ok = run_oracle_check(config)
        else:
            table, ok = RUNNERS[mode](config), True
        text = write_table(table, config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ResourceError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DomainError, ValueError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_IO
    if not config.output_path:
        sys.stdout.write(text)
    if not ok:
        failed = [r[0] + f"(N={r[1]})" for r in table.rows if not r[-1]]
        print("oracle check failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_PROPERTY
    log.info("wrote %d rows", len(table.rows))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
