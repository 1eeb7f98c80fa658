"""Command line entry point.

    sdpgraph run --config exp.yaml [--seed N] [--out DIR] [--parallel W]
    sdpgraph calibrate --config null.yaml [--margin M]
    sdpgraph plotdata --records DIR/records.jsonl --x lam --y xi1 [--overlay bbap]

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import json
import logging
from pathlib import Path
import sys

from . import experiments
from .errors import ConfigError, InvalidParameter, NumericalFailure, SamplingFailure

log = logging.getLogger("sdpgraph")


def _overrides(args):
    out = {"seed": args.seed}
    for item in args.set or []:
        key, _, raw = item.partition("=")
        out[key] = experiments.yaml.safe_load(raw)
    return out


def _add_config_args(p):
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a config field (YAML value)")
    p.add_argument("--parallel", type=int, default=1, metavar="W")


def build_parser():
    parser = argparse.ArgumentParser(prog="sdpgraph")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment config")
    _add_config_args(p)
    p.add_argument("--out")

    p = sub.add_parser("calibrate", help="calibrate delta on null graphs")
    _add_config_args(p)
    p.add_argument("--margin", type=float)

    p = sub.add_parser("plotdata", help="write TSV series from records")
    p.add_argument("--records", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--series")
    p.add_argument("--overlay", choices=sorted(experiments.OVERLAYS))
    p.add_argument("--out", default="plot")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        if args.command == "run":
            cfg = experiments.load_config(args.config, _overrides(args))
            out = args.out or cfg.out or "out"
            records, summary = experiments.run(cfg, args.parallel)
            experiments.write_outputs(out, records, summary)
            for row in summary:
                log.info(json.dumps(row))
        elif args.command == "calibrate":
            cfg = experiments.load_config(args.config, _overrides(args))
            delta = experiments.calibrate_threshold(cfg, args.margin, args.parallel)
            print(json.dumps({"delta": delta, "threshold": 2 * (1 + delta)}))
        else:
            records = experiments.read_records(args.records)
            for path in experiments.emit_plotdata(records, args.out, args.x, args.y,
                                                  args.series, args.overlay):
                log.info(str(Path(path)))
    except (ConfigError, InvalidParameter, FileNotFoundError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalFailure, SamplingFailure) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
