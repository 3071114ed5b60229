"""
Command-line interface.

    polyfield simulate --model disease --x0 0.7 0.3 --T 10 --out traj.csv
    polyfield learn --config disease --out-dir runs/disease
    polyfield evaluate --model-file m.json --truth disease --metric traj
    polyfield control --config control --out-dir runs/control
    polyfield certify --model-file m.json --sideinfo checks.json

Results go to stdout as JSON. Exit codes: 0 success, 2 infeasible or
violated side information, 3 solver failure, 4 configuration error.
"""

import argparse
import json
import logging
import sys
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .config import ConfigurationManager, current_config
from .dynamics import integrate, sup_distance, trajectory_distance, write_trajectory_csv
from .errors import ConfigError, SideInfoViolationError
from .experiments import available_models, ground_truth, run_control, run_experiment, shipped_configs
from .learn import LearnedModel
from .semialg import BasicSemialgebraicSet
from .sideinfo import SideInfo, residual_functional
from .types import Metric
from .utils import parse_error

logger = logging.getLogger(__name__)


def _params(pairs: Optional[Sequence[str]]) -> Dict[str, float]:
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ConfigError(f"Parameter {pair!r} is not of the form name=value")
        try:
            params[key.strip()] = float(value)
        except ValueError as error:
            raise ConfigError(f"Parameter {key} has non-numeric value {value!r}") from error
    return params


def _emit(data: Any) -> None:
    print(json.dumps(data, indent=2))


def cmd_simulate(args: argparse.Namespace) -> int:
    truth = ground_truth(args.model, _params(args.param))
    trajectory = integrate(truth.field, args.x0, args.T, args.step, truth.domain, allow_outside=True)
    path = write_trajectory_csv(trajectory, args.out)
    _emit(
        {
            "model": args.model,
            "out": str(path),
            "samples": len(trajectory.times),
            "final_state": list(map(float, trajectory.final_state)),
            "exited_at": trajectory.exited_at,
        }
    )
    return 0


def cmd_learn(args: argparse.Namespace) -> int:
    report = run_experiment(args.config, args.out_dir)
    _emit(report.to_json())
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    model = LearnedModel.load(args.model_file)
    truth = ground_truth(args.truth, _params(args.param))
    if model.n != truth.domain.n:
        raise ConfigError(f"Model has dimension {model.n}, truth {args.truth} has {truth.domain.n}")
    metric = Metric(args.metric)
    if metric == Metric.SUP:
        value = sup_distance(truth.field, model.field, truth.domain, args.resolution)
    else:
        value = trajectory_distance(truth.field, model.field, truth.domain, args.T, args.resolution, args.step)
    _emit({"truth": args.truth, "metric": metric.value, "value": value})
    return 0


def cmd_control(args: argparse.Namespace) -> int:
    if args.out_dir is None:
        with tempfile.TemporaryDirectory() as scratch:
            table = run_control(args.config, scratch)
    else:
        table = run_control(args.config, args.out_dir)
    _emit(table.to_json())
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    """
    Check a saved model against a side-information file.

    The file holds {"domain": <set>, "side_info": [<items>], "delta": opt}.
    Both the stored certificates and the residual functionals are checked.
    """
    model = LearnedModel.load(args.model_file)
    try:
        document = json.loads(Path(args.sideinfo).read_text())
        domain = BasicSemialgebraicSet.from_json(document["domain"])
        items: List[SideInfo] = [SideInfo.from_json(entry, model.n) for entry in document.get("side_info", [])]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as error:
        raise ConfigError(f"Cannot read side-information file {args.sideinfo}: {error}") from error

    config = current_config()
    delta = float(document.get("delta", config.residual_delta))
    resolution = args.resolution or config.residual_resolution
    reports = [residual_functional(model.field, item, domain, resolution) for item in items]
    certificates = model.verify_certificates()
    result = {
        "residuals": [r.to_json() for r in reports],
        "certificates": [c.to_json() for c in certificates],
        "delta": delta,
    }
    _emit(result)

    violated = [r.tag.value for r in reports if r.value > delta]
    invalid = [c.name for c, report in zip(model.certificates, certificates) if not report.valid]
    if violated or invalid:
        raise SideInfoViolationError(
            f"Model violates side information {violated} and has invalid certificates {invalid}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyfield",
        description="Learn polynomial vector fields under side information.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="integrate a ground-truth model")
    simulate.add_argument("--model", required=True, choices=available_models())
    simulate.add_argument("--x0", required=True, type=float, nargs="+")
    simulate.add_argument("--T", required=True, type=float)
    simulate.add_argument("--step", type=float, default=None)
    simulate.add_argument("--out", required=True)
    simulate.add_argument("--param", action="append", metavar="NAME=VALUE")
    simulate.set_defaults(handler=cmd_simulate)

    learn = sub.add_parser("learn", help="run an experiment configuration")
    learn.add_argument("--config", required=True, help=f"path or one of {shipped_configs()}")
    learn.add_argument("--out-dir", required=True)
    learn.set_defaults(handler=cmd_learn)

    evaluate = sub.add_parser("evaluate", help="distance from a learned model to a ground truth")
    evaluate.add_argument("--model-file", required=True)
    evaluate.add_argument("--truth", required=True, choices=available_models())
    evaluate.add_argument("--metric", choices=[m.value for m in Metric], default=Metric.SUP.value)
    evaluate.add_argument("--resolution", type=int, default=50)
    evaluate.add_argument("--T", type=float, default=1.0)
    evaluate.add_argument("--step", type=float, default=None)
    evaluate.add_argument("--param", action="append", metavar="NAME=VALUE")
    evaluate.set_defaults(handler=cmd_evaluate)

    control = sub.add_parser("control", help="constant-control grid search")
    control.add_argument("--config", required=True)
    control.add_argument("--out-dir", default=None)
    control.set_defaults(handler=cmd_control)

    certify = sub.add_parser("certify", help="check a model against side information")
    certify.add_argument("--model-file", required=True)
    certify.add_argument("--sideinfo", required=True)
    certify.add_argument("--resolution", type=int, default=None)
    certify.set_defaults(handler=cmd_certify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    manager = ConfigurationManager.get_instance()
    manager.initialize_from_env()
    verbose = args.verbose or manager.get_config().verbose
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(message)s")

    try:
        return args.handler(args)
    except Exception as error:
        details = parse_error(error)
        logger.debug("Command failed", exc_info=True)
        print(f"polyfield: {details['code']}: {details['message']}", file=sys.stderr)
        return details["exit_status"]


if __name__ == "__main__":
    sys.exit(main())
