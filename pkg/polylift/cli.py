"""
Command-line surface: `python -m polylift <command> INPUT [flags]`

Commands
    lift      assemble A_N per order (Matrix Market + metadata JSON)
    reduce    quadratic reduction F1~, F2~ (Matrix Market + report JSON)
    bounds    beta0, T*, mu and sampled E2/E1 envelopes per order
    simulate  RK4 trajectories of the nonlinear and truncated systems
    compare   measured error against the envelopes with a soundness audit
    verify    self-check suite on seeded random cases

Exit codes: 0 success, 1 other library error, 2 input/parse error,
3 size guard, 4 soundness violation, 5 verification failure.
"""
import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from polylift import __version__
from polylift.bounds import envelope, params_from_reduction, sample_times, t_star
from polylift.carleman import assemble, reduce_quadratic
from polylift.config import get_settings
from polylift.errors import BlowUp, DimensionMismatch, ModelError, PolyliftError
from polylift.graph import initial_state, run_pipeline
from polylift.models.ode import PolyODE
from polylift.models.schemas import RunConfig
from polylift.reports import bound_report, lift_metadata, order_series, reduction_report
from polylift.sim import Trajectory, first_block, integrate_nonlinear, integrate_truncated
from polylift.utils.export import (
    trajectory_payload,
    write_json,
    write_matrix_market,
    write_rows,
    write_trajectory_csv,
)
from polylift.utils.system_loader import SystemLoader
from polylift.verification import run_verification

logger = logging.getLogger("polylift.cli")

EXIT_OK = 0
EXIT_SOUNDNESS = 4
EXIT_VERIFY = 5


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _assignment(text: str) -> tuple:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parameter {name.strip()!r} needs a numeric value, got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polylift",
        description="Carleman linearization of polynomial ODEs with truncation-error bounds",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    for name, summary in (
        ("lift", "assemble the truncated Carleman matrix A_N"),
        ("reduce", "rewrite the system in quadratic form"),
        ("bounds", "bound parameters, T* and sampled envelopes"),
        ("simulate", "integrate nonlinear and truncated systems"),
        ("compare", "measured truncation error against the envelopes"),
    ):
        sub = commands.add_parser(name, help=summary)
        sub.add_argument("input", help="system file (.ode DSL or .json document)")
        sub.add_argument("-N", "--order", dest="orders", type=int, action="append",
                         help="truncation order (repeatable, default 2)")
        sub.add_argument("--tend", type=float, default=None, help="final time")
        sub.add_argument("--step", type=float, default=None, help="RK4 step size")
        sub.add_argument("--x0", type=_float_list, default=None, help="initial state, comma list")
        sub.add_argument("--alpha", type=float, default=None,
                         help="a-priori bound on sup ||x(t)|| used by E1")
        sub.add_argument("--format", dest="output_format", choices=["csv", "json", "mm"], default="csv")
        sub.add_argument("--out", dest="out_dir", default=".", help="output directory")
        sub.add_argument("--param", dest="params", type=_assignment, action="append", default=[],
                         help="override a DSL parameter, NAME=VALUE (repeatable)")
        sub.add_argument("--samples", type=int, default=None, help="envelope sample count")

    verify = commands.add_parser("verify", help="run the self-check suite")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--cases", type=int, default=100)
    verify.add_argument("--out", dest="out_dir", default=".", help="output directory")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    settings = get_settings()
    values: Dict = {"command": args.command, "out_dir": args.out_dir}
    if args.command == "verify":
        values.update(seed=args.seed, cases=args.cases)
        return RunConfig(**values)
    values.update(
        input_path=args.input,
        orders=args.orders or [2],
        step=args.step if args.step is not None else settings.default_step,
        x0=args.x0,
        alpha=args.alpha,
        output_format=args.output_format,
        params=dict(args.params),
        samples=args.samples,
    )
    if args.tend is not None:
        values["t_end"] = args.tend
    return RunConfig(**values)


def _load(config: RunConfig) -> PolyODE:
    system, _ = SystemLoader.from_path(config.input_path, overrides=config.params or None)
    return system


def _initial_state(config: RunConfig, system: PolyODE, required: bool = True) -> np.ndarray:
    if config.x0 is None:
        if required:
            raise DimensionMismatch(f"--x0 is required for '{config.command}'")
        return np.zeros(system.n)
    if len(config.x0) != system.n:
        raise DimensionMismatch(f"x0 has {len(config.x0)} component(s), system has n={system.n}")
    return np.asarray(config.x0, dtype=float)


def _horizon_default(config: RunConfig, horizon: float, explicit: bool) -> float:
    if explicit:
        return config.t_end
    fraction = get_settings().soundness_fraction
    return fraction * horizon if math.isfinite(horizon) else config.t_end


def cmd_lift(config: RunConfig) -> int:
    system = _load(config)
    x0 = _initial_state(config, system, required=False)
    out = Path(config.out_dir)
    for N in sorted(set(config.orders)):
        lifted = assemble(system, x0, N)
        write_matrix_market(out / f"A_N{N}.mtx", lifted.matrix, comment=f"Carleman matrix A_{N}")
        write_json(out / f"lift_N{N}.json", lift_metadata(lifted))
    return EXIT_OK


def cmd_reduce(config: RunConfig) -> int:
    reduction = reduce_quadratic(_load(config))
    out = Path(config.out_dir)
    write_matrix_market(out / "F1_tilde.mtx", reduction.F1_tilde, comment="reduced linear part")
    write_matrix_market(out / "F2_tilde.mtx", reduction.F2_tilde, comment="reduced quadratic part")
    write_json(out / "reduce.json", reduction_report(reduction))
    return EXIT_OK


def cmd_bounds(config: RunConfig, explicit_tend: bool = False) -> int:
    system = _load(config)
    x0 = _initial_state(config, system)
    reduction = reduce_quadratic(system)
    params = params_from_reduction(reduction, x0, alpha=config.alpha)
    horizon = t_star(params)
    report = bound_report(params, horizon, config.orders)
    logger.info(f"🎯 beta0={params.beta0!r}, T*={horizon!r}, mu={params.mu_F1!r}")

    t_end = _horizon_default(config, horizon, explicit_tend)
    times = sample_times(t_end, config.samples or get_settings().envelope_samples)
    out = Path(config.out_dir)
    payload = {"report": report.model_dump(mode="json"), "envelopes": []}
    for N in report.orders:
        e2 = envelope("E2", params, N, times)
        e1 = envelope("E1", params, N, times)
        if config.output_format == "json":
            payload["envelopes"].extend([e2.model_dump(mode="json"), e1.model_dump(mode="json")])
        else:
            rows = zip(times.tolist(), e2.values(), e1.values())
            write_rows(out / f"envelope_N{N}.csv", ["t", "bound_E2", "bound_E1"], rows)
    write_json(out / "bounds.json", payload if config.output_format == "json" else report)
    return EXIT_OK


def _integrate(label: str, run) -> Trajectory:
    try:
        return run()
    except BlowUp as e:
        logger.warning(f"⚠️  {label} blew up at t={e.t!r}; keeping the trajectory up to the last finite state")
        return e.trajectory


def cmd_simulate(config: RunConfig) -> int:
    system = _load(config)
    x0 = _initial_state(config, system)
    out = Path(config.out_dir)
    nonlinear = _integrate("nonlinear system", lambda: integrate_nonlinear(system, x0, config.t_end, config.step))
    truncated: Dict[int, Trajectory] = {}
    for N in sorted(set(config.orders)):
        lifted = assemble(system, x0, N)
        run = _integrate(f"truncated system N={N}", lambda: integrate_truncated(lifted, config.t_end, config.step))
        truncated[N] = first_block(run, system.n)

    if config.output_format == "json":
        write_json(out / "simulate.json", {
            "nonlinear": trajectory_payload(nonlinear),
            "truncated": {str(N): trajectory_payload(traj) for N, traj in truncated.items()},
        })
    else:
        write_trajectory_csv(out / "nonlinear.csv", nonlinear)
        for N, traj in truncated.items():
            write_trajectory_csv(out / f"truncated_N{N}.csv", traj)
    return EXIT_OK


def cmd_compare(config: RunConfig, explicit_tend: bool = False) -> int:
    path = Path(config.input_path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ModelError(f"cannot read {path}: {e.strerror}") from e
    if config.x0 is None:
        raise DimensionMismatch("--x0 is required for 'compare'")

    state = initial_state(
        text,
        x0=config.x0,
        orders=config.orders,
        t_end=config.t_end if explicit_tend else None,
        step=config.step,
        alpha=config.alpha,
        params=config.params,
        source_name=path.name,
    )
    final_state = run_pipeline(state)
    report = final_state["report"]
    series = order_series(final_state["results"])
    out = Path(config.out_dir)

    if config.output_format == "json":
        write_json(out / "compare.json", {
            "report": report.model_dump(mode="json"),
            "series": [s.model_dump(mode="json") for s in series],
        })
    else:
        for entry in series:
            rows = zip(entry.t, entry.err, entry.bound_E2, entry.bound_E1)
            write_rows(out / f"compare_N{entry.N}.csv", ["t", "err", "bound_E2", "bound_E1"], rows)
        write_json(out / "compare.json", report)

    if report.verdict == "violated":
        logger.error("❌ Measured error exceeds the E2 envelope before the audit horizon")
        return EXIT_SOUNDNESS
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    report = run_verification(seed=config.seed, cases=config.cases)
    write_json(Path(config.out_dir) / "verify.json", {
        "seed": report.seed,
        "passed": report.passed,
        "checks": [check.model_dump() for check in report.checks],
    })
    return EXIT_OK if report.passed else EXIT_VERIFY


COMMANDS = {
    "lift": cmd_lift,
    "reduce": cmd_reduce,
    "bounds": cmd_bounds,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = get_settings()
    logging.basicConfig(
        level=settings.log_level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)

    try:
        config = config_from_args(args)
    except ValidationError as e:
        error = e.errors()[0]
        logger.error(f"❌ Invalid option {'.'.join(str(p) for p in error['loc'])}: {error['msg']}")
        return ModelError.exit_code

    try:
        if config.command in ("bounds", "compare"):
            return COMMANDS[config.command](config, explicit_tend=args.tend is not None)
        return COMMANDS[config.command](config)
    except PolyliftError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return e.exit_code
    except ValueError as e:
        logger.error(f"❌ Invalid input: {e}")
        return ModelError.exit_code
