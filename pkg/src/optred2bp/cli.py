"""Command-line front end.

Subcommands: ``classify`` (stabilizer classes and momentum of input
points), ``label``/``reduce`` (level-set labels and reduced coordinates),
``section`` (phase points from reduced coordinates of a configured
label), ``simulate`` (full and reduced trajectories with figures) and
``verify`` (run the built-in verification suites).

Input point files carry one point per line as 12 whitespace-separated
reals ``q1 q2 p1 p2``; ``#`` starts a comment.  Structured reports are
JSON, trajectories are CSV with floats at 17 significant digits; both are
byte-reproducible for a fixed config and seed.

Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import hamiltonians, verify
from .isotropy import IsotropyClass, canonicalize, classify_fine, isotropy_class
from .momentum import (
    MomentumValue,
    PhasePoint,
    StratumBoundaryError,
    char_distribution_dim,
    is_regular,
    momentum_map,
)
from .optimal import (
    LevelSetMembershipError,
    ParamDomainError,
    REDUCED_COORD_NAMES,
    ReducedPoint,
    label,
    label_from_parts,
    project,
    section,
)
from .reduced import (
    ChartEscapeError,
    IntegrationError,
    conservation_report,
    integrate_full,
    integrate_reduced,
    momentum_of_states,
    project_trajectory,
    reduced_distance,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_BAD_INPUT = 2
EXIT_NUMERICAL = 3


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def read_points(path: Path):
    """(line_number, PhasePoint) records and per-line error records."""
    points, errors = [], []
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            try:
                if len(fields) != 12:
                    raise ValueError(f"expected 12 values, got {len(fields)}")
                vals = [float(tok) for tok in fields]
                points.append((lineno, PhasePoint.from_vector(vals)))
            except ValueError as exc:
                errors.append({"line": lineno, "error": str(exc)})
    return points, errors


def read_coords(path: Path, ncols: int):
    coords, errors = [], []
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            try:
                if len(fields) != ncols:
                    raise ValueError(f"expected {ncols} values, got {len(fields)}")
                coords.append((lineno, [float(tok) for tok in fields]))
            except ValueError as exc:
                errors.append({"line": lineno, "error": str(exc)})
    return coords, errors


def write_json(obj, directory: Path | None, name: str) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if directory is None:
        print(text)
    else:
        directory.mkdir(parents=True, exist_ok=True)
        (directory / name).write_text(text + "\n")


def write_csv(directory: Path, name: str, header, rows) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / name, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def label_from_config(spec: dict):
    """Build a level-set label from its JSON description."""
    mu = MomentumValue(spec.get("alpha", [0.0, 0.0, 0.0]), spec.get("u", [0.0, 0.0, 0.0]))
    iso_spec = spec.get("iso", {"family": "G4"})
    family = iso_spec["family"]
    if family == "G1":
        iso = canonicalize("G1", x=iso_spec["x"])
    elif family == "G2":
        iso = canonicalize("G2", y=iso_spec["ydir"])
    elif family == "G3":
        iso = canonicalize("G3", x=iso_spec["x_perp"], y=iso_spec["ydir"])
    elif family == "G4":
        iso = IsotropyClass("G4")
    else:
        raise ValueError(f"unknown family {family!r}")
    rho = label_from_parts(mu, iso)
    if "case" in spec and int(spec["case"]) != rho.case_id:
        raise ValueError(
            f"configured case {spec['case']} does not match the data (case {rho.case_id})"
        )
    return rho


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_classify(cfg) -> int:
    points, errors = read_points(cfg["input"])
    records = []
    for lineno, m in points:
        mu = momentum_map(m)
        rec = {
            "line": lineno,
            "fine": classify_fine(m),
            "iso": isotropy_class(m).params(),
            "J": {"alpha": mu.alpha.tolist(), "u": mu.u.tolist()},
            "regular": bool(is_regular(m)),
        }
        try:
            rec["dimE"] = int(char_distribution_dim(m))
        except StratumBoundaryError as exc:
            rec["dimE"] = None
            rec["warning"] = str(exc)
        records.append(rec)
    write_json(
        {"command": "classify", "points": records, "errors": errors},
        cfg["output"],
        "classify.json",
    )
    return EXIT_OK


def cmd_label_and_reduce(cfg, with_reduce: bool) -> int:
    points, errors = read_points(cfg["input"])
    records = []
    for lineno, m in points:
        rho = label(m)
        rec = {"line": lineno, "case": rho.case_id, "label": rho.params()}
        if with_reduce:
            pt = project(rho, m)
            rec["reduced"] = pt.coords.tolist()
            rec.update(pt.as_dict())
        records.append(rec)
    name = "reduce.json" if with_reduce else "label.json"
    write_json(
        {
            "command": "reduce" if with_reduce else "label",
            "points": records,
            "errors": errors,
        },
        cfg["output"],
        name,
    )
    return EXIT_OK


def cmd_section(cfg) -> int:
    spec = cfg["config"].get("label")
    if not spec:
        print("section: config must define a 'label' entry", file=sys.stderr)
        return EXIT_BAD_INPUT
    rho = label_from_config(spec)
    names = REDUCED_COORD_NAMES[rho.case_id]
    coords, errors = read_coords(cfg["input"], len(names))
    records = []
    for lineno, vals in coords:
        try:
            m = section(rho, ReducedPoint(rho.case_id, vals))
            records.append({"line": lineno, "coords": vals, "point": m.as_vector().tolist()})
        except ParamDomainError as exc:
            errors.append({"line": lineno, "error": str(exc)})
    write_json(
        {
            "command": "section",
            "label": rho.params(),
            "points": records,
            "errors": errors,
        },
        cfg["output"],
        "section.json",
    )
    return EXIT_OK


def cmd_simulate(cfg) -> int:
    conf = cfg["config"]
    if cfg["input"] is not None:
        points, errors = read_points(cfg["input"])
        if errors or not points:
            print(f"simulate: bad initial point file: {errors}", file=sys.stderr)
            return EXIT_BAD_INPUT
        m0 = points[0][1]
    elif "initial" in conf:
        m0 = PhasePoint.from_vector(conf["initial"])
    else:
        print("simulate: need --input or config 'initial'", file=sys.stderr)
        return EXIT_BAD_INPUT

    try:
        ham = hamiltonians.make(cfg["hamiltonian"], **conf.get("hamiltonian_params", {}))
    except (KeyError, TypeError) as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    rho = label(m0)
    outdir = cfg["output"] or Path("simulate_out")
    T, step, method = cfg["T"], cfg["step"], cfg["method"]
    names = REDUCED_COORD_NAMES[rho.case_id]

    full = integrate_full(ham, m0, T, step, method)
    write_csv(
        outdir,
        "trajectory_full.csv",
        ["t", "q1x", "q1y", "q1z", "q2x", "q2y", "q2z", "p1x", "p1y", "p1z", "p2x", "p2y", "p2z"],
        np.column_stack([full.times, full.states]),
    )
    status = EXIT_OK
    summary = {
        "hamiltonian": ham.name,
        "hamiltonian_params": ham.params,
        "case": rho.case_id,
        "label": rho.params(),
        "T": T,
        "step": step,
        "method": method,
    }
    summary.update(conservation_report(ham, full))
    try:
        projected = project_trajectory(rho, full)
        red = integrate_reduced(rho, ham, project(rho, m0), T, step, method)
        write_csv(
            outdir,
            "trajectory_reduced.csv",
            ["t", *names],
            np.column_stack([red.times, red.states]) if names else [[t] for t in red.times],
        )
        summary["commutation_error"] = max(
            reduced_distance(rho, projected[k], red.states[k])
            for k in range(projected.shape[0])
        )
    except (ChartEscapeError, IntegrationError) as exc:
        summary["error"] = str(exc)
        if isinstance(exc, ChartEscapeError):
            summary["exit_time"] = exc.exit_time
        status = EXIT_NUMERICAL

    write_json(summary, outdir, "summary.json")

    if cfg["plots"]:
        from . import plots

        plots.plot_full_trajectory(full.times, full.states, outdir / "positions.png")
        J = momentum_of_states(full.states)
        H = np.array([ham.value(y) for y in full.states])
        plots.plot_conservation(
            full.times,
            H - H[0],
            np.max(np.abs(J - J[0]), axis=1),
            outdir / "conservation.png",
        )
        if status == EXIT_OK and names:
            plots.plot_reduced_trajectory(
                red.times, red.states, names, outdir / "reduced.png"
            )
    return status


def cmd_verify(cfg) -> int:
    conf = cfg["config"]
    names = [cfg["suite"]] if cfg["suite"] else None
    try:
        results = verify.run_suites(
            names=names,
            seed=cfg["seed"],
            tolerance_overrides=conf.get("tolerances"),
        )
    except KeyError as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    report = {
        "command": "verify",
        "seed": cfg["seed"],
        "suites": [r.as_dict() for r in results],
        "all_passed": all(r.passed for r in results),
    }
    write_json(report, cfg["output"], "verify.json")
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  ({r.elapsed:.2f}s)", file=sys.stderr)
    return EXIT_OK if report["all_passed"] else EXIT_VERIFY


# --------------------------------------------------------------------------
# argument handling
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optred2bp",
        description="Symmetry reduction toolkit for the spatial two-body problem.",
    )
    parser.add_argument(
        "command",
        choices=["classify", "label", "reduce", "section", "simulate", "verify"],
    )
    parser.add_argument("--config", type=Path, help="JSON config file; flags override it")
    parser.add_argument("--input", type=Path, help="input point/coordinate file")
    parser.add_argument("--output", type=Path, help="output directory (default: stdout for reports)")
    parser.add_argument("--seed", type=int, help="random seed (default 0)")
    parser.add_argument("--step", type=float, help="integrator step (default 1e-3)")
    parser.add_argument("--T", type=float, dest="T", help="integration time (default 1.0)")
    parser.add_argument("--hamiltonian", help="registered Hamiltonian name (default kepler)")
    parser.add_argument("--method", choices=["rk4", "implicit_midpoint"], help="integrator")
    parser.add_argument("--suite", help="run a single verification suite")
    parser.add_argument("--no-plots", action="store_true", help="skip figure rendering")
    return parser


def merge_config(args: argparse.Namespace) -> dict:
    conf = {}
    if args.config is not None:
        conf = json.loads(Path(args.config).read_text())
    pick = lambda flag, key, default: flag if flag is not None else conf.get(key, default)
    cfg = {
        "config": conf,
        "input": pick(args.input, "input", None),
        "output": pick(args.output, "output", None),
        "seed": int(pick(args.seed, "seed", 0)),
        "step": float(pick(args.step, "step", 1e-3)),
        "T": float(pick(args.T, "T", 1.0)),
        "method": pick(args.method, "method", "rk4"),
        "hamiltonian": pick(args.hamiltonian, "hamiltonian", "kepler"),
        "suite": pick(args.suite, "suite", None),
        "plots": (not args.no_plots) and conf.get("plots", True),
    }
    if cfg["input"] is not None:
        cfg["input"] = Path(cfg["input"])
    if cfg["output"] is not None:
        cfg["output"] = Path(cfg["output"])
    if cfg["step"] <= 0.0 or cfg["T"] <= 0.0:
        raise ValueError("step and T must be positive")
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = merge_config(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    needs_input = args.command in ("classify", "label", "reduce", "section")
    if needs_input and cfg["input"] is None:
        print(f"{args.command}: --input is required", file=sys.stderr)
        return EXIT_BAD_INPUT

    try:
        if args.command == "classify":
            return cmd_classify(cfg)
        if args.command == "label":
            return cmd_label_and_reduce(cfg, with_reduce=False)
        if args.command == "reduce":
            return cmd_label_and_reduce(cfg, with_reduce=True)
        if args.command == "section":
            return cmd_section(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
    except OSError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (LevelSetMembershipError, ParamDomainError, ValueError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (IntegrationError, ChartEscapeError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
