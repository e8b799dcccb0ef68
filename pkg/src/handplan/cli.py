"""Command-line front end.

    handplan <subcommand> --scenario <path> --out <dir> [options]

Exit status: 0 on success, 1 on a planning failure (unreachable target,
exhausted sampling budget, infeasible grasp), 2 on usage or scenario-file
errors. Diagnostics go to stderr; the manifest of written files goes to
stdout.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from handplan import __version__
from handplan.angles import AngleMethod, recover_all
from handplan.clustering import SeedMode, kmeans
from handplan.errors import HandPlanError, ScenarioFileError
from handplan.geometry import distance
from handplan.model import ContactUpdateMode, contact_target, is_identity
from handplan.output import Bundle, ConfigRow, Drawing, emit_bundle, read_configurations, trace_rows
from handplan.planner import ManipulationPlan, plan
from handplan.sampler import SamplerConfig, Strategy, derive_seed, rolling_family, sample_finger, workspace_sweep
from handplan.scenario_file import parse_scenario, resolve
from handplan.scenarios import (
    ScenarioSpec,
    build_scenario,
    evaluate,
    motion_error,
    render_table,
    run_suite,
)

log = logging.getLogger("handplan")

SUBCOMMANDS = ("solve", "plan", "sweep", "cluster", "suite", "report")
EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="scenario JSON file, directory, or builtin:NAME")
    common.add_argument("--out", required=True, type=Path, help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--epsilon-f", type=float, default=0.05, help="cost acceptance band")
    common.add_argument("--epsilon-len", type=float, default=None, help="relative link-length tolerance")
    common.add_argument("--strategy", choices=[s.value for s in Strategy], default="manifold")
    common.add_argument("--contact-mode", choices=[m.value for m in ContactUpdateMode], default="geometric")
    common.add_argument("--k", type=int, default=4, help="number of clusters")
    common.add_argument("--count", type=int, default=50, help="configurations per finger")
    common.add_argument("--max-attempts", type=int, default=1_000_000)
    common.add_argument("--cluster-space", choices=["weights", "joints"], default="weights")
    common.add_argument("--finger", type=int, default=None, help="finger id for sweep/cluster")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="handplan", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"handplan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="sample every finger independently")
    sub.add_parser("plan", parents=[common], help="full plan: sampling, weights, clusters, selection")
    sw = sub.add_parser("sweep", parents=[common], help="workspace cloud over a family of rolls")
    sw.add_argument("--sweep-max-deg", type=float, default=10.0)
    sw.add_argument("--sweep-step-deg", type=float, default=1.0)
    sub.add_parser("cluster", parents=[common], help="cluster one finger's joint positions")
    su = sub.add_parser("suite", parents=[common], help="repeat scenarios and tabulate errors")
    su.add_argument("--repetitions", type=int, default=50)
    sub.add_parser("report", parents=[common], help="redraw report and plot from an existing output directory")
    return parser


def sampler_config(args) -> SamplerConfig:
    return SamplerConfig(
        strategy=Strategy(args.strategy),
        epsilon_f=args.epsilon_f,
        epsilon_len=args.epsilon_len,
        max_attempts=args.max_attempts,
        target_count=args.count,
        seed=args.seed,
    )


def _pick_finger(scene, finger_id):
    if finger_id is None:
        return scene.fingers[0]
    for f in scene.fingers:
        if f.id == finger_id:
            return f
    raise UsageError(f"scenario has no finger {finger_id}")


def _with_angles(finger, sol):
    try:
        return replace(sol, angles={m: recover_all(finger, sol, m) for m in AngleMethod})
    except HandPlanError as exc:
        log.warning("finger %s: joint values not recovered: %s", finger.id, exc)
        return sol


def _outlines(spec: ScenarioSpec, scene, target=None):
    out = [(spec.shape.outline(scene.object0), "initial")]
    if target is not None and target != scene.object0:
        out.append((spec.shape.outline(target), "target"))
    return out


def _summary(spec, lines) -> str:
    return "\n".join([f"scenario: {spec.name}", *lines]) + "\n"


def cmd_solve(args, spec: ScenarioSpec) -> Bundle:
    scene, task = build_scenario(spec)
    mode = ContactUpdateMode(args.contact_mode)
    config = sampler_config(args)
    rows, lines = [], []
    drawing = Drawing(outlines=_outlines(spec, scene), initial_chains=[f.points0 for f in scene.fingers])
    for i, f in enumerate(scene.fingers):
        ct = contact_target(f, scene.object0, task, mode)
        res = sample_finger(f, ct, distance(ct, f.contact0), replace(config, seed=derive_seed(config.seed, i)))
        for j, sol in enumerate(res.solutions):
            rows.append(ConfigRow(0, j, _with_angles(f, sol)))
            drawing.cloud.append(sol.joints[2])
        lines.append(
            f"finger {f.id}: {len(res)} configurations, {res.stats.attempts} attempts, "
            f"rejections {res.stats.describe_rejections()}"
        )
    return Bundle(configurations=rows, drawing=drawing, report=_summary(spec, lines))


def plan_bundle(p: ManipulationPlan, spec: ScenarioSpec, metrics=None) -> Bundle:
    rows = []
    for sols, sel in zip(p.per_finger, p.selected):
        rows += [ConfigRow(0, j, s, j == sel) for j, s in enumerate(sols)]
    weights = []
    for kind, alloc, idx in (("min_cost", p.weights, None), ("selected", p.selected_weights, p.selected[0])):
        for f, c, g in zip(p.scene.fingers, alloc.costs, alloc.gammas):
            weights.append((kind, idx, f.id, c, g, alloc.gamma, alloc.delta_norm))
    for s, alloc in enumerate(p.sample_weights):
        for f, c, g in zip(p.scene.fingers, alloc.costs, alloc.gammas):
            weights.append(("configuration", s, f.id, c, g, alloc.gamma, alloc.delta_norm))
    drawing = Drawing(
        outlines=_outlines(spec, p.scene, p.target),
        initial_chains=[f.points0 for f in p.scene.fingers],
        cloud=[s.joints[2] for sols in p.per_finger for s in sols],
        selected_chains=[s.points for s in p.selected_solutions],
    )
    metrics = metrics or evaluate(p, spec)
    lines = [
        f"task: {_task_text(p.task)}  contact mode: {p.mode.value}",
        f"configurations: {p.configuration_count}  clusters: {p.clusters.k if p.clusters else 0}  "
        f"cluster space: {p.cluster_space}  selected: {p.selected[0]}",
        f"relative error: {metrics.relative_error:.6g}  kinematic success: {metrics.success}",
    ]
    if metrics.paper_angle_error is not None:
        lines.append(f"relative error with law-of-cosines joint values: {metrics.paper_angle_error:.6g}")
    for f, st, drop in zip(p.scene.fingers, p.stats, p.dropped):
        lines.append(
            f"finger {f.id}: {st.accepted} accepted / {st.attempts} attempts, "
            f"rejections {st.describe_rejections()}, dropped {drop}"
        )
    return Bundle(
        configurations=rows,
        weights=weights,
        clusters=p.clusters,
        drawing=drawing,
        report=_summary(spec, lines),
        trace=trace_rows(list(p.scene.fingers), p.scene.object0, p.task, p.selected_solutions, p.mode),
    )


def _task_text(task) -> str:
    if hasattr(task, "phi"):
        return f"roll {math.degrees(task.phi):.6g} deg"
    return f"translate ({task.delta.x:.6g}, {task.delta.y:.6g})"


def cmd_plan(args, spec):
    scene, task = build_scenario(spec)
    p = plan(scene, task, sampler_config(args), k=args.k, mode=ContactUpdateMode(args.contact_mode),
             cluster_space=args.cluster_space)
    return plan_bundle(p, spec), p.features


def cmd_sweep(args, spec):
    scene, _ = build_scenario(spec)
    finger = _pick_finger(scene, args.finger)
    tasks = rolling_family(args.sweep_max_deg, args.sweep_step_deg)
    cloud = workspace_sweep(finger, scene.object0, tasks, sampler_config(args), ContactUpdateMode(args.contact_mode))
    rows = [ConfigRow(k, j, _with_angles(finger, s)) for j, (k, s) in enumerate(cloud.entries)]
    total = cloud.total_stats()
    lines = [
        f"sweep: finger {finger.id}, {len(tasks)} rolls from {-args.sweep_max_deg:g} to {args.sweep_max_deg:g} deg",
        f"accepted configurations: {len(cloud)}",
        f"attempts: {total.attempts}  rejections: {total.describe_rejections()}",
    ]
    lines += [f"task {k}: {msg}" for k, msg in sorted(cloud.errors.items())]
    drawing = Drawing(
        outlines=_outlines(spec, scene),
        initial_chains=[finger.points0],
        cloud=[p for _, s in cloud.entries for p in s.joints[1:]],
    )
    log.info("sweep: %d configurations", len(cloud))
    if not cloud.entries:
        raise HandPlanError("sweep produced no configurations: " + "; ".join(cloud.errors.values()))
    return Bundle(configurations=rows, drawing=drawing, report=_summary(spec, lines)), None


def cmd_cluster(args, spec):
    scene, task = build_scenario(spec)
    finger = _pick_finger(scene, args.finger)
    ct = contact_target(finger, scene.object0, task, ContactUpdateMode(args.contact_mode))
    res = sample_finger(finger, ct, distance(ct, finger.contact0), sampler_config(args))
    feats = np.array([[s.joints[1].x, s.joints[1].y, s.joints[2].x, s.joints[2].y] for s in res], dtype=float)
    model = None
    if len(res) > 1:
        model = kmeans(feats, args.k, SeedMode.PLUS_PLUS, seed=derive_seed(args.seed, 1))
    rows = [ConfigRow(0, j, _with_angles(finger, s)) for j, s in enumerate(res)]
    lines = [f"finger {finger.id}: {len(res)} configurations clustered in joint space"]
    if model is not None:
        lines.append(f"k: {model.k}  inertia: {model.inertia:.6g}  iterations: {model.iterations}  "
                     f"sizes: {model.sizes().tolist()}")
    drawing = Drawing(outlines=_outlines(spec, scene), initial_chains=[finger.points0],
                      cloud=[s.joints[2] for s in res])
    return Bundle(configurations=rows, clusters=model, drawing=drawing, report=_summary(spec, lines)), feats


def cmd_suite(args, specs):
    mode = ContactUpdateMode(args.contact_mode)
    report = run_suite(specs, args.repetitions, args.seed, sampler_config(args), k=args.k, mode=mode)
    text = render_table(report)
    text += f"contact mode: {mode.value}\n"
    return Bundle(report=text), None


def cmd_report(args, spec):
    path = args.out / "configurations.csv"
    if not path.is_file():
        raise UsageError(f"{path}: run solve/plan/sweep/cluster first")
    rows = read_configurations(path)
    scene, task = build_scenario(spec)
    by_finger = {f.id: f for f in scene.fingers}
    lines = [f"configurations read: {len(rows)}"]
    selected = [r for r in rows if r.selected]
    for fid in sorted({r.solution.finger_id for r in rows}):
        n = sum(1 for r in rows if r.solution.finger_id == fid)
        costs = [r.solution.cost for r in rows if r.solution.finger_id == fid]
        lines.append(f"finger {fid}: {n} configurations, cost range {min(costs):.6g}..{max(costs):.6g}")
    if selected and not is_identity(task):
        chosen = {r.solution.finger_id: r.solution for r in selected}
        fingers = [by_finger[i] for i in sorted(chosen)]
        err = motion_error(task, scene.object0.position, [f.contact0 for f in fingers],
                              [chosen[f.id].contact for f in fingers])[0]
        lines.append(f"relative error of selected configuration: {err:.6g}")
    drawing = Drawing(
        outlines=_outlines(spec, scene),
        initial_chains=[f.points0 for f in scene.fingers],
        cloud=[r.solution.joints[2] for r in rows],
        selected_chains=[r.solution.points for r in selected],
    )
    return Bundle(drawing=drawing, report=_summary(spec, lines)), None


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s: %(message)s", stream=sys.stderr
    )
    try:
        files = resolve(args.scenario)
        args.out.mkdir(parents=True, exist_ok=True)
        if args.command == "suite":
            specs = [parse_scenario(f) for f in files]
            bundle, feats = cmd_suite(args, specs)
        else:
            if len(files) != 1:
                raise UsageError(f"{args.command} takes a single scenario, got {len(files)}")
            spec = parse_scenario(files[0])
            handler = {"solve": lambda a, s: (cmd_solve(a, s), None), "plan": cmd_plan, "sweep": cmd_sweep,
                       "cluster": cmd_cluster, "report": cmd_report}[args.command]
            bundle, feats = handler(args, spec)
        only = ("report.txt", "workspace.svg") if args.command == "report" else None
        manifest = emit_bundle(bundle, args.out, feats, only=only)
    except (UsageError, ScenarioFileError, FileNotFoundError, NotADirectoryError) as exc:
        print(f"handplan: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HandPlanError, OSError) as exc:
        print(f"handplan: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        # bad option values rejected by the config constructors
        print(f"handplan: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for path, size in manifest:
        print(f"{path}\t{size}")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
