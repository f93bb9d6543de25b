"""Command line entry points: map/task generation, rollouts, evaluation,
rendering, and the protocol service."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .env import EnvConfig, LayoutEnv, export_trajectory, rollout
from .errors import PlotmapError
from .solvers import PolicySpec, evaluate_policy, make_policy
from .taskgen import TaskGenConfig, generate_dataset, load_dataset
from .worldgen import MapGenConfig, generate_map, load_map, save_map
from .worldgen.raster import save_png


def _out_root(path: str | None) -> Path:
    if path:
        return Path(path)
    return Path(os.environ.get("PLOTMAP_DATA_DIR", "."))


def _derived_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _load_worlds(maps_dir: str) -> dict:
    worlds = {}
    for path in sorted(Path(maps_dir).glob("*.json")):
        if path.name.endswith(".histogram.json"):
            continue
        world = load_map(path)
        worlds[world.map_id] = world
    return worlds


def cmd_gen_maps(args) -> int:
    out = _out_root(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        cfg = MapGenConfig(
            seed=_derived_seed(args.seed, i),
            cell_count=args.cells,
            water_edge_ratio=args.water_ratio,
            lake_seed_count=args.lakes,
            river_count=args.rivers,
            lloyd_iterations=args.lloyd,
            raster_size=args.raster_size,
        )
        world = generate_map(cfg)
        save_map(world, out / f"map_{i:03d}.json")
    print(f"wrote {args.count} maps to {out}")
    return 0


def cmd_gen_tasks(args) -> int:
    worlds = list(_load_worlds(args.maps).values())
    cfg = TaskGenConfig(
        facility_count=args.facilities,
        min_constraints=args.min_constraints,
        max_constraints=args.max_constraints,
        seed=args.seed,
        balance_sampling=args.balance,
    )
    out = _out_root(None) / args.out if not Path(args.out).is_absolute() else Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    tasks = generate_dataset(worlds, cfg, args.count, out_path=out)
    print(f"wrote {len(tasks)} tasks to {out}")
    return 0


def cmd_rollout(args) -> int:
    worlds = _load_worlds(args.maps)
    tasks = load_dataset(args.tasks)
    if not (0 <= args.index < len(tasks)):
        raise PlotmapError(f"task index {args.index} out of range")
    task = tasks[args.index]
    world = worlds[task.map_ref]
    env = LayoutEnv(task, world, EnvConfig(movement_mode=args.mode))
    policy = make_policy(PolicySpec(kind=args.policy), args.mode)
    traj = rollout(policy, env, np.random.default_rng(args.seed))
    out = _out_root(None) / args.out if not Path(args.out).is_absolute() else Path(args.out)
    export_trajectory(traj, out, png_path=args.png, world=world)
    print(f"success={traj.success} steps={traj.steps} -> {out}")
    return 0


def cmd_evaluate(args) -> int:
    worlds = _load_worlds(args.maps)
    tasks = load_dataset(args.tasks)
    report = evaluate_policy(
        PolicySpec(kind=args.policy),
        tasks,
        worlds,
        rollouts=args.rollouts,
        seed=args.seed,
        env_config=EnvConfig(movement_mode=args.mode),
    )
    out = _out_root(None) / args.out if not Path(args.out).is_absolute() else Path(args.out)
    report.save(out, csv_path=args.csv)
    print(f"success rate {report.success_rate:.3f} "
          f"[{report.ci_low:.3f}, {report.ci_high:.3f}] -> {out}")
    return 0


def cmd_render(args) -> int:
    world = load_map(args.map)
    save_png(np.asarray(world.raster), args.out)
    print(f"rendered {args.map} -> {args.out}")
    return 0


def cmd_serve(args) -> int:
    from .server import run_server
    run_server(transport=args.transport, tcp_port=args.tcp_port,
               http_port=args.http_port, static_dir=args.static, host=args.host,
               default_seed=args.seed)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotmap")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-maps", help="generate terrain maps (JSON + PNG)")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--cells", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--water-ratio", type=float, default=0.35)
    p.add_argument("--lakes", type=int, default=3)
    p.add_argument("--rivers", type=int, default=4)
    p.add_argument("--lloyd", type=int, default=2)
    p.add_argument("--raster-size", type=int, default=42)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen_maps)

    p = sub.add_parser("gen-tasks", help="generate a task dataset (JSONL)")
    p.add_argument("--maps", required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--facilities", type=int, default=10)
    p.add_argument("--min-constraints", type=int, default=3)
    p.add_argument("--max-constraints", type=int, default=10)
    p.add_argument("--balance", action="store_true")
    p.add_argument("--out", default="tasks.jsonl")
    p.set_defaults(func=cmd_gen_tasks)

    p = sub.add_parser("rollout", help="run one episode and export the trails")
    p.add_argument("--tasks", required=True)
    p.add_argument("--maps", required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--policy", choices=["random", "greedy"], default="random")
    p.add_argument("--mode", default="simulated_concurrent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="trajectory.json")
    p.add_argument("--png", default=None)
    p.set_defaults(func=cmd_rollout)

    p = sub.add_parser("evaluate", help="success rates over many rollouts")
    p.add_argument("--tasks", required=True)
    p.add_argument("--maps", required=True)
    p.add_argument("--policy", choices=["random", "greedy"], default="random")
    p.add_argument("--mode", default="simulated_concurrent")
    p.add_argument("--rollouts", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="eval.json")
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("render", help="rasterize a map JSON to PNG")
    p.add_argument("--map", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0,
                   help="accepted for uniformity; rendering is seed-free")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="start the protocol service")
    p.add_argument("--transport", choices=["both", "tcp", "ws", "stdio"], default="both")
    p.add_argument("--tcp-port", type=int, default=7411)
    p.add_argument("--http-port", type=int, default=7412)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", default=None)
    p.add_argument("--seed", type=int, default=0,
                   help="session entropy for reset requests without a seed")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PlotmapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
