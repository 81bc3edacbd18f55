"""Command-line entry: ``python -m railmarket {run,serve} ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import RailMarketError
from .harness import RunConfig, run
from .scenario import resolve_scenario
from .server import ProtocolServer, serve_stdio


def _add_mode_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--discrete", action="store_true",
                       help="11-level discrete action space")
    group.add_argument("--continuous", action="store_true",
                       help="continuous alpha in [-1, 1] (default)")


def _parse_seeds(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be comma-separated integers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="railmarket")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run seeded batches of episodes")
    run_p.add_argument("--scenario", required=True,
                       help="preset name (business, business_student) or path to a scenario file")
    run_p.add_argument("--policy", default="random",
                       help="random | scripted:<file> | tabular-q")
    run_p.add_argument("--seeds", type=_parse_seeds, default=(0,),
                       help="comma-separated base seeds, e.g. 0,43,71")
    run_p.add_argument("--episodes", type=int, default=None,
                       help="episodes per base seed (default: 10000 in eval mode, 1 in train)")
    run_p.add_argument("--parallel", type=int, default=1,
                       help="parallel environment instances per base seed")
    run_p.add_argument("--mode", choices=("train", "eval"), default="eval")
    run_p.add_argument("--out-dir", type=Path, default=None,
                       help="directory for results.jsonl / summary.json / manifest.json")
    run_p.add_argument("--workers", type=int, default=None,
                       help="execution threads (default: --parallel); results are identical either way")
    _add_mode_flags(run_p)

    serve_p = sub.add_parser("serve", help="expose environments over the line-JSON protocol")
    serve_p.add_argument("--scenario", required=True)
    transport = serve_p.add_mutually_exclusive_group(required=True)
    transport.add_argument("--port", type=int, help="listen on TCP port (0 = ephemeral)")
    transport.add_argument("--stdio", action="store_true", help="single session on stdin/stdout")
    serve_p.add_argument("--host", default="127.0.0.1")
    _add_mode_flags(serve_p)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    action_mode = "discrete" if args.discrete else "continuous"
    try:
        scenario = resolve_scenario(args.scenario)
        if args.command == "run":
            episodes = args.episodes
            if episodes is None:
                episodes = 10_000 if args.mode == "eval" else 1
            config = RunConfig(
                scenario=scenario, policy=args.policy, seeds=args.seeds,
                episodes=episodes, parallel_instances=args.parallel,
                mode=args.mode, action_mode=action_mode,
                out_dir=args.out_dir, workers=args.workers)
            result = run(config)
            total = result.summary["aggregate"]["total_profit_all_agents"]
            print(f"{scenario.name}: total profit {total['mean']:.2f} +/- {total['sd']:.2f} "
                  f"over {len(args.seeds)} seed(s) x {episodes} episode(s)")
            if args.out_dir is not None:
                print(f"reports written to {args.out_dir}")
            return 0
        if args.command == "serve":
            if args.stdio:
                serve_stdio(scenario, action_mode)
                return 0
            server = ProtocolServer(scenario, host=args.host, port=args.port,
                                    action_mode=action_mode)
            host, port = server.address
            print(f"listening on {host}:{port}", flush=True)
            try:
                server.serve_forever()
            except KeyboardInterrupt:
                server.shutdown()
            return 0
    except RailMarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
