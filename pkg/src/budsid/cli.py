"""Command-line front: run ops in-process, or proxy them to a running server.

Seed precedence: --seed flag, then BUDSID_SEED, then a `seed` config entry,
then 0. Other training knobs follow flag-over-config the same way.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from .harness.config import parse_config, resolve_seed
from .service import ops

_OPS: dict[str, Callable[..., dict]] = {
    "gen": ops.op_gen,
    "train": ops.op_train,
    "eval": ops.op_eval,
    "sweep": ops.op_sweep,
    "quantize": ops.op_quantize,
    "bench": ops.op_bench,
}


def _add_common(sub: argparse.ArgumentParser, *, seeded: bool = True) -> None:
    sub.add_argument("--config", help="key = value config file")
    sub.add_argument("--server", help="base URL of a running service; POST instead of running locally")
    if seeded:
        sub.add_argument("--seed", type=int, default=None)


def _add_train_knobs(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--epochs", type=int, default=None)
    sub.add_argument("--batch-size", type=int, default=None)
    sub.add_argument("--learning-rate", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="budsid",
        description="Synthetic ring-magnet tap lab: data generation, training, evaluation.",
    )
    commands = parser.add_subparsers(dest="command")

    gen = commands.add_parser("gen", help="simulate a dataset to a directory")
    gen.add_argument("--kind", choices=("single", "double"), required=True)
    gen.add_argument("--out", required=True, help="output dataset directory")
    gen.add_argument("--participants", type=int, default=None)
    gen.add_argument("--reps", type=int, default=None)
    _add_common(gen)

    train = commands.add_parser("train", help="train one model and write its file")
    train.add_argument("--dataset", required=True)
    train.add_argument("--model", choices=("cnn", "svm"), required=True)
    train.add_argument("--out", required=True, help="model file to write")
    _add_train_knobs(train)
    train.add_argument("--folds", type=int, default=None)
    train.add_argument("--n-before", type=int, default=None)
    train.add_argument("--n-after", type=int, default=None)
    _add_common(train)

    ev = commands.add_parser("eval", help="run an evaluation regime and write reports")
    ev.add_argument("--dataset", required=True)
    ev.add_argument("--regime", choices=("general", "individual", "loocv"), required=True)
    ev.add_argument("--out", required=True, help="report output directory")
    ev.add_argument("--models", default="cnn,svm", help="comma-separated: cnn,svm")
    _add_train_knobs(ev)
    ev.add_argument("--folds", type=int, default=None)
    ev.add_argument("--posture", choices=("sit", "stand", "walk"), default=None)
    ev.add_argument("--hand", choices=("left", "right"), default=None)
    _add_common(ev)

    sweep = commands.add_parser("sweep", help="window-length sweep, CNN accuracy per config")
    sweep.add_argument("--dataset", required=True)
    sweep.add_argument("--out", required=True, help="directory for sweep.csv")
    _add_train_knobs(sweep)
    _add_common(sweep)

    quant = commands.add_parser("quantize", help="int8-quantize a float CNN model file")
    quant.add_argument("--model", required=True)
    quant.add_argument("--out", required=True)
    _add_common(quant, seeded=False)

    bench = commands.add_parser("bench", help="time preprocess and predict stages")
    bench.add_argument("--model", required=True)
    bench.add_argument("--n-runs", type=int, default=200)
    _add_common(bench)

    serve = commands.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def _knob(args: argparse.Namespace, entries: dict[str, str], key: str, cast):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in entries:
        return cast(entries[key])
    return None


def _payload(args: argparse.Namespace) -> dict:
    entries = parse_config(args.config) if getattr(args, "config", None) else {}
    seed = resolve_seed(getattr(args, "seed", None), entries)
    if args.command == "gen":
        return {
            "kind": args.kind,
            "out_dir": args.out,
            "participants": args.participants,
            "reps": args.reps,
            "seed": seed,
        }
    if args.command == "train":
        return {
            "dataset": args.dataset,
            "model": args.model,
            "out": args.out,
            "seed": seed,
            "epochs": _knob(args, entries, "epochs", int),
            "batch_size": _knob(args, entries, "batch_size", int),
            "learning_rate": _knob(args, entries, "learning_rate", float),
            "folds": _knob(args, entries, "folds", int),
            "n_before": args.n_before,
            "n_after": args.n_after,
        }
    if args.command == "eval":
        return {
            "dataset": args.dataset,
            "regime": args.regime,
            "out_dir": args.out,
            "models": [m.strip() for m in args.models.split(",") if m.strip()],
            "seed": seed,
            "epochs": _knob(args, entries, "epochs", int),
            "batch_size": _knob(args, entries, "batch_size", int),
            "learning_rate": _knob(args, entries, "learning_rate", float),
            "folds": _knob(args, entries, "folds", int),
            "posture": args.posture,
            "hand": args.hand,
        }
    if args.command == "sweep":
        return {
            "dataset": args.dataset,
            "out_dir": args.out,
            "seed": seed,
            "epochs": _knob(args, entries, "epochs", int),
            "batch_size": _knob(args, entries, "batch_size", int),
            "learning_rate": _knob(args, entries, "learning_rate", float),
        }
    if args.command == "quantize":
        return {"model": args.model, "out": args.out}
    if args.command == "bench":
        return {"model": args.model, "n_runs": args.n_runs, "seed": seed}
    raise AssertionError(f"no payload for {args.command}")


def _post(server: str, command: str, payload: dict) -> dict:
    import httpx

    with httpx.Client(base_url=server, timeout=3600.0) as client:
        response = client.post(f"/{command}", json=payload)
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise RuntimeError(f"server returned {response.status_code}: {detail}")
        return response.json()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0
    try:
        payload = _payload(args)
        if getattr(args, "server", None):
            result = _post(args.server, args.command, payload)
        else:
            result = _OPS[args.command](**payload)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
