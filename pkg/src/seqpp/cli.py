"""Command-line interface: simulate, factorise, validate, stats.

Exit codes: 0 success, 1 validation checks failed, 2 configuration or
usage error, 3 model-contract violation, 4 budget/capacity exceeded.
All outputs are byte-identical for identical (config, seed, version).
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from pathlib import Path

from . import __version__
from .errors import (
    ArgumentError,
    CapacityError,
    ConfigError,
    ModelContractError,
    SeqppError,
)
from .factorisation import build_interaction_table, write_interaction_table_csv
from .geometry import EMPTY
from .marks import MarkDistribution
from .models.config import RunConfig, load_run_config, parse_initial
from .models.ssi import SSIModel, discretise_ssi
from .oracle import build_state_space, run_validation
from .samplers import BDConfig, MHConfig, bd_simulate, mh_run
from .samplers.events import write_state_csv

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG = 2
EXIT_CONTRACT = 3
EXIT_CAPACITY = 4


def _clean(v):
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats as text."""
    import numpy as np

    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        v = float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def _write_json(path: Path, data: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_clean(data), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _config_hash(raw: dict) -> str:
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _mark_levels_from(cfg: RunConfig):
    oracle = cfg.oracle or {}
    if "mark_levels" in oracle:
        return tuple((m, float(w)) for m, w in oracle["mark_levels"])
    marks: MarkDistribution = cfg.model.marks
    if marks.kind == "none":
        return ((None, 1.0),)
    if marks.kind == "radius" and marks.family == "point":
        return ((marks.params[0], 1.0),)
    if marks.kind == "label":
        weights = marks.weights or tuple(1.0 / len(marks.labels) for _ in marks.labels)
        return tuple(zip(marks.labels, weights))
    raise ConfigError(
        "oracle.mark_levels is required for continuous mark distributions"
    )


def _oracle_space(cfg: RunConfig):
    oracle = cfg.oracle
    if not oracle:
        raise ConfigError("this command needs an 'oracle' config section")
    if "cells" not in oracle or "n_max" not in oracle:
        raise ConfigError("oracle config needs 'cells' and 'n_max'")
    space = build_state_space(
        k=int(oracle["cells"]),
        marks=_mark_levels_from(cfg),
        n_max=int(oracle["n_max"]),
        window=cfg.model.window,
        budget=int(oracle.get("budget", 10**6)),
    )
    model = cfg.model
    if isinstance(model, SSIModel):
        model = discretise_ssi(model, space.cells, space.cell_measure)
    return model, space


def _sampler_config(cfg: RunConfig, seed: int, chain: int):
    spec = cfg.sampler
    if not spec:
        raise ConfigError("simulate needs a 'sampler' config section")
    spawn = (chain,) if cfg.chains > 1 else ()
    initial = (
        parse_initial(spec["initial"], "sampler.initial")
        if "initial" in spec
        else EMPTY
    )
    if spec["kind"] == "mh":
        if "steps" not in spec:
            raise ConfigError("mh sampler needs 'steps'")
        return MHConfig(
            steps=int(spec["steps"]),
            seed=seed,
            initial=initial,
            record_every=int(spec.get("record_every", 1)),
            spawn_key=spawn,
        )
    if "t_max" not in spec:
        raise ConfigError("bd sampler needs 't_max'")
    return BDConfig(
        t_max=float(spec["t_max"]),
        seed=seed,
        beta=float(spec["beta"]) if "beta" in spec else None,
        n_cap=int(spec["n_cap"]) if "n_cap" in spec else None,
        epoch_dt=float(spec.get("epoch_dt", 0.25)),
        initial=initial,
        spawn_key=spawn,
    )


def _ssi_jammed(model, final) -> bool | None:
    if not isinstance(model, SSIModel):
        return None
    if len(final) >= model.n_max:
        return False
    return model.admissible_integral(final.points) <= 0.0


def cmd_simulate(cfg: RunConfig, out: Path, quiet: bool) -> int:
    out.mkdir(parents=True, exist_ok=True)
    summaries = []
    for chain in range(cfg.chains):
        run_cfg = _sampler_config(cfg, cfg.seed, chain)
        if isinstance(run_cfg, MHConfig):
            trace = mh_run(cfg.model, run_cfg)
        else:
            trace = bd_simulate(cfg.model, run_cfg)
        suffix = f"_chain{chain}" if cfg.chains > 1 else ""
        trace.write_csv(out / f"trace{suffix}.csv")
        write_state_csv(trace.final, out / f"final_state{suffix}.csv")
        summary = {
            "chain": chain,
            "events": trace.n_events,
            "final_n": len(trace.final),
            "mean_count": trace.mean_count(),
            "count_histogram": {str(k): v for k, v in trace.count_histogram().items()},
            "acceptance_rate": trace.acceptance_rate(),
            "truncated": bool(trace.meta.get("truncated", False)),
        }
        jammed = _ssi_jammed(cfg.model, trace.final)
        if jammed is not None:
            summary["jammed_below_cap"] = jammed
        summary["rng"] = trace.meta["rng"]
        summary["stream"] = trace.meta["stream"]
        summaries.append(summary)
        if not quiet:
            print(
                f"chain {chain}: {trace.n_events} events, final n = {len(trace.final)}"
            )
    meta = {
        "version": __version__,
        "command": "simulate",
        "seed": cfg.seed,
        "chains": cfg.chains,
        "config": cfg.raw,
        "config_sha256": _config_hash(cfg.raw),
        "summary": summaries,
    }
    _write_json(out / "meta.json", meta)
    return EXIT_OK


def cmd_validate(cfg: RunConfig, out: Path, quiet: bool) -> int:
    model, space = _oracle_space(cfg)
    oracle = cfg.oracle or {}
    report = run_validation(
        model,
        space,
        mh_steps=int(oracle.get("mh_steps", 1_000_000)),
        bd_t_max=float(oracle.get("bd_t_max", 10_000.0)),
        seed=cfg.seed,
    )
    out.mkdir(parents=True, exist_ok=True)
    report["version"] = __version__
    report["config_sha256"] = _config_hash(cfg.raw)
    _write_json(out / "report.json", report)
    if not quiet:
        for name, ok in report["checks"].items():
            print(f"{name}: {'pass' if ok else 'FAIL'}")
    return EXIT_OK if report["passed"] else EXIT_CHECKS_FAILED


def cmd_factorise(cfg: RunConfig, out: Path, quiet: bool) -> int:
    model, space = _oracle_space(cfg)
    oracle = cfg.oracle or {}
    max_size = int(oracle.get("max_set_size", max(space.n_max - 1, 0)))
    table = build_interaction_table(model, space.points(), max_size=max_size)
    out.mkdir(parents=True, exist_ok=True)
    write_interaction_table_csv(table, out / "factorisation.csv")
    if not quiet:
        print(f"{len(table)} interaction entries written")
    return EXIT_OK


def cmd_stats(cfg: RunConfig, out: Path, quiet: bool) -> int:
    traces = sorted(out.glob("trace.csv")) + sorted(out.glob("trace_chain*.csv"))
    if not traces:
        raise ConfigError(f"no trace files under {out}")
    counts: dict[int, int] = {}
    accepted = {"birth": 0, "death": 0, "idle": 0}
    proposed = {"birth": 0, "death": 0, "idle": 0}
    rows = 0
    for trace_path in traces:
        with open(trace_path) as fh:
            for row in csv.DictReader(fh):
                rows += 1
                n_after = int(row["n_after"])
                counts[n_after] = counts.get(n_after, 0) + 1
                proposed[row["event"]] += 1
                if row["accepted"] == "1":
                    accepted[row["event"]] += 1
    if rows == 0:
        raise ConfigError(f"{traces[0]} holds no events")
    mean = sum(k * v for k, v in counts.items()) / rows
    stats = {
        "version": __version__,
        "command": "stats",
        "traces": len(traces),
        "events": rows,
        "mean_count": mean,
        "count_histogram": {str(k): counts[k] for k in sorted(counts)},
        "acceptance": {
            k: (accepted[k] / proposed[k] if proposed[k] else None) for k in proposed
        },
    }
    _write_json(out / "stats.json", stats)
    if not quiet:
        print(f"{rows} events, mean count {mean:.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqpp",
        description="Sequential spatial point processes: simulate, factorise, validate.",
    )
    parser.add_argument("command", choices=["simulate", "factorise", "validate", "stats"])
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--output", default=None, help="override the output directory")
    parser.add_argument("--chains", type=int, default=None, help="independent chains to run")
    parser.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = load_run_config(args.config)
        if args.seed is not None or args.chains is not None:
            from dataclasses import replace

            seed = args.seed if args.seed is not None else cfg.seed
            chains = args.chains if args.chains is not None else cfg.chains
            # bake overrides into the echoed config so meta.json reruns
            # reproduce this run, not the file on disk
            cfg = replace(
                cfg,
                seed=seed,
                chains=chains,
                raw={**cfg.raw, "seed": seed, "chains": chains},
            )
        out = Path(args.output) if args.output else Path(cfg.output_dir)
        handler = {
            "simulate": cmd_simulate,
            "validate": cmd_validate,
            "factorise": cmd_factorise,
            "stats": cmd_stats,
        }[args.command]
        return handler(cfg, out, args.quiet)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ModelContractError, ArgumentError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except SeqppError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
