"""Command-line front end.

    crowdrec ingest    --data DIR
    crowdrec profile   --data DIR [--cutoff DATE] [--out DIR]
    crowdrec recommend --data DIR --cutoff DATE --out DIR
    crowdrec quadrant  --data DIR --cutoff DATE [--out DIR] [--worker ID]
    crowdrec synth     --seed N --out DIR [--n-workers ...]
    crowdrec oracle    --data DIR --cutoff DATE [--out DIR]
    crowdrec eval      --run DIR (--actual CSV | --against-self | --data DIR --cutoff DATE)

Settings come from ``--config FILE`` (``key = value`` lines) and are
overridden by flags. Exit codes: 0 success, 1 I/O, 2 validation, 3 config.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import logging
import sys
from dataclasses import dataclass, fields
from datetime import date
from pathlib import Path

from .evaluation import EmptyReportError, mre, write_errors_csv
from .ingestion import Dataset, DatasetError, load_dataset, write_dataset
from .oracle import OracleScaleError, oracle_recommend
from .pipeline import PVS_MODES, dumps_jsonl, run_recommendation, run_records, window_counts, write_quadrant_csv, write_run
from .profile import build_profiles
from .recommender import ConfigError, RecommenderConfig
from .synth import synth_generate

_log = logging.getLogger("crowdrec")

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_CONFIG = 0, 1, 2, 3


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    data: str | None = None
    tasks: str | None = None
    registrations: str | None = None
    ratings: str | None = None
    cutoff: str | None = None
    horizon: int = 14
    alpha: float = 0.30
    beta: float = 0.30
    min_conditions: int = 3
    k: int = 3
    pvs_mode: str = "table"
    out: str | None = None
    seed: int = 0
    n_workers: int = 40
    n_tasks: int = 150
    n_techs: int = 8
    n_types: int = 4
    months: int = 4

    def recommender(self) -> RecommenderConfig:
        try:
            return RecommenderConfig(
                alpha=self.alpha, beta=self.beta, min_conditions=self.min_conditions, horizon_days=self.horizon
            )
        except ConfigError as e:
            raise CLIError(str(e), EXIT_CONFIG) from None

    def cutoff_date(self, required: bool = True) -> date | None:
        if self.cutoff is None:
            if required:
                raise CLIError("a cutoff date is required (--cutoff YYYY-MM-DD)", EXIT_CONFIG)
            return None
        try:
            return date.fromisoformat(str(self.cutoff))
        except ValueError:
            raise CLIError(f"cutoff {self.cutoff!r} is not an ISO date", EXIT_CONFIG) from None

    def dataset_paths(self) -> tuple[Path, Path, Path | None]:
        base = Path(self.data) if self.data else None
        tasks = Path(self.tasks) if self.tasks else (base / "tasks.csv" if base else None)
        regs = Path(self.registrations) if self.registrations else (base / "registrations.csv" if base else None)
        if tasks is None or regs is None:
            raise CLIError("dataset location required (--data DIR or --tasks/--registrations)", EXIT_CONFIG)
        ratings = Path(self.ratings) if self.ratings else None
        if ratings is None and base is not None and (base / "ratings.csv").exists():
            ratings = base / "ratings.csv"
        return tasks, regs, ratings


_CONFIG_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, value):
    kind = _CONFIG_TYPES[name]
    try:
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
    except ValueError:
        raise CLIError(f"config key {name!r}: cannot parse {value!r}", EXIT_CONFIG) from None
    return value


def read_config_file(path: str | Path) -> dict:
    """Parse ``key = value`` lines; section headers are allowed and ignored."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CLIError(f"cannot read config {path}: {e.strerror}", EXIT_IO) from None
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string("[__top__]\n" + text)
    except configparser.Error as e:
        raise CLIError(f"malformed config {path}: {e}", EXIT_CONFIG) from None
    values = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            name = key.replace("-", "_")
            if name not in _CONFIG_TYPES:
                raise CLIError(f"unknown config key {key!r} in {path}", EXIT_CONFIG)
            values[name] = _coerce(name, value.strip())
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        values.update(read_config_file(args.config))
    for name in _CONFIG_TYPES:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    cfg = RunConfig(**values)
    if cfg.pvs_mode not in PVS_MODES:
        raise CLIError(f"pvs_mode must be one of {PVS_MODES}", EXIT_CONFIG)
    if cfg.k < 1:
        raise CLIError("k must be positive", EXIT_CONFIG)
    return cfg


def _load(cfg: RunConfig) -> Dataset:
    tasks, regs, ratings = cfg.dataset_paths()
    for p in (tasks, regs, ratings):
        if p is not None and not p.exists():
            raise CLIError(f"no such file: {p}", EXIT_IO)
    try:
        return load_dataset(tasks, regs, ratings)
    except DatasetError as e:
        raise CLIError(str(e), EXIT_VALIDATION) from None
    except OSError as e:
        raise CLIError(f"cannot read {e.filename}: {e.strerror}", EXIT_IO) from None


def _out_dir(cfg: RunConfig, required: bool = True) -> Path | None:
    if cfg.out is None:
        if required:
            raise CLIError("an output directory is required (--out DIR)", EXIT_CONFIG)
        return None
    d = Path(cfg.out)
    d.mkdir(parents=True, exist_ok=True)
    return d


# -- commands ---------------------------------------------------------------


def cmd_ingest(cfg: RunConfig, args) -> int:
    ds = _load(cfg)
    print(f"tasks={len(ds.tasks)} registrations={len(ds.registrations)} workers={len(ds.workers)} ratings={len(ds.ratings)}")
    return EXIT_OK


def cmd_profile(cfg: RunConfig, args) -> int:
    ds = _load(cfg)
    cutoff = cfg.cutoff_date(required=False)
    history = ds.history_before(cutoff) if cutoff else ds
    text = dumps_jsonl(p.to_dict() for p in build_profiles(history).values())
    out = _out_dir(cfg, required=False)
    if out is None:
        sys.stdout.write(text)
    else:
        (out / "profiles.jsonl").write_text(text, encoding="utf-8")
        print(f"wrote {out / 'profiles.jsonl'}")
    return EXIT_OK


def cmd_recommend(cfg: RunConfig, args) -> int:
    ds = _load(cfg)
    out = _out_dir(cfg)
    run = run_recommendation(ds, cfg.cutoff_date(), cfg.recommender(), k=cfg.k, pvs_mode=cfg.pvs_mode)
    for w in run.warnings:
        print(f"warning: {w}", file=sys.stderr)
    write_run(run, out)
    manifest = {
        "cutoff": run.cutoff.isoformat(),
        "horizon_days": run.config.horizon_days,
        "alpha": run.config.alpha,
        "beta": run.config.beta,
        "min_conditions": run.config.min_conditions,
        "k": run.k,
        "pvs_mode": run.pvs_mode,
        "p_vs": run.p_vs,
        "workers": run.workers,
        "excluded_workers": run.excluded_workers,
        "degenerate_tasks": run.degenerate_tasks,
        "actual_counts": run.actual_counts,
        "warnings": run.warnings,
    }
    (out / "run.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    ev = run.evaluation
    print(
        f"workers={ev.workers_total} with_recommendations={ev.workers_with_recommendations} "
        f"recommendations={len(run.recommendations)} mre={ev.mre}"
    )
    return EXIT_OK


def cmd_quadrant(cfg: RunConfig, args) -> int:
    ds = _load(cfg)
    run = run_recommendation(ds, cfg.cutoff_date(), cfg.recommender(), k=cfg.k, pvs_mode=cfg.pvs_mode)
    recs = [r for r in run.recommendations if args.worker is None or r.worker_id == args.worker]
    out = _out_dir(cfg, required=False)
    if out is None:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["worker_id", "task_id", "norm_proficiency", "norm_specialty", "label"])
        for r in recs:
            w.writerow([r.worker_id, r.task_id, repr(r.norm_proficiency), repr(r.norm_specialty), r.label])
    else:
        print(f"wrote {write_quadrant_csv(recs, out / 'quadrant.csv')}")
    return EXIT_OK


def cmd_synth(cfg: RunConfig, args) -> int:
    out = _out_dir(cfg)
    try:
        ds = synth_generate(cfg.seed, cfg.n_workers, cfg.n_tasks, cfg.n_techs, cfg.n_types, cfg.months)
    except ValueError as e:
        raise CLIError(str(e), EXIT_CONFIG) from None
    write_dataset(ds, out)
    print(f"seed={cfg.seed} tasks={len(ds.tasks)} registrations={len(ds.registrations)} workers={len(ds.ratings)} -> {out}")
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, args) -> int:
    ds = _load(cfg)
    cutoff, rcfg = cfg.cutoff_date(), cfg.recommender()
    try:
        expected = oracle_recommend(ds, rcfg, cutoff, k=cfg.k, pvs_mode=cfg.pvs_mode)
    except OracleScaleError as e:
        raise CLIError(str(e), EXIT_VALIDATION) from None
    actual = run_records(run_recommendation(ds, cutoff, rcfg, k=cfg.k, pvs_mode=cfg.pvs_mode))
    oracle_text = dumps_jsonl(expected["recommendations"])
    engine_text = dumps_jsonl(actual["recommendations"])
    out = _out_dir(cfg, required=False)
    if out is not None:
        (out / "oracle_recommendations.jsonl").write_text(oracle_text, encoding="utf-8")
        (out / "engine_recommendations.jsonl").write_text(engine_text, encoding="utf-8")
    diff = [key for key in expected if expected[key] != actual[key]]
    if diff:
        print(f"oracle and engine differ in: {', '.join(diff)}")
        return EXIT_VALIDATION
    print(f"oracle and engine agree: {len(expected['recommendations'])} recommendations, {len(expected['top'])} top-k rows")
    return EXIT_OK


def _read_counts(path: Path) -> dict[str, int]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as e:
        raise CLIError(f"cannot read {path}: {e.strerror}", EXIT_IO) from None
    try:
        return {row["worker_id"]: int(row["count"]) for row in rows}
    except (KeyError, ValueError) as e:
        raise CLIError(f"{path}: expected worker_id,count rows ({e})", EXIT_VALIDATION) from None


def cmd_eval(cfg: RunConfig, args) -> int:
    run_dir = Path(args.run)
    recs_path = run_dir / "recommendations.jsonl"
    try:
        lines = recs_path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise CLIError(f"cannot read {recs_path}: {e.strerror}", EXIT_IO) from None
    recommended: dict[str, int] = {}
    for line in lines:
        if line.strip():
            w = json.loads(line)["worker_id"]
            recommended[w] = recommended.get(w, 0) + 1
    manifest_path = run_dir / "run.json"
    if manifest_path.exists():
        for w in json.loads(manifest_path.read_text(encoding="utf-8")).get("workers", []):
            recommended.setdefault(w, 0)

    if args.against_self:
        actual = dict(recommended)
    elif args.actual:
        actual = _read_counts(Path(args.actual))
    else:
        ds = _load(cfg)
        actual = window_counts(ds, sorted(recommended), cfg.cutoff_date(), cfg.horizon)
    try:
        result = mre(actual, recommended)
    except EmptyReportError as e:
        raise CLIError(str(e), EXIT_VALIDATION) from None

    report = {
        "mre": result.mre,
        "aggregate_mre": result.aggregate_mre,
        "workers_scored": len(result.per_worker_errors),
        "excluded_from_mre": result.excluded,
        "per_worker_errors": result.per_worker_errors,
    }
    out = _out_dir(cfg, required=False)
    if out is not None:
        (out / "mre.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        write_errors_csv(result.per_worker_errors, out / "per_worker_errors.csv")
    print(f"MRE {result.mre} (aggregate {result.aggregate_mre}) over {len(result.per_worker_errors)} workers")
    return EXIT_OK


COMMANDS = {
    "ingest": cmd_ingest,
    "profile": cmd_profile,
    "recommend": cmd_recommend,
    "quadrant": cmd_quadrant,
    "synth": cmd_synth,
    "oracle": cmd_oracle,
    "eval": cmd_eval,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run settings")
    g.add_argument("--config", help="key = value settings file; flags override it")
    g.add_argument("--data", help="directory holding tasks.csv, registrations.csv, ratings.csv")
    g.add_argument("--tasks")
    g.add_argument("--registrations")
    g.add_argument("--ratings")
    g.add_argument("--out")
    g.add_argument("--cutoff", help="first day of the recommendation window (YYYY-MM-DD)")
    g.add_argument("--horizon", type=int, help="window length in days (default 14)")
    g.add_argument("--alpha", type=float, help="proficiency threshold (default 0.30)")
    g.add_argument("--beta", type=float, help="specialty threshold (default 0.30)")
    g.add_argument("--min-conditions", dest="min_conditions", type=int, help="conditions a task must meet (default 3)")
    g.add_argument("--k", type=int, help="suggestions per worker (default 3)")
    g.add_argument("--pvs-mode", dest="pvs_mode", choices=PVS_MODES)
    g.add_argument("--seed", type=int)
    g.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="crowdrec", description="Market-aware task recommendation for crowd workers.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("ingest", "profile", "recommend", "oracle"):
        sub.add_parser(name, parents=[common])
    q = sub.add_parser("quadrant", parents=[common])
    q.add_argument("--worker", help="restrict output to one worker")
    s = sub.add_parser("synth", parents=[common])
    s.add_argument("--n-workers", dest="n_workers", type=int)
    s.add_argument("--n-tasks", dest="n_tasks", type=int)
    s.add_argument("--n-techs", dest="n_techs", type=int)
    s.add_argument("--n-types", dest="n_types", type=int)
    s.add_argument("--months", type=int)
    e = sub.add_parser("eval", parents=[common])
    e.add_argument("--run", required=True, help="output directory of a recommend run")
    e.add_argument("--actual", help="CSV of worker_id,count actual registrations")
    e.add_argument("--against-self", action="store_true", help="score the run against its own recommendation counts")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg, args)
    except CLIError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
