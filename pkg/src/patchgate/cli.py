"""Command-line entry point: ``patchgate run | report | gate | validate``."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import analysis, corpus, gate, generation, oracle
from .errors import ConfigError, PatchgateError

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_INFRA = 2


@dataclass
class RunConfig:
    corpus_root: Path
    temperatures: tuple[float, ...]
    trials: int
    mode: str
    cassette_path: Path | None
    out_dir: Path
    workers: int
    timeout_ms: int
    low_threshold: float
    problems: tuple[str, ...] | None
    model_id: str
    base_url: str
    shim_path: Path | None

    def validate(self) -> None:
        if self.mode not in ("live", "record", "replay"):
            raise ConfigError(f"unknown mode: {self.mode}")
        if self.mode == "replay":
            if self.cassette_path is None or not self.cassette_path.exists():
                raise ConfigError("replay mode requires an existing --cassette file")
        if self.mode in ("record", "live") and not os.environ.get("PATCHGATE_API_KEY"):
            raise ConfigError("record/live modes require the PATCHGATE_API_KEY environment variable")
        if self.mode == "record" and self.cassette_path is None:
            raise ConfigError("record mode requires --cassette")


def _corpus_digest(problems) -> str:
    h = hashlib.sha256()
    for p in problems:
        h.update(
            json.dumps(
                {
                    "name": p.name,
                    "buggy": p.buggy_source,
                    "reference": p.reference_source,
                    "entry_point": p.entry_point,
                    "adapter": p.adapter,
                    "cases": [{"input": c.input, "expected": c.expected} for c in p.test_cases],
                },
                sort_keys=True,
            ).encode("utf-8")
        )
    return h.hexdigest()


def _make_provider(config: RunConfig):
    if config.mode == "replay":
        return generation.ReplayProvider(generation.Cassette(config.cassette_path))
    live = generation.HTTPProvider(config.base_url, os.environ["PATCHGATE_API_KEY"])
    if config.mode == "record":
        return generation.RecordingProvider(live, generation.Cassette(config.cassette_path))
    return live


def _make_executor(shim_path: Path | None) -> oracle.SubprocessExecutor:
    path = shim_path or oracle.find_default_shim()
    if path is None:
        raise PatchgateError(
            "sandbox shim not found; pass --shim or set PATCHGATE_SHIM"
        )
    return oracle.SubprocessExecutor(path)


def _temp_tag(t: float) -> str:
    return f"{t:g}"


def _outcome_to_dict(o: oracle.CaseOutcome) -> dict:
    return {"status": o.status.value, "value": o.value, "detail": o.detail}


def _write_artifacts(out_dir: Path, candidates, results) -> None:
    for c in candidates:
        code_dir = out_dir / "candidates" / c.problem_name
        code_dir.mkdir(parents=True, exist_ok=True)
        stem = f"T{_temp_tag(c.temperature)}_trial{c.trial_index}"
        (code_dir / f"{stem}.py").write_text(c.extracted_code + "\n", encoding="utf-8", newline="\n")
        (code_dir / f"{stem}.raw.txt").write_text(c.raw_response, encoding="utf-8", newline="\n")
    for r in results:
        trial_dir = out_dir / "trials" / r.problem
        trial_dir.mkdir(parents=True, exist_ok=True)
        record = {
            "problem": r.problem,
            "temperature": r.temperature,
            "trial_index": r.trial_index,
            "pass_all": r.pass_all,
            "outcomes": [_outcome_to_dict(o) for o in r.outcomes],
            "wall_time_ms": list(r.wall_time_ms),
        }
        path = trial_dir / f"T{_temp_tag(r.temperature)}_trial{r.trial_index}.json"
        path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n")


class _Lock:
    """Guards an output directory against concurrent runs."""

    def __init__(self, out_dir: Path) -> None:
        self.path = out_dir / ".patchgate.lock"

    def __enter__(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise PatchgateError(
                f"output directory is locked by another run: {self.path}"
            ) from None
        os.close(fd)
        return self

    def __exit__(self, *exc):
        self.path.unlink(missing_ok=True)


def cmd_run(config: RunConfig) -> int:
    config.validate()
    problems = corpus.load_corpus(config.corpus_root, config.problems)
    plan = generation.SamplingPlan(
        temperatures=config.temperatures,
        trials_per_temperature=config.trials,
        model_id=config.model_id,
    )
    provider = _make_provider(config)
    executor = _make_executor(config.shim_path)
    limits = oracle.Limits(timeout_ms=config.timeout_ms)

    started = datetime.now(timezone.utc).isoformat()
    with _Lock(config.out_dir):
        all_candidates: list[generation.PatchCandidate] = []
        for problem in problems:
            all_candidates.extend(generation.sample_patches(problem, plan, provider))

        by_name = {p.name: p for p in problems}
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(
                pool.map(
                    lambda c: oracle.evaluate_trial(c, by_name[c.problem_name], executor, limits),
                    all_candidates,
                )
            )
        results.sort(key=lambda r: (r.problem, r.temperature, r.trial_index))

        cassette_digest = (
            generation.Cassette(config.cassette_path).digest() if config.cassette_path else None
        )
        metadata = {
            "plan": {
                "temperatures": list(plan.temperatures),
                "trials_per_temperature": plan.trials_per_temperature,
                "model_id": plan.model_id,
            },
            "mode": config.mode,
            "timeout_ms": config.timeout_ms,
            "low_threshold": config.low_threshold,
            "corpus_digest": _corpus_digest(problems),
            "cassette_digest": cassette_digest,
        }
        report = analysis.build_report(
            analysis.build_stability_rows(all_candidates, config.low_threshold),
            analysis.build_oer_rows(results),
            metadata,
        )
        analysis.export_report(report, config.out_dir)
        analysis.emit_heatmap_svg(report, config.out_dir / "heatmap.svg")
        (config.out_dir / "boxplot.json").write_text(
            json.dumps(analysis.boxplot_data(report.stability_rows), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
            newline="\n",
        )
        _write_artifacts(config.out_dir, all_candidates, results)
        # wall-clock times live outside the deterministic report
        (config.out_dir / "run_meta.json").write_text(
            json.dumps(
                {"started_at": started, "finished_at": datetime.now(timezone.utc).isoformat()},
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )

    for t in sorted(report.general_oer):
        print(f"general_oer T={t:g}: {report.general_oer[t]:.4f}")
    print(f"report written to {config.out_dir}")
    return EXIT_OK


def cmd_validate(corpus_root: Path, problems, timeout_ms: int, shim_path: Path | None) -> int:
    problem_list = corpus.load_corpus(corpus_root, problems)
    executor = _make_executor(shim_path)
    limits = oracle.Limits(timeout_ms=timeout_ms)

    def runner(source, problem):
        return oracle.run_program(source, problem, executor, limits)

    all_valid = True
    for problem in problem_list:
        report = corpus.validate_problem(problem, runner)
        status = "ok" if report.valid else f"INVALID failing_cases={list(report.failing_cases)}"
        bug = "bug_detected" if report.bug_detected else "BUG NOT DETECTED"
        print(f"{problem.name}: {status}, {bug}")
        for warning in report.warnings:
            print(f"  warning: {warning}", file=sys.stderr)
        all_valid = all_valid and report.valid
    return EXIT_OK if all_valid else EXIT_REJECT


def _load_run_artifacts(results_dir: Path):
    """Rebuild candidates and trial results from a prior run's artifacts."""
    trials_root = results_dir / "trials"
    candidates_root = results_dir / "candidates"
    if not trials_root.is_dir() or not candidates_root.is_dir():
        raise PatchgateError(f"no run artifacts under {results_dir}")
    candidates: list[generation.PatchCandidate] = []
    results: list[oracle.TrialResult] = []
    for trial_path in sorted(trials_root.glob("*/*.json")):
        record = json.loads(trial_path.read_text(encoding="utf-8"))
        outcomes = tuple(
            oracle.CaseOutcome(
                status=oracle.OutcomeStatus(o["status"]), value=o["value"], detail=o["detail"]
            )
            for o in record["outcomes"]
        )
        results.append(
            oracle.TrialResult(
                problem=record["problem"],
                temperature=record["temperature"],
                trial_index=record["trial_index"],
                outcomes=outcomes,
                pass_all=record["pass_all"],
                wall_time_ms=tuple(record["wall_time_ms"]),
            )
        )
        stem = f"T{_temp_tag(record['temperature'])}_trial{record['trial_index']}"
        code_path = candidates_root / record["problem"] / f"{stem}.py"
        code = code_path.read_text(encoding="utf-8").rstrip("\n") if code_path.exists() else ""
        candidates.append(
            generation.PatchCandidate(
                problem_name=record["problem"],
                temperature=record["temperature"],
                trial_index=record["trial_index"],
                raw_response=code,
                extracted_code=code,
                cassette_key="",
            )
        )
    if not results:
        raise PatchgateError(f"no trial records under {trials_root}")
    return candidates, results


def cmd_gate(
    results_dir: Path,
    oer_threshold: float,
    tau: float,
    policy: str,
    problem_filter: str | None,
    temperature_filter: float | None,
) -> int:
    candidates, results = _load_run_artifacts(results_dir)

    groups: dict[tuple[str, float], tuple[list, list]] = {}
    for c in candidates:
        groups.setdefault((c.problem_name, c.temperature), ([], []))[0].append(c)
    for r in results:
        groups.setdefault((r.problem, r.temperature), ([], []))[1].append(r)

    selected_keys = [
        key
        for key in sorted(groups)
        if (problem_filter is None or key[0] == problem_filter)
        and (temperature_filter is None or key[1] == temperature_filter)
    ]
    if not selected_keys:
        raise PatchgateError("no matching (problem, temperature) groups to gate")

    gate_dir = results_dir / "gate"
    gate_dir.mkdir(parents=True, exist_ok=True)
    decisions = {}
    any_reject = False
    for problem_name, temperature in selected_keys:
        cand_group, result_group = groups[(problem_name, temperature)]
        decision = gate.decide(cand_group, result_group, oer_threshold, policy, tau)
        doc = gate.decision_to_json_dict(decision)
        decisions[f"{problem_name}@T{_temp_tag(temperature)}"] = doc
        print(
            f"{problem_name} T={temperature:g}: {decision.verdict.value}"
            + (f" ({'; '.join(decision.reasons)})" if decision.reasons else "")
        )
        if decision.verdict is gate.Verdict.ACCEPT:
            patch_path = gate_dir / f"{problem_name}_T{_temp_tag(temperature)}_selected.py"
            patch_path.write_text(
                decision.selected_patch.extracted_code + "\n", encoding="utf-8", newline="\n"
            )
            doc["selected_patch_file"] = str(patch_path)
        else:
            any_reject = True

    (gate_dir / "gate.json").write_text(
        json.dumps(decisions, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
    )
    return EXIT_REJECT if any_reject else EXIT_OK


def cmd_report(results_dir: Path, formats: tuple[str, ...], svg: bool) -> int:
    report_path = results_dir / "report.json"
    if not report_path.exists():
        raise PatchgateError(f"missing report: {report_path}")
    report = analysis.report_from_json_dict(json.loads(report_path.read_text(encoding="utf-8")))
    analysis.export_report(report, results_dir, formats)
    if svg:
        analysis.emit_heatmap_svg(report, results_dir / "heatmap.svg")
    print(f"re-exported {', '.join(formats)}{' + svg' if svg else ''} to {results_dir}")
    return EXIT_OK


def _parse_temps(raw: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in raw.split(",") if x.strip() != "")
    except ValueError:
        raise ConfigError(f"invalid temperature list: {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patchgate")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="sample, evaluate, and report")
    run.add_argument("--corpus", required=True, type=Path)
    run.add_argument("--temps", default="0,0.5,1")
    run.add_argument("--trials", type=int, default=generation.DEFAULT_TRIALS)
    run.add_argument("--mode", choices=["live", "record", "replay"], default="replay")
    run.add_argument("--cassette", type=Path)
    run.add_argument("--out", required=True, type=Path)
    run.add_argument("--problems", help="comma-separated subset of problem names")
    run.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    run.add_argument("--timeout-ms", type=int, default=oracle.DEFAULT_TIMEOUT_MS)
    run.add_argument("--low-threshold", type=float, default=0.7)
    run.add_argument("--model", default="gpt-4")
    run.add_argument("--base-url", default="https://api.openai.com/v1")
    run.add_argument("--shim", type=Path)

    rep = sub.add_parser("report", help="re-export a prior run's report")
    rep.add_argument("--results", required=True, type=Path)
    rep.add_argument("--format", choices=["csv", "json"], default="csv")
    rep.add_argument("--svg", action="store_true")

    gt = sub.add_parser("gate", help="admission decision from a prior run")
    gt.add_argument("--results", required=True, type=Path)
    gt.add_argument("--oer-threshold", type=float, default=gate.DEFAULT_OER_THRESHOLD)
    gt.add_argument("--tau", type=float, default=gate.DEFAULT_TAU)
    gt.add_argument(
        "--policy", choices=[p.value for p in gate.SelectionPolicy], default="majority"
    )
    gt.add_argument("--problem")
    gt.add_argument("--temperature", type=float)

    val = sub.add_parser("validate", help="check every problem's oracle")
    val.add_argument("--corpus", required=True, type=Path)
    val.add_argument("--problems")
    val.add_argument("--timeout-ms", type=int, default=oracle.DEFAULT_TIMEOUT_MS)
    val.add_argument("--shim", type=Path)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = RunConfig(
                corpus_root=args.corpus,
                temperatures=_parse_temps(args.temps),
                trials=args.trials,
                mode=args.mode,
                cassette_path=args.cassette,
                out_dir=args.out,
                workers=args.workers,
                timeout_ms=args.timeout_ms,
                low_threshold=args.low_threshold,
                problems=tuple(args.problems.split(",")) if args.problems else None,
                model_id=args.model,
                base_url=args.base_url,
                shim_path=args.shim,
            )
            return cmd_run(config)
        if args.command == "report":
            return cmd_report(args.results, (args.format,), args.svg)
        if args.command == "gate":
            return cmd_gate(
                args.results, args.oer_threshold, args.tau, args.policy,
                args.problem, args.temperature,
            )
        if args.command == "validate":
            problems = tuple(args.problems.split(",")) if args.problems else None
            return cmd_validate(args.corpus, problems, args.timeout_ms, args.shim)
        raise ConfigError(f"unknown command: {args.command}")
    except PatchgateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFRA
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_INFRA


if __name__ == "__main__":
    sys.exit(main())
