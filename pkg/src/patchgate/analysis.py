"""Aggregation of candidates and trial results into stability and
equivalence-rate reports, plus CSV/JSON/SVG emitters.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ValidationError
from .generation import PatchCandidate
from .metrics import (
    DEFAULT_LOW_THRESHOLD,
    SimilarityStats,
    SuccessCategory,
    categorize,
    pairwise_similarity_stats,
    success_stats,
)
from .oracle import TrialResult

STABILITY_CSV_HEADER = [
    "problem",
    "temperature",
    "average_similarity",
    "variance",
    "maximum_similarity",
    "minimum_similarity",
    "standard_deviation",
    "low_similarity_ratio",
]

OER_CSV_HEADER = [
    "problem",
    "temperature",
    "count",
    "successes",
    "failures",
    "mean",
    "variance",
    "stddev",
    "success_rate_pct",
    "category",
]


def round_display(value: float, places: int = 2) -> str:
    """Half-up decimal rounding for the human-facing table columns."""
    quant = Decimal(1).scaleb(-places)
    return str(Decimal(repr(value)).quantize(quant, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class StabilityRow:
    problem: str
    temperature: float
    stats: SimilarityStats
    insufficient: bool = False


@dataclass(frozen=True)
class OERRow:
    problem: str
    temperature: float
    count: int
    successes: int
    failures: int
    mean: float
    variance: float
    stddev: float
    success_rate_pct: float
    category: SuccessCategory


@dataclass(frozen=True)
class RunReport:
    stability_rows: tuple[StabilityRow, ...]
    oer_rows: tuple[OERRow, ...]
    general_oer: dict[float, float]
    category_distribution: dict[float, dict[str, int]]
    heatmap: dict[str, dict[float, float]]
    metadata: dict


def _group_candidates(
    candidates: Iterable[PatchCandidate],
) -> dict[tuple[str, float], list[PatchCandidate]]:
    groups: dict[tuple[str, float], list[PatchCandidate]] = {}
    for c in candidates:
        groups.setdefault((c.problem_name, c.temperature), []).append(c)
    return groups


def build_stability_rows(
    candidates: Iterable[PatchCandidate],
    low_threshold: float = DEFAULT_LOW_THRESHOLD,
) -> list[StabilityRow]:
    """One dispersion row per (problem, temperature) candidate group.

    Groups with a single candidate have no pair to compare and are flagged
    insufficient (zeroed stats, excluded from aggregates).
    """
    rows = []
    for (problem, temperature), group in sorted(_group_candidates(candidates).items()):
        if len(group) < 2:
            empty = SimilarityStats(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0)
            rows.append(StabilityRow(problem, temperature, empty, insufficient=True))
            continue
        stats = pairwise_similarity_stats([c.extracted_code for c in group], low_threshold)
        rows.append(StabilityRow(problem, temperature, stats))
    return rows


def build_oer_rows(results: Iterable[TrialResult]) -> list[OERRow]:
    """One success-rate row per (problem, temperature) trial group."""
    groups: dict[tuple[str, float], list[TrialResult]] = {}
    for r in results:
        groups.setdefault((r.problem, r.temperature), []).append(r)
    rows = []
    for (problem, temperature), group in sorted(groups.items()):
        count = len(group)
        successes = sum(1 for r in group if r.pass_all)
        mean, variance, stddev = success_stats(successes, count)
        rows.append(
            OERRow(
                problem=problem,
                temperature=temperature,
                count=count,
                successes=successes,
                failures=count - successes,
                mean=mean,
                variance=variance,
                stddev=stddev,
                success_rate_pct=100.0 * mean,
                category=categorize(successes, count),
            )
        )
    return rows


def general_oer(rows: Sequence[OERRow], temperature: float) -> float:
    """Unweighted mean of per-problem success means at one temperature."""
    means = [r.mean for r in rows if r.temperature == temperature]
    if not means:
        raise ValidationError(f"no rows at temperature {temperature}")
    return sum(means) / len(means)


def build_report(
    stability_rows: Sequence[StabilityRow],
    oer_rows: Sequence[OERRow],
    metadata: dict | None = None,
) -> RunReport:
    """Assemble the full report and check the pooled-fraction identity."""
    temperatures = sorted({r.temperature for r in oer_rows})
    general = {t: general_oer(oer_rows, t) for t in temperatures}

    for t in temperatures:
        slice_rows = [r for r in oer_rows if r.temperature == t]
        counts = {r.count for r in slice_rows}
        if len(counts) == 1:
            pooled = sum(r.successes for r in slice_rows) / sum(r.count for r in slice_rows)
            if abs(pooled - general[t]) > 1e-9:
                raise ValidationError(
                    f"aggregate identity violated at temperature {t}: "
                    f"pooled {pooled} vs mean-of-means {general[t]}"
                )

    distribution: dict[float, dict[str, int]] = {}
    for t in temperatures:
        tally = {c.value: 0 for c in SuccessCategory}
        for r in oer_rows:
            if r.temperature == t:
                tally[r.category.value] += 1
        distribution[t] = tally

    heatmap: dict[str, dict[float, float]] = {}
    for r in oer_rows:
        heatmap.setdefault(r.problem, {})[r.temperature] = r.success_rate_pct

    return RunReport(
        stability_rows=tuple(stability_rows),
        oer_rows=tuple(oer_rows),
        general_oer=general,
        category_distribution=distribution,
        heatmap=heatmap,
        metadata=dict(metadata or {}),
    )


def _stability_csv(rows: Sequence[StabilityRow]) -> str:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    header = list(STABILITY_CSV_HEADER)
    header += [f"{h}_display" for h in STABILITY_CSV_HEADER[2:]]
    writer.writerow(header)
    for row in rows:
        s = row.stats
        values = [s.mean, s.variance, s.max, s.min, s.stddev, s.low_ratio]
        writer.writerow(
            [row.problem, repr(row.temperature)]
            + [repr(v) for v in values]
            + [round_display(v) for v in values]
        )
    return buf.getvalue()


def _oer_csv(rows: Sequence[OERRow]) -> str:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    header = list(OER_CSV_HEADER)
    header += ["mean_display", "variance_display", "stddev_display", "success_rate_pct_display"]
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [
                row.problem,
                repr(row.temperature),
                row.count,
                row.successes,
                row.failures,
                repr(row.mean),
                repr(row.variance),
                repr(row.stddev),
                repr(row.success_rate_pct),
                row.category.value,
                round_display(row.mean),
                round_display(row.variance),
                round_display(row.stddev),
                round_display(row.success_rate_pct),
            ]
        )
    return buf.getvalue()


def report_to_json_dict(report: RunReport) -> dict:
    return {
        "stability_rows": [
            {
                "problem": r.problem,
                "temperature": r.temperature,
                "insufficient": r.insufficient,
                "stats": {
                    "mean": r.stats.mean,
                    "variance": r.stats.variance,
                    "stddev": r.stats.stddev,
                    "max": r.stats.max,
                    "min": r.stats.min,
                    "low_ratio": r.stats.low_ratio,
                    "pair_count": r.stats.pair_count,
                },
            }
            for r in report.stability_rows
        ],
        "oer_rows": [
            {
                "problem": r.problem,
                "temperature": r.temperature,
                "count": r.count,
                "successes": r.successes,
                "failures": r.failures,
                "mean": r.mean,
                "variance": r.variance,
                "stddev": r.stddev,
                "success_rate_pct": r.success_rate_pct,
                "category": r.category.value,
            }
            for r in report.oer_rows
        ],
        "general_oer": {repr(t): v for t, v in sorted(report.general_oer.items())},
        "category_distribution": {
            repr(t): dict(d) for t, d in sorted(report.category_distribution.items())
        },
        "heatmap": {
            problem: {repr(t): v for t, v in sorted(cells.items())}
            for problem, cells in sorted(report.heatmap.items())
        },
        "metadata": report.metadata,
    }


def report_from_json_dict(doc: dict) -> RunReport:
    stability = tuple(
        StabilityRow(
            problem=r["problem"],
            temperature=r["temperature"],
            insufficient=r["insufficient"],
            stats=SimilarityStats(**r["stats"]),
        )
        for r in doc["stability_rows"]
    )
    oer_rows = tuple(
        OERRow(
            problem=r["problem"],
            temperature=r["temperature"],
            count=r["count"],
            successes=r["successes"],
            failures=r["failures"],
            mean=r["mean"],
            variance=r["variance"],
            stddev=r["stddev"],
            success_rate_pct=r["success_rate_pct"],
            category=SuccessCategory(r["category"]),
        )
        for r in doc["oer_rows"]
    )
    return RunReport(
        stability_rows=stability,
        oer_rows=oer_rows,
        general_oer={float(t): v for t, v in doc["general_oer"].items()},
        category_distribution={
            float(t): dict(d) for t, d in doc["category_distribution"].items()
        },
        heatmap={
            problem: {float(t): v for t, v in cells.items()}
            for problem, cells in doc["heatmap"].items()
        },
        metadata=doc["metadata"],
    )


def export_report(report: RunReport, dest: str | Path, formats: Sequence[str] = ("csv", "json")) -> list[Path]:
    """Write stability.csv / oer.csv / report.json under ``dest``.

    Output bytes are a pure function of the report: full-precision columns
    via repr, display columns rounded half-up to 2 decimals.
    """
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats:
        for name, content in (
            ("stability.csv", _stability_csv(report.stability_rows)),
            ("oer.csv", _oer_csv(report.oer_rows)),
        ):
            path = dest / name
            path.write_text(content, encoding="utf-8", newline="\n")
            written.append(path)
    if "json" in formats:
        path = dest / "report.json"
        path.write_text(
            json.dumps(report_to_json_dict(report), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
            newline="\n",
        )
        written.append(path)
    return written


# 3-stop linear color scale for success rates: 0% -> 50% -> 100%
HEAT_STOPS = ((0.0, (215, 48, 39)), (50.0, (254, 224, 139)), (100.0, (26, 152, 80)))


def heat_color(pct: float) -> str:
    pct = min(100.0, max(0.0, pct))
    for (lo, lo_rgb), (hi, hi_rgb) in zip(HEAT_STOPS, HEAT_STOPS[1:]):
        if pct <= hi:
            frac = 0.0 if hi == lo else (pct - lo) / (hi - lo)
            rgb = tuple(round(a + frac * (b - a)) for a, b in zip(lo_rgb, hi_rgb))
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*HEAT_STOPS[-1][1])


def emit_heatmap_svg(report: RunReport, dest: str | Path) -> Path:
    """Deterministic standalone SVG: problems on rows, temperatures on columns."""
    problems = sorted(report.heatmap)
    temperatures = sorted({t for cells in report.heatmap.values() for t in cells})
    cell_w, cell_h, label_w, header_h = 90, 24, 210, 28
    width = label_w + cell_w * len(temperatures) + 10
    height = header_h + cell_h * len(problems) + 10

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="monospace" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for col, t in enumerate(temperatures):
        x = label_w + col * cell_w + cell_w // 2
        parts.append(f'<text x="{x}" y="18" text-anchor="middle">T={t:g}</text>')
    for row, problem in enumerate(problems):
        y = header_h + row * cell_h
        parts.append(f'<text x="{label_w - 8}" y="{y + 16}" text-anchor="end">{problem}</text>')
        for col, t in enumerate(temperatures):
            pct = report.heatmap[problem].get(t)
            x = label_w + col * cell_w
            if pct is None:
                parts.append(
                    f'<rect x="{x}" y="{y}" width="{cell_w}" height="{cell_h}" '
                    f'fill="#eeeeee" stroke="white"/>'
                )
                continue
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell_w}" height="{cell_h}" '
                f'fill="{heat_color(pct)}" stroke="white"/>'
            )
            parts.append(
                f'<text x="{x + cell_w // 2}" y="{y + 16}" text-anchor="middle">'
                f"{round_display(pct)}</text>"
            )
    parts.append("</svg>")
    dest = Path(dest)
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text("\n".join(parts) + "\n", encoding="utf-8", newline="\n")
    return dest


def boxplot_data(stability_rows: Sequence[StabilityRow]) -> dict:
    """Quartile summaries of per-temperature mean similarities (plot data only)."""
    by_temp: dict[float, list[float]] = {}
    for r in stability_rows:
        if not r.insufficient:
            by_temp.setdefault(r.temperature, []).append(r.stats.mean)

    def quartiles(values: list[float]) -> dict:
        values = sorted(values)
        n = len(values)

        def q(frac: float) -> float:
            pos = frac * (n - 1)
            lo, hi = int(pos), min(int(pos) + 1, n - 1)
            return values[lo] + (pos - lo) * (values[hi] - values[lo])

        return {"min": values[0], "q1": q(0.25), "median": q(0.5), "q3": q(0.75), "max": values[-1]}

    return {repr(t): quartiles(v) for t, v in sorted(by_temp.items())}
