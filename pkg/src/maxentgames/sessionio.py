"""Serialization and analysis reporting.

Formats are deliberately boring and fully deterministic:

* session CSV: `# key=value` metadata lines, a `round,x1_count,y1_count`
  header, one row per round, LF line endings.  Round-trips losslessly.
  An extended per-agent schema (`round` plus 2n action-bit columns) is
  accepted on read and collapsed to counts.
* analysis JSON: canonical rendering (sorted keys, 17-significant-digit
  floats), byte-stable across runs and platforms.
* lattice SVG: hand-assembled markup, no drawing library, so identical
  input yields identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .errors import DuplicateId, ParseError, RangeError, SchemaError
from .games import PayoffMatrix, Treatment
from .lattice import LatticeDistribution, lattice_cells, mean_observation
from .maxent import (EntropyReport, MaxentPrediction, binomial_prediction,
                     entropy_report)
from .simulate import SessionRecord, mixed_policy, parse_policy
from .stats import (ChiSquareReport, DeviationReport, SummaryStats,
                    TTestReport, chi_square_gof, deviation_report,
                    one_sample_t_test, summarize, z_statistic)

TOOL_VERSION = "0.1.0"

# ---------------------------------------------------------------------------
# canonical JSON

def format_float(value: float) -> str:
    """Shortest-of-17-significant-digits rendering; round-trips exactly."""
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    text = format(value, ".17g")
    # keep floats typed as floats on the way back in
    if not any(c in text for c in ".eE"):
        text += ".0"
    return text


def canonical_json(obj: Any) -> str:
    """Deterministic JSON: sorted keys, fixed float formatting.  Output is
    byte-identical for equal inputs, so reports can be diffed and hashed."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            items.append(json.dumps(key, ensure_ascii=False) + ":"
                         + canonical_json(obj[key]))
        return "{" + ",".join(items) + "}"
    raise TypeError(f"cannot canonicalize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# session CSV

_CSV_HEADER = "round,x1_count,y1_count"


def session_to_csv(record: SessionRecord) -> str:
    lines = [
        f"# n={record.n}",
        f"# treatment={record.treatment_id}",
        f"# seed={record.seed}",
        f"# policy={record.policy_id}",
        _CSV_HEADER,
    ]
    for r, (i, j) in enumerate(record.rounds, start=1):
        lines.append(f"{r},{i},{j}")
    return "\n".join(lines) + "\n"


def write_session_csv(record: SessionRecord, path: str | Path) -> None:
    Path(path).write_text(session_to_csv(record), encoding="utf-8",
                          newline="\n")


def _parse_int(text: str, what: str, line_no: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"line {line_no}: {what} is not an integer: "
                         f"{text!r}") from None


def _row_state(parts: list[str], n: int, extended: bool,
               line_no: int) -> tuple[int, int, int]:
    r = _parse_int(parts[0], "round", line_no)
    if not extended:
        i = _parse_int(parts[1], "x1_count", line_no)
        j = _parse_int(parts[2], "y1_count", line_no)
        if not (0 <= i <= n and 0 <= j <= n):
            raise RangeError(
                f"line {line_no}: counts ({i}, {j}) beyond n={n}")
        return r, i, j
    bits = [_parse_int(p, "action", line_no) for p in parts[1:]]
    if any(b not in (0, 1) for b in bits):
        raise RangeError(f"line {line_no}: action columns must be 0 or 1")
    return r, sum(bits[:n]), sum(bits[n:])


def session_from_csv(text: str) -> SessionRecord:
    """Parse a session CSV.

    Requires the `# n=` metadata line and contiguous round numbering from
    1; treatment, seed, and policy metadata default when absent.  Both the
    count schema and the extended per-agent action schema are accepted.
    """
    meta: dict[str, str] = {}
    lines = text.splitlines()
    body_start = None
    extended = False
    n = None
    for idx, line in enumerate(lines):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            entry = stripped.lstrip("#").strip()
            if "=" in entry:
                key, _, value = entry.partition("=")
                meta[key.strip()] = value.strip()
            continue
        if "n" not in meta:
            raise SchemaError("missing '# n=' metadata line")
        n = _parse_int(meta["n"], "n", idx + 1)
        if n < 1:
            raise RangeError(f"population size must be >= 1, got {n}")
        columns = [c.strip() for c in stripped.split(",")]
        if columns == _CSV_HEADER.split(","):
            extended = False
        elif (len(columns) == 1 + 2 * n and columns[0] == "round"
              and all(c for c in columns)):
            extended = True
        else:
            raise SchemaError(
                f"line {idx + 1}: expected header {_CSV_HEADER!r} or "
                f"'round' plus {2 * n} action columns, got {stripped!r}")
        body_start = idx + 1
        break
    if body_start is None or n is None:
        raise SchemaError("no data header found")
    treatment_id = _parse_int(meta.get("treatment", "0"), "treatment", 0)
    seed = _parse_int(meta.get("seed", "0"), "seed", 0)
    policy_id = meta.get("policy", mixed_policy(0.5, 0.5).label())
    parse_policy(policy_id)  # validate early, with a clear error

    width = 3 if not extended else 1 + 2 * n
    rounds: list[tuple[int, int]] = []
    for idx in range(body_start, len(lines)):
        stripped = lines[idx].strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split(",")
        if len(parts) != width:
            raise SchemaError(
                f"line {idx + 1}: expected {width} columns, got {len(parts)}")
        r, i, j = _row_state(parts, n, extended, idx + 1)
        if r != len(rounds) + 1:
            raise ParseError(
                f"line {idx + 1}: round {r} out of order "
                f"(expected {len(rounds) + 1})")
        rounds.append((i, j))
    if not rounds:
        raise SchemaError("session file has no data rows")
    return SessionRecord(treatment_id=treatment_id, seed=seed, n=n,
                         rounds=tuple(rounds), policy_id=policy_id)


def read_session_csv(path: str | Path) -> SessionRecord:
    return session_from_csv(Path(path).read_text(encoding="utf-8"))


def session_digest(record: SessionRecord) -> str:
    """sha256 of the canonical CSV serialization; ties every report back to
    exact input bytes."""
    return hashlib.sha256(session_to_csv(record).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# treatment config

def parse_treatment_config(text: str) -> list[Treatment]:
    """Parse a treatment table.

    One treatment per line, whitespace separated:
    id a11 b11 a12 b12 a21 b21 a22 b22 groups rounds
    '#' starts a comment; blank lines are skipped.
    """
    treatments: list[Treatment] = []
    seen: set[int] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 11:
            raise SchemaError(
                f"line {line_no}: expected 11 columns, got {len(parts)}")
        try:
            tid = int(parts[0])
            cells = [float(v) for v in parts[1:9]]
            groups = int(parts[9])
            rounds = int(parts[10])
        except ValueError as exc:
            raise ParseError(f"line {line_no}: {exc}") from None
        if tid in seen:
            raise DuplicateId(f"line {line_no}: duplicate treatment id {tid}")
        seen.add(tid)
        if groups < 1 or rounds < 1:
            raise RangeError(
                f"line {line_no}: groups and rounds must be >= 1")
        a11, b11, a12, b12, a21, b21, a22, b22 = cells
        payoffs = PayoffMatrix(a11=a11, a12=a12, a21=a21, a22=a22,
                               b11=b11, b12=b12, b21=b21, b22=b22)
        treatments.append(Treatment(id=tid, payoffs=payoffs, groups=groups,
                                    rounds_per_group=rounds))
    if not treatments:
        raise SchemaError("treatment config has no entries")
    return treatments


def read_treatment_config(path: str | Path) -> list[Treatment]:
    return parse_treatment_config(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# analysis

@dataclass(frozen=True)
class AnalysisReport:
    """One session's complete comparison against its Maxent prediction."""

    treatment_id: int
    group_id: int
    source: str
    mean_p: float
    mean_q: float
    entropy: EntropyReport
    chi_square: ChiSquareReport
    deviation: DeviationReport
    version: str
    input_digest: str


@dataclass(frozen=True)
class EnsembleSummary:
    """Treatment-level aggregation over several sessions' reports."""

    sessions: int
    chi_exceed_count: int
    d_te: SummaryStats
    z: SummaryStats
    d_te_test: TTestReport
    z_test: TTestReport


def analyze_session(record: SessionRecord, source: str = "<memory>",
                    group_id: int = 1, confidence: float = 0.95,
                    significance: float = 0.05,
                    base_corrected: bool = False,
                    ect_sample_size: int | None = None) -> AnalysisReport:
    """Compute the full statistical comparison for one session.

    The session is tested against the prediction fitted from its own mean:
    the data supply the constraints, the maximum-entropy step supplies
    everything else.  ect_sample_size overrides the M used in the
    concentration bound (defaults to the session's round count).
    """
    dist = record.distribution()
    mean = mean_observation(dist)
    prediction = binomial_prediction(mean, dist.n)
    ent = entropy_report(dist, prediction, confidence=confidence,
                         sample_size=ect_sample_size,
                         base_corrected=base_corrected)
    chi = chi_square_gof(dist, prediction, significance=significance)
    if prediction.s_t == 0.0:
        # boundary mean: the prediction is a point mass and the data can
        # only be that same point mass, so there is no deviation to score
        dev = DeviationReport(d_te=0.0,
                              z=z_statistic(dist, prediction, mean),
                              per_cell={cell: 0.0
                                        for cell in lattice_cells(dist.n)},
                              s_e=ent.s_e, s_t=ent.s_t)
    else:
        dev = deviation_report(dist, prediction, mean, s_e=ent.s_e)
    return AnalysisReport(treatment_id=record.treatment_id,
                          group_id=group_id, source=source,
                          mean_p=mean.o_p, mean_q=mean.o_q,
                          entropy=ent, chi_square=chi, deviation=dev,
                          version=TOOL_VERSION,
                          input_digest=session_digest(record))


def summarize_ensemble(reports: Sequence[AnalysisReport],
                       confidence: float = 0.99) -> EnsembleSummary:
    """Aggregate several session reports the way a results table would:
    mean/SE/CI of D_te and Z plus t tests against zero."""
    d_values = [r.deviation.d_te for r in reports]
    z_values = [r.deviation.z for r in reports]
    return EnsembleSummary(
        sessions=len(reports),
        chi_exceed_count=sum(1 for r in reports if r.chi_square.exceeds),
        d_te=summarize(d_values, confidence),
        z=summarize(z_values, confidence),
        d_te_test=one_sample_t_test(d_values, 0.0),
        z_test=one_sample_t_test(z_values, 0.0))


# ---------------------------------------------------------------------------
# report JSON

def _entropy_to_obj(e: EntropyReport) -> dict[str, Any]:
    return {"s_e": e.s_e, "s_t": e.s_t, "delta_s_bound": e.delta_s_bound,
            "sample_size": e.sample_size, "within_bound": e.within_bound}


def _entropy_from_obj(o: dict[str, Any]) -> EntropyReport:
    return EntropyReport(s_e=o["s_e"], s_t=o["s_t"],
                         delta_s_bound=o["delta_s_bound"],
                         sample_size=o["sample_size"],
                         within_bound=o["within_bound"])


def _chi_to_obj(c: ChiSquareReport) -> dict[str, Any]:
    return {"statistic": c.statistic, "freedoms": c.freedoms,
            "criterion": c.criterion, "exceeds": c.exceeds,
            "cells_used": c.cells_used, "p_value": c.p_value,
            "significance": c.significance, "sample_size": c.sample_size,
            "min_expected": c.min_expected, "impossible": c.impossible}


def _chi_from_obj(o: dict[str, Any]) -> ChiSquareReport:
    return ChiSquareReport(statistic=o["statistic"], freedoms=o["freedoms"],
                           criterion=o["criterion"], exceeds=o["exceeds"],
                           cells_used=o["cells_used"], p_value=o["p_value"],
                           significance=o["significance"],
                           sample_size=o["sample_size"],
                           min_expected=o["min_expected"],
                           impossible=o["impossible"])


def _deviation_to_obj(d: DeviationReport) -> dict[str, Any]:
    return {"d_te": d.d_te, "z": d.z, "s_e": d.s_e, "s_t": d.s_t,
            "per_cell": {f"{i},{j}": v for (i, j), v in d.per_cell.items()}}


def _deviation_from_obj(o: dict[str, Any]) -> DeviationReport:
    per_cell = {}
    for key, value in o["per_cell"].items():
        i_text, _, j_text = key.partition(",")
        per_cell[(int(i_text), int(j_text))] = value
    return DeviationReport(d_te=o["d_te"], z=o["z"], per_cell=per_cell,
                           s_e=o["s_e"], s_t=o["s_t"])


def report_to_obj(report: AnalysisReport) -> dict[str, Any]:
    return {"treatment_id": report.treatment_id,
            "group_id": report.group_id, "source": report.source,
            "mean_p": report.mean_p, "mean_q": report.mean_q,
            "entropy": _entropy_to_obj(report.entropy),
            "chi_square": _chi_to_obj(report.chi_square),
            "deviation": _deviation_to_obj(report.deviation),
            "version": report.version,
            "input_digest": report.input_digest}


def report_from_obj(obj: dict[str, Any]) -> AnalysisReport:
    return AnalysisReport(treatment_id=obj["treatment_id"],
                          group_id=obj["group_id"], source=obj["source"],
                          mean_p=obj["mean_p"], mean_q=obj["mean_q"],
                          entropy=_entropy_from_obj(obj["entropy"]),
                          chi_square=_chi_from_obj(obj["chi_square"]),
                          deviation=_deviation_from_obj(obj["deviation"]),
                          version=obj["version"],
                          input_digest=obj["input_digest"])


def _ttest_to_obj(t: TTestReport) -> dict[str, Any]:
    return {"t": t.t, "p_value": t.p_value, "freedoms": t.freedoms,
            "mean": t.mean, "ci_low": t.ci_low, "ci_high": t.ci_high,
            "confidence": t.confidence}


def _ttest_from_obj(o: dict[str, Any]) -> TTestReport:
    return TTestReport(t=o["t"], p_value=o["p_value"],
                       freedoms=o["freedoms"], mean=o["mean"],
                       ci_low=o["ci_low"], ci_high=o["ci_high"],
                       confidence=o["confidence"])


def _summary_to_obj(s: SummaryStats) -> dict[str, Any]:
    return {"mean": s.mean, "std_error": s.std_error, "ci_low": s.ci_low,
            "ci_high": s.ci_high, "confidence": s.confidence,
            "sample_count": s.sample_count}


def _summary_from_obj(o: dict[str, Any]) -> SummaryStats:
    return SummaryStats(mean=o["mean"], std_error=o["std_error"],
                        ci_low=o["ci_low"], ci_high=o["ci_high"],
                        confidence=o["confidence"],
                        sample_count=o["sample_count"])


def ensemble_to_obj(summary: EnsembleSummary) -> dict[str, Any]:
    return {"sessions": summary.sessions,
            "chi_exceed_count": summary.chi_exceed_count,
            "d_te": _summary_to_obj(summary.d_te),
            "z": _summary_to_obj(summary.z),
            "d_te_test": _ttest_to_obj(summary.d_te_test),
            "z_test": _ttest_to_obj(summary.z_test)}


def ensemble_from_obj(obj: dict[str, Any]) -> EnsembleSummary:
    return EnsembleSummary(sessions=obj["sessions"],
                           chi_exceed_count=obj["chi_exceed_count"],
                           d_te=_summary_from_obj(obj["d_te"]),
                           z=_summary_from_obj(obj["z"]),
                           d_te_test=_ttest_from_obj(obj["d_te_test"]),
                           z_test=_ttest_from_obj(obj["z_test"]))


def report_to_json(report: AnalysisReport) -> str:
    return canonical_json(report_to_obj(report)) + "\n"


def report_from_json(text: str) -> AnalysisReport:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid report JSON: {exc}") from None
    try:
        return report_from_obj(obj)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"report JSON missing field: {exc}") from None


def write_report(report: AnalysisReport, path: str | Path) -> None:
    Path(path).write_text(report_to_json(report), encoding="utf-8",
                          newline="\n")


def read_report(path: str | Path) -> AnalysisReport:
    return report_from_json(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# SVG rendering

def _fmt(value: float) -> str:
    return format(value, ".2f")


def _star_points(cx: float, cy: float, outer: float, inner: float) -> str:
    pts = []
    for k in range(10):
        radius = outer if k % 2 == 0 else inner
        angle = -math.pi / 2.0 + k * math.pi / 5.0
        pts.append(f"{_fmt(cx + radius * math.cos(angle))},"
                   f"{_fmt(cy + radius * math.sin(angle))}")
    return " ".join(pts)


def render_lattice_svg(observed: LatticeDistribution,
                       prediction: MaxentPrediction | None = None,
                       mean=None, title: str = "") -> str:
    """Draw the social-state lattice.

    Yellow disks have area proportional to the observed density; red (blue)
    disks show positive (negative) residuals against the prediction with
    area magnified five-fold to stay visible; dashed outlines show the
    prediction itself; a star marks the mean observation; counts label the
    occupied cells.  Output is plain markup, deterministic byte for byte,
    with no external references.
    """
    n = observed.n
    if mean is None:
        mean = mean_observation(observed)
    if prediction is None:
        prediction = binomial_prediction(mean, n)
    step = 100.0
    x0, y0 = 80.0, 70.0
    span = n * step
    width = x0 + span + 80.0
    height = y0 + span + 110.0
    r_max = 42.0

    def x_at(i: float) -> float:
        return x0 + i * step

    def y_at(j: float) -> float:
        return y0 + (n - j) * step

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" '
        'fill="white"/>',
    ]
    if title:
        safe = (title.replace("&", "&amp;").replace("<", "&lt;")
                .replace(">", "&gt;"))
        parts.append(f'<text x="{_fmt(x0)}" y="36" font-family="sans-serif" '
                     f'font-size="16" fill="#111">{safe}</text>')
    for k in range(n + 1):
        parts.append(f'<line x1="{_fmt(x_at(k))}" y1="{_fmt(y_at(0))}" '
                     f'x2="{_fmt(x_at(k))}" y2="{_fmt(y_at(n))}" '
                     'stroke="#dddddd" stroke-width="1"/>')
        parts.append(f'<line x1="{_fmt(x_at(0))}" y1="{_fmt(y_at(k))}" '
                     f'x2="{_fmt(x_at(n))}" y2="{_fmt(y_at(k))}" '
                     'stroke="#dddddd" stroke-width="1"/>')
        parts.append(f'<text x="{_fmt(x_at(k))}" y="{_fmt(y_at(0) + 28)}" '
                     'font-family="sans-serif" font-size="13" fill="#333" '
                     f'text-anchor="middle">{k}</text>')
        parts.append(f'<text x="{_fmt(x0 - 24)}" y="{_fmt(y_at(k) + 4)}" '
                     'font-family="sans-serif" font-size="13" fill="#333" '
                     f'text-anchor="middle">{k}</text>')
    parts.append(f'<text x="{_fmt(x0 + span / 2)}" y="{_fmt(y_at(0) + 56)}" '
                 'font-family="sans-serif" font-size="14" fill="#111" '
                 'text-anchor="middle">i (X agents playing action 1)</text>')
    parts.append(f'<text x="22" y="{_fmt(y0 + span / 2)}" '
                 'font-family="sans-serif" font-size="14" fill="#111" '
                 'text-anchor="middle" transform="rotate(-90 22 '
                 f'{_fmt(y0 + span / 2)})">j (Y agents playing action 1)'
                 '</text>')

    densities = observed.densities()
    for (i, j) in lattice_cells(n):
        cx, cy = x_at(i), y_at(j)
        # one neutral marker per social state, occupied or not
        parts.append(f'<circle class="state" cx="{_fmt(cx)}" '
                     f'cy="{_fmt(cy)}" r="2.20" fill="#999999"/>')
        rho = densities[(i, j)]
        pred = prediction.densities[(i, j)]
        if pred > 0.0:
            parts.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
                         f'r="{_fmt(r_max * math.sqrt(pred))}" fill="none" '
                         'stroke="#555555" stroke-width="1.2" '
                         'stroke-dasharray="4 3"/>')
        if rho > 0.0:
            parts.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
                         f'r="{_fmt(r_max * math.sqrt(rho))}" '
                         'fill="#f5c542" fill-opacity="0.8" '
                         'stroke="#b8860b" stroke-width="0.8"/>')
        resid = rho - pred
        if resid != 0.0:
            color = "#c0392b" if resid > 0 else "#2e6da4"
            r = r_max * math.sqrt(min(1.0, 5.0 * abs(resid)))
            parts.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
                         f'r="{_fmt(r)}" fill="{color}" '
                         'fill-opacity="0.35"/>')
        count = observed.count(i, j)
        if count:
            parts.append(f'<text x="{_fmt(cx)}" y="{_fmt(cy + 4)}" '
                         'font-family="sans-serif" font-size="11" '
                         f'fill="#222" text-anchor="middle">{count}</text>')

    mx, my = x_at(mean.o_p * n), y_at(mean.o_q * n)
    parts.append(f'<polygon points="{_star_points(mx, my, 11.0, 4.5)}" '
                 'fill="#111111"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_lattice_svg(observed: LatticeDistribution, path: str | Path,
                      prediction: MaxentPrediction | None = None,
                      mean=None, title: str = "") -> None:
    Path(path).write_text(render_lattice_svg(observed, prediction, mean,
                                             title),
                          encoding="utf-8", newline="\n")
