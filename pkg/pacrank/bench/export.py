# pacrank/bench/export.py
"""
CSV emission for experiment records.

One row per run. Knockout rows carry the winner in `output_head`; ranking
rows name a sidecar file (one id per line, weakest first) stored in
`<csv stem>_rankings/` next to the CSV.
"""
import csv
import logging
import pathlib
from typing import Iterable, List, Optional, Union

from pacrank.schemas.models import ExperimentRecord, ExperimentSummary
from pacrank.utils.errors import ExportError

logger = logging.getLogger(__name__)

RECORD_COLUMNS = [
    "run_id", "algorithm", "model", "n", "eps", "delta", "gamma", "x",
    "seed", "comparisons", "output_head", "correct", "wall_ms",
]
SUMMARY_COLUMNS = [
    "algorithm", "model", "n", "eps", "delta", "runs",
    "mean_comparisons", "std_comparisons", "success_rate", "condorcet_rate",
]

PathLike = Union[str, pathlib.Path]


def ranking_sidecar_name(run_id: int) -> str:
    return f"ranking-{run_id:05d}.txt"


def sidecar_dir(destination: PathLike) -> pathlib.Path:
    destination = pathlib.Path(destination)
    return destination.parent / f"{destination.stem}_rankings"


def _num(value: Optional[float]) -> str:
    # at least six significant digits, and always the exact stored float
    if value is None:
        return ""
    value = float(value)
    text = f"{value:#.6g}"
    return text if float(text) == value else repr(value)


def _record_row(record: ExperimentRecord, timing: bool) -> dict:
    return {
        "run_id":      record.run_id,
        "algorithm":   record.algorithm,
        "model":       record.model,
        "n":           record.n,
        "eps":         _num(record.eps),
        "delta":       _num(record.delta),
        "gamma":       _num(record.gamma),
        "x":           record.x,
        "seed":        record.seed,
        "comparisons": record.comparisons,
        "output_head": record.output_head,
        "correct":     "true" if record.correct else "false",
        "wall_ms":     _num(record.wall_ms) if timing else "",
    }


def emit_csv(records: Iterable[ExperimentRecord], destination: PathLike, timing: bool = False) -> pathlib.Path:
    """Write records (and ranking sidecars) to destination; returns its path.

    wall_ms is left blank unless `timing` is set, so reruns with the same
    seed produce byte-identical files.
    """
    destination = pathlib.Path(destination)
    records = list(records)
    try:
        destination.parent.mkdir(parents=True, exist_ok=True)
        rankings = [r for r in records if r.algorithm != "knockout"]
        if rankings:
            folder = sidecar_dir(destination)
            folder.mkdir(exist_ok=True)
            for record in rankings:
                (folder / record.output_head).write_text("".join(f"{e}\n" for e in record.output), encoding="utf-8")
        with destination.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=RECORD_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for record in records:
                writer.writerow(_record_row(record, timing))
    except OSError as exc:
        raise ExportError(destination, exc.strerror or str(exc)) from exc
    logger.info("wrote %d records to %s", len(records), destination)
    return destination


def load_csv(source: PathLike) -> List[ExperimentRecord]:
    """Parse a file written by emit_csv back into records (condorcet is not part of the schema)."""
    source = pathlib.Path(source)
    records = []
    try:
        with source.open(newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                if row["algorithm"] == "knockout":
                    output = [int(row["output_head"])]
                else:
                    text = (sidecar_dir(source) / row["output_head"]).read_text(encoding="utf-8")
                    output = [int(line) for line in text.split()]
                records.append(
                    ExperimentRecord(
                        run_id=int(row["run_id"]),
                        algorithm=row["algorithm"],
                        model=row["model"],
                        n=int(row["n"]),
                        eps=float(row["eps"]),
                        delta=float(row["delta"]),
                        gamma=float(row["gamma"]),
                        x=int(row["x"]),
                        seed=int(row["seed"]),
                        comparisons=int(row["comparisons"]),
                        output=output,
                        output_head=row["output_head"],
                        correct=row["correct"] == "true",
                        wall_ms=float(row["wall_ms"]) if row["wall_ms"] else None,
                    )
                )
    except OSError as exc:
        raise ExportError(source, exc.strerror or str(exc)) from exc
    return records


def emit_summary_csv(summaries: Iterable[ExperimentSummary], destination: PathLike) -> pathlib.Path:
    destination = pathlib.Path(destination)
    try:
        destination.parent.mkdir(parents=True, exist_ok=True)
        with destination.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for s in summaries:
                writer.writerow({
                    "algorithm":        s.algorithm,
                    "model":            s.model,
                    "n":                s.n,
                    "eps":              _num(s.eps),
                    "delta":            _num(s.delta),
                    "runs":             s.runs,
                    "mean_comparisons": _num(s.mean_comparisons),
                    "std_comparisons":  _num(s.std_comparisons),
                    "success_rate":     _num(s.success_rate),
                    "condorcet_rate":   _num(s.condorcet_rate),
                })
    except OSError as exc:
        raise ExportError(destination, exc.strerror or str(exc)) from exc
    return destination
