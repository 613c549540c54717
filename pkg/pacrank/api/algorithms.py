# pacrank/api/algorithms.py
"""Single-run commands: one seeded run of an algorithm on a model."""
import pathlib
from typing import Optional

import typer

from pacrank.api.common import (
    DeltaOpt,
    EpsOpt,
    ModelOpt,
    NOpt,
    SeedOpt,
    ThreadsOpt,
    VerboseOpt,
    build_spec,
    console,
    handle_errors,
    setup,
)
from pacrank.bench.runner import run_experiment
from pacrank.schemas.models import ExperimentRecord
from pacrank.utils.errors import ExportError


def _write_ranking(record: ExperimentRecord, out: Optional[pathlib.Path]) -> None:
    if out is None:
        return
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text("".join(f"{e}\n" for e in record.output), encoding="utf-8")
    except OSError as exc:
        raise ExportError(out, exc.strerror or str(exc)) from exc
    console.print(f"ranking written to {out}")


def _report_ranking(record: ExperimentRecord, out: Optional[pathlib.Path]) -> None:
    console.print(f"ranking (weakest first): {' '.join(map(str, record.output))}")
    console.print(f"comparisons: {record.comparisons}")
    verdict = "[green]yes[/green]" if record.correct else "[red]no[/red]"
    console.print(f"eps-ranking under the true model: {verdict}")
    _write_ranking(record, out)


# ─── max ──────────────────────────────────────────────────────────────────────
def max_command(
    model:   str = ModelOpt,
    n:       Optional[int] = NOpt,
    eps:     float = EpsOpt,
    delta:   float = DeltaOpt,
    gamma:   float = typer.Option(1.0, "--gamma", help="Stochastic-transitivity slack (>= 1)"),
    seed:    Optional[int] = SeedOpt,
    threads: Optional[int] = ThreadsOpt,
    verbose: bool = VerboseOpt,
):
    """Knockout: an (eps, delta)-PAC maximum."""
    setup(verbose)
    with handle_errors():
        spec = build_spec("knockout", model, n, eps, delta, gamma=gamma, seed=seed, threads=threads)
        record = run_experiment(spec)[0]
        console.print(f"winner: [bold]{record.output[0]}[/bold]")
        console.print(f"comparisons: {record.comparisons}")
        verdict = "[green]yes[/green]" if record.correct else "[red]no[/red]"
        console.print(f"eps-maximum under the true model: {verdict}")


# ─── rank-merge ───────────────────────────────────────────────────────────────
def rank_merge_command(
    model:   str = ModelOpt,
    n:       Optional[int] = NOpt,
    eps:     float = EpsOpt,
    delta:   float = DeltaOpt,
    seed:    Optional[int] = SeedOpt,
    threads: Optional[int] = ThreadsOpt,
    out:     Optional[pathlib.Path] = typer.Option(None, "--out", help="Write the ranking here, one id per line"),
    verbose: bool = VerboseOpt,
):
    """Merge-Rank with compare(., ., eps, delta) at every merge."""
    setup(verbose)
    with handle_errors():
        spec = build_spec("merge-rank", model, n, eps, delta, seed=seed, threads=threads)
        _report_ranking(run_experiment(spec)[0], out)


# ─── rank-bsr ─────────────────────────────────────────────────────────────────
def rank_bsr_command(
    model:   str = ModelOpt,
    n:       Optional[int] = NOpt,
    eps:     float = EpsOpt,
    x:       int = typer.Option(3, "--x", help="Anchor exponent: floor(n / log2(n)^x) anchors"),
    anchors: Optional[int] = typer.Option(None, "--anchors", help="Override the anchor count"),
    seed:    Optional[int] = SeedOpt,
    threads: Optional[int] = ThreadsOpt,
    out:     Optional[pathlib.Path] = typer.Option(None, "--out", help="Write the ranking here, one id per line"),
    verbose: bool = VerboseOpt,
):
    """Binary-Search-Ranking with a Merge-Rank backend."""
    setup(verbose)
    with handle_errors():
        spec = build_spec("bsr", model, n, eps, x=x, anchors=anchors, seed=seed, threads=threads)
        _report_ranking(run_experiment(spec)[0], out)
