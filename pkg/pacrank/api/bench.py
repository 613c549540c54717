# pacrank/api/bench.py
import math
import pathlib
from typing import Optional

import typer
from rich.table import Table

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
from pacrank.bench.export import emit_csv, emit_summary_csv
from pacrank.bench.runner import SWEEP_PRESETS, run_experiment, run_sweep, summarize
from pacrank.db.crud import get_runs, list_experiments, save_experiment
from pacrank.db.session import get_db
from pacrank.oracle.models import build_model, condorcet_winner, parse_model_spec
from pacrank.oracle.properties import verify_properties
from pacrank.utils.settings import get_settings


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return "-"
    return "inf" if math.isinf(value) else f"{value:.4g}"


# ─── verify-model ─────────────────────────────────────────────────────────────
def verify_model_command(
    model:   str = ModelOpt,
    n:       Optional[int] = NOpt,
    verbose: bool = VerboseOpt,
):
    """Check SST and STI on every triple and report gamma."""
    setup(verbose)
    with handle_errors():
        built = build_model(parse_model_spec(model), n)
        report = verify_properties(built)
        table = Table(title=built.describe())
        table.add_column("property")
        table.add_column("value")
        table.add_row("strong stochastic transitivity", "holds" if report.sst_holds else f"{report.sst_violations} violations")
        table.add_row("stochastic triangle inequality", "holds" if report.sti_holds else f"{report.sti_violations} violations")
        table.add_row("gamma", _fmt(report.gamma))
        winner = condorcet_winner(built)
        table.add_row("condorcet winner", str(winner) if winner is not None else "none")
        if report.worst_violation is not None:
            v = report.worst_violation
            table.add_row("worst violation", f"{v.kind} on {v.triple} by {v.magnitude:.4g}")
        console.print(table)


# ─── experiment ───────────────────────────────────────────────────────────────
def experiment_command(
    algorithm: str = typer.Option(..., "--algorithm", "-a", help="knockout, merge-rank or bsr"),
    model:     str = ModelOpt,
    n:         Optional[int] = NOpt,
    eps:       float = EpsOpt,
    delta:     float = DeltaOpt,
    gamma:     float = typer.Option(1.0, "--gamma"),
    x:         int = typer.Option(3, "--x"),
    anchors:   Optional[int] = typer.Option(None, "--anchors"),
    runs:      int = typer.Option(100, "--runs"),
    seed:      Optional[int] = SeedOpt,
    threads:   Optional[int] = ThreadsOpt,
    out:       Optional[pathlib.Path] = typer.Option(None, "--out", help="CSV destination"),
    db:        bool = typer.Option(False, "--db", help="Also store the runs in the results database"),
    timing:    bool = typer.Option(False, "--timing", help="Write wall_ms to the CSV"),
    progress:  bool = typer.Option(False, "--progress", help="Show a progress bar"),
    verbose:   bool = VerboseOpt,
):
    """Repeated seeded runs with verdicts from the true model."""
    setup(verbose)
    with handle_errors():
        spec = build_spec(algorithm, model, n, eps, delta, gamma, x, anchors, runs, seed, threads)
        records = run_experiment(spec, progress=progress)
        summary = summarize(records)
        console.print(
            f"{summary.algorithm} on {summary.model} (n={summary.n}): {summary.runs} runs, "
            f"comparisons {summary.mean_comparisons:.1f} +/- {summary.std_comparisons:.1f}, "
            f"success {summary.success_rate:.3f}"
            + (f", condorcet {summary.condorcet_rate:.3f}" if summary.condorcet_rate is not None else "")
        )
        if out is not None:
            emit_csv(records, out, timing=timing)
            console.print(f"records written to {out}")
        if db:
            for session in get_db():
                stored = save_experiment(spec, records, session)
                console.print(f"stored as experiment {stored.id}")


# ─── sweep ────────────────────────────────────────────────────────────────────
def sweep_command(
    preset:   str = typer.Argument(..., help=f"One of: {', '.join(SWEEP_PRESETS)}"),
    runs:     int = typer.Option(100, "--runs"),
    seed:     Optional[int] = SeedOpt,
    threads:  Optional[int] = ThreadsOpt,
    out:      Optional[pathlib.Path] = typer.Option(None, "--out", help="Summary CSV (defaults to <results_dir>/<preset>.csv)"),
    progress: bool = typer.Option(False, "--progress"),
    verbose:  bool = VerboseOpt,
):
    """Run a preset parameter grid and write one summary row per point."""
    setup(verbose)
    settings = get_settings()
    with handle_errors():
        summaries = run_sweep(
            preset,
            runs=runs,
            seed=seed if seed is not None else settings.seed,
            workers=threads if threads is not None else settings.workers,
            progress=progress,
        )
        table = Table(title=preset)
        for column in ("model", "n", "eps", "delta", "mean comparisons", "success", "condorcet"):
            table.add_column(column)
        for s in summaries:
            table.add_row(s.model, str(s.n), _fmt(s.eps), _fmt(s.delta), _fmt(s.mean_comparisons), _fmt(s.success_rate), _fmt(s.condorcet_rate))
        console.print(table)
        destination = emit_summary_csv(summaries, out or settings.results_dir / f"{preset}.csv")
        console.print(f"summary written to {destination}")


# ─── history ──────────────────────────────────────────────────────────────────
def history_command(
    algorithm:  Optional[str] = typer.Option(None, "--algorithm", "-a"),
    limit:      int = typer.Option(20, "--limit"),
    experiment: Optional[str] = typer.Option(None, "--experiment", help="Show the runs of one experiment"),
    verbose:    bool = VerboseOpt,
):
    """List stored experiments, or the runs of one."""
    setup(verbose)
    with handle_errors():
        for session in get_db():
            if experiment is not None:
                table = Table(title=f"runs of {experiment}")
                for column in ("run", "seed", "comparisons", "output", "correct"):
                    table.add_column(column)
                for run in get_runs(experiment, session):
                    table.add_row(str(run.run_id), str(run.seed), str(run.comparisons), run.output_head, str(run.correct))
            else:
                table = Table(title="experiments")
                for column in ("id", "algorithm", "model", "n", "eps", "runs", "mean comparisons", "success"):
                    table.add_column(column)
                for e in list_experiments(session, algorithm=algorithm, limit=limit):
                    table.add_row(e.id, e.algorithm, e.model, str(e.n), _fmt(e.eps), str(e.runs), _fmt(e.mean_comparisons), _fmt(e.success_rate))
            console.print(table)
