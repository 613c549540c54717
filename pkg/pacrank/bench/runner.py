# pacrank/bench/runner.py
import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Dict, List, Optional

import numpy as np
from tqdm import tqdm

from pacrank.algorithms.bsr import binary_search_ranking
from pacrank.algorithms.maxsel import knockout
from pacrank.algorithms.mergerank import merge_rank
from pacrank.bench.export import ranking_sidecar_name
from pacrank.bench.verify import eval_err, has_condorcet_winner, is_condorcet_winner, is_eps_maximum
from pacrank.oracle.duel import OracleContext
from pacrank.oracle.models import PreferenceModel, build_model
from pacrank.schemas.models import ExperimentRecord, ExperimentSpec, ExperimentSummary, ModelSpec
from pacrank.utils.errors import InvalidInputError
from pacrank.utils.rng import derive_seed

logger = logging.getLogger(__name__)


def _run_once(spec: ExperimentSpec, model: PreferenceModel, run_id: int, workers: int = 1) -> ExperimentRecord:
    seed = derive_seed(spec.seed, run_id)
    ctx = OracleContext(model, seed=seed)
    # the algorithms never see the true order as input order
    elements = [int(e) + 1 for e in ctx.spawn("input").rng.permutation(model.n)]

    start = time.perf_counter()
    if spec.algorithm == "knockout":
        winner = knockout(elements, spec.eps, spec.delta, ctx.spawn("knockout"), gamma=spec.gamma, workers=workers)
        output, head = [winner], str(winner)
    elif spec.algorithm == "merge-rank":
        output = merge_rank(elements, spec.eps, spec.delta, ctx.spawn("merge-rank"), workers=workers)
        head = ranking_sidecar_name(run_id)
    else:
        output = binary_search_ranking(elements, spec.eps, ctx.spawn("bsr"), x=spec.x, anchors=spec.anchors, workers=workers)
        head = ranking_sidecar_name(run_id)
    wall_ms = (time.perf_counter() - start) * 1000.0

    if spec.algorithm == "knockout":
        correct = is_eps_maximum(output[0], model, spec.eps)
        condorcet = is_condorcet_winner(output[0], model) if has_condorcet_winner(model) else None
    else:
        correct = sorted(output) == sorted(elements) and eval_err(output, model) <= spec.eps + 1e-12
        condorcet = None

    return ExperimentRecord(
        run_id=run_id,
        algorithm=spec.algorithm,
        model=spec.model.label,
        n=model.n,
        eps=spec.eps,
        delta=spec.delta,
        gamma=spec.gamma,
        x=spec.x,
        seed=seed,
        comparisons=ctx.tally.total,
        output=output,
        output_head=head,
        correct=correct,
        condorcet=condorcet,
        wall_ms=wall_ms,
    )


def run_experiment(spec: ExperimentSpec, progress: bool = False) -> List[ExperimentRecord]:
    """`spec.runs` independently seeded runs, ordered by run id whatever the worker count."""
    model = build_model(spec.model, spec.n)
    bar = tqdm(total=spec.runs, desc=f"{spec.algorithm} {spec.model.label} n={model.n}", disable=not progress, leave=False)
    records: Dict[int, ExperimentRecord] = {}
    try:
        if spec.workers > 1 and spec.runs > 1:
            with ThreadPoolExecutor(max_workers=spec.workers) as pool:
                futures = {pool.submit(_run_once, spec, model, run_id): run_id for run_id in range(spec.runs)}
                for fut in as_completed(futures):
                    records[futures[fut]] = fut.result()
                    bar.update(1)
        else:
            # a single run hands its workers to the algorithm itself
            inner = spec.workers if spec.runs == 1 else 1
            for run_id in range(spec.runs):
                records[run_id] = _run_once(spec, model, run_id, workers=inner)
                bar.update(1)
    finally:
        bar.close()

    ordered = [records[k] for k in sorted(records)]
    summary = summarize(ordered)
    logger.info(
        "%s on %s n=%d: %d runs, %.1f +/- %.1f duels, success %.3f",
        spec.algorithm, spec.model.label, model.n, summary.runs,
        summary.mean_comparisons, summary.std_comparisons, summary.success_rate,
    )
    return ordered


def summarize(records: List[ExperimentRecord]) -> ExperimentSummary:
    if not records:
        raise InvalidInputError("cannot summarize an empty experiment")
    first = records[0]
    comparisons = np.array([r.comparisons for r in records], dtype=float)
    hits = [r.condorcet for r in records if r.condorcet is not None]
    return ExperimentSummary(
        algorithm=first.algorithm,
        model=first.model,
        n=first.n,
        eps=first.eps,
        delta=first.delta,
        runs=len(records),
        mean_comparisons=float(comparisons.mean()),
        std_comparisons=float(comparisons.std(ddof=1)) if len(records) > 1 else 0.0,
        success_rate=sum(r.correct for r in records) / len(records),
        condorcet_rate=sum(hits) / len(hits) if hits else None,
    )


# ─────────────────────────────  sweeps  ───────────────────────────────────────

ADJACENT = ModelSpec(kind="adjacent-gap", param=0.6)

SWEEP_PRESETS = (
    "knockout-small-n",
    "knockout-large-n",
    "knockout-single-gap",
    "knockout-mallows",
    "knockout-eps",
    "merge-rank-eps",
)


def _preset_specs(preset: str, runs: int, seed: int, workers: int) -> List[ExperimentSpec]:
    common = dict(runs=runs, seed=seed, workers=workers)
    if preset == "knockout-small-n":
        return [
            ExperimentSpec(algorithm="knockout", model=ADJACENT, n=n, eps=0.05, delta=0.1, **common)
            for n in (7, 10, 15)
        ]
    if preset == "knockout-large-n":
        return [
            ExperimentSpec(algorithm="knockout", model=ADJACENT, n=n, eps=0.05, delta=0.1, **common)
            for n in (50, 100, 200, 500)
        ]
    if preset == "knockout-single-gap":
        return [
            ExperimentSpec(algorithm="knockout", model=ModelSpec(kind="single-gap", param=p), n=15, eps=0.05, delta=0.1, **common)
            for p in (0.01, 0.005, 0.001)
        ]
    if preset == "knockout-mallows":
        return [
            ExperimentSpec(algorithm="knockout", model=ModelSpec(kind="mallows", param=phi), n=10, eps=0.05, delta=0.05, **common)
            for phi in (0.03, 0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.99)
        ]
    if preset == "knockout-eps":
        return [
            ExperimentSpec(algorithm="knockout", model=ADJACENT, n=n, eps=eps, delta=0.1, **common)
            for eps in (0.01, 0.02, 0.05, 0.1)
            for n in (10, 50, 100)
        ]
    if preset == "merge-rank-eps":
        return [
            ExperimentSpec(algorithm="merge-rank", model=ADJACENT, n=16, eps=eps, delta=0.1, **common)
            for eps in (0.01, 0.02, 0.05, 0.1)
        ]
    raise InvalidInputError(f"unknown sweep preset {preset!r}; choose from {', '.join(SWEEP_PRESETS)}")


def run_sweep(
    preset: str,
    runs: int = 100,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
    on_point: Optional[Callable[[ExperimentSpec, List[ExperimentRecord]], None]] = None,
) -> List[ExperimentSummary]:
    """One summary per grid point of the preset; `on_point` sees each point's raw records."""
    summaries = []
    for spec in _preset_specs(preset, runs, seed, workers):
        records = run_experiment(spec, progress=progress)
        if on_point is not None:
            on_point(spec, records)
        summaries.append(summarize(records))
    return summaries
