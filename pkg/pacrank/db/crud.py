# pacrank/db/crud.py
from typing import List, Optional
from uuid import uuid4

from sqlalchemy import select
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import Session

from pacrank.bench.runner import summarize
from pacrank.db.models import Experiment, Run
from pacrank.schemas.models import ExperimentRecord, ExperimentSpec
from pacrank.utils.errors import ExportError


# ─────────────────────────────  experiments  ──────────────────────────────────
def save_experiment(
        spec: ExperimentSpec,
        records: List[ExperimentRecord],
        session: Session,
    ) -> Experiment:
        summary = summarize(records)
        experiment = Experiment(
            id=str(uuid4()),
            algorithm=spec.algorithm,
            model=spec.model.label,
            n=summary.n,
            eps=spec.eps,
            delta=spec.delta,
            gamma=spec.gamma,
            x=spec.x,
            anchors=spec.anchors,
            root_seed=spec.seed,
            runs=summary.runs,
            mean_comparisons=summary.mean_comparisons,
            success_rate=summary.success_rate,
        )
        experiment.records = [
            Run(
                run_id=r.run_id,
                seed=r.seed,
                comparisons=r.comparisons,
                output=list(r.output),
                output_head=r.output_head,
                correct=r.correct,
                condorcet=r.condorcet,
                wall_ms=r.wall_ms,
            )
            for r in records
        ]
        try:
            session.add(experiment)
            session.commit()
        except SQLAlchemyError as exc:
            session.rollback()
            raise ExportError(session.bind.url.render_as_string(hide_password=True), str(exc)) from exc
        session.refresh(experiment)
        return experiment


def list_experiments(
        session: Session,
        algorithm: Optional[str] = None,
        limit: int = 20,
    ) -> List[Experiment]:
        stmt = select(Experiment).order_by(Experiment.created_at.desc()).limit(limit)
        if algorithm is not None:
            stmt = stmt.where(Experiment.algorithm == algorithm)  # idx_experiments_algorithm_created
        return list(session.execute(stmt).scalars().all())


def get_experiment(
        experiment_id: str,
        session: Session,
    ) -> Optional[Experiment]:
        return session.get(Experiment, experiment_id)


def get_runs(
        experiment_id: str,
        session: Session,
    ) -> List[Run]:
        stmt = (
            select(Run)
            .where(Run.experiment_id == experiment_id)
            .order_by(Run.run_id)
        )
        return list(session.execute(stmt).scalars().all())
