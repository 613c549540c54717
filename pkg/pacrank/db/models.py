# pacrank/db/models.py
from sqlalchemy import (
    Boolean,
    Column,
    DateTime,
    Float,
    ForeignKey,
    Index,
    Integer,
    JSON,
    String,
)
from sqlalchemy.orm import declarative_base, relationship
from sqlalchemy.sql import func

Base = declarative_base()


class Experiment(Base):
    __tablename__ = "experiments"

    id         = Column(String, primary_key=True, index=True)
    algorithm  = Column(String, nullable=False)
    model      = Column(String, nullable=False)
    n          = Column(Integer, nullable=False)
    eps        = Column(Float, nullable=False)
    delta      = Column(Float, nullable=False)
    gamma      = Column(Float, nullable=False, default=1.0)
    x          = Column(Integer, nullable=False, default=3)
    anchors    = Column(Integer, nullable=True)
    root_seed  = Column(Integer, nullable=False)
    runs       = Column(Integer, nullable=False)
    # aggregate over the runs, filled when the experiment is saved
    mean_comparisons = Column(Float, nullable=False)
    success_rate     = Column(Float, nullable=False)
    created_at = Column(DateTime(timezone=True), server_default=func.now())

    records = relationship(
        "Run",
        back_populates="experiment",
        cascade="all, delete-orphan",
        order_by="Run.run_id",
    )

    __table_args__ = (
        Index("idx_experiments_algorithm_created", "algorithm", "created_at"),
    )


class Run(Base):
    __tablename__ = "runs"

    id            = Column(Integer, primary_key=True, autoincrement=True)
    experiment_id = Column(String, ForeignKey("experiments.id", ondelete="CASCADE"), nullable=False, index=True)
    run_id        = Column(Integer, nullable=False)
    seed          = Column(Integer, nullable=False)
    comparisons   = Column(Integer, nullable=False)
    output        = Column(JSON, nullable=False)  # list of ids; a single winner for knockout
    output_head   = Column(String, nullable=False)
    correct       = Column(Boolean, nullable=False)
    condorcet     = Column(Boolean, nullable=True)
    wall_ms       = Column(Float, nullable=True)

    experiment = relationship("Experiment", back_populates="records")

    __table_args__ = (
        Index("idx_runs_by_experiment_run", "experiment_id", "run_id", unique=True),
    )
