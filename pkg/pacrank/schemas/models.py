# pacrank/schemas/models.py
import math
import pathlib
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

ModelKind = Literal["adjacent-gap", "single-gap", "mallows", "btl", "matrix"]
Algorithm = Literal["knockout", "merge-rank", "bsr"]

# c = 2^{1/3} - 1 makes the per-round biases c*eps/2^{i/3} sum to eps
KNOCKOUT_C = 2 ** (1 / 3) - 1


# ─────────────────────────────  algorithm parameters  ─────────────────────────

class CompareParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps:   float = Field(gt=0, lt=0.5)
    delta: float = Field(gt=0, lt=1)

    @computed_field
    @property
    def budget(self) -> int:
        """m = ceil(ln(2/delta) / (2 eps^2)); the adaptive loop may run m+1 duels."""
        return max(1, math.ceil(math.log(2 / self.delta) / (2 * self.eps ** 2)))

    def confidence(self, r):
        """c_hat(r) = sqrt(ln(4 r^2 / delta) / (2 r)) for r >= 1 duels; r may be an array."""
        r = np.asarray(r, dtype=float)
        c_hat = np.sqrt(np.log(4.0 * r * r / self.delta) / (2.0 * r))
        return float(c_hat) if c_hat.ndim == 0 else c_hat


class KnockoutParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps:   float = Field(gt=0, lt=0.5)
    delta: float = Field(gt=0, lt=1)
    gamma: float = Field(default=1.0, ge=1)
    c:     float = KNOCKOUT_C

    def round_bias(self, i: int) -> float:
        return self.c * self.eps / (self.gamma * 2 ** (i / 3))

    def round_confidence(self, i: int) -> float:
        return self.delta / 2 ** i


# ─────────────────────────────  model description  ────────────────────────────

class Violation(BaseModel):
    triple:    Tuple[int, int, int]
    kind:      Literal["sst", "sti"]
    magnitude: float


class ModelPropertyReport(BaseModel):
    n:               int
    sst_holds:       bool
    sti_holds:       bool
    gamma:           float
    worst_violation: Optional[Violation] = None
    sst_violations:  int = 0
    sti_violations:  int = 0


class ModelSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind:  ModelKind
    param: Optional[float] = None
    path:  Optional[pathlib.Path] = None

    @model_validator(mode="after")
    def _check_arguments(self):
        if self.kind in ("btl", "matrix") and self.path is None:
            raise ValueError(f"{self.kind} model needs a file path")
        if self.kind in ("adjacent-gap", "single-gap", "mallows") and self.param is None:
            raise ValueError(f"{self.kind} model needs a numeric parameter")
        return self

    @property
    def label(self) -> str:
        if self.path is not None:
            return f"{self.kind}:{self.path.name}"
        return f"{self.kind}:{self.param:g}"


# ─────────────────────────────  experiments  ──────────────────────────────────

class ExperimentSpec(BaseModel):
    algorithm: Algorithm
    model:     ModelSpec
    n:         int = Field(ge=1)
    eps:       float = Field(gt=0, lt=0.5)
    delta:     float = Field(default=0.1, gt=0, lt=1)
    gamma:     float = Field(default=1.0, ge=1)
    x:         int = Field(default=3, ge=1)
    anchors:   Optional[int] = Field(default=None, ge=2)
    runs:      int = Field(default=1, ge=1)
    seed:      int = Field(default=0, ge=0)
    workers:   int = Field(default=1, ge=1)


class ExperimentRecord(BaseModel):
    run_id:      int
    algorithm:   Algorithm
    model:       str
    n:           int
    eps:         float
    delta:       float
    gamma:       float
    x:           int
    seed:        int
    comparisons: int
    output:      List[int]
    output_head: str
    correct:     bool
    condorcet:   Optional[bool] = None
    wall_ms:     Optional[float] = None


class ExperimentSummary(BaseModel):
    algorithm:        Algorithm
    model:            str
    n:                int
    eps:              float
    delta:            float
    runs:             int
    mean_comparisons: float
    std_comparisons:  float
    success_rate:     float
    condorcet_rate:   Optional[float] = None
