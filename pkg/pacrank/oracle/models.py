# pacrank/oracle/models.py
"""
Ground-truth preference models.

Every model answers p(i, j), the probability that element i beats element j,
for ids in [1, n]. Element 1 is the strongest unless the model derives its
own order (BTL weights, matrix files). Values are always computed from the
stronger side q >= 1/2 and mirrored as 1 - q, so p(i,j) + p(j,i) == 1 exactly.
"""
import itertools
import logging
import math
import pathlib
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from pacrank.schemas.models import ModelSpec
from pacrank.utils.errors import InvalidInputError, ModelFileError

logger = logging.getLogger(__name__)

MATRIX_TOL = 1e-9


def mallows_pairwise(phi: float, i_rank: int, j_rank: int) -> float:
    """Probability that the better-ranked of two items at rank distance k wins.

    h(k) = k / (1 - phi^k) and p = h(k+1) - h(k); for k = 1 this is 1 / (1 + phi).
    """
    if not 0 < phi < 1:
        raise InvalidInputError(f"phi must lie in (0, 1), got {phi}")
    if i_rank == j_rank:
        raise InvalidInputError("ranks must differ")
    k = abs(i_rank - j_rank)

    def h(t: int) -> float:
        return t / -math.expm1(t * math.log(phi))

    return h(k + 1) - h(k)


def mallows_pairwise_bruteforce(phi: float, n: int) -> np.ndarray:
    """Exact n x n pairwise marginals of Mallows(identity, phi) by enumeration (n <= 8)."""
    if n > 8:
        raise InvalidInputError("brute-force enumeration is limited to n <= 8")
    before = np.zeros((n, n))
    total = 0.0
    for perm in itertools.permutations(range(n)):
        pos = np.empty(n, dtype=int)
        pos[list(perm)] = np.arange(n)
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if pos[a] > pos[b])
        weight = phi ** inversions
        total += weight
        before += weight * (pos[:, None] < pos[None, :])
    return before / total


class PreferenceModel:
    """Base class; subclasses implement `_stronger_wins(i, j)` for i stronger than j."""

    kind = "abstract"

    def __init__(self, n: int):
        if n < 1:
            raise InvalidInputError(f"a model needs at least one element, got n={n}")
        self.n = n

    # ─── order ────────────────────────────────────────────────────────────────
    @cached_property
    def strength_order(self) -> List[int]:
        """Element ids, strongest first."""
        return list(range(1, self.n + 1))

    @cached_property
    def rank_of(self) -> Dict[int, int]:
        """Position in the true order, 0 for the strongest."""
        return {e: pos for pos, e in enumerate(self.strength_order)}

    @property
    def best(self) -> int:
        return self.strength_order[0]

    def stronger(self, i: int, j: int) -> bool:
        return self.rank_of[i] < self.rank_of[j]

    # ─── probabilities ────────────────────────────────────────────────────────
    def check(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise InvalidInputError(f"element {i} outside [1, {self.n}]")

    def p(self, i: int, j: int) -> float:
        if i == j:
            return 0.5
        if self.stronger(i, j):
            return self._stronger_wins(i, j)
        return 1.0 - self._stronger_wins(j, i)

    def advantage(self, i: int, j: int) -> float:
        """p~(i, j) = p(i, j) - 1/2."""
        return self.p(i, j) - 0.5

    def _stronger_wins(self, i: int, j: int) -> float:
        raise NotImplementedError

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense p(i, j) with row/column k-1 for element k; diagonal 1/2."""
        out = np.full((self.n, self.n), 0.5)
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                if i != j:
                    out[i - 1, j - 1] = self.p(i, j)
        return out

    def describe(self) -> str:
        return f"{self.kind}(n={self.n})"


class AdjacentGapModel(PreferenceModel):
    """p(i, j) = p for every i < j."""

    kind = "adjacent-gap"

    def __init__(self, n: int, p: float = 0.6):
        super().__init__(n)
        if not 0.5 <= p <= 1:
            raise InvalidInputError(f"adjacent-gap probability must lie in [1/2, 1], got {p}")
        self.q = p

    def _stronger_wins(self, i, j):
        return self.q

    @cached_property
    def matrix(self) -> np.ndarray:
        upper = np.triu(np.full((self.n, self.n), self.q), k=1)
        lower = np.tril(np.full((self.n, self.n), 1.0 - self.q), k=-1)
        return upper + lower + 0.5 * np.eye(self.n)

    def describe(self):
        return f"adjacent-gap(n={self.n}, p={self.q:g})"


class SingleGapModel(PreferenceModel):
    """Element 1 beats everyone with `top`; among the rest p(i, j) = 1/2 + ptilde for i < j."""

    kind = "single-gap"

    def __init__(self, n: int, ptilde: float, top: float = 0.6):
        super().__init__(n)
        if not 0 <= ptilde <= 0.5:
            raise InvalidInputError(f"ptilde must lie in [0, 1/2], got {ptilde}")
        if not 0.5 <= top <= 1:
            raise InvalidInputError(f"top probability must lie in [1/2, 1], got {top}")
        self.ptilde = ptilde
        self.top = top

    def _stronger_wins(self, i, j):
        return self.top if i == 1 else 0.5 + self.ptilde

    def describe(self):
        return f"single-gap(n={self.n}, ptilde={self.ptilde:g})"


class MallowsModel(PreferenceModel):
    kind = "mallows"

    def __init__(self, n: int, phi: float):
        super().__init__(n)
        if not 0 < phi < 1:
            raise InvalidInputError(f"phi must lie in (0, 1), got {phi}")
        self.phi = phi
        # marginals only depend on rank distance
        self._by_distance = [0.5] + [mallows_pairwise(phi, 0, k) for k in range(1, n)]

    def _stronger_wins(self, i, j):
        return self._by_distance[abs(i - j)]

    def describe(self):
        return f"mallows(n={self.n}, phi={self.phi:g})"


class BTLModel(PreferenceModel):
    """Bradley-Terry-Luce: p(i, j) = w_i / (w_i + w_j)."""

    kind = "btl"

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise InvalidInputError("BTL needs a non-empty list of weights")
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise InvalidInputError("BTL weights must be positive and finite")
        super().__init__(int(w.size))
        self.weights = w

    @cached_property
    def strength_order(self):
        # stable: equal weights keep the lower id first
        return [int(k) + 1 for k in np.argsort(-self.weights, kind="stable")]

    def _stronger_wins(self, i, j):
        wi, wj = self.weights[i - 1], self.weights[j - 1]
        return wi / (wi + wj)


class MatrixModel(PreferenceModel):
    """Explicit n x n matrix, row i column j = p(i, j); the diagonal is ignored."""

    kind = "matrix"

    def __init__(self, matrix, tol: float = MATRIX_TOL, source: Optional[str] = None):
        m = np.array(matrix, dtype=float)
        where = source or "matrix"
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise InvalidInputError(f"{where}: expected a non-empty square matrix, got shape {m.shape}")
        n = m.shape[0]
        off = ~np.eye(n, dtype=bool)
        if np.any((m[off] < -tol) | (m[off] > 1 + tol)):
            raise InvalidInputError(f"{where}: probabilities must lie in [0, 1]")
        gap = np.abs(m + m.T - 1)[off]
        if gap.size and gap.max() > tol:
            i, j = np.argwhere((np.abs(m + m.T - 1) > tol) & off)[0]
            raise InvalidInputError(f"{where}: p({i + 1},{j + 1}) + p({j + 1},{i + 1}) != 1 (off by {gap.max():.3g})")
        super().__init__(n)
        self.source = source
        np.fill_diagonal(m, 0.5)
        self._raw = np.clip(m, 0.0, 1.0)

    @cached_property
    def strength_order(self):
        # Borda order; under strong stochastic transitivity it matches the true order
        return [int(k) + 1 for k in np.argsort(-self._raw.sum(axis=1), kind="stable")]

    def _stronger_wins(self, i, j):
        return float(self._raw[i - 1, j - 1])


# ─────────────────────────────  loaders & factory  ────────────────────────────

def load_matrix_model(path: Union[str, pathlib.Path], tol: float = MATRIX_TOL) -> MatrixModel:
    path = pathlib.Path(path)
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise ModelFileError(path, f"unreadable matrix CSV ({exc})") from exc
    try:
        return MatrixModel(data, tol=tol, source=str(path))
    except InvalidInputError as exc:
        raise ModelFileError(path, str(exc)) from exc


def load_btl_weights(path: Union[str, pathlib.Path]) -> BTLModel:
    path = pathlib.Path(path)
    try:
        weights = np.loadtxt(path, ndmin=1)
    except (OSError, ValueError) as exc:
        raise ModelFileError(path, f"unreadable weights file ({exc})") from exc
    try:
        return BTLModel(weights)
    except InvalidInputError as exc:
        raise ModelFileError(path, str(exc)) from exc


def parse_model_spec(text: str) -> ModelSpec:
    """'adjacent-gap:0.6', 'single-gap:0.01', 'mallows:0.8', 'btl:weights.txt', 'matrix:p.csv'."""
    kind, sep, arg = text.partition(":")
    kind = kind.strip().lower()
    if not sep or not arg:
        raise InvalidInputError(f"model spec must look like kind:argument, got {text!r}")
    if kind in ("btl", "matrix"):
        return ModelSpec(kind=kind, path=pathlib.Path(arg))
    try:
        value = float(arg)
    except ValueError:
        raise InvalidInputError(f"{kind} expects a number, got {arg!r}") from None
    return ModelSpec(kind=kind, param=value)


def build_model(spec: ModelSpec, n: Optional[int] = None) -> PreferenceModel:
    if spec.kind == "matrix":
        model = load_matrix_model(spec.path)
    elif spec.kind == "btl":
        model = load_btl_weights(spec.path)
    else:
        if n is None:
            raise InvalidInputError(f"{spec.kind} model needs n")
        if spec.kind == "adjacent-gap":
            model = AdjacentGapModel(n, spec.param)
        elif spec.kind == "single-gap":
            model = SingleGapModel(n, spec.param)
        else:
            model = MallowsModel(n, spec.param)
    if n is not None and model.n != n:
        raise InvalidInputError(f"{spec.label} has {model.n} elements but n={n} was requested")
    logger.debug("built %s", model.describe())
    return model


def condorcet_winner(model: PreferenceModel) -> Optional[int]:
    """Element beating every other with probability >= 1/2, if any."""
    m = model.matrix
    for e in model.strength_order:
        if np.all(m[e - 1] >= 0.5):
            return e
    return None
