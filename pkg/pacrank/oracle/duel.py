# pacrank/oracle/duel.py
"""
The single duel entry point.

Every algorithm reaches the preference model through an OracleContext: it
owns a random stream, shares the run's ComparisonTally and dummy registry,
and counts every simulated duel. Child contexts (`spawn`) get streams keyed
by a path of labels, so work split across threads draws exactly what the
serial loop would.
"""
import enum
import threading
from collections import defaultdict
from typing import Dict, Hashable, Optional

import numpy as np

from pacrank.oracle.models import PreferenceModel
from pacrank.utils.errors import InvalidInputError
from pacrank.utils.rng import Key, extend_key, stream


class DummyKind(enum.Enum):
    LOSER = "loser"    # p(dummy, real) = 0
    WINNER = "winner"  # p(dummy, real) = 1


class ComparisonTally:
    """Thread-safe duel counter with optional phase sub-counters."""

    def __init__(self):
        self._lock = threading.Lock()
        self._total = 0
        self._phases: Dict[str, int] = defaultdict(int)

    def add(self, k: int = 1, phase: Optional[str] = None) -> None:
        if k < 0:
            raise InvalidInputError("tally increments must be non-negative")
        with self._lock:
            self._total += k
            if phase is not None:
                self._phases[phase] += k

    @property
    def total(self) -> int:
        return self._total

    def phase(self, label: str) -> int:
        with self._lock:
            return self._phases.get(label, 0)

    def snapshot(self) -> Dict[str, int]:
        with self._lock:
            return {"total": self._total, **dict(self._phases)}


class DummyRegistry:
    """Virtual ids above n; shared by every context of a run."""

    def __init__(self, n: int):
        self._lock = threading.Lock()
        self._next = n + 1
        self.kinds: Dict[int, DummyKind] = {}

    def add(self, kind: DummyKind) -> int:
        with self._lock:
            e = self._next
            self._next += 1
            self.kinds[e] = kind
            return e


def win_probability(model: PreferenceModel, i: int, j: int, dummies: Optional[DummyRegistry] = None) -> float:
    """p(i, j), with dummies answered without touching the model."""
    if i == j:
        raise InvalidInputError(f"an element cannot duel itself ({i})")
    kinds = dummies.kinds if dummies is not None else {}
    di, dj = kinds.get(i), kinds.get(j)
    if di is None and dj is None:
        model.check(i)
        model.check(j)
        return model.p(i, j)
    for e, kind in ((i, di), (j, dj)):
        if kind is None:
            model.check(e)
    if di == dj:
        return 0.5
    if di is DummyKind.WINNER or dj is DummyKind.LOSER:
        return 1.0
    return 0.0


def duel(
    model: PreferenceModel,
    i: int,
    j: int,
    rng: np.random.Generator,
    tally: ComparisonTally,
    dummies: Optional[DummyRegistry] = None,
    phase: Optional[str] = None,
) -> int:
    """One noisy comparison; returns the winner."""
    p = win_probability(model, i, j, dummies)
    tally.add(1, phase)
    return i if rng.random() < p else j


def duel_many(
    model: PreferenceModel,
    i: int,
    j: int,
    k: int,
    rng: np.random.Generator,
    tally: ComparisonTally,
    dummies: Optional[DummyRegistry] = None,
    phase: Optional[str] = None,
) -> int:
    """k independent duels; returns how many i won (one binomial draw)."""
    if k < 1:
        raise InvalidInputError(f"number of duels must be positive, got {k}")
    p = win_probability(model, i, j, dummies)
    tally.add(k, phase)
    return int(rng.binomial(k, p))


class OracleContext:
    def __init__(
        self,
        model: PreferenceModel,
        seed: int = 0,
        tally: Optional[ComparisonTally] = None,
        dummies: Optional[DummyRegistry] = None,
        key: Key = (),
        phase: Optional[str] = None,
    ):
        self.model = model
        self.seed = seed
        self.key = key
        self.tally = tally if tally is not None else ComparisonTally()
        self.dummies = dummies if dummies is not None else DummyRegistry(model.n)
        self.phase = phase
        self.rng = stream(seed, key)

    # ─── derived contexts ─────────────────────────────────────────────────────
    def spawn(self, *parts: Hashable, phase: Optional[str] = None) -> "OracleContext":
        return OracleContext(
            self.model,
            seed=self.seed,
            tally=self.tally,
            dummies=self.dummies,
            key=extend_key(self.key, *parts),
            phase=phase if phase is not None else self.phase,
        )

    def add_dummy(self, kind: DummyKind) -> int:
        return self.dummies.add(kind)

    def is_dummy(self, e: int) -> bool:
        return e in self.dummies.kinds

    # ─── duels ────────────────────────────────────────────────────────────────
    def p(self, i: int, j: int) -> float:
        return win_probability(self.model, i, j, self.dummies)

    def duel(self, i: int, j: int) -> int:
        return duel(self.model, i, j, self.rng, self.tally, self.dummies, self.phase)

    def wins(self, i: int, j: int, k: int) -> int:
        return duel_many(self.model, i, j, k, self.rng, self.tally, self.dummies, self.phase)

    def draw(self, i: int, j: int, k: int) -> np.ndarray:
        """k duel outcomes (True when i wins) drawn but not yet charged; pair with `charge`."""
        return self.rng.random(k) < self.p(i, j)

    def charge(self, k: int) -> None:
        self.tally.add(k, self.phase)
