# pacrank/bench/verify.py
"""Verdicts from the model's analytic probabilities; nothing here draws a duel."""
from typing import Sequence

import numpy as np

from pacrank.oracle.models import PreferenceModel, condorcet_winner

SeqError = float


def is_eps_maximum(e: int, model: PreferenceModel, eps: float) -> bool:
    model.check(e)
    return model.advantage(model.best, e) <= eps + 1e-12


def eval_err(seq: Sequence[int], model: PreferenceModel) -> SeqError:
    """max over positions i < j of p~(seq[i], seq[j]): how badly an earlier element beats a later one.

    Negative for a perfect ascending order, 0 for sequences of at most one element.
    """
    if len(seq) <= 1:
        return 0.0
    idx = np.asarray(seq) - 1
    sub = model.matrix[np.ix_(idx, idx)] - 0.5
    return float(sub[np.triu_indices(len(seq), k=1)].max())


def is_eps_ranking(seq: Sequence[int], model: PreferenceModel, eps: float) -> bool:
    return sorted(seq) == list(range(1, model.n + 1)) and eval_err(seq, model) <= eps + 1e-12


def is_condorcet_winner(e: int, model: PreferenceModel) -> bool:
    model.check(e)
    return bool(np.all(model.matrix[e - 1] >= 0.5))


def has_condorcet_winner(model: PreferenceModel) -> bool:
    return condorcet_winner(model) is not None


def is_exact_ranking(seq: Sequence[int], model: PreferenceModel) -> bool:
    """seq is the true order, weakest first."""
    return list(seq) == model.strength_order[::-1]
