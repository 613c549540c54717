# pacrank/oracle/properties.py
import logging
import math

import numpy as np

from pacrank.oracle.models import PreferenceModel
from pacrank.schemas.models import ModelPropertyReport, Violation
from pacrank.utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

MAX_TRIPLE_N = 2000


def verify_properties(model: PreferenceModel, tol: float = 1e-12) -> ModelPropertyReport:
    """Check strong stochastic transitivity and the stochastic triangle inequality.

    Triples run over i stronger than j stronger than k in the model's true
    order. gamma is the smallest value >= 1 with
    max(p~(i,j), p~(j,k)) <= gamma * p~(i,k) on every triple (inf when some
    p~(i,k) = 0 sits under a positive gap).
    """
    if model.n > MAX_TRIPLE_N:
        raise InvalidInputError(f"triple enumeration is limited to n <= {MAX_TRIPLE_N}, got {model.n}")
    order = np.asarray(model.strength_order) - 1
    # A[a, b] = p~ between the a-th and b-th strongest; a < b means a is stronger
    A = model.matrix[np.ix_(order, order)] - 0.5
    n = model.n

    gamma = 1.0
    sst_count = sti_count = 0
    worst = None
    for j in range(1, n - 1):
        ij = A[:j, j][:, None]        # p~(i, j) for i above j
        jk = A[j, j + 1:][None, :]    # p~(j, k) for k below j
        ik = A[:j, j + 1:]            # p~(i, k)
        larger = np.maximum(ij, jk)

        sst_gap = larger - ik
        sti_gap = ik - (ij + jk)
        sst_bad = sst_gap > tol
        sti_bad = sti_gap > tol
        sst_count += int(sst_bad.sum())
        sti_count += int(sti_bad.sum())

        for kind, gap, bad in (("sst", sst_gap, sst_bad), ("sti", sti_gap, sti_bad)):
            if bad.any():
                a, b = np.unravel_index(np.argmax(np.where(bad, gap, -np.inf)), gap.shape)
                magnitude = float(gap[a, b])
                if worst is None or magnitude > worst.magnitude:
                    triple = (int(order[a]) + 1, int(order[j]) + 1, int(order[j + 1 + b]) + 1)
                    worst = Violation(triple=triple, kind=kind, magnitude=magnitude)

        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(larger > tol, larger / np.where(ik > tol, ik, 0.0), 1.0)
        ratio = np.where(np.isnan(ratio), math.inf, ratio)
        gamma = max(gamma, float(ratio.max()))

    if not sst_count:
        gamma = 1.0
    report = ModelPropertyReport(
        n=n,
        sst_holds=sst_count == 0,
        sti_holds=sti_count == 0,
        gamma=gamma,
        worst_violation=worst,
        sst_violations=sst_count,
        sti_violations=sti_count,
    )
    if worst is not None:
        logger.warning(
            "%s: %d SST and %d STI violations, worst %s on %s (%.3g)",
            model.describe(), sst_count, sti_count, worst.kind, worst.triple, worst.magnitude,
        )
    return report


def trans_tri_holds(model: PreferenceModel, i: int, j: int, k: int, eps1: float, eps2: float) -> bool:
    """If p~(i,j) <= eps1 and p~(j,k) <= eps2 then p~(i,k) <= eps1 + eps2.

    Holds on every triple of a model satisfying both SST and STI; vacuously
    true when the premises fail.
    """
    if model.advantage(i, j) > eps1 or model.advantage(j, k) > eps2:
        return True
    return model.advantage(i, k) <= eps1 + eps2 + 1e-12


def weak_winner_bound(model: PreferenceModel, winner: int, loser: int, eps: float) -> bool:
    """p(winner, loser) >= 1/2 - eps: what a comparison at bias eps may still output."""
    return model.p(winner, loser) >= 0.5 - eps - 1e-12
