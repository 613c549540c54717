# pacrank/algorithms/maxsel.py
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence, Tuple

from pacrank.algorithms.duel import compare
from pacrank.oracle.duel import DummyKind, OracleContext
from pacrank.schemas.models import KnockoutParams
from pacrank.utils.errors import InvalidInputError

logger = logging.getLogger(__name__)


def knockout_schedule(eps: float, delta: float, gamma: float = 1.0, rounds: int = 1) -> List[Tuple[float, float]]:
    """(bias, confidence) handed to Knockout-Round for rounds 1..rounds."""
    params = KnockoutParams(eps=eps, delta=delta, gamma=gamma)
    return [(params.round_bias(i), params.round_confidence(i)) for i in range(1, rounds + 1)]


def knockout_round(
    S: Sequence[int],
    eps: float,
    delta: float,
    ctx: OracleContext,
    round_index: int = 1,
    workers: int = 1,
) -> List[int]:
    """Pair S at random and keep the compare winner of every pair (ordered by pair index)."""
    if len(S) < 2 or len(S) % 2:
        raise InvalidInputError(f"knockout rounds need an even set of at least 2 elements, got {len(S)}")

    shuffled = [S[k] for k in ctx.spawn("round", round_index, "pairing").rng.permutation(len(S))]
    pairs = list(zip(shuffled[::2], shuffled[1::2]))

    def resolve(index: int) -> int:
        a, b = pairs[index]
        return compare(a, b, eps, delta, ctx.spawn("round", round_index, "pair", index))

    if workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            winners = list(pool.map(resolve, range(len(pairs))))
    else:
        winners = [resolve(k) for k in range(len(pairs))]
    return winners


def knockout(
    S: Sequence[int],
    eps: float,
    delta: float,
    ctx: OracleContext,
    gamma: float = 1.0,
    workers: int = 1,
) -> int:
    """(eps, delta)-PAC maximum selection.

    Pads S with always-losing dummies up to a power of two and runs
    knockout rounds with bias c*eps/(gamma 2^{i/3}) and confidence
    delta/2^i until a single element is left.
    """
    params = KnockoutParams(eps=eps, delta=delta, gamma=gamma)
    survivors = list(S)
    if not survivors:
        raise InvalidInputError("knockout needs at least one element")
    if len(set(survivors)) != len(survivors):
        raise InvalidInputError("knockout elements must be distinct")
    if len(survivors) == 1:
        return survivors[0]

    padded = 1 << math.ceil(math.log2(len(survivors)))
    survivors += [ctx.add_dummy(DummyKind.LOSER) for _ in range(padded - len(survivors))]

    i = 1
    while len(survivors) > 1:
        bias, confidence = params.round_bias(i), params.round_confidence(i)
        survivors = knockout_round(survivors, bias, confidence, ctx, round_index=i, workers=workers)
        logger.debug("round %d (bias %.5g, confidence %.3g): %d left", i, bias, confidence, len(survivors))
        i += 1

    winner = survivors[0]
    if ctx.is_dummy(winner):
        raise RuntimeError("a dummy won the knockout; the oracle must never let it beat a real element")
    return winner
