# pacrank/algorithms/duel.py
import logging

import numpy as np

from pacrank.oracle.duel import OracleContext
from pacrank.schemas.models import CompareParams
from pacrank.utils.errors import InvalidInputError
from pacrank.utils.settings import get_settings

logger = logging.getLogger(__name__)

# largest block of draws held in memory at once; blocks stop doubling here
MAX_BLOCK = 1 << 16


def compare(i: int, j: int, eps: float, delta: float, ctx: OracleContext) -> int:
    """Adaptive comparison: the declared winner of i and j.

    Duels until |p_hat - 1/2| > c_hat - eps or r > m, with
    c_hat = sqrt(ln(4 r^2 / delta) / (2 r)) and m = ceil(ln(2/delta) / (2 eps^2)).
    Outputs j when p_hat <= 1/2. At most m + 1 duels are charged; if
    p~(i, j) >= eps the output is i with probability >= 1 - delta.

    Duels are drawn in doubling blocks of at most MAX_BLOCK and only those up
    to the stopping point are charged, which leaves the outcome distribution
    unchanged.
    """
    if i == j:
        raise InvalidInputError(f"an element cannot be compared with itself ({i})")
    params = CompareParams(eps=eps, delta=delta)
    m = params.budget

    r, wins = 0, 0
    block = min(get_settings().compare_block, MAX_BLOCK)
    while True:
        size = min(block, m + 1 - r)
        outcomes = ctx.draw(i, j, size)
        rr = np.arange(r + 1, r + size + 1)
        ww = wins + np.cumsum(outcomes)
        p_hat = ww / rr
        c_hat = params.confidence(rr)
        keep_going = (np.abs(p_hat - 0.5) <= c_hat - eps) & (rr <= m)
        stops = np.flatnonzero(~keep_going)
        used = int(stops[0]) + 1 if stops.size else size
        ctx.charge(used)
        r += used
        wins = int(ww[used - 1])
        if stops.size:
            break
        block = min(block * 2, MAX_BLOCK)

    winner = j if wins / r <= 0.5 else i
    logger.debug("compare(%d, %d) -> %d after %d duels (budget %d)", i, j, winner, r, m)
    return winner


def compare2(a: int, b: int, k: int, ctx: OracleContext) -> float:
    """Exactly k duels; the fraction a won."""
    if k < 1:
        raise InvalidInputError(f"compare2 needs k >= 1, got {k}")
    return ctx.wins(a, b, k) / k
