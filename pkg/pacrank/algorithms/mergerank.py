# pacrank/algorithms/mergerank.py
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Protocol, Sequence

from pacrank.algorithms.duel import compare
from pacrank.oracle.duel import OracleContext

logger = logging.getLogger(__name__)

RankedSeq = List[int]  # ascending strength: weakest first


class RankBackend(Protocol):
    """Rank-x contract: an eps-ranking of S with probability >= 1 - delta."""

    def __call__(self, S: Sequence[int], eps: float, delta: float, ctx: OracleContext) -> RankedSeq: ...


def merge(S1: Sequence[int], S2: Sequence[int], eps: float, delta: float, ctx: OracleContext) -> RankedSeq:
    """Merge two ascending sequences, emitting the loser of each head-to-head first."""
    out: RankedSeq = []
    i = j = 0
    while i < len(S1) and j < len(S2):
        if compare(S1[i], S2[j], eps, delta, ctx) == S1[i]:
            out.append(S2[j])
            j += 1
        else:
            out.append(S1[i])
            i += 1
    out.extend(S1[i:])
    out.extend(S2[j:])
    return out


def merge_rank(S: Sequence[int], eps: float, delta: float, ctx: OracleContext, workers: int = 1) -> RankedSeq:
    """Merge sort with compare(., ., eps, delta) as the comparator, same parameters at every level.

    With workers > 1 the two halves are sorted concurrently, splitting the
    workers between them.
    """
    items = list(S)
    if len(items) <= 1:
        return items
    half = len(items) // 2
    if workers > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            lf = pool.submit(merge_rank, items[:half], eps, delta, ctx.spawn("L"), workers // 2)
            rf = pool.submit(merge_rank, items[half:], eps, delta, ctx.spawn("R"), workers - workers // 2)
            left, right = lf.result(), rf.result()
    else:
        left = merge_rank(items[:half], eps, delta, ctx.spawn("L"))
        right = merge_rank(items[half:], eps, delta, ctx.spawn("R"))
    return merge(left, right, eps, delta, ctx)


def rank3(S: Sequence[int], eps: float, delta: float, ctx: OracleContext) -> RankedSeq:
    """Merge-Rank as a Rank-3 backend: merge_rank(S, eps / log2|S|, delta / |S|^2)."""
    items = list(S)
    if len(items) <= 1:
        return items
    size = len(items)
    inner_eps, inner_delta = eps / math.log2(size), delta / size ** 2
    logger.debug("rank3 on %d elements: inner bias %.5g, confidence %.3g", size, inner_eps, inner_delta)
    return merge_rank(items, inner_eps, inner_delta, ctx)
