# pacrank/algorithms/bsr.py
"""
Binary-Search-Ranking.

Anchors are sampled and ranked with a Rank-x backend, framed by two dummies
(a loses to everything, b beats everything). Every other element is binned
by a random walk over an interval tree of anchor indices, falling back to a
noisy binary search over the anchors the walk visited. Elements close to a
bin's anchors join the anchor's near-set; the rest of each bin is ranked
with the backend again. Anchor indices below are 1-based positions in S'.
"""
import logging
import math
from collections import Counter, defaultdict, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Set, TypeVar

from pacrank.algorithms.duel import compare2
from pacrank.algorithms.mergerank import RankBackend, RankedSeq, rank3
from pacrank.oracle.duel import DummyKind, OracleContext
from pacrank.utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

T = TypeVar("T")


# ─────────────────────────────  interval tree  ────────────────────────────────

@dataclass(eq=False)
class IntervalNode:
    alpha1: int
    alpha2: int
    parent: Optional["IntervalNode"] = field(default=None, repr=False)
    left:   Optional["IntervalNode"] = field(default=None, repr=False)
    right:  Optional["IntervalNode"] = field(default=None, repr=False)

    @property
    def is_leaf(self) -> bool:
        return self.alpha2 - self.alpha1 <= 1

    @property
    def mid(self) -> int:
        return math.ceil((self.alpha1 + self.alpha2) / 2)

    def leaves(self) -> List["IntervalNode"]:
        if self.is_leaf:
            return [self]
        return self.left.leaves() + self.right.leaves()

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())


def build_tree(m: int) -> IntervalNode:
    """Interval tree over anchor indices 1..m; leaves are the bins (k, k+1)."""
    if m < 2:
        raise InvalidInputError(f"an interval tree needs at least 2 anchors, got {m}")
    root = IntervalNode(1, m)
    pending = deque([root])
    while pending:
        node = pending.popleft()
        if not node.is_leaf:
            node.left = IntervalNode(node.alpha1, node.mid, parent=node)
            node.right = IntervalNode(node.mid, node.alpha2, parent=node)
            pending.extend((node.left, node.right))
    return root


# ─────────────────────────────  coarse binning  ───────────────────────────────

@dataclass
class WalkState:
    current:     IntervalNode
    step_budget: int
    threshold:   int
    counter:     int = 0
    visited:     Set[int] = field(default_factory=set)

    @property
    def via_counter(self) -> bool:
        return self.counter > self.threshold

    @property
    def queue(self) -> List[int]:
        """Visited anchor indices, deduplicated and in S' order."""
        return sorted(self.visited)


def _log_n(n: int) -> int:
    return max(1, math.ceil(math.log(n)))


def random_walk(S_prime: Sequence[int], e: int, eps: float, ctx: OracleContext, n: Optional[int] = None) -> WalkState:
    """The 30 ceil(ln n)-step walk on the interval tree, each judgement from ceil(10/eps^2) duels."""
    if not 0 < eps < 0.5:
        raise InvalidInputError(f"eps must lie in (0, 1/2), got {eps}")
    root = build_tree(len(S_prime))
    log_n = _log_n(n or len(S_prime))
    k = math.ceil(10 / eps ** 2)
    state = WalkState(current=root, step_budget=30 * log_n, threshold=10 * log_n)

    def anchor(index: int) -> int:
        return S_prime[index - 1]

    def beats(x: int, y: int) -> bool:
        return compare2(x, y, k, ctx) > 0.5

    for _ in range(state.step_budget):
        node = state.current
        if not node.is_leaf:
            state.visited.update((node.alpha1, node.alpha2, node.mid))
            if beats(anchor(node.alpha1), e) or beats(e, anchor(node.alpha2)):
                state.current = node.parent or node
            elif beats(anchor(node.mid), e):
                state.current = node.left
            else:
                state.current = node.right
        elif beats(e, anchor(node.alpha1)) and beats(anchor(node.alpha2), e):
            state.counter += 1
        elif state.counter == 0:
            state.current = node.parent or node
        else:
            state.counter -= 1
    return state


def binary_search(S_prime: Sequence[int], Q: Sequence[int], e: int, eps: float, ctx: OracleContext, n: Optional[int] = None) -> int:
    """Noisy binary search over the anchor indices Q (ascending); returns an anchor index.

    Each step is compare2(e, anchor, ceil(10 ln n / eps^2)). A fraction in
    [1/2 - 3eps, 1/2 + 3eps] returns that anchor. When the anchor beats
    e the search moves to weaker anchors, otherwise to stronger ones.
    """
    if not Q:
        raise InvalidInputError("binary search needs a non-empty anchor list")
    size = n or len(S_prime)
    k = math.ceil(10 * math.log(size) / eps ** 2) if size > 1 else math.ceil(10 / eps ** 2)
    lo, hi = 1, len(Q)
    while hi - lo > 0:
        mid = math.ceil((lo + hi) / 2)
        t = compare2(e, S_prime[Q[mid - 1] - 1], k, ctx)
        if 0.5 - 3 * eps <= t <= 0.5 + 3 * eps:
            return Q[mid - 1]
        if t < 0.5 - 3 * eps:
            # mid - 1, not mid: with ceil midpoints hi = mid never shrinks once hi - lo = 1
            hi = mid - 1
        else:
            lo = mid
    return Q[hi - 1]


def interval_binary_search(S_prime: Sequence[int], e: int, eps: float, ctx: OracleContext, n: Optional[int] = None) -> int:
    """Bin index k such that e belongs between S'(k) and S'(k+1)."""
    walk = random_walk(S_prime, e, eps, ctx, n)
    if walk.via_counter:
        return walk.current.alpha1
    logger.debug("walk for %d ended with counter %d; falling back to binary search on %d anchors", e, walk.counter, len(walk.queue))
    found = binary_search(S_prime, walk.queue, e, 2 * eps, ctx, n)
    # the last bin is (m-1, m); an answer of b itself maps onto it
    return min(found, len(S_prime) - 1)


# ─────────────────────────────  full pipeline  ────────────────────────────────

@dataclass
class BsrState:
    eps:        float
    x:          int
    S_prime:    List[int] = field(default_factory=list)
    bins:       Dict[int, List[int]] = field(default_factory=lambda: defaultdict(list))
    near:       Dict[int, List[int]] = field(default_factory=lambda: defaultdict(list))
    far:        Dict[int, List[int]] = field(default_factory=lambda: defaultdict(list))
    output:     RankedSeq = field(default_factory=list)
    fallback:   bool = False

    @property
    def eps_prime(self) -> float:
        return self.eps / 16

    @property
    def eps_dprime(self) -> float:
        return self.eps / 15

    def assignments(self) -> Counter:
        """How many near/far sets each element landed in."""
        counts = Counter()
        for group in (self.near, self.far):
            for members in group.values():
                counts.update(members)
        return counts


def _map(fn: Callable[[int], T], items: Sequence[int], workers: int) -> List[T]:
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def anchor_count(n: int, x: int) -> int:
    if n < 2:
        return 0
    return math.floor(n / math.log2(n) ** x)


def run_binary_search_ranking(
    S: Sequence[int],
    eps: float,
    ctx: OracleContext,
    rankx: RankBackend = rank3,
    x: int = 3,
    anchors: Optional[int] = None,
    workers: int = 1,
) -> BsrState:
    if not 0 < eps < 0.5:
        raise InvalidInputError(f"eps must lie in (0, 1/2), got {eps}")
    elements = list(S)
    n = len(elements)
    state = BsrState(eps=eps, x=x)
    if n <= 1:
        state.output = elements
        return state

    count = anchors if anchors is not None else anchor_count(n, x)
    if count > n:
        raise InvalidInputError(f"cannot pick {count} anchors out of {n} elements")
    if count < 2:
        logger.warning("only %d anchors for n=%d and x=%d; ranking everything with the backend", count, n, x)
        state.fallback = True
        state.output = rankx(elements, eps, 1 / n, ctx.spawn("fallback"))
        return state

    # 1-3: anchors, ranked and framed by the dummies
    picked = set(ctx.spawn("anchors").rng.choice(n, size=count, replace=False).tolist())
    chosen = [elements[k] for k in sorted(picked)]
    rest = [e for k, e in enumerate(elements) if k not in picked]
    ranked = rankx(chosen, state.eps_prime, 1 / n ** 6, ctx.spawn("anchor-rank", phase="anchor-rank"))
    a, b = ctx.add_dummy(DummyKind.LOSER), ctx.add_dummy(DummyKind.WINNER)
    state.S_prime = [a, *ranked, b]
    S_prime = state.S_prime
    bins = len(S_prime) - 1

    # 4: coarse binning
    def locate(position: int) -> int:
        e = rest[position]
        return interval_binary_search(S_prime, e, state.eps_dprime, ctx.spawn("bin", position, phase="binning"), n)

    for e, k in zip(rest, _map(locate, range(len(rest)), workers)):
        state.bins[k].append(e)

    # 5a: near/far classification; C_{j+1} may receive elements from bin j
    budget = math.ceil(10 * math.log(n) / state.eps_dprime ** 2)
    lo, hi = 0.5 - 6 * state.eps_dprime, 0.5 + 6 * state.eps_dprime

    def classify(j: int) -> List[int]:
        cctx = ctx.spawn("classify", j, phase="classify")
        marks = []
        for e in state.bins.get(j, []):
            if lo <= compare2(e, S_prime[j - 1], budget, cctx) <= hi:
                marks.append(j)
            elif lo <= compare2(e, S_prime[j], budget, cctx) <= hi:
                marks.append(j + 1)
            else:
                marks.append(-j)
        return marks

    for j, marks in zip(range(1, bins + 1), _map(classify, range(1, bins + 1), workers)):
        for e, mark in zip(state.bins.get(j, []), marks):
            if mark > 0:
                state.near[mark].append(e)
            else:
                state.far[j].append(e)

    # 5b: rank what is far from both anchors
    def rank_far(j: int) -> RankedSeq:
        return rankx(state.far.get(j, []), state.eps_dprime, 1 / n ** 4, ctx.spawn("far-rank", j, phase="bin-rank"))

    ranked_far = dict(zip(range(1, bins + 1), _map(rank_far, range(1, bins + 1), workers)))

    # 5c/6: assemble S'(j), C_j, B_j and drop the dummies
    assembled: RankedSeq = []
    for j in range(1, bins + 1):
        assembled.append(S_prime[j - 1])
        assembled.extend(state.near.get(j, []))
        assembled.extend(ranked_far[j])
    state.output = [e for e in assembled if not ctx.is_dummy(e)]
    logger.debug(
        "bsr n=%d: %d anchors, %d near, %d far",
        n, count, sum(map(len, state.near.values())), sum(map(len, state.far.values())),
    )
    return state


def binary_search_ranking(
    S: Sequence[int],
    eps: float,
    ctx: OracleContext,
    rankx: RankBackend = rank3,
    x: int = 3,
    anchors: Optional[int] = None,
    workers: int = 1,
) -> RankedSeq:
    """An eps-ranking of S (ascending strength) with probability >= 1 - 1/n."""
    return run_binary_search_ranking(S, eps, ctx, rankx=rankx, x=x, anchors=anchors, workers=workers).output
