# tests/test_bsr.py
import math

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from pacrank.algorithms.bsr import (
    anchor_count,
    binary_search,
    build_tree,
    interval_binary_search,
    random_walk,
    run_binary_search_ranking,
)
from pacrank.bench.verify import eval_err, is_exact_ranking
from pacrank.oracle.duel import DummyKind, OracleContext
from pacrank.oracle.models import AdjacentGapModel
from pacrank.utils.errors import InvalidInputError


def framed(ctx, anchors):
    """S' = [a, *anchors, b] with fresh dummies."""
    return [ctx.add_dummy(DummyKind.LOSER), *anchors, ctx.add_dummy(DummyKind.WINNER)]


# ─── interval tree ────────────────────────────────────────────────────────────
def test_smallest_tree_is_a_leaf():
    root = build_tree(2)
    assert (root.alpha1, root.alpha2) == (1, 2)
    assert root.is_leaf


def test_five_anchor_tree():
    root = build_tree(5)
    assert (root.left.alpha1, root.left.alpha2) == (1, 3)
    assert (root.right.alpha1, root.right.alpha2) == (3, 5)
    assert [(leaf.alpha1, leaf.alpha2) for leaf in root.leaves()] == [(1, 2), (2, 3), (3, 4), (4, 5)]


def test_nine_anchor_tree_depth():
    root = build_tree(9)
    assert root.depth() == 3
    assert len(root.leaves()) == 8


def test_tree_needs_two_anchors():
    with pytest.raises(InvalidInputError):
        build_tree(1)


@settings(deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(min_value=2, max_value=300))
def test_children_tile_their_parent(m):
    root = build_tree(m)
    assert [(leaf.alpha1, leaf.alpha2) for leaf in root.leaves()] == [(k, k + 1) for k in range(1, m)]
    pending = [root]
    while pending:
        node = pending.pop()
        if node.is_leaf:
            assert node.left is None and node.right is None
            continue
        assert node.left.alpha1 == node.alpha1 and node.right.alpha2 == node.alpha2
        assert node.left.alpha2 == node.right.alpha1 == node.mid
        assert node.left.parent is node and node.right.parent is node
        pending.extend((node.left, node.right))
    assert root.depth() == math.ceil(math.log2(m - 1))


# ─── random walk ──────────────────────────────────────────────────────────────
def test_walk_places_an_element_strictly_inside_its_bin():
    # anchors 17..10 and 8..1 around element 9: its bin sits between S'(9) = 10 and S'(10) = 8
    model = AdjacentGapModel(17, 0.6)
    root = OracleContext(model, seed=21)
    s_prime = framed(root, [*range(17, 9, -1), *range(8, 0, -1)])
    assert s_prime[8] == 10 and s_prime[9] == 8

    right = wrong_counter = 0
    for trial in range(200):
        walk = random_walk(s_prime, 9, 0.05, root.spawn("trial", trial), n=17)
        assert walk.counter >= 0
        assert len(walk.queue) <= 3 * walk.step_budget
        if walk.via_counter:
            if walk.current.alpha1 == 9:
                right += 1
            else:
                wrong_counter += 1
    assert right >= 190
    assert wrong_counter <= 4


def test_walk_budget_follows_log_n(make_ctx, noiseless):
    ctx = make_ctx(noiseless(5))
    walk = random_walk(framed(ctx, [5, 4, 3]), 1, 0.1, ctx, n=5)
    assert walk.step_budget == 30 * math.ceil(math.log(5))
    assert walk.threshold == 10 * math.ceil(math.log(5))
    assert ctx.tally.total <= walk.step_budget * 3 * math.ceil(10 / 0.1 ** 2)


def test_strongest_element_lands_in_the_last_bin(make_ctx, noiseless):
    ctx = make_ctx(noiseless(5))
    s_prime = framed(ctx, [5, 4, 3])
    assert interval_binary_search(s_prime, 1, 0.1, ctx, n=5) == len(s_prime) - 1


def test_weakest_element_lands_in_the_first_bin(make_ctx, noiseless):
    ctx = make_ctx(noiseless(5))
    s_prime = framed(ctx, [4, 3, 2])
    assert interval_binary_search(s_prime, 5, 0.1, ctx, n=5) == 1


def test_walk_visits_an_anchor_close_to_the_element(linear):
    # anchors at values 0, 0.1, ..., 0.5; the element sits 0.005 above the third one
    model = linear([0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.205])
    root = OracleContext(model, seed=5)
    s_prime = framed(root, [1, 2, 3, 4, 5, 6])
    ok = 0
    for trial in range(200):
        walk = random_walk(s_prime, 7, 0.02, root.spawn("trial", trial), n=7)
        if 4 in walk.queue or (walk.via_counter and walk.current.alpha1 in (3, 4)):
            ok += 1
    assert ok >= 190


# ─── binary search ────────────────────────────────────────────────────────────
def test_binary_search_single_anchor(make_ctx, adjacent):
    ctx = make_ctx(adjacent)
    assert binary_search(framed(ctx, [5]), [2], 3, 0.05, ctx) == 2
    with pytest.raises(InvalidInputError):
        binary_search(framed(ctx, [5]), [], 3, 0.05, ctx)


def test_binary_search_returns_a_close_anchor(linear):
    model = linear([0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.21])
    root = OracleContext(model, seed=13)
    s_prime = framed(root, [1, 2, 3, 4, 5, 6])
    close = 0
    for trial in range(200):
        index = binary_search(s_prime, list(range(1, 9)), 7, 0.02, root.spawn("trial", trial), n=7)
        if not root.is_dummy(s_prime[index - 1]) and abs(model.advantage(s_prime[index - 1], 7)) < 0.04:
            close += 1
    assert close >= 190


def test_binary_search_moves_to_weaker_anchors_and_terminates(make_ctx, adjacent):
    ctx = make_ctx(adjacent)
    # anchor 4 beats element 6, so the search ends on dummy a
    assert binary_search(framed(ctx, [4]), [1, 2, 3], 6, 0.02, ctx) == 1


def test_binary_search_on_a_tie_returns_the_tied_anchor(linear):
    model = linear([0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.3])
    root = OracleContext(model, seed=2)
    s_prime = framed(root, [1, 2, 3, 4, 5, 6])
    assert binary_search(s_prime, list(range(1, 9)), 7, 0.02, root, n=7) == 5


# ─── full pipeline ────────────────────────────────────────────────────────────
def test_anchor_formula():
    assert anchor_count(1024, 3) == 1
    assert anchor_count(10, 3) == 0
    assert anchor_count(256, 1) == 32


def test_degenerate_anchor_count_falls_back(make_ctx, noiseless):
    model = noiseless(10)
    state = run_binary_search_ranking(list(range(1, 11)), 0.1, make_ctx(model))
    assert state.fallback
    assert is_exact_ranking(state.output, model)


def test_small_inputs(make_ctx, adjacent):
    ctx = make_ctx(adjacent)
    assert run_binary_search_ranking([3], 0.1, ctx).output == [3]
    assert run_binary_search_ranking([], 0.1, ctx).output == []
    with pytest.raises(InvalidInputError):
        run_binary_search_ranking([1, 2, 3], 0.1, ctx, anchors=4)
    with pytest.raises(InvalidInputError):
        run_binary_search_ranking([1, 2, 3], 0.6, ctx)


def test_noiseless_pipeline_is_exact(make_ctx, noiseless):
    model = noiseless(40)
    ctx = make_ctx(model, seed=3)
    state = run_binary_search_ranking(list(range(1, 41)), 0.2, ctx, anchors=6)
    assert not state.fallback
    assert len(state.S_prime) == 8
    assert is_exact_ranking(state.output, model)
    phases = ctx.tally.snapshot()
    assert phases["binning"] > 0 and phases["anchor-rank"] > 0
    assert sum(v for k, v in phases.items() if k != "total") == phases["total"]


def test_pipeline_is_thread_count_independent(make_ctx):
    model = AdjacentGapModel(64, 0.6)
    serial = run_binary_search_ranking(list(range(1, 65)), 0.2, make_ctx(model, seed=17), anchors=8)
    threaded_ctx = make_ctx(model, seed=17)
    threaded = run_binary_search_ranking(list(range(1, 65)), 0.2, threaded_ctx, anchors=8, workers=4)
    assert threaded.output == serial.output
    assert sorted(threaded.output) == list(range(1, 65))


# n ln n (ln ln n)^x / eps^2 scaling; C covers the worst case of every phase at n = 64 with 8 anchors
COST_CONSTANT = 2e5


def test_pipeline_cost_follows_the_n_log_n_scaling(make_ctx):
    n, eps, x = 64, 0.2, 3
    ctx = make_ctx(AdjacentGapModel(n, 0.6), seed=64)
    state = run_binary_search_ranking(list(range(1, n + 1)), eps, ctx, x=x, anchors=8)
    phases = ctx.tally.snapshot()

    walk_steps = 30 * math.ceil(math.log(n))
    per_judgement = math.ceil(10 / state.eps_dprime ** 2)
    per_query = math.ceil(10 * math.log(n) / (2 * state.eps_dprime) ** 2)
    # at most 3 judgements per walk step and 4 search steps over at most 10 anchors
    assert phases["binning"] <= (n - 8) * (walk_steps * 3 * per_judgement + 4 * per_query)
    scale = n * math.log(n) * math.log(math.log(n)) ** x / eps ** 2
    assert 0 < phases["total"] <= COST_CONSTANT * scale


@pytest.mark.slow
def test_pipeline_ranks_256_elements(make_ctx):
    model = AdjacentGapModel(256, 0.6)
    elements = list(range(1, 257))
    root = make_ctx(model, seed=256)
    good = 0
    for k in range(50):
        state = run_binary_search_ranking(elements, 0.05, root.spawn("run", k), anchors=16)
        anchors = set(state.S_prime[1:-1])
        counts = state.assignments()
        assert set(counts) == set(elements) - anchors
        assert all(c == 1 for c in counts.values())
        assert sorted(state.output) == elements
        good += eval_err(state.output, model) <= 0.05
    assert good >= 45
