# tests/test_duel.py
import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from pacrank.algorithms import duel as duel_module
from pacrank.algorithms.duel import compare, compare2
from pacrank.oracle.duel import ComparisonTally, DummyKind, OracleContext
from pacrank.oracle.models import AdjacentGapModel, MatrixModel
from pacrank.schemas.models import CompareParams
from pacrank.utils.errors import InvalidInputError
from pacrank.utils.rng import derive_seed, stream


def test_budget_and_confidence():
    params = CompareParams(eps=0.05, delta=0.1)
    assert params.budget == 600
    assert params.confidence(16) == pytest.approx(np.sqrt(np.log(4 * 256 / 0.1) / 32))
    rr = np.arange(1, 20)
    assert_allclose(params.confidence(rr), [params.confidence(int(r)) for r in rr])


@pytest.mark.parametrize("eps, delta", [(0.0, 0.1), (0.5, 0.1), (0.05, 0.0), (0.05, 1.0)])
def test_compare_rejects_parameters(eps, delta, make_ctx):
    ctx = make_ctx(AdjacentGapModel(2, 0.6))
    with pytest.raises(ValidationError):
        compare(1, 2, eps, delta, ctx)


def test_compare_rejects_self(make_ctx):
    with pytest.raises(InvalidInputError):
        compare(1, 1, 0.05, 0.1, make_ctx(AdjacentGapModel(2, 0.6)))


def test_compare_stops_early_on_a_sure_pair(make_ctx, noiseless):
    # with p = 1 the first r where 1/2 > c_hat(r) - eps is r = 16
    ctx = make_ctx(noiseless(2))
    assert compare(1, 2, 0.05, 0.1, ctx) == 1
    assert ctx.tally.total == 16
    assert compare(2, 1, 0.05, 0.1, ctx) == 1
    assert ctx.tally.total == 32


def test_compare_never_exceeds_budget_plus_one(make_ctx):
    ctx = make_ctx(AdjacentGapModel(2, 0.5))
    for run in range(20):
        child = ctx.spawn("run", run)
        before = ctx.tally.total
        compare(1, 2, 0.05, 0.1, child)
        assert ctx.tally.total - before <= 601


def test_compare_wrong_winner_rate(make_ctx):
    # p~ = 0.1 against eps = 0.05: wrong with probability at most delta
    ctx = make_ctx(AdjacentGapModel(2, 0.6), seed=11)
    wrong = sum(compare(1, 2, 0.05, 0.1, ctx.spawn("run", k)) != 1 for k in range(2000))
    assert wrong / 2000 <= 0.13


def test_compare_adapts_to_a_large_gap(make_ctx):
    ctx = make_ctx(AdjacentGapModel(2, 0.9), seed=5)
    for k in range(500):
        compare(1, 2, 0.05, 0.1, ctx.spawn("run", k))
    assert ctx.tally.total / 500 < 300


def test_compare_does_not_depend_on_block_size(monkeypatch, make_ctx):
    from pacrank.utils.settings import get_settings

    model = AdjacentGapModel(2, 0.55)
    first = make_ctx(model, seed=3)
    winners = [compare(1, 2, 0.05, 0.1, first.spawn("run", k)) for k in range(30)]

    monkeypatch.setenv("PACRANK_COMPARE_BLOCK", "1000")
    get_settings.cache_clear()
    second = make_ctx(model, seed=3)
    assert [compare(1, 2, 0.05, 0.1, second.spawn("run", k)) for k in range(30)] == winners
    assert second.tally.total == first.tally.total


def test_compare_blocks_are_capped(monkeypatch, make_ctx):
    model = AdjacentGapModel(2, 0.55)
    first = make_ctx(model, seed=3)
    winners = [compare(1, 2, 0.05, 0.1, first.spawn("run", k)) for k in range(30)]

    monkeypatch.setattr(duel_module, "MAX_BLOCK", 100)
    sizes = []
    draw = OracleContext.draw

    def recording_draw(self, i, j, k):
        sizes.append(k)
        return draw(self, i, j, k)

    monkeypatch.setattr(OracleContext, "draw", recording_draw)
    second = make_ctx(model, seed=3)
    assert [compare(1, 2, 0.05, 0.1, second.spawn("run", k)) for k in range(30)] == winners
    assert second.tally.total == first.tally.total
    assert max(sizes) <= 100


def test_tied_pair_has_a_bounded_block_footprint(monkeypatch, make_ctx):
    # a near-tie at a tiny bias runs to the budget; no single block exceeds the cap
    sizes = []
    draw = OracleContext.draw

    def recording_draw(self, i, j, k):
        sizes.append(k)
        return draw(self, i, j, k)

    monkeypatch.setattr(OracleContext, "draw", recording_draw)
    ctx = make_ctx(MatrixModel([[0.5, 0.5], [0.5, 0.5]]), seed=1)
    compare(1, 2, 0.002, 0.1, ctx)
    assert max(sizes) <= duel_module.MAX_BLOCK
    assert ctx.tally.total <= CompareParams(eps=0.002, delta=0.1).budget + 1


def test_compare_on_a_fair_pair_is_symmetric(make_ctx):
    ctx = make_ctx(AdjacentGapModel(2, 0.5), seed=21)
    first = sum(compare(1, 2, 0.1, 0.1, ctx.spawn("run", k)) == 1 for k in range(1000))
    assert 450 <= first <= 550


def test_compare2_counts_exactly_k(make_ctx, noiseless):
    ctx = make_ctx(noiseless(3))
    assert compare2(1, 3, 25, ctx) == 1.0
    assert compare2(3, 1, 25, ctx) == 0.0
    assert ctx.tally.total == 50
    with pytest.raises(InvalidInputError):
        compare2(1, 2, 0, ctx)


def test_compare2_concentrates(make_ctx):
    ctx = make_ctx(AdjacentGapModel(2, 0.6), seed=13)
    assert compare2(1, 2, 10 ** 5, ctx) == pytest.approx(0.6, abs=0.01)


def test_duel_frequency_matches_p(make_ctx):
    ctx = make_ctx(AdjacentGapModel(2, 0.6), seed=2)
    n = 10 ** 6
    freq = ctx.draw(1, 2, n).mean()
    assert abs(freq - 0.6) <= 5 * np.sqrt(0.6 * 0.4 / n)
    single = sum(ctx.duel(1, 2) == 1 for _ in range(20000)) / 20000
    assert abs(single - 0.6) <= 5 * np.sqrt(0.6 * 0.4 / 20000)


def test_dummies_in_duels(make_ctx):
    ctx = make_ctx(AdjacentGapModel(3, 0.6))
    loser, winner = ctx.add_dummy(DummyKind.LOSER), ctx.add_dummy(DummyKind.WINNER)
    assert ctx.wins(3, loser, 40) == 40
    assert ctx.wins(1, winner, 40) == 0
    assert compare(loser, 3, 0.05, 0.1, ctx) == 3


def test_tally_phases():
    tally = ComparisonTally()
    tally.add(3, "walk")
    tally.add(2)
    tally.add(4, "walk")
    assert tally.total == 9
    assert tally.phase("walk") == 7
    assert tally.phase("missing") == 0
    assert tally.snapshot() == {"total": 9, "walk": 7}
    with pytest.raises(InvalidInputError):
        tally.add(-1)


def test_spawned_phase_is_charged(make_ctx):
    ctx = make_ctx(AdjacentGapModel(3, 0.6))
    ctx.spawn("x", phase="classify").wins(1, 2, 10)
    ctx.wins(1, 2, 5)
    assert ctx.tally.phase("classify") == 10
    assert ctx.tally.total == 15


def test_streams_are_keyed():
    a = stream(7, (1, 2)).random(5)
    assert np.array_equal(a, stream(7, (1, 2)).random(5))
    assert not np.array_equal(a, stream(7, (2, 1)).random(5))
    assert not np.array_equal(a, stream(8, (1, 2)).random(5))
    assert derive_seed(7, 3) == derive_seed(7, 3)
    assert derive_seed(7, 3) != derive_seed(7, 4)
    assert 0 <= derive_seed(7, 3) < 2 ** 63


def test_same_seed_same_duels():
    model = AdjacentGapModel(4, 0.6)
    first = OracleContext(model, seed=9).spawn("a", 1)
    second = OracleContext(model, seed=9).spawn("a", 1)
    assert [first.duel(1, 2) for _ in range(50)] == [second.duel(1, 2) for _ in range(50)]
