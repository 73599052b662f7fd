import pytest
from freezegun import freeze_time

from ctl.core.budget import TimeBudget
from ctl.core.config import settings
from ctl.core.errors import BudgetExceededError


def test_budget_expires_after_deadline():
    with freeze_time("2025-01-06 12:00:00") as frozen:
        budget = TimeBudget(10, check_every=1)
        budget.tick()
        frozen.tick(9)
        budget.tick()
        assert budget.remaining() == pytest.approx(1)
        frozen.tick(2)
        with pytest.raises(BudgetExceededError) as info:
            budget.tick()
    assert info.value.stage == "search"
    assert "10s" in str(info.value)


def test_clock_is_read_every_n_ticks():
    with freeze_time("2025-01-06 12:00:00") as frozen:
        budget = TimeBudget(1, check_every=4)
        frozen.tick(5)
        for _ in range(3):
            budget.tick()
        with pytest.raises(BudgetExceededError):
            budget.tick()


def test_stage_labels_the_error():
    budget = TimeBudget(-1)
    with budget.stage("near_acyclic"):
        with pytest.raises(BudgetExceededError) as info:
            budget.check()
    assert info.value.stage == "near_acyclic"
    assert budget.current_stage == "search"


def test_nested_stages_restore():
    budget = TimeBudget(5)
    with budget.stage("outer"):
        with budget.stage("inner"):
            assert budget.current_stage == "inner"
        assert budget.current_stage == "outer"


def test_ensure_default():
    budget = TimeBudget.ensure(None)
    assert budget.seconds == settings.TIME_BUDGET_SECS
    assert TimeBudget.ensure(budget) is budget
