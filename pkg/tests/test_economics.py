import random
from decimal import Decimal

import pytest

from armforge.economics import (BomItem, Category, annual_revenue, bom_frame, bom_total, budget_check,
                                category_totals, items_from_dict, load_bom, round_cents, unit_price)
from armforge.errors import ConfigurationError, DomainError


def test_budget_check_passes_with_headroom():
    check = budget_check(Decimal("199.25"), Decimal("250.00"))
    assert check.passes
    assert check.headroom == Decimal("50.75")


def test_budget_check_over_budget():
    check = budget_check("260.10", "250")
    assert not check.passes
    assert check.headroom == Decimal("-10.10")


def test_unit_price_with_margin():
    assert unit_price("199.25", "0.30") == Decimal("259.03")


def test_rounding_is_half_up():
    assert round_cents("0.125") == Decimal("0.13")
    assert round_cents(2.675) == Decimal("2.68")


def test_annual_revenue():
    assert annual_revenue(Decimal("259.03")) == Decimal("129515.00")
    with pytest.raises(DomainError):
        annual_revenue("10", -1)


def test_bundled_bom_total():
    items = load_bom()
    assert bom_total(items) == Decimal("199.25")


def test_empty_bom_costs_nothing():
    assert bom_total([]) == Decimal("0.00")


def test_bom_total_ignores_item_order():
    items = load_bom()
    shuffled = list(items)
    random.Random(7).shuffle(shuffled)
    assert bom_total(shuffled) == bom_total(items) == Decimal("199.25")
    assert bom_total(reversed(items)) == bom_total(items)


def test_bom_total_adds_across_lists():
    first = [BomItem("servo", "9.99", 4, Category.MOTOR), BomItem("board", "23.50")]
    second = [BomItem("camera", "59.90", 1, Category.SENSOR), BomItem("screws", "0.05", 40)]
    assert bom_total(first + second) == bom_total(first) + bom_total(second) == Decimal("125.36")


def test_category_totals_sum_to_the_bom():
    items = load_bom()
    totals = category_totals(items)
    assert list(totals.columns) == ["category", "cost"]
    assert sum(totals["cost"], Decimal("0")) == bom_total(items)
    assert totals.iloc[0]["category"] == "sensor"


def test_bom_frame_columns():
    frame = bom_frame([BomItem("servo", Decimal("9.99"), 4, Category.MOTOR)])
    assert frame.iloc[0]["line_total"] == "39.96"
    assert list(frame.columns) == ["name", "category", "quantity", "unit_cost", "line_total"]


@pytest.mark.parametrize("kwargs", [
    {"name": "x", "unit_cost": "-1.00"},
    {"name": "x", "unit_cost": "1.00", "quantity": 0},
])
def test_bom_item_domain(kwargs):
    with pytest.raises(DomainError):
        BomItem(**kwargs)


def test_budget_and_margin_domain():
    with pytest.raises(DomainError):
        budget_check("10", "0")
    with pytest.raises(DomainError):
        unit_price("10", "-0.1")
    with pytest.raises(DomainError):
        round_cents("ten dollars")


def test_malformed_bom():
    with pytest.raises(ConfigurationError):
        items_from_dict({"items": [{"name": "x"}]})
    with pytest.raises(ConfigurationError):
        load_bom("missing_bom.json")
