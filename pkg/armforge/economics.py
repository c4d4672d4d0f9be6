"""
Bill-of-materials roll-up, budget compliance and unit pricing.

All arithmetic is done in Decimal; values are rounded half-up to cents only
when they leave this module.
"""
import json
import logging
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import pandas as pd

from armforge import config
from armforge.errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

CENT = Decimal("0.01")
Money = Union[Decimal, int, float, str]


class Category(str, Enum):
    MOTOR = "motor"
    CONTROLLER = "controller"
    STRUCTURE = "structure"
    SENSOR = "sensor"
    MISC = "misc"


def to_decimal(value: Money) -> Decimal:
    """Exact Decimal from a str, int or float (floats go through repr)."""
    if isinstance(value, Decimal):
        return value
    try:
        return Decimal(str(value))
    except InvalidOperation as e:
        raise DomainError(f"not a monetary amount: {value!r}") from e


def round_cents(value: Money) -> Decimal:
    return to_decimal(value).quantize(CENT, rounding=ROUND_HALF_UP)


@dataclass(frozen=True)
class BomItem:
    name: str
    unit_cost: Decimal
    quantity: int = 1
    category: Category = Category.MISC
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "unit_cost", to_decimal(self.unit_cost))
        object.__setattr__(self, "category", Category(self.category))
        if self.unit_cost < 0:
            raise DomainError(f"'{self.name}' has a negative unit cost", item=self.name)
        if self.quantity < 1:
            raise DomainError(f"'{self.name}' needs quantity >= 1", item=self.name)

    @property
    def line_total(self) -> Decimal:
        return self.unit_cost * self.quantity


@dataclass(frozen=True)
class BudgetCheck:
    passes: bool
    headroom: Decimal


def bom_total(items: Iterable[BomItem]) -> Decimal:
    return round_cents(sum((item.line_total for item in items), Decimal("0")))


def budget_check(total: Money, budget: Money = config.BUDGET_USD) -> BudgetCheck:
    total, budget = to_decimal(total), to_decimal(budget)
    if budget <= 0:
        raise DomainError("budget must be positive", budget=str(budget))
    return BudgetCheck(passes=total <= budget, headroom=round_cents(budget - total))


def unit_price(prototype_cost: Money, margin: Money = config.PROFIT_MARGIN) -> Decimal:
    margin = to_decimal(margin)
    if margin < 0:
        raise DomainError("margin cannot be negative", margin=str(margin))
    return round_cents(to_decimal(prototype_cost) * (1 + margin))


def annual_revenue(price: Money, units_per_year: int = config.UNITS_PER_YEAR) -> Decimal:
    if units_per_year < 0:
        raise DomainError("units per year cannot be negative", units_per_year=units_per_year)
    return round_cents(to_decimal(price) * units_per_year)


def category_totals(items: Sequence[BomItem]) -> pd.DataFrame:
    """Cost per category, largest first."""
    frame = pd.DataFrame(
        [{"category": i.category.value, "cost": i.line_total} for i in items],
        columns=["category", "cost"],
    )
    if frame.empty:
        return frame
    grouped = frame.groupby("category", sort=False)["cost"].apply(lambda s: round_cents(sum(s, Decimal("0"))))
    return grouped.reset_index().sort_values("cost", ascending=False, kind="stable").reset_index(drop=True)


def bom_frame(items: Sequence[BomItem]) -> pd.DataFrame:
    return pd.DataFrame([
        {
            "name": i.name,
            "category": i.category.value,
            "quantity": i.quantity,
            "unit_cost": str(round_cents(i.unit_cost)),
            "line_total": str(round_cents(i.line_total)),
        }
        for i in items
    ])


def items_from_dict(data: dict) -> List[BomItem]:
    try:
        return [
            BomItem(
                name=raw["name"],
                unit_cost=to_decimal(raw["unit_cost"]),
                quantity=int(raw.get("quantity", 1)),
                category=Category(raw.get("category", "misc")),
                note=raw.get("note", ""),
            )
            for raw in data["items"]
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigurationError(f"malformed BOM: {e}") from e


def load_bom(path=config.DEFAULT_BOM_FILE) -> List[BomItem]:
    resolved = config.resolve_path(path)
    if not Path(resolved).exists():
        raise ConfigurationError(f"BOM file not found: {path}", path=str(path))
    with open(resolved, "r", encoding="utf-8") as f:
        try:
            data = json.load(f, parse_float=Decimal)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"BOM is not valid JSON: {e}", path=str(resolved)) from e
    items = items_from_dict(data)
    logger.info(f"✓ Loaded {len(items)} BOM lines from {resolved}")
    return items
