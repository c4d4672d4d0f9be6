"""
Weighted decision matrices (component selection) and a QFD relationship
scorer.

Score = sum(weight_i * score_i). Weights must already sum to one; the engine
never normalizes silently except when perturbing weights for sensitivity.
"""
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from armforge import config
from armforge.errors import ConfigurationError, ValidationError

logger = logging.getLogger(__name__)

WEIGHT_TOLERANCE = 1e-9
SCORE_RANGE = (0.0, 10.0)
SENSITIVITY_GRID = tuple(round(0.01 * k, 2) for k in range(1, 31))
QFD_LEVELS = (0, 1, 3, 9)


@dataclass(frozen=True)
class Criterion:
    name: str
    weight: float


@dataclass(frozen=True)
class Candidate:
    name: str
    scores: Tuple[float, ...]
    reference_total: Optional[float] = None


@dataclass(frozen=True)
class DecisionMatrix:
    criteria: Tuple[Criterion, ...]
    candidates: Tuple[Candidate, ...]
    title: str = ""

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.criteria], dtype=float)

    @property
    def criterion_names(self) -> List[str]:
        return [c.name for c in self.criteria]

    def with_weights(self, weights: Sequence[float]) -> "DecisionMatrix":
        criteria = tuple(Criterion(c.name, float(w)) for c, w in zip(self.criteria, weights))
        return DecisionMatrix(criteria, self.candidates, self.title)


@dataclass(frozen=True)
class CandidateResult:
    name: str
    weighted_scores: Tuple[float, ...]
    total: float


@dataclass(frozen=True)
class RankedResult:
    per_candidate: Tuple[CandidateResult, ...]
    ranking: Tuple[str, ...]
    title: str = ""

    @property
    def winner(self) -> str:
        return self.ranking[0]

    def total(self, name: str) -> float:
        for row in self.per_candidate:
            if row.name == name:
                return row.total
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "per_candidate": [
                {"name": r.name, "weighted_scores": list(r.weighted_scores), "total": r.total}
                for r in self.per_candidate
            ],
            "ranking": list(self.ranking),
        }

    def to_frame(self, criteria: Optional[Sequence[str]] = None) -> pd.DataFrame:
        """One row per candidate in rank order."""
        order = {name: i for i, name in enumerate(self.ranking)}
        rows = []
        for r in sorted(self.per_candidate, key=lambda r: order[r.name]):
            labels = criteria or [f"c{i}" for i in range(len(r.weighted_scores))]
            rows.append({"rank": order[r.name] + 1, "candidate": r.name,
                         **dict(zip(labels, r.weighted_scores)), "total": r.total})
        return pd.DataFrame(rows)


@dataclass(frozen=True)
class SensitivityReport:
    criterion: str
    baseline_winner: str
    tie: bool
    stable: bool
    flip_delta: Optional[float] = None
    new_winner: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "baseline_winner": self.baseline_winner,
            "tie": self.tie,
            "stable": self.stable,
            "flip_delta": self.flip_delta,
            "new_winner": self.new_winner,
        }


@dataclass(frozen=True)
class QfdResult:
    requirements: Tuple[str, ...]
    scores: Tuple[float, ...]
    ranking: Tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "scores": dict(zip(self.requirements, self.scores)),
            "ranking": list(self.ranking),
        }


# ==================== Decision matrix ====================

def validate_matrix(m: DecisionMatrix):
    if not m.criteria or not m.candidates:
        raise ValidationError("decision matrix needs criteria and candidates", title=m.title)
    weight_sum = math.fsum(c.weight for c in m.criteria)
    if abs(weight_sum - 1.0) > WEIGHT_TOLERANCE:
        raise ValidationError(f"weights sum to {weight_sum:.12f}, not 1", weight_sum=weight_sum)
    if any(c.weight < 0 or c.weight > 1 for c in m.criteria):
        raise ValidationError("criterion weights must lie in [0, 1]")

    lo, hi = SCORE_RANGE
    for cand in m.candidates:
        if len(cand.scores) != len(m.criteria):
            raise ValidationError(
                f"candidate '{cand.name}' has {len(cand.scores)} scores for {len(m.criteria)} criteria",
                candidate=cand.name,
            )
        bad = [s for s in cand.scores if not lo <= s <= hi]
        if bad:
            raise ValidationError(f"candidate '{cand.name}' has scores outside 0-10: {bad}", candidate=cand.name)


def _rank(names: Sequence[str], totals: Sequence[float]) -> Tuple[str, ...]:
    """Descending by total; ties keep input order."""
    order = sorted(range(len(names)), key=lambda i: (-round(totals[i], 9), i))
    return tuple(names[i] for i in order)


def evaluate(m: DecisionMatrix) -> RankedResult:
    validate_matrix(m)
    weights = m.weights
    rows = []
    for cand in m.candidates:
        weighted = tuple(float(w * s) for w, s in zip(weights, cand.scores))
        rows.append(CandidateResult(cand.name, weighted, math.fsum(weighted)))
    ranking = _rank([r.name for r in rows], [r.total for r in rows])
    return RankedResult(tuple(rows), ranking, m.title)


def perturbed_weights(m: DecisionMatrix, criterion: str, delta: float) -> np.ndarray:
    """Shift one weight by ``delta`` (floored at 0) and renormalize to sum 1."""
    names = m.criterion_names
    if criterion not in names:
        raise ValidationError(f"unknown criterion '{criterion}'", criterion=criterion, known=names)
    weights = m.weights.copy()
    idx = names.index(criterion)
    weights[idx] = max(0.0, weights[idx] + delta)
    total = weights.sum()
    if total <= 0:
        raise ValidationError("perturbation removed every weight", criterion=criterion, delta=delta)
    return weights / total


def sensitivity(m: DecisionMatrix, criterion: str, delta: Optional[float] = None,
                grid: Sequence[float] = SENSITIVITY_GRID) -> SensitivityReport:
    """
    Smallest weight shift on ``criterion`` that changes the winner.

    With ``delta`` given only that one shift is tried; otherwise every grid
    magnitude is tried, positive before negative.
    """
    baseline = evaluate(m)
    totals = sorted((r.total for r in baseline.per_candidate), reverse=True)
    tie = len(totals) > 1 and abs(totals[0] - totals[1]) <= WEIGHT_TOLERANCE

    deltas = [delta] if delta is not None else [d for step in grid for d in (step, -step)]
    for d in deltas:
        weights = perturbed_weights(m, criterion, d)
        winner = evaluate(m.with_weights(weights)).winner
        if winner != baseline.winner:
            logger.info(f"Winner of '{m.title}' flips to {winner} at {criterion} {d:+.2f}")
            return SensitivityReport(criterion, baseline.winner, tie, False, float(d), winner)
    return SensitivityReport(criterion, baseline.winner, tie, True)


# ==================== QFD ====================

def qfd_scores(relationships, importance, requirements: Optional[Sequence[str]] = None) -> QfdResult:
    """
    Rows are customer requirements, columns functional requirements.
    Score of column j = sum_i importance_i * relationship_ij.
    """
    R = np.asarray(relationships, dtype=float)
    w = np.asarray(importance, dtype=float)
    if R.ndim != 2 or w.ndim != 1 or R.shape[0] != w.shape[0]:
        raise ValidationError(
            "relationship matrix rows must match the importance vector",
            relationships=list(R.shape), importance=list(w.shape),
        )
    if not np.isin(R, QFD_LEVELS).all():
        raise ValidationError("relationship strengths must be one of 0, 1, 3, 9")
    names = list(requirements) if requirements is not None else [f"FR{j + 1}" for j in range(R.shape[1])]
    if len(names) != R.shape[1]:
        raise ValidationError("requirement names must match the relationship columns")

    scores = tuple(float(s) for s in w @ R)
    return QfdResult(tuple(names), scores, _rank(names, scores))


# ==================== Fixtures ====================

def matrix_from_dict(data: dict) -> DecisionMatrix:
    try:
        criteria = tuple(Criterion(c["name"], float(c["weight"])) for c in data["criteria"])
        candidates = tuple(
            Candidate(c["name"], tuple(float(s) for s in c["scores"]), c.get("reference_total"))
            for c in data["candidates"]
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigurationError(f"malformed decision matrix: {e}") from e
    return DecisionMatrix(criteria, candidates, data.get("title", ""))


def _read_json(path) -> dict:
    resolved = config.resolve_path(path)
    if not Path(resolved).exists():
        raise ConfigurationError(f"file not found: {path}", path=str(path))
    with open(resolved, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"invalid JSON in {path}: {e}", path=str(path)) from e


def load_matrix(path) -> DecisionMatrix:
    return matrix_from_dict(_read_json(path))


def load_qfd(path) -> dict:
    """QFD fixture: customer_requirements, importance, functional_requirements, relationships."""
    data = _read_json(path)
    for key in ("importance", "functional_requirements", "relationships"):
        if key not in data:
            raise ConfigurationError(f"QFD file is missing '{key}'", path=str(path))
    return data


def bundled_tables() -> Dict[str, DecisionMatrix]:
    """The six bundled component-selection matrices keyed by component (gripper, boards, ...)."""
    return {key: load_matrix(config.TABLES_DIR / name) for key, name in config.BUNDLED_TABLES.items()}
