"""TOPSIS ranking of alternatives against weighted benefit/cost criteria.

The six steps are exposed individually (``normalize``, ``apply_weights``,
``ideal_points``, ``separations``, ``closeness``) and composed by
:func:`rank`. :class:`TOPSISRanker` wraps the same steps as an estimator.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import DimensionMismatch
from .validation import check_decision_array, check_weights

TIE_TOL = 1e-12


class Direction(Enum):
    BENEFIT = "benefit"
    COST = "cost"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"benefit": cls.BENEFIT, "max": cls.BENEFIT, "+": cls.BENEFIT,
                   "cost": cls.COST, "min": cls.COST, "-": cls.COST}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown criterion direction {value!r}; use 'benefit' or 'cost'") from None


@dataclass(frozen=True)
class CriterionSpec:
    name: str
    direction: Direction
    weight: float

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction.parse(self.direction))
        if not (0.0 <= self.weight <= 1.0):
            raise ValueError(f"criterion {self.name!r}: weight {self.weight} outside [0, 1]")


@dataclass(frozen=True, eq=False)
class DecisionMatrix:
    """Raw ratings: one row per alternative, one column per criterion."""

    alternatives: tuple
    criteria: tuple
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        object.__setattr__(self, "criteria", tuple(self.criteria))
        arr = check_decision_array(self.entries, n_criteria=len(self.criteria), name="decision matrix").copy()
        if arr.shape[0] != len(self.alternatives):
            raise DimensionMismatch(
                f"decision matrix has {arr.shape[0]} rows but {len(self.alternatives)} alternatives"
            )
        check_weights(self.weights, name="criterion weights")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def weights(self):
        return np.array([c.weight for c in self.criteria], dtype=float)

    @property
    def benefit_mask(self):
        return np.array([c.direction is Direction.BENEFIT for c in self.criteria])


@dataclass(frozen=True, eq=False)
class RankingResult:
    alternatives: tuple
    closeness: np.ndarray
    ideal: np.ndarray
    anti_ideal: np.ndarray
    s_star: np.ndarray
    s_minus: np.ndarray
    order: tuple

    @property
    def separations(self):
        return list(zip(self.s_star.tolist(), self.s_minus.tolist()))

    @property
    def best(self):
        return self.alternatives[self.order[0]]

    def scores(self):
        return dict(zip(self.alternatives, self.closeness.tolist()))


def _column_norms(entries):
    return np.sqrt(np.sum(entries * entries, axis=0))


def _divide_columns(entries, norms):
    safe = np.where(norms > 0, norms, 1.0)
    return np.where(norms > 0, entries / safe, 0.0)


def normalize(d):
    """Euclidean column normalization; an all-zero column stays all zeros."""
    entries = d.entries if isinstance(d, DecisionMatrix) else check_decision_array(d)
    return _divide_columns(entries, _column_norms(entries))


def apply_weights(r, specs):
    r = np.asarray(r, dtype=float)
    weights = np.array([c.weight for c in specs], dtype=float) if _is_spec_seq(specs) else np.asarray(specs, float)
    if r.ndim != 2 or r.shape[1] != weights.shape[0]:
        raise DimensionMismatch(f"matrix has shape {r.shape} but {weights.shape[0]} criteria were given")
    return r * weights


def _is_spec_seq(specs):
    return len(specs) > 0 and isinstance(specs[0], CriterionSpec)


def _benefit_mask(specs):
    if _is_spec_seq(specs):
        return np.array([c.direction is Direction.BENEFIT for c in specs])
    return np.array([Direction.parse(s) is Direction.BENEFIT for s in specs])


def ideal_points(v, specs):
    """Return ``(ideal, anti_ideal)``.

    ``specs`` may be criterion specs or bare directions. Benefit columns take
    the max as ideal; cost columns take the min.
    """
    v = np.asarray(v, dtype=float)
    benefit = _benefit_mask(specs)
    if v.ndim != 2 or v.shape[1] != benefit.shape[0]:
        raise DimensionMismatch(f"matrix has shape {v.shape} but {benefit.shape[0]} criteria were given")
    hi, lo = v.max(axis=0), v.min(axis=0)
    return np.where(benefit, hi, lo), np.where(benefit, lo, hi)


def separations(v, a_star, a_minus):
    """Euclidean distance of every row of ``v`` to the ideal and anti-ideal points."""
    v = np.asarray(v, dtype=float)
    a_star = np.asarray(a_star, dtype=float)
    a_minus = np.asarray(a_minus, dtype=float)
    if v.ndim != 2 or a_star.shape != (v.shape[1],) or a_minus.shape != (v.shape[1],):
        raise DimensionMismatch(
            f"ideal points of shape {a_star.shape}/{a_minus.shape} do not match matrix of shape {v.shape}"
        )
    s_star = np.sqrt(np.sum((a_star - v) ** 2, axis=1))
    s_minus = np.sqrt(np.sum((a_minus - v) ** 2, axis=1))
    return s_star, s_minus


def closeness(s_star, s_minus):
    """Relative closeness ``S- / (S* + S-)``, 0.5 where both distances are zero.

    Works elementwise on arrays and returns a float for scalar input.
    """
    s_star = np.asarray(s_star, dtype=float)
    s_minus = np.asarray(s_minus, dtype=float)
    total = s_star + s_minus
    c = np.where(total > 0, s_minus / np.where(total > 0, total, 1.0), 0.5)
    return float(c) if c.ndim == 0 else c


def order_by_closeness(c, prefer=None, tol=TIE_TOL):
    """Indices sorted by decreasing closeness.

    Ties within ``tol`` go to ``prefer`` (an index) if it is among them,
    then to the lower index.
    """
    remaining = list(range(len(c)))
    order = []
    while remaining:
        top = max(c[i] for i in remaining)
        tied = [i for i in remaining if c[i] >= top - tol]
        pick = prefer if prefer in tied else tied[0]
        order.append(pick)
        remaining.remove(pick)
    return tuple(order)


def rank(d, prefer=None):
    """Run all TOPSIS steps on a :class:`DecisionMatrix`."""
    if not isinstance(d, DecisionMatrix):
        raise TypeError("rank expects a DecisionMatrix")
    v = apply_weights(normalize(d), d.criteria)
    a_star, a_minus = ideal_points(v, d.criteria)
    s_star, s_minus = separations(v, a_star, a_minus)
    c = closeness(s_star, s_minus)
    c = np.atleast_1d(c)
    return RankingResult(
        alternatives=d.alternatives,
        closeness=c,
        ideal=a_star,
        anti_ideal=a_minus,
        s_star=s_star,
        s_minus=s_minus,
        order=order_by_closeness(c, prefer=prefer),
    )


class TOPSISRanker(BaseEstimator):
    """TOPSIS as a fit/transform estimator.

    ``fit`` learns the column norms and the ideal/anti-ideal points from a
    set of alternatives; ``transform`` scores rows against them. Calling
    ``fit_transform`` on one matrix reproduces :func:`rank` exactly.

    Parameters
    ----------
    weights : array-like of shape (n_criteria,)
        Nonnegative, summing to one.
    directions : sequence of {"benefit", "cost"}
    """

    def __init__(self, weights, directions):
        self.weights = weights
        self.directions = directions

    def fit(self, X, y=None):
        X = check_decision_array(X)
        w = check_weights(self.weights, n=X.shape[1])
        if len(self.directions) != X.shape[1]:
            raise DimensionMismatch(f"{len(self.directions)} directions for {X.shape[1]} criteria")
        self.norms_ = _column_norms(X)
        v = _divide_columns(X, self.norms_) * w
        self.ideal_, self.anti_ideal_ = ideal_points(v, self.directions)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "norms_")
        X = check_decision_array(X, n_criteria=self.n_features_in_)
        v = _divide_columns(X, self.norms_) * np.asarray(self.weights, dtype=float)
        s_star, s_minus = separations(v, self.ideal_, self.anti_ideal_)
        return np.atleast_1d(closeness(s_star, s_minus))

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)

    def predict(self, X):
        """1-based rank position of each row (1 = best)."""
        c = self.transform(X)
        positions = np.empty(len(c), dtype=int)
        positions[list(order_by_closeness(c))] = np.arange(1, len(c) + 1)
        return positions
