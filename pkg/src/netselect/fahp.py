"""Fuzzy AHP: additive-reciprocal preference matrices, weights and consistency.

A fuzzy pairwise matrix holds preferences ``r_ij`` in ``[0, 1]`` with
``r_ii = 0.5`` and ``r_ij + r_ji = 1``. Weights are the normalized row sums.
Consistency is checked on the multiplicative image ``r / (1 - r)`` using
the usual lambda-max estimator and the random index table below.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from sklearn.base import BaseEstimator

from .exceptions import (
    ConsistencyGateFailure,
    DiagonalViolation,
    RangeViolation,
    ReciprocityViolation,
    WeightDimensionMismatch,
    ZeroWeight,
)
from .validation import TOL, check_square

CR_THRESHOLD = 0.1
CLAMP = (0.01, 0.99)

# Random consistency index, indexed by matrix size.
RANDOM_INDEX = {3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49}


class SaatyGrade(Enum):
    EQUALLY_IMPORTANT = 0.5
    SLIGHTLY_IMPORTANT = 0.55
    IMPORTANT = 0.65
    STRONGLY_IMPORTANT = 0.75
    VERY_STRONGLY_IMPORTANT = 0.85
    EXTREMELY_IMPORTANT = 0.95

    @property
    def label(self):
        return "".join(part.capitalize() for part in self.name.split("_"))

    @classmethod
    def parse(cls, text):
        """Look a grade up by label, tolerant of case, spaces, dashes and underscores.

        ``"StronglyImportant"``, ``"strongly important"`` and
        ``"strongly_important"`` all resolve to :attr:`STRONGLY_IMPORTANT`.
        """
        key = "".join(ch for ch in str(text).lower() if ch.isalnum())
        for grade in cls:
            if grade.label.lower() == key:
                return grade
        raise ValueError(f"unknown grade {text!r}; expected one of {[g.label for g in cls]}")


def scale_value(grade):
    """Center value of a Saaty fuzzy grade; the mirrored cell gets ``1 - value``."""
    if not isinstance(grade, SaatyGrade):
        grade = SaatyGrade.parse(grade)
    return grade.value


@dataclass(frozen=True, eq=False)
class FuzzyPairwiseMatrix:
    """A validated, read-only fuzzy preference matrix.

    Build instances through :func:`validate_matrix`.
    """

    entries: np.ndarray

    @property
    def n(self):
        return self.entries.shape[0]

    def __eq__(self, other):
        if not isinstance(other, FuzzyPairwiseMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    __hash__ = None


@dataclass(frozen=True)
class ConsistencyReport:
    ci: float
    ri: float
    cr: float
    acceptable: bool


def validate_matrix(m, tol=TOL):
    """Check the fuzzy preference constraints and wrap ``m``.

    Raises
    ------
    RangeViolation
        An entry lies outside ``[0, 1]``.
    DiagonalViolation
        A diagonal entry differs from 0.5 by more than ``tol``.
    ReciprocityViolation
        Some ``r_ij + r_ji`` differs from 1 by more than ``tol``.
    """
    if isinstance(m, FuzzyPairwiseMatrix):
        return m
    arr = check_square(m, "pairwise matrix").copy()
    bad = np.argwhere((arr < -tol) | (arr > 1 + tol))
    if bad.size:
        i, j = bad[0]
        raise RangeViolation(f"entry ({i}, {j}) = {arr[i, j]:g} lies outside [0, 1]")
    diag = np.abs(np.diag(arr) - 0.5)
    if np.any(diag > tol):
        i = int(np.argmax(diag))
        raise DiagonalViolation(f"diagonal entry ({i}, {i}) = {arr[i, i]:g}, must be 0.5")
    recip = np.abs(arr + arr.T - 1.0)
    if np.any(recip > tol):
        i, j = np.unravel_index(int(np.argmax(recip)), recip.shape)
        i, j = sorted((int(i), int(j)))
        raise ReciprocityViolation(
            f"entries ({i}, {j}) = {arr[i, j]:g} and ({j}, {i}) = {arr[j, i]:g} must sum to 1"
        )
    arr.setflags(write=False)
    return FuzzyPairwiseMatrix(arr)


def from_upper_triangle(rows):
    """Expand upper-triangle preferences into a full matrix.

    ``rows[i]`` lists the entries ``r_i,i+1 .. r_i,n-1``. Each entry is a
    number, a grade label, or ``"1-<label>"`` for the mirrored value.
    """
    rows = list(rows)
    n = len(rows) + 1
    out = np.full((n, n), 0.5)
    for i, row in enumerate(rows):
        row = list(row)
        if len(row) != n - 1 - i:
            raise ValueError(f"upper-triangle row {i} has {len(row)} entries, expected {n - 1 - i}")
        for k, cell in enumerate(row):
            j = i + 1 + k
            out[i, j] = preference_value(cell)
            out[j, i] = 1.0 - out[i, j]
    return out


def preference_value(cell):
    """Numeric value of a config cell: a number, a grade label, or ``1-<label>``."""
    if isinstance(cell, SaatyGrade):
        return cell.value
    if isinstance(cell, (int, float)) and not isinstance(cell, bool):
        return float(cell)
    text = str(cell).strip()
    if text.startswith("1-"):
        return 1.0 - scale_value(text[2:])
    return scale_value(text)


def derive_weights(m):
    """Normalized row-sum weights of a fuzzy preference matrix.

    The result is a read-only array that sums to one. Every row sum is at
    least 0.5 (the diagonal), so all weights are strictly positive.

    >>> derive_weights([[0.5, 0.75], [0.25, 0.5]]).tolist()
    [0.625, 0.375]
    """
    entries = validate_matrix(m).entries
    row_sums = entries.sum(axis=1)
    w = row_sums / row_sums.sum()
    w.setflags(write=False)
    return w


def multiplicative_transform(m, clamp=CLAMP):
    entries = np.clip(validate_matrix(m).entries, *clamp)
    return entries / (1.0 - entries)


def random_index(n):
    if n <= 2:
        return 0.0
    try:
        return RANDOM_INDEX[n]
    except KeyError:
        raise ValueError(f"no random index tabulated for n={n} (supported: 1..10)") from None


def consistency_ratio(m, w, clamp=CLAMP, threshold=CR_THRESHOLD):
    """Consistency index and ratio of ``m`` against weights ``w``.

    ``lambda = sum_j (M w)_j / (n w_j)`` on the multiplicative transform
    ``M``, ``CI = (lambda - n) / (n - 1)`` and ``CR = CI / RI``. Matrices
    of size 1 or 2 are consistent by convention (CI = CR = 0).
    """
    m = validate_matrix(m)
    n = m.n
    w = np.asarray(w, dtype=float)
    if w.shape != (n,):
        raise WeightDimensionMismatch(f"weight vector has shape {w.shape}, matrix is {n}x{n}")
    if np.any(w == 0):
        raise ZeroWeight("a zero weight makes the lambda estimate undefined")
    if n <= 2:
        return ConsistencyReport(ci=0.0, ri=0.0, cr=0.0, acceptable=True)
    ri = random_index(n)
    M = multiplicative_transform(m, clamp)
    lam = np.sum((M @ w) / (n * w))
    ci = (lam - n) / (n - 1)
    cr = ci / ri
    return ConsistencyReport(ci=float(ci), ri=ri, cr=float(cr), acceptable=bool(cr < threshold))


def check_consistency(m, name="matrix", threshold=CR_THRESHOLD):
    """Derive weights and raise :class:`ConsistencyGateFailure` if CR >= threshold."""
    w = derive_weights(m)
    report = consistency_ratio(m, w, threshold=threshold)
    if not report.acceptable:
        raise ConsistencyGateFailure(
            f"{name}: consistency ratio {report.cr:.4f} is not below {threshold}",
            matrix_name=name,
            cr=report.cr,
        )
    return w, report


class FuzzyAHPWeighter(BaseEstimator):
    """Estimator wrapper around :func:`derive_weights` and :func:`consistency_ratio`.

    Parameters
    ----------
    threshold : float, default=0.1
        Consistency ratio gate.
    enforce_consistency : bool, default=False
        Raise :class:`ConsistencyGateFailure` from ``fit`` when the gate fails.
    clamp : tuple of float, default=(0.01, 0.99)
        Bounds applied before the multiplicative transform.

    Attributes
    ----------
    weights_ : ndarray of shape (n_features_in_,)
    consistency_ : ConsistencyReport
    """

    def __init__(self, threshold=CR_THRESHOLD, enforce_consistency=False, clamp=CLAMP):
        self.threshold = threshold
        self.enforce_consistency = enforce_consistency
        self.clamp = clamp

    def fit(self, X, y=None):
        matrix = validate_matrix(X)
        self.weights_ = derive_weights(matrix)
        self.consistency_ = consistency_ratio(matrix, self.weights_, self.clamp, self.threshold)
        self.n_features_in_ = matrix.n
        if self.enforce_consistency and not self.consistency_.acceptable:
            raise ConsistencyGateFailure(
                f"consistency ratio {self.consistency_.cr:.4f} is not below {self.threshold}",
                cr=self.consistency_.cr,
            )
        return self
