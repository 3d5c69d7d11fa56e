"""scikit-learn style wrappers around the functional core.

``X`` is always a stack of squares with shape ``(w, s, s)``.  The estimators
only add parameter handling and input validation; every result comes from the
plain functions in the other modules.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .extend import Status, complete_pol
from .latin import PolSet, validate_pol
from .transversals import common_transversals


def _check_stack(X) -> PolSet:
    if isinstance(X, PolSet):
        return X
    arr = np.asarray(X)
    if arr.ndim == 2:
        arr = arr[None]
    arr = check_array(arr, allow_nd=True, dtype=np.int64, ensure_min_samples=1)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError(f"expected shape (w, s, s), got {arr.shape}")
    return validate_pol(list(arr))


def _stack(pol: PolSet) -> np.ndarray:
    return np.stack([sq.array for sq in pol.squares]) if pol.w else np.zeros((0, pol.order, pol.order), int)


class TransversalEnumerator(TransformerMixin, BaseEstimator):
    """Lists the common transversals of a square stack.

    ``transform`` returns an ``(n, s)`` integer array whose rows are the
    1-based treatments of each transversal, in sorted order.
    """

    def __init__(self, through=(), threads: int = 1):
        self.through = through
        self.threads = threads

    def fit(self, X, y=None):
        self.pol_ = _check_stack(X)
        self.transversals_ = common_transversals(self.pol_, tuple(self.through), threads=self.threads)
        self.n_transversals_ = len(self.transversals_)
        return self

    def transform(self, X):
        check_is_fitted(self, "transversals_")
        pol = _check_stack(X)
        ts = self.transversals_ if pol == self.pol_ else common_transversals(pol, tuple(self.through), self.threads)
        return np.array([t.treatments for t in ts], dtype=np.int64).reshape(len(ts), pol.order)


class PolCompleter(TransformerMixin, BaseEstimator):
    """Completes a square stack to ``s-1`` mutually orthogonal squares.

    After ``fit``: ``status_`` is one of ``completed``, ``no_resolution`` or
    ``not_applicable``; ``resolution_`` holds the certificate (or ``None``).
    ``transform`` returns the full ``(s-1, s, s)`` stack and raises when the
    fitted input could not be completed.
    """

    def __init__(self, threads: int = 1):
        self.threads = threads

    def fit(self, X, y=None):
        pol = _check_stack(X)
        self.result_ = complete_pol(pol, threads=self.threads)
        self.status_ = self.result_.status.value
        self.resolution_ = self.result_.certificate
        self.n_transversals_ = self.result_.transversal_count
        return self

    def transform(self, X):
        check_is_fitted(self, "result_")
        pol = _check_stack(X)
        result = self.result_ if pol == self.result_.input else complete_pol(pol, threads=self.threads)
        if result.status is not Status.COMPLETED:
            raise ValueError(f"cannot complete this set: {result.status.value} ({result.reason})")
        return _stack(result.pol)
