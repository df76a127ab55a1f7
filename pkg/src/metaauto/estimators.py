"""scikit-learn style wrappers around inference and factor counting.

``DfaoRegressor`` learns a machine from one sequence prefix and predicts
terms at arbitrary indices.  ``FactorComplexity`` turns binary words into
their factor-complexity vectors.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_bit_matrix, check_bit_vector, check_index_array
from .automata import build_kernel_table, infer_dfao
from .wordcomplexity import factor_counts


class DfaoRegressor(BaseEstimator):
    """Fit a minimal MSB-first DFAO to the terms ``X[0], X[1], ...``.

    ``predict`` takes indices, not terms.
    """

    def __init__(self, min_window: int = 256, max_depth: int = 6, base: int = 4):
        self.min_window = min_window
        self.max_depth = max_depth
        self.base = base

    def fit(self, X, y=None):
        a = check_bit_vector(X, min_len=self.min_window)
        self.dfao_ = infer_dfao(a, prefix_len=None, min_window=self.min_window, max_depth=self.max_depth, base=self.base)
        self.kernel_size_ = len(build_kernel_table(a, None, self.min_window, self.max_depth, self.base))
        self.n_states_ = self.dfao_.n_states
        self.n_terms_seen_ = a.size
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "dfao_")
        idx = check_index_array(X)
        if idx.size == 0:
            return np.zeros(0, dtype=np.int64)
        table = self.dfao_.eval_prefix(int(idx.max()) + 1)
        return np.asarray(table[idx])

    def score(self, X, y) -> float:
        """Fraction of indices ``X`` where the prediction equals ``y``."""
        pred = self.predict(X)
        y = np.asarray(y).ravel()
        if y.shape != pred.shape:
            raise ValueError("X and y must have the same length")
        return float(np.mean(pred == y)) if y.size else 1.0


class FactorComplexity(TransformerMixin, BaseEstimator):
    """Row-wise ``p(1..max_len)`` of binary words.

    With ``check_stability`` the counts on the first half of each word are
    compared with those on the whole word; ``stable_`` (set by ``transform``)
    flags the rows where they agree.
    """

    def __init__(self, max_len: int = 16, check_stability: bool = True):
        self.max_len = max_len
        self.check_stability = check_stability

    def fit(self, X, y=None):
        X = check_bit_matrix(X, min_len=self.max_len)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "n_features_in_")
        X = check_bit_matrix(X, min_len=self.max_len)
        out = np.zeros((X.shape[0], self.max_len), dtype=np.int64)
        stable = np.ones(X.shape[0], dtype=bool)
        for i, row in enumerate(X):
            p, _ = factor_counts(row, self.max_len)
            out[i] = p[1:]
            if self.check_stability:
                half, _ = factor_counts(row[: row.size // 2], self.max_len)
                stable[i] = np.array_equal(half[1:], p[1:])
        self.stable_ = stable
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array([f"p{n}" for n in range(1, self.max_len + 1)], dtype=object)


def fit_sequence(seq, count: int, **params) -> DfaoRegressor:
    """Convenience: ``DfaoRegressor(**params).fit(seq.prefix(count))``."""
    return DfaoRegressor(**params).fit(check_bit_vector(seq.prefix(count)))
