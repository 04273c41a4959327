from sklearn.base import BaseEstimator, TransformerMixin
import numpy as np

from .counting import analyze, count_distinct_squares, count_powers
from .packed_text import TauConfig, encode


def _to_bytes(x):
    if isinstance(x, (bytes, bytearray)):
        return bytes(x)
    if isinstance(x, str):
        return x.encode("latin-1")
    return bytes(np.asarray(x, dtype=np.uint8))


class DistinctSquareCounter(BaseEstimator, TransformerMixin):
    """Maps each string to its distinct-square breakdown.

    Columns are np, plain_p, special, total, then one column per exponent in
    `powers`. Strings may be str, bytes or integer sequences.
    """

    def __init__(self, sigma=None, tau=None, tau_sync=None, powers=()):
        self.sigma = sigma
        self.tau = tau
        self.tau_sync = tau_sync
        self.powers = powers

    def fit(self, X, y=None):
        for t in self.powers:
            if int(t) < 3:
                raise ValueError(f"powers must be >= 3, got {t}")
        self.n_features_out_ = 4 + len(self.powers)
        return self

    def _one(self, x):
        raw = _to_bytes(x)
        sigma = self.sigma if self.sigma is not None else (max(raw) + 1 if raw else 1)
        P = encode(raw, sigma)
        cfg = TauConfig.default(P.n, sigma, self.tau, self.tau_sync)
        an = analyze(P, cfg)
        c = count_distinct_squares(P, cfg, an)
        row = [c.np, c.plain_p, c.special, c.total]
        row += [count_powers(P, int(t), cfg, an) for t in self.powers]
        return row

    def transform(self, X):
        if not hasattr(self, "n_features_out_"):
            self.fit(X)
        return np.array([self._one(x) for x in X], dtype=np.int64).reshape(-1, self.n_features_out_)

    def get_feature_names_out(self, input_features=None):
        names = ["np", "plain_p", "special", "total"]
        return np.array(names + [f"power_{t}" for t in self.powers], dtype=object)
