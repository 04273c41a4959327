import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from packedsquares.estimator import DistinctSquareCounter
from packedsquares.oracle import naive_powers, naive_square_counts


def test_transform_matches_oracle():
    X = ["abab", "aaaaaaaa", "abc", b"\x00\x01\x00\x01\x01", [0, 0, 0]]
    est = DistinctSquareCounter(powers=(3,))
    out = est.fit_transform(X)
    assert out.shape == (5, 5)
    for row, x in zip(out, X):
        raw = x.encode() if isinstance(x, str) else bytes(x)
        ref = naive_square_counts(raw)
        assert row.tolist() == [ref["np"], ref["plain_p"], ref["special"], ref["total"],
                                len(naive_powers(raw, 3))]
    assert est.get_feature_names_out().tolist() == ["np", "plain_p", "special", "total", "power_3"]


def test_sklearn_protocol():
    est = DistinctSquareCounter(tau=3)
    assert clone(est).get_params()["tau"] == 3
    pipe = make_pipeline(est, FunctionTransformer(np.log1p))
    assert pipe.fit_transform(["aa", "abab"]).shape == (2, 4)
    with pytest.raises(ValueError):
        DistinctSquareCounter(powers=(2,)).fit(["aa"])
