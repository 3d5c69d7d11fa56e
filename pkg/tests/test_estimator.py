import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from mols_forge import OrthogonalityError, PolCompleter, TransversalEnumerator

from conftest import prefix


def stack(pol):
    return np.stack([sq.array for sq in pol.squares])


def test_enumerator_fit_transform():
    X = stack(prefix("ex44_pol", 2))
    est = TransversalEnumerator().fit(X)
    assert est.n_transversals_ == 28
    out = est.transform(X)
    assert out.shape == (28, 7) and out[0, 0] == 1
    anchored = TransversalEnumerator(through=(1, 13)).fit_transform(X[:1])
    assert anchored.shape == (5, 7)


def test_enumerator_params_and_clone():
    est = TransversalEnumerator(through=(1,), threads=2)
    assert est.get_params() == {"through": (1,), "threads": 2}
    c = clone(est)
    assert c.get_params() == est.get_params() and c is not est
    with pytest.raises(NotFittedError):
        est.transform(stack(prefix("ex43_pol", 1)))


def test_single_square_accepted_as_2d():
    X = stack(prefix("ex43_pol", 1))[0]
    assert TransversalEnumerator().fit(X).n_transversals_ == 15


def test_input_validation():
    with pytest.raises(ValueError):
        TransversalEnumerator().fit(np.zeros((1, 3, 4), dtype=int))
    with pytest.raises(ValueError):
        TransversalEnumerator().fit(np.full((1, 3, 3), np.nan))
    X = stack(prefix("ex43_pol", 1))
    with pytest.raises(OrthogonalityError):
        TransversalEnumerator().fit(np.concatenate([X, X]))


def test_completer():
    X = stack(prefix("ex43_pol", 1))
    est = PolCompleter().fit(X)
    assert est.status_ == "completed" and est.n_transversals_ == 15
    full = est.transform(X)
    assert full.shape == (4, 5, 5)
    assert (full[0] == X[0]).all()
    assert est.resolution_.degree == 3


def test_completer_refuses_when_not_applicable():
    X = stack(prefix("ex44_pol", 3))[:1][:, :4, :4] % 4  # not Latin: rejected outright
    with pytest.raises(ValueError):
        PolCompleter().fit(X)
    small = np.array([[[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]])
    est = PolCompleter().fit(small)
    assert est.status_ == "not_applicable"
    with pytest.raises(ValueError, match="not_applicable"):
        est.transform(small)
