from fractions import Fraction

import numpy as np
import pytest

from solenoids.homology import (
    INAPPLICABLE,
    OBSTRUCTED,
    UNOBSTRUCTED,
    HomologyBasis,
    embedding_obstruction,
    normalize_target,
    realization_mode,
)


def test_normalize_example():
    t = normalize_target((2, -3, 0))
    assert t.cycles == (0, 1)
    assert t.signs == (1, -1)
    assert t.weights == (Fraction(2, 5), Fraction(3, 5))
    assert t.scale == 5
    assert t.reconstruct(3) == (2, -3, 0)


def test_normalize_single_and_zero():
    t = normalize_target((1,))
    assert t.weights == (1,) and t.scale == 1
    with pytest.raises(ValueError, match="zero"):
        normalize_target((0, 0))


def test_normalize_reconstruction_exact_for_random_rationals():
    rng = np.random.default_rng(11)
    for _ in range(50):
        a = tuple(Fraction(int(p), int(q)) for p, q in zip(rng.integers(-9, 10, 4), rng.integers(1, 7, 4)))
        if not any(a):
            continue
        t = normalize_target(a)
        assert sum(t.weights) == 1
        assert all(w > 0 for w in t.weights)
        assert t.reconstruct(4) == a


def test_basis_rank_mismatch():
    basis = HomologyBasis.standard(3, 1, 2)
    with pytest.raises(ValueError):
        normalize_target((1, 2, 3), basis)


def test_positive_square_is_obstructed():
    basis = HomologyBasis.standard(4, 2, 1, intersection_form=[[1]])
    result = embedding_obstruction((1,), basis)
    assert result.verdict == OBSTRUCTED
    assert result.message() == "obstructed, aᵀQa = 1"
    assert realization_mode(basis, result) == "transversal immersion"


def test_odd_codimension_is_inapplicable():
    basis = HomologyBasis.standard(2, 1, 2, intersection_form=[[0, 1], [-1, 0]])
    result = embedding_obstruction((3, 5), basis)
    assert result.verdict == INAPPLICABLE
    assert result.self_intersection == 0
    assert embedding_obstruction((1,), HomologyBasis.standard(5, 2, 1)).verdict == INAPPLICABLE


def test_high_codimension_without_form_is_unobstructed():
    basis = HomologyBasis.standard(3, 1, 2)
    result = embedding_obstruction((1, 1), basis)
    assert result.verdict == UNOBSTRUCTED
    assert realization_mode(basis, result) == "embedding"


def test_middle_dimension_requires_form():
    with pytest.raises(ValueError):
        embedding_obstruction((1,), HomologyBasis.standard(4, 2, 1))


def test_symmetry_enforced():
    with pytest.raises(ValueError):
        HomologyBasis.standard(4, 2, 2, intersection_form=[[0, 1], [-1, 0]])
    with pytest.raises(ValueError):
        HomologyBasis.standard(2, 1, 2, intersection_form=[[1, 0], [0, 1]])


def test_random_instances_match_brute_force():
    rng = np.random.default_rng(9)
    for _ in range(100):
        b = int(rng.integers(1, 5))
        m = rng.integers(-5, 6, (b, b))
        q = (m + m.T).tolist()
        a = rng.integers(-4, 5, b).tolist()
        basis = HomologyBasis.standard(4, 2, b, intersection_form=q)
        brute = sum(a[i] * q[i][j] * a[j] for i in range(b) for j in range(b))
        result = embedding_obstruction(a, basis)
        assert result.self_intersection == brute
        assert result.verdict == (OBSTRUCTED if brute else UNOBSTRUCTED)


def test_basis_dict_round_trip():
    basis = HomologyBasis.standard(4, 2, 2, volumes=[1, 2], intersection_form=[[1, 0], [0, -1]])
    assert HomologyBasis.from_dict(basis.to_dict()) == basis
