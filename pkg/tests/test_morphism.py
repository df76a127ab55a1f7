import numpy as np
import pytest

import oracles
from metaauto import morphism as mo
from metaauto.automata import Dfao, builtin_dfao
from metaauto.errors import NotProlongable, UnknownSequence
from metaauto.seqcore import builtin


def test_coded_prefixes():
    assert mo.coded_prefix(mo.M1_MORPHISM, 16).tolist() == [0, 1, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1]
    assert mo.coded_prefix(mo.M2_MORPHISM, 16).tolist() == [0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1]
    assert mo.coded_prefix(mo.Q_MORPHISM, 16).tolist() == builtin("Q").prefix(16).tolist()


def test_fixed_point_against_oracle():
    images = {"A": "ACBC", "B": "BCCB", "C": "CBBC"}
    ref = oracles.fixed_point(images, "A", 5000)
    got = [mo.Q_MORPHISM.alphabet[i] for i in mo.fixed_point_prefix(mo.Q_MORPHISM, 5000)]
    assert got == ref


@pytest.mark.parametrize("name", ["Q", "M1", "M2"])
def test_round_trip_through_dfao(name):
    m = mo.morphism_from_dfao(builtin_dfao(name))
    assert m == mo.builtin_morphism(name)
    assert np.array_equal(mo.coded_prefix(m, 4**8), builtin_dfao(name).eval_prefix(4**8))


def test_published_images():
    assert mo.M1_MORPHISM.images == ((0, 1, 1, 2), (1, 2, 3, 0), (2, 3, 0, 1), (3, 0, 2, 3))
    assert mo.M2_MORPHISM.images == ((0, 1, 3, 2), (2, 3, 1, 0), (3, 2, 0, 1), (1, 0, 2, 3))
    assert mo.Q_MORPHISM.image_word("A") == ("A", "C", "B", "C")


@pytest.mark.parametrize("name", ["Q", "M1", "M2"])
def test_substitution_coherence(name):
    m = mo.builtin_morphism(name)
    w = mo.fixed_point_prefix(m, 4 * 4**6)
    table = np.asarray(m.images)
    assert np.array_equal(w.reshape(-1, 4), table[w[: 4**6]])


def test_not_prolongable():
    m = mo.UniformMorphism((0, 1), ((1, 0), (0, 1)), (0, 1))
    with pytest.raises(NotProlongable):
        mo.fixed_point_prefix(m, 4)
    with pytest.raises(NotProlongable):
        mo.morphism_from_dfao(Dfao(2, ((1, 0), (0, 1)), 0, (0, 1)))


def test_validation():
    with pytest.raises(ValueError):
        mo.UniformMorphism((0, 1), ((0, 1), (1,)), (0, 1))
    with pytest.raises(ValueError):
        mo.UniformMorphism((0, 1), ((0, 2), (1, 0)), (0, 1))
    with pytest.raises(UnknownSequence):
        mo.builtin_morphism("X")


def test_incidence():
    assert np.array_equal(mo.incidence(mo.M2_MORPHISM), np.ones((4, 4), dtype=int))
    m1 = mo.incidence(mo.M1_MORPHISM)
    # the transpose is the row-per-image layout with rows (1,2,1,0), (1,1,1,1), (1,1,1,1), (1,0,1,2)
    assert m1.T.tolist() == [[1, 2, 1, 0], [1, 1, 1, 1], [1, 1, 1, 1], [1, 0, 1, 2]]
    assert set(m1.ravel().tolist()) == {0, 1, 2}
    one = mo.UniformMorphism(("a",), ((0, 0, 0, 0),), (0,))
    assert mo.incidence(one).tolist() == [[4]]


@pytest.mark.parametrize("name", ["Q", "M1", "M2"])
def test_column_sums(name):
    assert (mo.incidence(mo.builtin_morphism(name)).sum(axis=0) == 4).all()


def test_primitivity():
    assert mo.primitivity_power(mo.incidence(mo.M1_MORPHISM), 4) == 2
    assert mo.primitivity_power(mo.incidence(mo.M2_MORPHISM), 4) == 1
    assert not mo.is_primitive(np.array([[4, 0], [0, 4]]), 10)
    assert mo.is_primitive(mo.incidence(mo.M1_MORPHISM).T, 2)
    with pytest.raises(ValueError):
        mo.is_primitive(np.eye(2), 0)


def test_zero_count():
    assert mo.fixed_point_prefix(mo.M1_MORPHISM, 0).size == 0
