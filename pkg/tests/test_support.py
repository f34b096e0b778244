import doctest
from fractions import Fraction

import numpy as np
import pytest

import predictive_hierarchy.estimator
from predictive_hierarchy import rng
from predictive_hierarchy.output import fmt_number, read_sequence_csv, render


def test_streams_are_keyed_and_reproducible():
    a = rng.stream(5, "data", 3).random(4)
    assert np.array_equal(a, rng.stream(5, "data", 3).random(4))
    assert not np.array_equal(a, rng.stream(5, "data", 4).random(4))
    assert not np.array_equal(a, rng.stream(6, "data", 3).random(4))
    for bad in (-1, 2**64):
        with pytest.raises(ValueError):
            rng.validate_seed(bad)


def test_blocks_cover_total():
    sizes = [size for _, size in rng.blocks(1, "x", 40_000)]
    assert sum(sizes) == 40_000 and max(sizes) == rng.BLOCK_SIZE


def test_number_formatting():
    assert fmt_number(Fraction(1, 3)) == "0.333333333333"
    assert fmt_number(Fraction(1, 3), exact=True) == "1/3"
    assert fmt_number(True) == "true" and fmt_number(7) == "7"
    assert render(("a",), [(0.5,)], comments=("seed=1",)) == "# seed=1\na\n0.5\n"
    with pytest.raises(ValueError):
        render(("a",), [], fmt="xml")


def test_read_sequence_csv():
    assert read_sequence_csv("# c\nk,v\n0,1\n1,0.25\n") == [1, Fraction(1, 4)]
    with pytest.raises(ValueError):
        read_sequence_csv("0,1\n1\n")


def test_estimator_doctest():
    assert doctest.testmod(predictive_hierarchy.estimator).failed == 0
