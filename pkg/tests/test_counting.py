import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from igci.counting import (
    CountModel,
    brute_force_enumerate,
    continuum_score,
    count_interpolants,
    count_monotone,
    discretize,
    enumerate_interpolants,
    grid_free_log_ratio,
    likelihood_ratio,
    likelihood_ratio_exact,
    log_count_interpolants,
    log_count_monotone,
    random_count_model,
)
from igci.errors import InvalidGridError, LatticeCollisionError, OracleTooLargeError
from igci.rng import substream


def model(*pts):
    return CountModel.from_points(pts)


# -- N(a, b) --------------------------------------------------------------------------------


@pytest.mark.parametrize("a,b,n", [(1, 1, 1), (2, 3, 4), (2, 2, 3), (3, 3, 10), (2, 5, 6)])
def test_count_monotone_examples(a, b, n):
    assert count_monotone(a, b) == n
    assert brute_force_enumerate(model((0, 0), (a, b))) == n


def test_count_monotone_domain():
    with pytest.raises(InvalidGridError):
        count_monotone(0, 3)
    with pytest.raises(InvalidGridError):
        count_monotone(2.5, 3)
    assert count_monotone(4, 0) == 1


def test_ratio_law_exhaustive():
    for a in range(1, 51):
        for b in range(1, 51):
            assert count_monotone(a, b) * b == count_monotone(b, a) * a


def test_big_integers_are_exact():
    n = count_monotone(5000, 5000)
    assert n == math.comb(9999, 5000)
    assert n.bit_length() > 9000


@pytest.mark.parametrize("a,b", [(6000, 6000), (20_000, 3), (3, 20_000), (12_345, 678)])
def test_log_count_beyond_exact_limit(a, b):
    exact = math.log(math.comb(a + b - 1, b))
    assert log_count_monotone(a, b) == pytest.approx(exact, rel=1e-9)


# -- interpolant counts ---------------------------------------------------------------------


def test_interpolant_examples():
    assert count_interpolants(model((0, 0), (5, 7))) == count_monotone(5, 7)
    assert count_interpolants(model((0, 0), (1, 1), (2, 2))) == 1
    assert count_interpolants(model((0, 0), (2, 1), (4, 2))) == 4
    assert brute_force_enumerate(model((0, 0), (2, 1), (4, 2))) == 4
    assert brute_force_enumerate(model((0, 0), (1, 1), (2, 2))) == 1


def test_literal_enumeration_lists_functions():
    fs = list(enumerate_interpolants(model((0, 0), (2, 1), (4, 2))))
    assert len(fs) == 4
    assert all(f[2] == 1 and list(f) == sorted(f) for f in fs)


def test_yx_direction_transposes():
    m = model((0, 0), (1, 3), (4, 5))
    assert count_interpolants(m, "yx") == count_interpolants(m.transposed(), "xy")
    assert count_interpolants(m, "yx") == count_monotone(3, 1) * count_monotone(2, 3)


@given(st.integers(0, 10_000))
def test_oracle_equivalence_random(seed):
    m = random_count_model(substream(seed, "cm"))
    assert m.k * m.l <= 400
    for d in ("xy", "yx"):
        assert count_interpolants(m, d) == brute_force_enumerate(m, d)
        assert log_count_interpolants(m, d) == pytest.approx(math.log(count_interpolants(m, d)))


@given(st.integers(0, 10_000))
def test_literal_enumeration_matches_on_tiny_grids(seed):
    m = random_count_model(substream(seed, "tiny"), max_area=24)
    assert sum(1 for _ in enumerate_interpolants(m)) == count_interpolants(m)


def test_oracle_refuses_large_grids():
    with pytest.raises(OracleTooLargeError):
        brute_force_enumerate(model((0, 0), (21, 20)))


def test_count_model_validation():
    with pytest.raises(InvalidGridError):
        CountModel(3, 3, ((0, 0), (1, 1)))
    with pytest.raises(InvalidGridError):
        model((0, 0), (2, 2), (2, 3), (4, 4))
    with pytest.raises(InvalidGridError):
        model((1, 0), (3, 3))


# -- likelihood ratio -----------------------------------------------------------------------


def test_likelihood_ratio_diagonal_is_zero():
    assert likelihood_ratio(model((0, 0), (1, 1), (2, 2))) == 0.0
    assert likelihood_ratio(model((0, 0), (3, 3), (7, 7), (10, 10))) == 0.0


def test_likelihood_ratio_worked_example():
    m = model((0, 0), (50, 90), (100, 100))
    expected = math.log(50 / 90) + math.log(50 / 10)
    assert grid_free_log_ratio(m) == pytest.approx(expected, abs=1e-12)
    assert continuum_score(m) == pytest.approx(1.0217, abs=1e-4)
    # k = l, so the grid factor is 1 and the full ratio equals its grid-free part
    assert likelihood_ratio(m) == pytest.approx(expected, abs=1e-12)


def test_closed_form_matches_counts_exactly():
    m = model((0, 0), (3, 7), (5, 8), (12, 9))
    n, k, l = m.n, m.k, m.l  # noqa: E741
    p_xy = Fraction(count_interpolants(m, "xy"), count_monotone(k, l) * (k + 1) ** (n - 2))
    p_yx = Fraction(count_interpolants(m, "yx"), count_monotone(l, k) * (l + 1) ** (n - 2))
    assert p_xy / p_yx == likelihood_ratio_exact(m)


def test_likelihood_ratio_uses_log_gamma_for_huge_cells():
    m = model((0, 0), (7000, 3000), (12_000, 11_000))
    assert likelihood_ratio(m) == pytest.approx(float(
        math.log(likelihood_ratio_exact(m).numerator)
        - math.log(likelihood_ratio_exact(m).denominator)))


@given(st.integers(0, 10_000), st.integers(2, 6))
def test_continuum_score_is_refinement_invariant(seed, factor):
    m = random_count_model(substream(seed, "refine"))
    assert continuum_score(m.refined(factor)) == pytest.approx(continuum_score(m), abs=1e-12)


def test_grid_free_ratio_converges_under_refinement():
    m = model((0, 0), (3, 5), (7, 6), (10, 14))
    target = continuum_score(m)
    gaps = [abs(likelihood_ratio(m.refined(2**j)) - target) for j in range(8)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert grid_free_log_ratio(m.refined(64)) == pytest.approx(target, abs=1e-9)


# -- discretisation -------------------------------------------------------------------------


def test_discretize_pins_corners():
    m = discretize([0.2, 0.5, 0.9], [1.0, 3.0, 4.0], 100, 100)
    assert m.points[0] == (0, 0) and m.points[-1] == (100, 100)
    assert m.points[1] == (43, 67)


def test_discretize_collision():
    with pytest.raises(LatticeCollisionError):
        discretize(np.array([0.0, 0.001, 1.0]), np.array([0.0, 0.5, 1.0]), 10, 10)
