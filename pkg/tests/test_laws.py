from fractions import Fraction
from itertools import permutations, product

import pytest

from gibbsback.laws import (
    block_count_pmf,
    conditional_multiplicity_pmf,
    eppf,
    multivariate_gibbs_pmf,
    subset_sum_pmf,
)
from gibbsback.numerics import LogScalar
from gibbsback.priors import dirichlet, pitman_yor
from helpers import compositions, grid_priors


@pytest.fixture
def py_half():
    return pitman_yor(Fraction(1, 2), Fraction(1))


class TestEppf:
    def test_single_observation(self, py_half):
        assert eppf(py_half, (1,)) == 1

    def test_two_in_one_block(self, py_half):
        assert eppf(py_half, (2,)) == Fraction(1, 4)

    def test_symmetry(self, py_half):
        for mults in [(2, 1), (3, 1, 2), (1, 1, 4)]:
            values = {eppf(py_half, p) for p in permutations(mults)}
            assert len(values) == 1


class TestMultivariateGibbs:
    def test_worked_values(self, py_half):
        assert multivariate_gibbs_pmf(py_half, (1, 1)) == Fraction(3, 4)
        assert multivariate_gibbs_pmf(py_half, (2,)) == Fraction(1, 4)

    @pytest.mark.parametrize("n", range(1, 4))
    def test_normalization_over_compositions(self, py_half, n):
        total = Fraction(0)
        for j in range(1, n + 1):
            for mults in compositions(n, j):
                total += multivariate_gibbs_pmf(py_half, mults)
        assert total == 1

    @pytest.mark.parametrize("prior", grid_priors(), ids=lambda p: repr(p))
    def test_marginalizing_gives_the_block_count_law(self, prior):
        for n in range(1, 8):
            for j in range(1, prior.max_blocks(n) + 1):
                total = sum(
                    multivariate_gibbs_pmf(prior, mults)
                    for mults in compositions(n, j)
                )
                assert total == block_count_pmf(prior, n, j)


class TestBlockCount:
    def test_single_observation_is_certain(self, py_half):
        assert block_count_pmf(py_half, 1, 1) == 1

    def test_worked_values(self, py_half):
        assert block_count_pmf(py_half, 2, 1) == Fraction(1, 4)
        assert block_count_pmf(dirichlet(Fraction(1)), 3, 2) == Fraction(1, 2)

    def test_dimension_check(self, py_half):
        with pytest.raises(ValueError):
            block_count_pmf(py_half, 2, 3)


class TestConditionalMultiplicities:
    def test_single_block_holds_everything(self):
        for n in range(1, 6):
            assert conditional_multiplicity_pmf(Fraction(1, 2), n, 1, (n,)) == 1

    def test_worked_value(self):
        assert conditional_multiplicity_pmf(Fraction(1, 2), 3, 2, (1,)) == Fraction(1, 2)

    def test_normalization(self):
        alpha = Fraction(1, 3)
        for n in range(1, 7):
            for j in range(1, n + 1):
                for r in range(1, j + 1):
                    total = Fraction(0)
                    for values in product(range(1, n + 1), repeat=r):
                        total += conditional_multiplicity_pmf(alpha, n, j, values)
                    assert total == 1

    def test_exchangeability(self):
        alpha = Fraction(1, 2)
        for values in permutations((3, 1, 2)):
            assert conditional_multiplicity_pmf(
                alpha, 8, 4, values
            ) == conditional_multiplicity_pmf(alpha, 8, 4, (1, 2, 3))

    def test_depends_only_on_the_discount(self):
        a = pitman_yor(Fraction(1, 2), Fraction(1))
        b = pitman_yor(Fraction(1, 2), Fraction(10))
        for values in [(1,), (2, 1), (1, 1)]:
            assert conditional_multiplicity_pmf(
                a.alpha, 4, 2, values
            ) == conditional_multiplicity_pmf(b.alpha, 4, 2, values)

    def test_infeasible_is_zero_not_an_error(self):
        assert conditional_multiplicity_pmf(Fraction(1, 2), 4, 2, (4,)) == 0
        assert conditional_multiplicity_pmf(Fraction(1, 2), 4, 2, (0,)) == 0

    def test_dimension_violation_raises(self):
        with pytest.raises(ValueError):
            conditional_multiplicity_pmf(Fraction(1, 2), 4, 2, (1, 1, 1))


class TestSubsetSum:
    def test_all_blocks_chosen(self):
        for n in range(2, 7):
            for j in range(1, n + 1):
                assert subset_sum_pmf(Fraction(1, 2), n, j, j, n) == 1

    def test_worked_value(self):
        assert subset_sum_pmf(Fraction(1, 2), 3, 2, 1, 1) == Fraction(1, 2)

    def test_out_of_support_is_zero(self):
        assert subset_sum_pmf(Fraction(1, 2), 5, 2, 1, 5) == 0
        assert subset_sum_pmf(Fraction(1, 2), 5, 2, 1, 0) == 0

    @pytest.mark.parametrize("alpha", [Fraction(-1, 2), Fraction(0), Fraction(1, 2)])
    def test_normalization(self, alpha):
        for n in range(1, 9):
            for j in range(1, n + 1):
                for r in range(1, j + 1):
                    total = sum(
                        subset_sum_pmf(alpha, n, j, r, s)
                        for s in range(r, n - (j - r) + 1)
                    )
                    assert total == 1

    def test_matches_conditional_marginal(self):
        # aggregating the conditional law over vectors with a fixed total
        alpha = Fraction(1, 3)
        for n in range(2, 8):
            for j in range(1, n + 1):
                for r in range(1, j + 1):
                    for s in range(r, n - (j - r) + 1):
                        total = sum(
                            conditional_multiplicity_pmf(alpha, n, j, values)
                            for values in compositions(s, r)
                        )
                        assert total == subset_sum_pmf(alpha, n, j, r, s)


def test_mixed_mode_queries_are_rejected():
    log_prior = pitman_yor(Fraction(1, 2), Fraction(1), mode="log")
    with pytest.raises(TypeError):
        conditional_multiplicity_pmf(log_prior.alpha, 3, 2, (1,)) * Fraction(1, 2)
    with pytest.raises(TypeError):
        log_prior.weight(2, 1) + Fraction(1, 2)


def test_laws_work_in_log_mode():
    log_prior = pitman_yor(Fraction(1, 2), Fraction(1), mode="log")
    exact_prior = pitman_yor(Fraction(1, 2), Fraction(1))
    got = block_count_pmf(log_prior, 5, 3)
    assert isinstance(got, LogScalar)
    expected = float(block_count_pmf(exact_prior, 5, 3))
    assert got.to_float() == pytest.approx(expected, rel=1e-12)
