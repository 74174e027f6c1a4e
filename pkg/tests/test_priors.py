from fractions import Fraction

import pytest

from gibbsback.numerics import to_float
from gibbsback.priors import (
    PriorValidationError,
    SampleSummary,
    dirichlet,
    dump_table_csv,
    load_table_csv,
    pitman_yor,
    table_prior,
)
from gibbsback.stirling import build_triangle
from helpers import grid_priors


class TestPitmanYor:
    def test_worked_weights(self):
        py = pitman_yor(Fraction(1, 2), Fraction(1))
        assert py.weight(1, 1) == 1
        assert py.weight(2, 2) == Fraction(3, 4)
        assert py.weight(2, 1) == Fraction(1, 2)

    def test_parameter_region(self):
        with pytest.raises(PriorValidationError):
            pitman_yor(Fraction(3, 2), Fraction(1))  # discount >= 1
        with pytest.raises(PriorValidationError):
            pitman_yor(Fraction(1, 2), Fraction(-1, 2))  # theta <= -alpha
        with pytest.raises(PriorValidationError):
            pitman_yor(Fraction(-1, 2), Fraction(3, 4))  # off the integer line
        pitman_yor(Fraction(1, 2), Fraction(-1, 4))  # theta > -alpha is fine

    def test_fisher_line_caps_the_species_count(self):
        fisher = pitman_yor(Fraction(-1, 2), Fraction(5, 2))
        assert fisher.species_cap == 5
        assert fisher.max_blocks(4) == 4
        assert fisher.max_blocks(9) == 5
        assert fisher.weight(6, 6) == 0
        assert fisher.weight(6, 5) > 0


class TestDirichlet:
    def test_worked_weights(self):
        d1 = dirichlet(Fraction(1))
        assert d1.weight(3, 2) == Fraction(1, 6)
        assert d1.weight(1, 1) == 1

    def test_block_count_uses_signless_stirling(self):
        from gibbsback.laws import block_count_pmf

        d1 = dirichlet(Fraction(1))
        assert block_count_pmf(d1, 2, 2) == Fraction(1, 2)

    def test_theta_must_be_positive(self):
        with pytest.raises(PriorValidationError):
            dirichlet(Fraction(0))
        with pytest.raises(PriorValidationError):
            dirichlet(Fraction(-2))


@pytest.mark.parametrize("prior", grid_priors(), ids=lambda p: repr(p))
def test_backward_consistency_exact(prior):
    # V[n,j] = (n - j alpha) V[n+1,j] + V[n+1,j+1], the predictive rule
    for n in range(1, 11):
        for j in range(1, prior.max_blocks(n) + 1):
            lhs = prior.weight(n, j)
            rhs = (n - j * prior.alpha) * prior.weight(n + 1, j) + prior.weight(
                n + 1, j + 1
            )
            assert lhs == rhs


@pytest.mark.parametrize("prior", grid_priors(), ids=lambda p: repr(p))
def test_block_count_normalization(prior):
    tri = build_triangle(prior.alpha, 0, 10)
    for n in range(1, 11):
        total = sum(
            prior.weight(n, j) * tri.value(n, j) for j in range(1, n + 1)
        )
        assert total == 1


def test_dirichlet_is_the_small_discount_limit():
    for theta in (Fraction(1), Fraction(5)):
        dir_prior = dirichlet(theta)
        near = pitman_yor(Fraction(1, 10**6), theta)
        for n in range(1, 9):
            for j in range(1, n + 1):
                a = to_float(dir_prior.weight(n, j))
                b = to_float(near.weight(n, j))
                assert abs(b - a) <= 1e-4 * abs(a)


class TestTablePrior:
    def grid_from(self, prior, n_max):
        return {
            (n, j): prior.weight(n, j)
            for n in range(1, n_max + 1)
            for j in range(1, n + 1)
        }

    def test_round_trip_of_py_weights(self, tmp_path):
        py = pitman_yor(Fraction(1, 2), Fraction(1))
        path = tmp_path / "weights.csv"
        dump_table_csv(py, 6, path)
        loaded = load_table_csv(path, Fraction(1, 2))
        for n in range(1, 7):
            for j in range(1, n + 1):
                assert loaded.weight(n, j) == py.weight(n, j)

    def test_v11_must_be_one(self):
        grid = self.grid_from(pitman_yor(Fraction(1, 2), Fraction(1)), 3)
        grid[(1, 1)] = Fraction(9, 10)
        with pytest.raises(PriorValidationError):
            table_prior(Fraction(1, 2), grid)

    def test_perturbed_entry_breaks_consistency(self):
        grid = self.grid_from(pitman_yor(Fraction(1, 2), Fraction(1)), 3)
        grid[(2, 1)] = grid[(2, 1)] * Fraction(11, 10)
        with pytest.raises(PriorValidationError):
            table_prior(Fraction(1, 2), grid)

    def test_missing_entry_rejected(self):
        grid = self.grid_from(pitman_yor(Fraction(1, 2), Fraction(1)), 3)
        del grid[(3, 2)]
        with pytest.raises(PriorValidationError):
            table_prior(Fraction(1, 2), grid)

    def test_nonpositive_weight_rejected(self):
        grid = self.grid_from(pitman_yor(Fraction(1, 2), Fraction(1)), 2)
        grid[(2, 2)] = Fraction(0)
        with pytest.raises(PriorValidationError):
            table_prior(Fraction(1, 2), grid)

    def test_queries_beyond_the_table_raise(self):
        grid = self.grid_from(pitman_yor(Fraction(1, 2), Fraction(1)), 3)
        prior = table_prior(Fraction(1, 2), grid)
        with pytest.raises(ValueError):
            prior.weight(4, 1)


class TestSampleSummary:
    def test_complete_vs_incomplete(self):
        assert SampleSummary(3, 2).complete is False
        assert SampleSummary(3, 2, (2, 1)).complete is True

    def test_validation(self):
        with pytest.raises(ValueError):
            SampleSummary(2, 3)
        with pytest.raises(ValueError):
            SampleSummary(3, 2, (1, 1))  # wrong sum
        with pytest.raises(ValueError):
            SampleSummary(3, 2, (3, 0))  # nonpositive entry
        with pytest.raises(ValueError):
            SampleSummary(3, 1, (2, 1))  # wrong length
