#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Тесты статистических примитивов
Версия: 0.1.0
"""

import math
import os
import sys
import unittest
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

# Добавляем путь к модулям проекта
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from analyzers.oracle import exact_binomial_cdf, oracle_hb_pvalue
from core.errors import DomainError
from core.stats import (binomial_standard_error, conformal_quantile, conformal_rank, hb_pvalue,
                        kl_bernoulli)


class TestConformalQuantile(unittest.TestCase):
    """k-я порядковая статистика, k = ceil((n+1)(1-alpha))"""

    def test_nine(self):
        self.assertEqual(conformal_quantile(list(range(1, 10)), 0.1), 9)

    def test_ninety_nine(self):
        self.assertEqual(conformal_quantile(list(range(1, 100)), 0.1), 90)

    def test_equal_scores(self):
        self.assertEqual(conformal_quantile([2.5] * 7, 0.3), 2.5)

    def test_clamped_to_max(self):
        self.assertEqual(conformal_rank(5, 0.1), 5)
        self.assertEqual(conformal_quantile([3, 1, 2], 0.01), 3)

    def test_duplicates_kept(self):
        self.assertEqual(conformal_quantile([1, 1, 1, 5], 0.2), 5)
        self.assertEqual(conformal_quantile([1, 1, 1, 5], 0.5), 1)

    def test_infinite_scores(self):
        self.assertEqual(conformal_quantile([0.0, math.inf], 0.1), math.inf)

    def test_rank_offset(self):
        self.assertEqual(conformal_quantile(list(range(1, 10)), 0.1, rank_offset=-1), 8)

    def test_bad_alpha(self):
        for alpha in (0.0, 1.0, -0.1):
            with self.assertRaises(DomainError):
                conformal_quantile([1.0], alpha)

    def test_empty(self):
        with self.assertRaises(DomainError):
            conformal_quantile([], 0.1)


class TestHbPvalue(unittest.TestCase):
    """p-значение Хёфдинга-Бенткуса"""

    def test_zero_loss(self):
        self.assertAlmostEqual(hb_pvalue(0.0, 10, 0.1), 0.9 ** 10, places=12)

    def test_clamped_above_delta(self):
        self.assertEqual(hb_pvalue(0.2, 50, 0.2), 1.0)
        self.assertEqual(hb_pvalue(0.7, 50, 0.2), 1.0)

    def test_bentkus_branch(self):
        value = hb_pvalue(0.1, 100, 0.2)
        self.assertAlmostEqual(value, 0.0155, delta=1e-3)
        self.assertAlmostEqual(value / oracle_hb_pvalue(0.1, 100, 0.2), 1.0, places=12)
        hoeffding = math.exp(-100 * kl_bernoulli(0.1, 0.2))
        self.assertLess(value, hoeffding)

    def test_fraction_input(self):
        self.assertEqual(hb_pvalue(Fraction(1, 10), 100, 0.2), hb_pvalue(0.1, 100, 0.2))

    def test_domain(self):
        with self.assertRaises(DomainError):
            hb_pvalue(0.1, 10, 0.0)
        with self.assertRaises(DomainError):
            hb_pvalue(0.1, 0, 0.2)
        with self.assertRaises(DomainError):
            hb_pvalue(1.5, 10, 0.2)


def test_hb_matches_exact_oracle():
    """Сверка с точной суммой на подсетке"""
    for n in (1, 7, 50, 200):
        for delta in (0.05, 0.1, 0.2, 0.5):
            for step in range(0, 101, 5):
                mean_loss = step / 100
                fast = hb_pvalue(mean_loss, n, delta)
                exact = oracle_hb_pvalue(mean_loss, n, delta)
                assert abs(fast - exact) <= 1e-12 * max(exact, 1e-300)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 200), st.integers(0, 100), st.sampled_from([0.05, 0.1, 0.2, 0.3, 0.5]),
       st.sampled_from([0.05, 0.1, 0.2, 0.3, 0.5]))
def test_hb_monotone(n, step, first, second):
    """Не возрастает по delta, не убывает по средней потере"""
    mean_loss = step / 100
    low, high = sorted((first, second))
    assert hb_pvalue(mean_loss, n, high) <= hb_pvalue(mean_loss, n, low) + 1e-15
    if step < 100:
        assert hb_pvalue(mean_loss, n, low) <= hb_pvalue((step + 1) / 100, n, low) + 1e-15


def test_exact_binomial_cdf():
    assert exact_binomial_cdf(12, 0.3, 12) == pytest.approx(1.0, abs=1e-15)
    assert exact_binomial_cdf(12, 0.3, 0) == pytest.approx(0.7 ** 12, rel=1e-12)
    with pytest.raises(DomainError):
        exact_binomial_cdf(5, 0.3, 6)


def test_kl_continuity():
    assert kl_bernoulli(0.0, 0.2) == pytest.approx(-math.log(0.8))
    assert kl_bernoulli(0.2, 0.2) == 0.0


def test_standard_error():
    assert binomial_standard_error(0.9, 500) == pytest.approx(math.sqrt(0.09 / 500))
    assert math.isnan(binomial_standard_error(0.5, 0))


if __name__ == '__main__':
    unittest.main()
