#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Тесты вложенных семейств
Версия: 0.1.0
"""

import os
import sys
import unittest
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Добавляем путь к модулям проекта
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from analyzers.oracle import brute_fpp
from core.dataset import WeakExample
from core.errors import DomainError
from core.loss import UserFeedback, fpp_loss
from core.nested import (AccuracyVector, BernoulliFamily, ScoreVector, ThresholdFamily, bernoulli_counts,
                         bernoulli_threshold, eta_set, get_nested_family, loss_trace, threshold_set)
from core.probes import materialize_weak_set
from families import PairwiseFamily
from models.bernoulli import IndependenceSimulator
from models.rng import seed_stream


def three_probe_case(correct):
    """Пробы с |s| = 1, 2, 3; correct[k] - верен ли знак k-й пробы"""
    scores = ScoreVector({'b:1': 1.0, 'b:2': 2.0, 'b:3': 3.0})
    feedback = UserFeedback({f"b:{k + 1}": 1 if ok else -1 for k, ok in enumerate(correct)})
    return scores, feedback


class TestThresholdSet(unittest.TestCase):
    """C^s_lambda"""

    def test_strict_threshold(self):
        scores = ScoreVector({'a': 0.5, 'b': -2.0, 'c': 0.0})
        self.assertEqual(dict(threshold_set(scores, 1.0).answers), {'b': -1})

    def test_above_max_is_full_space(self):
        scores = ScoreVector({'a': 0.5, 'b': -2.0})
        self.assertTrue(threshold_set(scores, 2.0).is_full_space())

    def test_zero_threshold_answers_nonzero(self):
        scores = ScoreVector({'a': 0.5, 'b': -2.0, 'c': 0.0})
        self.assertEqual(dict(threshold_set(scores, 0.0).answers), {'a': 1, 'b': -1})

    def test_zero_threshold_singleton(self):
        family = PairwiseFamily(3)
        scores = ScoreVector({'p:1-2': 0.3, 'p:1-3': 1.2, 'p:2-3': 0.7})
        pred_set = threshold_set(scores, 0.0)
        weak = materialize_weak_set(family, pred_set.answers, pred_set.answers, 5000)
        self.assertEqual(weak, [(1, 2, 3)])

    def test_asymmetric_form(self):
        scores = ScoreVector({'a': 0.5, 'b': -0.5})
        self.assertEqual(dict(threshold_set(scores, 1.0, 0.1).answers), {'b': -1})

    def test_negative_threshold(self):
        with self.assertRaises(DomainError):
            threshold_set(ScoreVector({'a': 1.0}), -0.1)

    def test_non_finite_scores(self):
        with self.assertRaises(DomainError):
            ScoreVector({'a': float('nan')})


class TestLossTrace(unittest.TestCase):
    """Трасса lambda -> FPP"""

    def test_worked_example(self):
        trace = loss_trace(*three_probe_case([True, True, False]))
        self.assertEqual(trace.breakpoints, (1.0, 2.0, 3.0))
        self.assertEqual(trace.values(), [Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(0)])
        # Непрерывность справа
        self.assertEqual(trace.loss_at(1.0), Fraction(1, 2))
        self.assertEqual(trace.loss_at(0.999), Fraction(1, 3))

    def test_all_correct(self):
        trace = loss_trace(*three_probe_case([True, True, True]))
        self.assertTrue(all(v == 0 for v in trace.values()))

    def test_single_wrong(self):
        trace = loss_trace(ScoreVector({'a': 2.0}), UserFeedback({'a': -1}))
        self.assertEqual(trace.breakpoints, (2.0,))
        self.assertEqual(trace.values(), [Fraction(1), Fraction(0)])

    def test_ties_merge(self):
        scores = ScoreVector({'a': 1.0, 'b': -1.0, 'c': 2.0})
        trace = loss_trace(scores, UserFeedback({'a': 1, 'b': 1, 'c': 1}))
        self.assertEqual(trace.breakpoints, (1.0, 2.0))
        self.assertEqual(trace.values(), [Fraction(1, 3), Fraction(0), Fraction(0)])

    def test_unscored_queries_never_answered(self):
        trace = loss_trace(ScoreVector({'a': 1.0}), UserFeedback({'a': 1, 'z': -1}))
        self.assertEqual(trace.values(), [Fraction(0), Fraction(0)])


score_rows = st.lists(
    st.tuples(st.sampled_from([0.0, 0.5, 1.0, 1.5, 2.0, 3.0]), st.booleans(),
              st.booleans(), st.sampled_from([-1, 1])),
    min_size=1, max_size=15)


def _instance(rows):
    scores = ScoreVector({f"b:{i}": magnitude * (1 if positive else -1)
                          for i, (magnitude, positive, _, _) in enumerate(rows)})
    answers = {f"b:{i}": answer for i, (_, _, queried, answer) in enumerate(rows) if queried}
    if not answers:
        answers = {'b:0': rows[0][3]}
    return scores, UserFeedback(answers)


@settings(max_examples=200, deadline=None)
@given(score_rows, st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0]))
def test_trace_matches_direct_loss(rows, lam):
    """Трасса совпадает с потерей множества, построенного заново"""
    scores, feedback = _instance(rows)
    trace = loss_trace(scores, feedback)
    assert trace.loss_at(lam) == fpp_loss(feedback, threshold_set(scores, lam))
    assert trace.loss_at(lam) == brute_fpp(scores, feedback, lam)


@settings(max_examples=200, deadline=None)
@given(score_rows, st.floats(0, 4), st.floats(0, 4))
def test_threshold_nesting(rows, first, second):
    """lambda1 <= lambda2 => I(C_lambda2) ⊆ I(C_lambda1), знаки совпадают"""
    scores, _ = _instance(rows)
    low, high = sorted((first, second))
    small = threshold_set(scores, high)
    large = threshold_set(scores, low)
    assert small.indices <= large.indices
    assert all(large.answers[i] == sign for i, sign in small.answers.items())


class TestBernoulliThreshold(unittest.TestCase):
    """eta*(x, delta_acc)"""

    def setUp(self):
        values = [0.99, 0.95, 0.90, 0.60, 0.50]
        self.keys = [f"b:{i + 1}" for i in range(len(values))]
        self.acc = AccuracyVector({k: 1 for k in self.keys}, dict(zip(self.keys, values)))

    def test_prefix_scan(self):
        self.assertAlmostEqual(bernoulli_threshold(self.acc, self.keys, 0.9), 0.60)

    def test_whole_prefix(self):
        self.assertEqual(bernoulli_threshold(self.acc, self.keys, 0.5), 0.0)

    def test_no_prefix(self):
        acc = AccuracyVector({'a': 1}, {'a': 0.5})
        self.assertEqual(bernoulli_threshold(acc, ['a'], 0.9), 0.5)
        self.assertTrue(eta_set(acc, 0.5).is_full_space())

    def test_empty_queries(self):
        with self.assertRaises(DomainError):
            bernoulli_threshold(self.acc, [], 0.9)

    def test_unknown_query(self):
        with self.assertRaises(DomainError):
            bernoulli_threshold(self.acc, ['b:99'], 0.9)

    def test_mismatched_keys(self):
        with self.assertRaises(DomainError):
            AccuracyVector({'a': 1}, {'b': 0.9})


def test_eta_set():
    acc = AccuracyVector({'a': 1, 'b': -1}, {'a': 0.9, 'b': 0.6})
    assert dict(eta_set(acc, 0.6).answers) == {'a': 1}
    assert eta_set(acc, 1.0).is_full_space()
    assert dict(eta_set(acc, 0.0).answers) == {'a': 1, 'b': -1}


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=12), st.floats(0, 1), st.floats(0, 1))
def test_bernoulli_nesting(values, first, second):
    """Большая целевая точность отвечает на подмножество запросов"""
    keys = [f"b:{i}" for i in range(len(values))]
    acc = AccuracyVector({k: 1 for k in keys}, dict(zip(keys, values)))
    low, high = sorted((first, second))
    strict = eta_set(acc, bernoulli_threshold(acc, keys, high))
    loose = eta_set(acc, bernoulli_threshold(acc, keys, low))
    assert strict.indices <= loose.indices


def test_bernoulli_counts_match_sets():
    rng = seed_stream(5, 'counts')
    for _ in range(50):
        simulator = IndependenceSimulator.random(rng, probes=8)
        feedback = simulator.draw_answers(rng)
        deltas = [0.0, 0.3, 0.6, 0.8, 0.95, 1.0]
        errors, answered = bernoulli_counts(simulator.acc, feedback, deltas)
        for delta, e, a in zip(deltas, errors, answered):
            pred_set = eta_set(simulator.acc, bernoulli_threshold(simulator.acc, feedback.queries, delta))
            assert fpp_loss(feedback, pred_set) == Fraction(int(e), max(1, int(a)))


def test_expected_fpp_bounded_by_target():
    """Под независимостью E[FPP | x] <= 1 - delta_acc"""
    rng = seed_stream(11, 'expected')
    for _ in range(50):
        simulator = IndependenceSimulator.random(rng)
        for delta_acc in (0.7, 0.8, 0.9):
            assert simulator.expected_fpp(delta_acc) <= 1.0 - delta_acc + 1e-12


class TestNestedFamilies(unittest.TestCase):
    """Обёртки семейств для калибраторов"""

    def setUp(self):
        self.example = WeakExample(
            id='x', family='bitvector',
            feedback=UserFeedback({'b:1': 1, 'b:2': 1, 'b:3': -1}),
            scores=ScoreVector({'b:1': 1.0, 'b:2': 2.0, 'b:3': 3.0}),
            acc=AccuracyVector({'b:1': 1, 'b:2': 1, 'b:3': 1}, {'b:1': 0.6, 'b:2': 0.8, 'b:3': 0.9}))

    def test_threshold_trace(self):
        family = get_nested_family('threshold')
        self.assertIsInstance(family, ThresholdFamily)
        self.assertEqual(family.trace(self.example).loss_at(1.5), Fraction(1, 2))
        self.assertEqual(family.default_grid([self.example], 3), [1.0, 2.0, 3.0])

    def test_bernoulli_trace_on_grid(self):
        family = get_nested_family('bernoulli', grid_size=10)
        self.assertIsInstance(family, BernoulliFamily)
        trace = family.trace(self.example)
        for t in family.default_grid([], 10):
            self.assertEqual(trace.loss_at(t), family.loss_at(self.example, t))
        # За правым сторожем воздержание
        self.assertEqual(trace.loss_at(1.5), 0)
        self.assertTrue(family.set_at(self.example, 1.5).is_full_space())

    def test_missing_inputs(self):
        example = WeakExample(id='y', family='bitvector', feedback=UserFeedback({'b:1': 1}),
                              scores=ScoreVector({'b:1': 1.0}))
        with self.assertRaises(DomainError):
            BernoulliFamily().trace(example)
        with self.assertRaises(DomainError):
            get_nested_family('other')


def test_losses_on_grid_float():
    trace = loss_trace(*three_probe_case([True, True, False]))
    assert np.allclose(trace.losses_on_grid([0.5, 1.5, 2.5, 3.5]), [1 / 3, 0.5, 1.0, 0.0])


if __name__ == '__main__':
    pytest.main([__file__])
