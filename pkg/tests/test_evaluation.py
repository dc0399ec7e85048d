#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Тесты оценки и прогона по сетке параметров
Версия: 0.1.0
"""

import math
import os
import sys
import unittest

import pytest

# Добавляем путь к модулям проекта
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from analyzers.evaluation import ecdf_table, evaluate_outcome, upper_quantile
from analyzers.sweep import ROW_COLUMNS, cell_count, merge_config, ordering_fraction, run_sweep, summarize
from calibrators import CalibrationOutcome
from core.dataset import WeakExample
from core.errors import DataError, DomainError, UsageError
from core.loss import UserFeedback
from core.nested import ScoreVector


def make_example(rows, example_id):
    scores = ScoreVector({f"b:{i + 1}": s for i, (s, _) in enumerate(rows)})
    feedback = UserFeedback({f"b:{i + 1}": a for i, (_, a) in enumerate(rows)})
    return WeakExample(id=example_id, family='bitvector', feedback=feedback, scores=scores)


def outcome_at(parameter, **extra):
    values = dict(method='stepdown', family='threshold', parameter=parameter, delta=0.1, alpha=0.2,
                  probe_family='bitvector', created_from='sha256:calibration')
    values.update(extra)
    return CalibrationOutcome(**values)


class TestEcdf(unittest.TestCase):
    """ECDF и верхний квантиль"""

    def test_ecdf(self):
        table = ecdf_table([0.5, 0.0, 0.5, 1.0])
        self.assertEqual(list(table['t']), [0.0, 0.5, 1.0])
        self.assertEqual(list(table['fraction']), [0.25, 0.75, 1.0])
        self.assertTrue(ecdf_table([]).empty)

    def test_upper_quantile(self):
        values = [0.0, 0.5, 1.0, 1.0]
        self.assertEqual(upper_quantile(values, 0.5), 0.5)
        self.assertEqual(upper_quantile(values, 0.9), 1.0)
        self.assertEqual(upper_quantile(list(range(10)), 0.9), 8.0)
        with self.assertRaises(DomainError):
            upper_quantile([], 0.5)

    def test_quantile_agrees_with_ecdf(self):
        values = [0.1, 0.4, 0.4, 0.2, 0.9, 0.0, 0.3]
        table = ecdf_table(values)
        for level in (0.2, 0.5, 0.8, 1.0):
            q = upper_quantile(values, level)
            first = table[table['fraction'] >= level - 1e-12]['t'].iloc[0]
            self.assertEqual(q, first)


class TestEvaluateOutcome(unittest.TestCase):
    """Применение результата к тестовой выборке"""

    def setUp(self):
        self.examples = [
            make_example([(1.0, 1), (2.0, 1)], 'ok'),
            make_example([(1.0, -1), (0.2, 1)], 'bad'),
        ]

    def test_metrics(self):
        report = evaluate_outcome(outcome_at(0.5), self.examples)
        self.assertEqual(report.losses, [0.0, 1.0])
        self.assertEqual(report.abstentions, [0.0, 0.5])
        self.assertEqual(report.mean_loss, 0.5)
        self.assertEqual(report.loss_quantile, 1.0)
        self.assertAlmostEqual(report.loss_quantile_gap, 0.9)
        self.assertEqual(report.exceedance_rate, 0.5)
        self.assertEqual(report.mean_abstention, 0.25)
        self.assertIsNone(report.accuracy_histogram)
        self.assertEqual(report.warnings, [])

    def test_report_dict(self):
        report = evaluate_outcome(outcome_at(math.inf), self.examples, alpha=0.5)
        data = report.to_dict()
        self.assertEqual(data['parameter'], 'inf')
        self.assertNotIn('losses', data)
        self.assertEqual(data['alpha'], 0.5)
        self.assertEqual(list(report.abstention_ecdf()['t']), [1.0])

    def test_abstain_all(self):
        report = evaluate_outcome(outcome_at(5.0, abstain_all=True, warning='abstain'), self.examples)
        self.assertEqual(report.mean_loss, 0.0)
        self.assertEqual(report.mean_abstention, 1.0)
        self.assertIn('abstain', report.warnings)

    def test_same_digest_warns(self):
        report = evaluate_outcome(outcome_at(0.5), self.examples, digest='sha256:calibration')
        self.assertEqual(len(report.warnings), 1)

    def test_errors(self):
        with self.assertRaises(DataError):
            evaluate_outcome(outcome_at(0.5), [])
        with self.assertRaises(DataError):
            evaluate_outcome(outcome_at(0.5, probe_family='tree'), self.examples)
        with self.assertRaises(DataError):
            evaluate_outcome(outcome_at(0.5, family='bernoulli', method='nominal'), self.examples)


def tiny_sweep(**overrides):
    values = {'alphas': [0.2], 'deltas': [0.2], 'methods': ['stepdown', 'fst'], 'families': ['threshold'],
              'seeds': 2, 'n_calibration': 20, 'n_test': 10, 'grid_size': 10, 'generator': {'k': 4}}
    values.update(overrides)
    return merge_config(values)


class TestSweep(unittest.TestCase):
    """Прогон по сетке"""

    def test_default_cells(self):
        self.assertEqual(cell_count(merge_config()), 720)

    def test_merge_errors(self):
        with self.assertRaises(UsageError):
            merge_config({'colour': 'red'})
        with self.assertRaises(UsageError):
            merge_config({'alphas': []})
        with self.assertRaises(UsageError):
            merge_config({'seeds': 0})

    def test_tiny_run(self):
        frame = run_sweep(tiny_sweep(), base_seed=5)
        self.assertEqual(list(frame.columns), ROW_COLUMNS)
        self.assertEqual(len(frame), 4)
        self.assertTrue((frame['status'] == 'ok').all())
        self.assertEqual(sorted(frame['seed'].unique()), [5, 6])

        summary = summarize(frame)
        self.assertEqual(len(summary), 2)
        self.assertTrue((summary['runs'] == 2).all())
        fractions = ordering_fraction(summary, order=('stepdown', 'fst'))
        self.assertEqual(fractions['cells'], 1)

    def test_failed_cells_recorded(self):
        frame = run_sweep(tiny_sweep(methods=['stepdown', 'nominal'], seeds=1))
        failed = frame[frame['status'] == 'error']
        self.assertEqual(list(failed['method']), ['nominal'])
        self.assertTrue(failed['error'].iloc[0])
        fractions = ordering_fraction(summarize(frame))
        self.assertEqual(fractions['cells'], 0)


if __name__ == '__main__':
    pytest.main([__file__])
