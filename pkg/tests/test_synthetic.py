#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Тесты синтетических генераторов
Версия: 0.1.0
"""

import itertools
import math
import os
import sys
import unittest

import numpy as np
import pytest

# Добавляем путь к модулям проекта
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.errors import DomainError
from families import TreeAncestorFamily
from models import (BernoulliLossModel, IndependenceSimulator, QuerySamplerParams, RankingModel, TreeModel,
                    build_balanced_tree, build_model, generate_examples, generator_metadata, seed_stream,
                    split_examples)
from models.ranking import (gen_ranking_example, listnet_probability, pair_query_probability,
                            ranking_weak_example, sample_pair_queries, top1_probabilities)
from models.tree import gen_tree_example, sample_tree_queries, tree_query_probabilities


class TestRanking(unittest.TestCase):
    """Модель ранжирования"""

    def test_listnet_two_items(self):
        self.assertAlmostEqual(listnet_probability([1.0, 0.0], (1, 2)), math.e / (math.e + 1))
        self.assertAlmostEqual(listnet_probability([1.0, 0.0], (2, 1)), 1 / (math.e + 1))

    def test_listnet_sums_to_one(self):
        utilities = [0.3, -1.2, 2.0, 0.0]
        total = sum(listnet_probability(utilities, perm)
                    for perm in itertools.permutations(range(1, 5)))
        self.assertAlmostEqual(total, 1.0, places=12)

    def test_top1_softmax(self):
        self.assertTrue(np.allclose(top1_probabilities([0.0, 0.0]), [0.5, 0.5]))

    def test_pair_query_probability(self):
        self.assertAlmostEqual(pair_query_probability(10, 10, 0.05, 0.2), 1 - math.exp(-0.5))
        self.assertAlmostEqual(pair_query_probability(10, 10, 0.05, 0.2), 0.3935, places=4)
        self.assertEqual(pair_query_probability(0.0, 5.0, 0.05, 0.2), 0.0)

    def test_scores_and_accuracies(self):
        model = RankingModel(k=5)
        draw = gen_ranking_example(model, seed_stream(3, 'draw'))
        self.assertEqual(len(draw.scores), 10)
        self.assertEqual(sorted(draw.label), [1, 2, 3, 4, 5])
        for key, s in draw.scores.scores.items():
            self.assertGreaterEqual(draw.acc.accuracies[key], 0.5)
            self.assertEqual(draw.acc.predictions[key], 1 if s >= 0 else -1)

    def test_no_queries_exhausts_attempts(self):
        params = QuerySamplerParams(c1=0.0, max_attempts=3)
        self.assertEqual(sample_pair_queries([1.0, 2.0, 3.0], params, seed_stream(1)), [])
        with self.assertRaises(DomainError):
            ranking_weak_example(RankingModel(k=3), params, seed=1, index=0)

    def test_confident_flips(self):
        """flip_rate = 1: каждая оценка меняет знак и растягивается в flip_boost раз"""
        plain = gen_ranking_example(RankingModel(k=5), seed_stream(8, 'draw'))
        flipped = gen_ranking_example(RankingModel(k=5, flip_rate=1.0, flip_boost=2.0), seed_stream(8, 'draw'))
        self.assertEqual(plain.label, flipped.label)
        for key, s in plain.scores.scores.items():
            self.assertAlmostEqual(flipped.scores.scores[key], -2.0 * s)
            self.assertGreaterEqual(flipped.acc.accuracies[key], plain.acc.accuracies[key])
        self.assertEqual(RankingModel(flip_rate=0.01).to_dict()['flip_rate'], 0.01)

    def test_bad_model(self):
        with self.assertRaises(DomainError):
            RankingModel(flip_rate=1.5)
        with self.assertRaises(DomainError):
            RankingModel(flip_boost=0.0)
        with self.assertRaises(DomainError):
            RankingModel(k=1)
        with self.assertRaises(DomainError):
            QuerySamplerParams(c1=-1.0)


def test_weak_ranking_answers_match_label():
    """Ответы пользователя согласованы с истинной перестановкой"""
    model = RankingModel(k=6)
    for example in generate_examples('ranking', 20, seed=42, model=model):
        assert example.family == 'pairwise'
        assert len(example.feedback) > 0
        for key, answer in example.feedback.answers.items():
            assert key.startswith('p:')
            assert answer == model.family.evaluate(key, example.label)


class TestTree(unittest.TestCase):
    """Модель классификации по дереву"""

    def setUp(self):
        self.tree = TreeAncestorFamily([-1, 0, 0, 1, 1])

    def test_query_probabilities(self):
        params = QuerySamplerParams(a=2.0, b=0.1, c=1.5)
        probabilities = tree_query_probabilities(self.tree, 2, params)
        self.assertAlmostEqual(probabilities[3], 2 * math.exp(-3.1))
        self.assertAlmostEqual(probabilities[3], 0.0901, places=4)
        self.assertEqual(probabilities[2], 1.0)
        self.assertTrue(np.all(probabilities <= 1.0))

    def test_internal_label_rejected(self):
        with self.assertRaises(DomainError):
            sample_tree_queries(self.tree, 1, QuerySamplerParams(), seed_stream(0))

    def test_two_leaf_log_odds(self):
        model = TreeModel(tree=TreeAncestorFamily([-1, 0, 0]), s_max=30.0)
        p = model.node_probabilities(np.array([0.8, 0.2]))
        s = model.log_odds(p)
        self.assertAlmostEqual(p[0], 1.0)
        self.assertAlmostEqual(s[1], math.log(4))
        self.assertAlmostEqual(s[2], -math.log(4))
        # Корень: p = 1, логит ограничен s_max
        self.assertEqual(s[0], 30.0)

    def test_node_probabilities_consistent(self):
        model = TreeModel(leaves=30, branching=4)
        draw = gen_tree_example(model, seed_stream(9, 'tree'))
        p = draw.node_probabilities
        for node, children in enumerate(model.tree.children):
            if children:
                self.assertAlmostEqual(p[node], sum(p[c] for c in children))
        self.assertIn(draw.label, model.tree.leaves)
        self.assertTrue(np.all(np.abs(list(draw.scores.scores.values())) <= model.s_max))

    def test_balanced_tree(self):
        tree = build_balanced_tree(7, 3)
        self.assertEqual(tree.space_size(), 7)
        self.assertEqual(len(tree.children[0]), 3)
        self.assertEqual(build_balanced_tree(1, 2).leaves, [0])
        with self.assertRaises(DomainError):
            build_balanced_tree(5, 1)


def test_weak_tree_answers_match_label():
    model = TreeModel(leaves=40, branching=3)
    for example in generate_examples('tree', 15, seed=5, model=model):
        assert example.family == 'tree'
        assert len(example.feedback) > 0
        for key, answer in example.feedback.answers.items():
            assert answer == model.tree.evaluate(key, example.label)


def test_generation_deterministic():
    """Пример i зависит только от (seed, i)"""
    first = generate_examples('ranking', 6, seed=11)
    second = generate_examples('ranking', 6, seed=11)
    assert [ex.to_record() for ex in first] == [ex.to_record() for ex in second]
    longer = generate_examples('ranking', 8, seed=11)
    assert [ex.to_record() for ex in longer[:6]] == [ex.to_record() for ex in first]
    other = generate_examples('ranking', 6, seed=12)
    assert [ex.to_record() for ex in other] != [ex.to_record() for ex in first]


def test_generation_sizes_and_errors():
    assert generate_examples('tree', 0, seed=1, model=TreeModel(leaves=10)) == []
    with pytest.raises(DomainError):
        generate_examples('graph', 3, seed=1)
    with pytest.raises(DomainError):
        generate_examples('ranking', -1, seed=1)
    with pytest.raises(DomainError):
        build_model('ranking', {'k': 1})
    with pytest.raises(DomainError):
        build_model('ranking', {'colour': 'red'})


def test_metadata_and_split():
    sampler = QuerySamplerParams()
    model = build_model('tree', {'leaves': 12, 'branching': 3})
    meta = generator_metadata('tree', 4, 3, model, sampler)
    assert meta['tree']['parents'] == model.tree.parents
    assert meta['sampler']['a'] == sampler.a
    ranking_meta = generator_metadata('ranking', 4, 3, build_model('ranking'), sampler)
    assert ranking_meta['model']['k'] == 8
    assert 'tree' not in ranking_meta

    examples = generate_examples('ranking', 5, seed=2)
    head, tail = split_examples(examples, 3)
    assert len(head) == 3 and len(tail) == 2


def test_seed_stream():
    a = seed_stream(7, 'x', 1).random(4)
    b = seed_stream(7, 'x', 1).random(4)
    c = seed_stream(7, 'x', 2).random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_independence_simulator():
    """Монте-Карло FPP близко к точному ожиданию"""
    rng = seed_stream(21, 'simulator')
    simulator = IndependenceSimulator.random(rng, probes=10)
    losses = simulator.mc_fpp(0.8, 20000, rng)
    assert abs(losses.mean() - simulator.expected_fpp(0.8)) < 0.02
    with pytest.raises(DomainError):
        IndependenceSimulator({})


def test_bernoulli_loss_model():
    model = BernoulliLossModel(0.4)
    grid = [0.1, 0.5, 0.9]
    assert np.allclose(model.expected_loss(grid), [0.36, 0.2, 0.04])
    losses = model.loss_matrix(50, grid, seed_stream(1, 'losses'))
    assert losses.shape == (50, 3)
    assert np.all(np.diff(losses, axis=1) <= 0)
    with pytest.raises(DomainError):
        BernoulliLossModel(0.0)


if __name__ == '__main__':
    pytest.main([__file__])
