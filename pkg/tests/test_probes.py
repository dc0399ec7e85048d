#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Тесты семейств проб
Версия: 0.1.0
"""

import os
import sys
import unittest

import pytest
from hypothesis import given, settings, strategies as st

# Добавляем путь к модулям проекта
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.errors import CapacityError, DomainError
from core.probes import (ProbeAdaptedSet, check_identifiability, evaluate_probe, materialize_weak_set,
                         membership, probe_of_explicit_set)
from families import (BitVectorFamily, PairwiseFamily, RankPositionFamily, TreeAncestorFamily,
                      build_family, family_from_dict)
from models.tree import build_balanced_tree


class TestPairwiseFamily(unittest.TestCase):
    """Попарные пробы"""

    def setUp(self):
        self.family = PairwiseFamily(3)

    def test_canonical_order(self):
        self.assertEqual(self.family.indices(), [(1, 2), (1, 3), (2, 3)])

    def test_evaluate(self):
        # (2, 1, 3): предмет 2 на первой позиции
        self.assertEqual(evaluate_probe(self.family, (1, 2), (2, 1, 3)), -1)
        self.assertEqual(evaluate_probe(self.family, (1, 3), (2, 1, 3)), 1)
        self.assertEqual(evaluate_probe(self.family, 'p:2-3', (2, 1, 3)), 1)

    def test_key_roundtrip(self):
        for index in self.family.indices():
            self.assertEqual(self.family.parse_key(self.family.key(index)), index)

    def test_bad_label(self):
        with self.assertRaises(DomainError):
            self.family.evaluate((1, 2), (1, 1, 2))

    def test_bad_index(self):
        with self.assertRaises(DomainError):
            self.family.evaluate((2, 1), (1, 2, 3))
        with self.assertRaises(DomainError):
            self.family.evaluate('t:1', (1, 2, 3))

    def test_small_k_rejected(self):
        with self.assertRaises(DomainError):
            PairwiseFamily(1)


class TestTreeFamily(unittest.TestCase):
    """Пробы предков"""

    def setUp(self):
        # 0 -> {1, 2}, 1 -> {3, 4}
        self.tree = TreeAncestorFamily([-1, 0, 0, 1, 1])

    def test_leaves_preorder(self):
        self.assertEqual(self.tree.leaves, [3, 4, 2])
        self.assertEqual(self.tree.indices(), [0, 1, 3, 4, 2])

    def test_reflexive_ancestry(self):
        self.assertEqual(self.tree.evaluate(3, 3), 1)
        self.assertEqual(self.tree.evaluate(1, 3), 1)
        self.assertEqual(self.tree.evaluate(0, 2), 1)
        self.assertEqual(self.tree.evaluate(1, 2), -1)

    def test_internal_label_rejected(self):
        with self.assertRaises(DomainError):
            self.tree.evaluate(0, 1)

    def test_cycle_rejected(self):
        with self.assertRaises(DomainError):
            TreeAncestorFamily([-1, 2, 1])

    def test_subtree_sums(self):
        values = [0.0, 0.0, 0.25, 0.5, 0.25]
        sums = self.tree.subtree_sums(values)
        self.assertAlmostEqual(sums[0], 1.0)
        self.assertAlmostEqual(sums[1], 0.75)
        self.assertAlmostEqual(sums[2], 0.25)

    def test_lca_depths(self):
        depths = self.tree.lca_depths(3)
        self.assertEqual(list(depths), [0, 1, 0, 2, 1])


def test_identifiability_shipped_families():
    """Все семейства инъективны на малых пространствах"""
    assert PairwiseFamily(3).check_identifiability(5000)
    assert BitVectorFamily(4).check_identifiability(5000)
    for k in range(2, 6):
        assert check_identifiability(PairwiseFamily(k), 5000)
        assert check_identifiability(RankPositionFamily(k), 5000)
    for leaves, branching in ((1, 2), (7, 3), (64, 8)):
        assert build_balanced_tree(leaves, branching).check_identifiability(5000)
    print("[OK] Идентифицируемость семейств")


def test_identifiability_capacity():
    with pytest.raises(CapacityError):
        PairwiseFamily(8).check_identifiability(5000)


def test_materialize_weak_set():
    """Слабое множество W по ответам пользователя"""
    pairwise = PairwiseFamily(3)
    assert len(materialize_weak_set(pairwise, [], {}, 5000)) == 6

    label = (1, 2, 3)
    answers = {index: pairwise.evaluate(index, label) for index in pairwise.indices()}
    assert materialize_weak_set(pairwise, answers, answers, 5000) == [label]

    bits = BitVectorFamily(3)
    weak = materialize_weak_set(bits, [1], {1: 1}, 5000)
    assert len(weak) == 4
    assert all(y[0] == 1 for y in weak)

    with pytest.raises(DomainError):
        materialize_weak_set(bits, [1, 2], {1: 1}, 5000)


MEMBERSHIP_FAMILIES = [BitVectorFamily(4), PairwiseFamily(4), RankPositionFamily(3),
                       build_balanced_tree(9, 3)]


@settings(max_examples=1000, deadline=None)
@given(st.data())
def test_membership_matches_weak_set(data):
    """membership(C, y) <=> y из W(I(C), ответы C) на случайных множествах и метках"""
    family = data.draw(st.sampled_from(MEMBERSHIP_FAMILIES))
    indices = family.indices()
    chosen = data.draw(st.lists(st.sampled_from(indices), unique=True, max_size=len(indices)))
    signs = data.draw(st.lists(st.sampled_from([-1, 1]), min_size=len(chosen), max_size=len(chosen)))
    pred_set = ProbeAdaptedSet({family.key(index): sign for index, sign in zip(chosen, signs)})
    label = data.draw(st.sampled_from(list(family.labels())))

    weak = set(materialize_weak_set(family, pred_set.answers, pred_set.answers, 5000))
    assert membership(pred_set, family, label) == (family.validate_label(label) in weak)


def test_probe_of_explicit_set():
    family = BitVectorFamily(2)
    assert probe_of_explicit_set(family, 1, [(1, 1), (1, -1)]) == 1
    assert probe_of_explicit_set(family, 2, [(1, 1), (1, -1)]) == 0
    assert probe_of_explicit_set(family, 2, [(1, -1)]) == family.evaluate(2, (1, -1))
    with pytest.raises(DomainError):
        probe_of_explicit_set(family, 1, [])


def test_probe_adapted_set_signs():
    with pytest.raises(DomainError):
        ProbeAdaptedSet({'b:1': 0})
    assert ProbeAdaptedSet().is_full_space()


def test_family_serialization():
    tree = build_balanced_tree(10, 3)
    restored = family_from_dict(tree.to_dict())
    assert restored.parents == tree.parents
    assert build_family('bitvector', k=3).space_size() == 8
    with pytest.raises(DomainError):
        build_family('unknown')


if __name__ == '__main__':
    unittest.main()
