#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Синтетическая классификация по дереву меток

Вероятности листьев ~ Dirichlet, сосредоточенный вокруг случайного "якорного"
листа; p_v узла - сумма по поддереву; оценки - ограниченные логиты p_v.
Пользователь отвечает на пробы узлов вблизи истинного листа.
Версия: 0.1.0
"""

from collections import deque
from typing import Any, Dict, List, NamedTuple, Optional

import numpy as np

from config import TREE_CONFIG
from core.dataset import WeakExample
from core.errors import DomainError
from core.loss import UserFeedback
from core.nested import AccuracyVector, ScoreVector
from families import TreeAncestorFamily
from .ranking import QuerySamplerParams
from .rng import seed_stream


def build_balanced_tree(leaves: int, branching: int) -> TreeAncestorFamily:
    """
    Почти сбалансированное дерево: листья узла делятся на min(branching, m) равных групп

    Args:
        leaves: Число листьев (>= 1)
        branching: Наибольшее число детей (>= 2)

    Returns:
        TreeAncestorFamily: Дерево с нумерацией узлов в ширину, корень 0
    """
    if leaves < 1:
        raise DomainError(f"Число листьев должно быть >= 1: {leaves}")
    if branching < 2:
        raise DomainError(f"Ветвление должно быть >= 2: {branching}")

    parents = [-1]
    queue = deque([(0, leaves)])
    while queue:
        node, size = queue.popleft()
        if size == 1:
            continue
        groups = min(branching, size)
        base, extra = divmod(size, groups)
        for g in range(groups):
            child = len(parents)
            parents.append(node)
            queue.append((child, base + (1 if g < extra else 0)))
    return TreeAncestorFamily(parents)


class TreeDraw(NamedTuple):
    label: int
    node_probabilities: np.ndarray
    scores: ScoreVector
    acc: AccuracyVector


class TreeModel:
    """Генеративная модель: дерево, концентрации Дирихле и предел логитов"""

    def __init__(self, tree: Optional[TreeAncestorFamily] = None,
                 leaves: int = TREE_CONFIG['leaves'],
                 branching: int = TREE_CONFIG['branching'],
                 base_concentration: float = TREE_CONFIG['base_concentration'],
                 anchor_concentration: float = TREE_CONFIG['anchor_concentration'],
                 s_max: float = TREE_CONFIG['s_max']):
        if base_concentration <= 0 or anchor_concentration < 0:
            raise DomainError("Концентрации Дирихле: base > 0, anchor >= 0")
        if s_max <= 0:
            raise DomainError(f"s_max должно быть положительным: {s_max}")
        self.tree = tree if tree is not None else build_balanced_tree(leaves, branching)
        self.branching = branching
        self.base_concentration = float(base_concentration)
        self.anchor_concentration = float(anchor_concentration)
        self.s_max = float(s_max)
        self.leaves = np.asarray(self.tree.leaves, dtype=np.int64)

    @property
    def family(self) -> TreeAncestorFamily:
        return self.tree

    def to_dict(self) -> Dict[str, Any]:
        return {'leaves': len(self.leaves), 'branching': self.branching,
                'base_concentration': self.base_concentration,
                'anchor_concentration': self.anchor_concentration, 's_max': self.s_max}

    def node_probabilities(self, leaf_probabilities: np.ndarray) -> np.ndarray:
        """p_v = сумма вероятностей листьев поддерева (корень ровно 1)"""
        values = np.zeros(len(self.tree.parents), dtype=float)
        values[self.leaves] = leaf_probabilities
        sums = self.tree.subtree_sums(values)
        return sums / sums[0]

    def log_odds(self, probabilities: np.ndarray) -> np.ndarray:
        """log(p / (1 - p)), ограниченный в [-s_max, s_max]"""
        with np.errstate(divide='ignore'):
            odds = np.log(probabilities) - np.log1p(-probabilities)
        return np.clip(np.nan_to_num(odds, nan=0.0, posinf=self.s_max, neginf=-self.s_max),
                       -self.s_max, self.s_max)


def gen_tree_example(model: TreeModel, rng: np.random.Generator) -> TreeDraw:
    """
    Один экземпляр классификации

    Returns:
        TreeDraw: Истинный лист, p_v, оценки s_v и точности max(p_v, 1 - p_v)
    """
    anchor = rng.integers(len(model.leaves))
    concentration = np.full(len(model.leaves), model.base_concentration)
    concentration[anchor] += model.anchor_concentration
    gammas = rng.standard_gamma(concentration)
    leaf_probabilities = gammas / gammas.sum()
    label = int(model.leaves[rng.choice(len(model.leaves), p=leaf_probabilities)])

    p = model.node_probabilities(leaf_probabilities)
    s = model.log_odds(p)
    keys = [model.tree.key(v) for v in range(len(p))]
    scores = {key: float(value) for key, value in zip(keys, s)}
    accuracies = {key: float(max(pv, 1.0 - pv)) for key, pv in zip(keys, p)}
    predictions = {key: 1 if pv >= 0.5 else -1 for key, pv in zip(keys, p)}
    return TreeDraw(label, p, ScoreVector(scores), AccuracyVector(predictions, accuracies))


def tree_query_probabilities(tree: TreeAncestorFamily, label: int, params: QuerySamplerParams) -> np.ndarray:
    """
    min(1, a exp(-b d(y, A) - c d(v, A))) для всех узлов v, A - общий предок y и v
    """
    lca = tree.lca_depths(label)
    to_label = tree.depth[label] - lca
    to_node = tree.depth - lca
    return np.minimum(1.0, params.a * np.exp(-params.b * to_label - params.c * to_node))


def sample_tree_queries(tree: TreeAncestorFamily, label: int, params: QuerySamplerParams,
                        rng: np.random.Generator) -> List[int]:
    """Независимый отбор узлов-запросов"""
    tree.validate_label(label)
    probabilities = tree_query_probabilities(tree, label, params)
    return [int(v) for v in np.flatnonzero(rng.random(len(probabilities)) < probabilities)]


def tree_weak_example(model: TreeModel, params: QuerySamplerParams, seed: int, index: int,
                      example_id: Optional[str] = None) -> WeakExample:
    """
    Слабо размеченный пример классификации с непустым набором запросов

    Raises:
        DomainError: За max_attempts попыток запросы так и не выбраны
    """
    rng = seed_stream(seed, 'tree', index)
    for _ in range(params.max_attempts):
        draw = gen_tree_example(model, rng)
        nodes = sample_tree_queries(model.tree, draw.label, params, rng)
        if nodes:
            break
    else:
        raise DomainError(f"Пример {index}: семплер не выбрал ни одного узла за {params.max_attempts} попыток")

    tree = model.tree
    answers = {tree.key(v): tree.evaluate(v, draw.label) for v in nodes}
    return WeakExample(
        id=example_id or f"tree-{index:06d}",
        family=tree.kind,
        feedback=UserFeedback.from_queries(list(answers), answers),
        scores=draw.scores,
        acc=draw.acc,
        label=draw.label,
    )
