#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Пробы предков в дереве меток
phi_v(y) = 2 * 1{v - предок y} - 1, предок рефлексивен
Версия: 0.1.0
"""

from typing import Any, Dict, Iterator, List, Sequence

import numpy as np

from config import PROBE_KEY_PARTS, PROBE_KEY_PREFIXES
from core.errors import DomainError
from .base import ProbeFamily, compile_key


class TreeAncestorFamily(ProbeFamily):
    """Пробы "узел v - предок листа y" над корневым деревом (массив родителей, корень 0)"""

    kind = 'tree'
    key_pattern = compile_key(PROBE_KEY_PREFIXES['tree'], PROBE_KEY_PARTS['tree'])

    def __init__(self, parents: Sequence[int]):
        """
        Инициализация дерева

        Args:
            parents: Массив родителей, parents[0] == -1

        Raises:
            DomainError: Массив не задаёт дерево с корнем 0
        """
        super().__init__()
        self.parents = [int(p) for p in parents]
        n = len(self.parents)
        if n == 0 or self.parents[0] != -1:
            raise DomainError("Корнем дерева должен быть узел 0 с родителем -1")

        self.children: List[List[int]] = [[] for _ in range(n)]
        for node, parent in enumerate(self.parents[1:], start=1):
            if not 0 <= parent < n or parent == node:
                raise DomainError(f"Узел {node}: некорректный родитель {parent}")
            self.children[parent].append(node)

        # Прямой обход: порядок, глубины и интервалы [tin, tout)
        self.preorder: List[int] = []
        self.depth = np.zeros(n, dtype=np.int64)
        self._tin = np.zeros(n, dtype=np.int64)
        self._tout = np.zeros(n, dtype=np.int64)
        stack = [(0, False)]
        while stack:
            node, closing = stack.pop()
            if closing:
                self._tout[node] = len(self.preorder)
                continue
            self._tin[node] = len(self.preorder)
            self.preorder.append(node)
            stack.append((node, True))
            for child in reversed(self.children[node]):
                self.depth[child] = self.depth[node] + 1
                stack.append((child, False))
        if len(self.preorder) != n:
            raise DomainError("Массив родителей содержит цикл или несвязные узлы")

        self.leaves: List[int] = [v for v in self.preorder if not self.children[v]]
        self._leaf_set = frozenset(self.leaves)
        self._ancestors = None

    def indices(self) -> List[int]:
        return list(self.preorder)

    def validate_label(self, label: Any) -> int:
        try:
            leaf = int(label)
        except (TypeError, ValueError):
            raise DomainError(f"Метка {label!r} не является узлом дерева")
        if leaf not in self._leaf_set:
            raise DomainError(f"Узел {label!r} не является листом дерева")
        return leaf

    def labels(self) -> Iterator[int]:
        return iter(self.leaves)

    def space_size(self) -> int:
        return len(self.leaves)

    def key(self, index) -> str:
        return f"{PROBE_KEY_PREFIXES['tree']}:{self.normalize_index(index)}"

    def _index_from_match(self, match):
        return int(match.group(1))

    def _evaluate(self, index, label) -> int:
        return 1 if self.is_ancestor(index, label) else -1

    def is_ancestor(self, node: int, other: int) -> bool:
        """Нестрогое отношение: node - предок other"""
        return bool(self._tin[node] <= self._tin[other] < self._tout[node])

    def ancestor_matrix(self) -> np.ndarray:
        """
        Матрица A[v, d] - предок узла v на глубине d (-1 глубже самого v)

        Returns:
            np.ndarray: Целочисленная матрица n x (max_depth + 1)
        """
        if self._ancestors is None:
            n = len(self.parents)
            max_depth = int(self.depth.max())
            matrix = np.full((n, max_depth + 1), -1, dtype=np.int64)
            for node in self.preorder:
                parent = self.parents[node]
                if parent >= 0:
                    matrix[node] = matrix[parent]
                matrix[node, self.depth[node]] = node
            self._ancestors = matrix
        return self._ancestors

    def subtree_leaves(self, node: int) -> List[int]:
        """Листья поддерева узла"""
        lo, hi = self._tin[node], self._tout[node]
        return [v for v in self.preorder[lo:hi] if not self.children[v]]

    def subtree_sums(self, values: np.ndarray) -> np.ndarray:
        """
        Суммы значений по поддеревьям

        Args:
            values: Значения в узлах (массив длины n)

        Returns:
            np.ndarray: s[v] = сумма values по поддереву v
        """
        ordered = np.asarray(values, dtype=float)[self.preorder]
        prefix = np.concatenate([[0.0], np.cumsum(ordered)])
        return prefix[self._tout] - prefix[self._tin]

    def lca_depths(self, node: int) -> np.ndarray:
        """Глубина ближайшего общего предка node и каждого узла дерева"""
        matrix = self.ancestor_matrix()
        row = matrix[node]
        common = (matrix == row[None, :]) & (row[None, :] >= 0)
        return common.sum(axis=1) - 1

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'parents': list(self.parents)}
