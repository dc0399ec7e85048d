#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Попарные пробы ранжирования
phi_{i,j}(y) = sign(y^{-1}(j) - y^{-1}(i)), i < j
Версия: 0.1.0
"""

import itertools
import math
from typing import Any, Dict, Iterator, List, Tuple

from config import PROBE_KEY_PARTS, PROBE_KEY_PREFIXES
from core.errors import DomainError
from .base import ProbeFamily, compile_key


def validate_permutation(label: Any, k: int) -> Tuple[int, ...]:
    """
    Проверка перестановки: y[r-1] - предмет на позиции r

    Raises:
        DomainError: Не биекция на {1..K}
    """
    try:
        perm = tuple(int(v) for v in label)
    except (TypeError, ValueError):
        raise DomainError(f"Метка {label!r} не является перестановкой")
    if len(perm) != k or sorted(perm) != list(range(1, k + 1)):
        raise DomainError(f"Метка {label!r} не является перестановкой на 1..{k}")
    return perm


class PairwiseFamily(ProbeFamily):
    """Пробы попарного сравнения: +1, если предмет i стоит выше предмета j"""

    kind = 'pairwise'
    key_pattern = compile_key(PROBE_KEY_PREFIXES['pairwise'], PROBE_KEY_PARTS['pairwise'])

    def __init__(self, k: int):
        super().__init__()
        if int(k) < 2:
            raise DomainError(f"Число предметов K должно быть >= 2, получено {k}")
        self.k = int(k)

    def indices(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in range(1, self.k + 1) for j in range(i + 1, self.k + 1)]

    def validate_label(self, label: Any) -> Tuple[int, ...]:
        return validate_permutation(label, self.k)

    def labels(self) -> Iterator[Tuple[int, ...]]:
        return itertools.permutations(range(1, self.k + 1))

    def space_size(self) -> int:
        return math.factorial(self.k)

    def key(self, index) -> str:
        i, j = self.normalize_index(index)
        return f"{PROBE_KEY_PREFIXES['pairwise']}:{i}-{j}"

    def _index_from_match(self, match):
        return (int(match.group(1)), int(match.group(2)))

    def _evaluate(self, index, label) -> int:
        i, j = index
        # y^{-1}: предмет -> позиция
        return 1 if label.index(j) > label.index(i) else -1

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'k': self.k}
