#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Пробы "предмет на позиции"
phi_{k,j}(y) = 2 * 1{y(k) = j} - 1
Версия: 0.1.0
"""

import itertools
import math
from typing import Any, Dict, Iterator, List, Tuple

from config import PROBE_KEY_PARTS, PROBE_KEY_PREFIXES
from core.errors import DomainError
from .base import ProbeFamily, compile_key
from .pairwise import validate_permutation


class RankPositionFamily(ProbeFamily):
    """Пробы позиции: +1, если на позиции k стоит предмет j"""

    kind = 'rank-position'
    key_pattern = compile_key(PROBE_KEY_PREFIXES['rank-position'], PROBE_KEY_PARTS['rank-position'])

    def __init__(self, k: int):
        super().__init__()
        if int(k) < 2:
            raise DomainError(f"Число предметов K должно быть >= 2, получено {k}")
        self.k = int(k)

    def indices(self) -> List[Tuple[int, int]]:
        return [(r, j) for r in range(1, self.k + 1) for j in range(1, self.k + 1)]

    def validate_label(self, label: Any) -> Tuple[int, ...]:
        return validate_permutation(label, self.k)

    def labels(self) -> Iterator[Tuple[int, ...]]:
        return itertools.permutations(range(1, self.k + 1))

    def space_size(self) -> int:
        return math.factorial(self.k)

    def key(self, index) -> str:
        r, j = self.normalize_index(index)
        return f"{PROBE_KEY_PREFIXES['rank-position']}:{r}-{j}"

    def _index_from_match(self, match):
        return (int(match.group(1)), int(match.group(2)))

    def _evaluate(self, index, label) -> int:
        rank, item = index
        return 1 if label[rank - 1] == item else -1

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'k': self.k}
