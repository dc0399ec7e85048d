#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Пробы битового вектора (многометочная классификация)
Версия: 0.1.0
"""

import itertools
from typing import Any, Dict, Iterator, List, Tuple

from config import PROBE_KEY_PARTS, PROBE_KEY_PREFIXES
from core.errors import DomainError
from .base import ProbeFamily, compile_key


class BitVectorFamily(ProbeFamily):
    """Пробы-координаты: phi_k(y) = y_k"""

    kind = 'bitvector'
    key_pattern = compile_key(PROBE_KEY_PREFIXES['bitvector'], PROBE_KEY_PARTS['bitvector'])

    def __init__(self, k: int):
        super().__init__()
        if int(k) < 1:
            raise DomainError(f"Длина вектора K должна быть >= 1, получено {k}")
        self.k = int(k)

    def indices(self) -> List[int]:
        return list(range(1, self.k + 1))

    def validate_label(self, label: Any) -> Tuple[int, ...]:
        try:
            bits = tuple(int(v) for v in label)
        except (TypeError, ValueError):
            raise DomainError(f"Метка {label!r} не является битовым вектором")
        if len(bits) != self.k or any(b not in (-1, 1) for b in bits):
            raise DomainError(f"Метка {label!r}: нужен вектор длины {self.k} из {{-1, +1}}")
        return bits

    def labels(self) -> Iterator[Tuple[int, ...]]:
        return itertools.product((-1, 1), repeat=self.k)

    def space_size(self) -> int:
        return 2 ** self.k

    def key(self, index) -> str:
        return f"{PROBE_KEY_PREFIXES['bitvector']}:{self.normalize_index(index)}"

    def _index_from_match(self, match):
        return int(match.group(1))

    def _evaluate(self, index, label) -> int:
        return label[index - 1]

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'k': self.k}
