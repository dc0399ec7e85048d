#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Потоки случайных чисел
Счётный генератор Philox, ветвление по ключам через SeedSequence
Версия: 0.1.0
"""

import zlib
from typing import Union

import numpy as np

SEED_MASK = (1 << 64) - 1

Key = Union[int, str]


def _entropy(key: Key) -> int:
    if isinstance(key, str):
        return zlib.crc32(key.encode('utf-8'))
    return int(key) & SEED_MASK


def seed_stream(seed: int, *keys: Key) -> np.random.Generator:
    """
    Независимый поток для (seed, ключи)

    Один и тот же набор ключей всегда даёт ту же последовательность;
    глобальное состояние numpy не используется.

    Args:
        seed: 64-битное зерно эксперимента
        keys: Номера и метки подпотока (номер примера, 'queries', ...)

    Returns:
        np.random.Generator: Генератор на Philox
    """
    sequence = np.random.SeedSequence([_entropy(seed)] + [_entropy(k) for k in keys])
    return np.random.Generator(np.random.Philox(sequence))
