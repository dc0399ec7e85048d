#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Статистические примитивы
Конформный квантиль и p-значение Хёфдинга-Бенткуса
Версия: 0.1.0
"""

import math
from fractions import Fraction
from typing import Sequence, Union

import numpy as np
from scipy.stats import binom

from .errors import DomainError

Number = Union[int, float, Fraction]

# Защита ceil от ошибок округления в произведениях вида (n+1)(1-alpha)
CEIL_GUARD = 1e-9


def conformal_rank(n: int, alpha: float) -> int:
    """k = ceil((n+1)(1-alpha)), обрезанный до [1, n]"""
    k = math.ceil((n + 1) * (1.0 - alpha) - CEIL_GUARD)
    return min(max(k, 1), n)


def conformal_quantile(scores: Sequence[float], alpha: float, rank_offset: int = 0) -> float:
    """
    (1 + 1/n)(1 - alpha)-квантиль: k-я порядковая статистика

    Args:
        scores: Оценки несоответствия (дубликаты сохраняются)
        alpha: Уровень в (0, 1)
        rank_offset: Сдвиг ранга (0 в рабочем режиме; иное - внедрённый дефект)

    Returns:
        float: k-я наименьшая оценка, k = ceil((n+1)(1-alpha)), не больше n

    Raises:
        DomainError: alpha вне (0, 1) или пустая выборка
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha должно лежать в (0, 1): {alpha}")
    if len(scores) == 0:
        raise DomainError("Пустая выборка оценок")
    ordered = np.sort(np.asarray(scores, dtype=float))
    k = min(max(conformal_rank(len(ordered), alpha) + rank_offset, 1), len(ordered))
    return float(ordered[k - 1])


def kl_bernoulli(a: float, b: float) -> float:
    """h(a, b) = a log(a/b) + (1-a) log((1-a)/(1-b)), с доопределением по непрерывности"""
    first = 0.0 if a == 0.0 else a * math.log(a / b)
    second = 0.0 if a == 1.0 else (1.0 - a) * math.log((1.0 - a) / (1.0 - b))
    return first + second


def tail_count(mean_loss: Number, n: int) -> int:
    """ceil(n * L) с точной арифметикой для дробей"""
    if isinstance(mean_loss, (Fraction, int)):
        return math.ceil(Fraction(mean_loss) * n)
    return math.ceil(n * float(mean_loss) - CEIL_GUARD)


def hoeffding_pvalue(mean_loss: Number, n: int, delta: float) -> float:
    """exp(-n h(min(L, delta), delta))"""
    return math.exp(-n * kl_bernoulli(min(float(mean_loss), delta), delta))


def bentkus_pvalue(mean_loss: Number, n: int, delta: float) -> float:
    """e * P(Bin(n, delta) <= ceil(n L))"""
    return math.e * float(binom.cdf(tail_count(mean_loss, n), n, delta))


def hb_pvalue(mean_loss: Number, n: int, delta: float) -> float:
    """
    p-значение Хёфдинга-Бенткуса для гипотезы E[loss] > delta

    Args:
        mean_loss: Средняя потеря по выборке в [0, 1]
        n: Размер выборки
        delta: Уровень в (0, 1)

    Returns:
        float: min(1, hoeffding, bentkus)

    Raises:
        DomainError: Параметры вне области определения
    """
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta должно лежать в (0, 1): {delta}")
    if n < 1:
        raise DomainError(f"Размер выборки должен быть >= 1: {n}")
    if not 0.0 <= float(mean_loss) <= 1.0:
        raise DomainError(f"Средняя потеря вне [0, 1]: {mean_loss}")
    if float(mean_loss) >= delta:
        return 1.0
    return min(1.0, hoeffding_pvalue(mean_loss, n, delta), bentkus_pvalue(mean_loss, n, delta))


def binomial_standard_error(rate: float, trials: int) -> float:
    """sqrt(p(1-p)/m)"""
    if trials < 1:
        return float('nan')
    return math.sqrt(max(rate * (1.0 - rate), 0.0) / trials)
