#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Потери False Probe Proportion и воздержание
Версия: 0.1.0
"""

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import FrozenSet, Hashable, Iterable, Mapping, Optional, Tuple, Union

from .errors import DomainError
from .probes import ProbeAdaptedSet, check_sign

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class UserFeedback:
    """Отвеченные пользователем запросы I и значения phi_i(Y) для i из I"""

    answers: Mapping[Hashable, int] = field(default_factory=dict)

    def __post_init__(self):
        checked = {index: check_sign(sign, f" для {index!r}") for index, sign in self.answers.items()}
        object.__setattr__(self, 'answers', MappingProxyType(checked))

    @classmethod
    def from_queries(cls, queries: Iterable[Hashable], answers: Mapping[Hashable, int]) -> 'UserFeedback':
        """
        Создание с проверкой: ключи ответов совпадают с запросами

        Raises:
            DomainError: Множества не совпадают
        """
        queries = set(queries)
        if queries != set(answers):
            raise DomainError("Ключи ответов должны совпадать с множеством запросов")
        return cls(dict(answers))

    @property
    def queries(self) -> FrozenSet[Hashable]:
        return frozenset(self.answers)

    def __len__(self) -> int:
        return len(self.answers)


def exact_level(value: Number) -> Fraction:
    """
    Уровень (delta, alpha) как точная дробь по его десятичной записи

    0.3 -> 3/10, а не ближайшее двоичное число; сравнения loss <= delta
    становятся точными.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(repr(float(value)))


def fpp_counts(feedback: UserFeedback, pred_set: ProbeAdaptedSet) -> Tuple[int, int]:
    """
    Числитель и знаменатель FPP

    Returns:
        Tuple[int, int]: (ошибки на I ∩ I(C), |I ∩ I(C)|)
    """
    errors = 0
    overlap = 0
    set_answers = pred_set.answers
    for index, answer in feedback.answers.items():
        predicted = set_answers.get(index)
        if predicted is None:
            continue
        overlap += 1
        if predicted != answer:
            errors += 1
    return errors, overlap


def fpp_loss(feedback: UserFeedback, pred_set: ProbeAdaptedSet) -> Fraction:
    """
    False Probe Proportion: доля ошибочных ответов множества среди отвеченных пользователем

    Returns:
        Fraction: Точное значение в [0, 1]; 0, если I ∩ I(C) пусто
    """
    errors, overlap = fpp_counts(feedback, pred_set)
    return Fraction(errors, max(1, overlap))


def abstention(feedback: UserFeedback, pred_set: ProbeAdaptedSet) -> Fraction:
    """
    Доля запросов пользователя, на которые множество не отвечает

    Raises:
        DomainError: Пустой набор запросов
    """
    if len(feedback) == 0:
        raise DomainError("Воздержание не определено для пустого набора запросов")
    _, overlap = fpp_counts(feedback, pred_set)
    return 1 - Fraction(overlap, len(feedback))


def loss_exceeds(errors: int, answered: int, level: Optional[Number]) -> bool:
    """Точная проверка errors / max(1, answered) > level"""
    level = exact_level(level)
    return errors * level.denominator > level.numerator * max(1, answered)
