#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Probe-adapted предсказательные множества
C = {y : phi_i(y) = answers[i] для всех i из I(C)}
Версия: 0.1.0
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Mapping

from .errors import DomainError


def check_sign(value: Any, where: str = '') -> int:
    """
    Проверка значения пробы

    Raises:
        DomainError: Значение не равно +1 или -1
    """
    if isinstance(value, bool) or value not in (-1, 1):
        raise DomainError(f"Ожидался знак +1/-1{where}, получено {value!r}")
    return int(value)


@dataclass(frozen=True)
class ProbeAdaptedSet:
    """Множество, заданное отвеченными пробами и их знаками; пустой словарь - всё пространство"""

    answers: Mapping[Hashable, int] = field(default_factory=dict)

    def __post_init__(self):
        checked = {index: check_sign(sign, f" для {index!r}") for index, sign in self.answers.items()}
        object.__setattr__(self, 'answers', MappingProxyType(checked))

    @property
    def indices(self) -> FrozenSet[Hashable]:
        """I(C)"""
        return frozenset(self.answers)

    def is_full_space(self) -> bool:
        return not self.answers

    def __len__(self) -> int:
        return len(self.answers)

    def to_dict(self) -> Dict[str, int]:
        return {str(k): v for k, v in sorted(self.answers.items(), key=lambda kv: str(kv[0]))}


def evaluate_probe(family, index: Hashable, label: Any) -> int:
    """
    Значение пробы phi_index(label)

    Raises:
        DomainError: Индекс или метка вне семейства
    """
    return family.evaluate(index, label)


def probe_of_explicit_set(family, index: Hashable, labels: Iterable[Any]) -> int:
    """
    phi_i(C) для явного множества: общий знак, если все метки согласны, иначе 0

    Raises:
        DomainError: Пустое множество
    """
    values = {family.evaluate(index, label) for label in labels}
    if not values:
        raise DomainError("Пустое множество меток")
    return values.pop() if len(values) == 1 else 0


def membership(pred_set: ProbeAdaptedSet, family, label: Any) -> bool:
    """Принадлежность метки множеству: метка удовлетворяет всем ответам"""
    label = family.validate_label(label)
    for index, sign in pred_set.answers.items():
        if family.evaluate(index, label) != sign:
            return False
    return True


def check_identifiability(family, max_space_size: int) -> bool:
    """
    Различные метки дают различные полные векторы проб

    Raises:
        CapacityError: Пространство больше max_space_size
    """
    return family.check_identifiability(max_space_size)


def materialize_weak_set(family, queries: Iterable[Hashable], answers: Mapping[Hashable, int],
                         max_space_size: int) -> List[Any]:
    """
    Слабое множество W: все метки, согласные с отвеченными пробами (только для оракулов)

    Raises:
        CapacityError: Пространство больше max_space_size
        DomainError: Ответ не задан для запроса
    """
    constraints = []
    for index in queries:
        if index not in answers:
            raise DomainError(f"Нет ответа для запроса {index!r}")
        constraints.append((family.normalize_index(index), check_sign(answers[index])))
    return [label for label in family.enumerate_labels(max_space_size)
            if all(family._evaluate(index, label) == sign for index, sign in constraints)]
