#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Базовый класс семейства проб
Семейство задаёт пространство меток, множество индексов и значения проб
Версия: 0.1.0
"""

import re
from abc import ABC, abstractmethod
from typing import Any, Dict, Hashable, Iterator, List, Tuple

from core.errors import CapacityError, DomainError


class ProbeFamily(ABC):
    """Базовый класс семейства ±1-значных проб над структурированным пространством меток"""

    kind = ''
    key_pattern = None  # re.Pattern строкового ключа

    def __init__(self):
        """Инициализация семейства"""
        self._index_set = None
        self.name = self.__class__.__name__

    @abstractmethod
    def indices(self) -> List[Hashable]:
        """
        Канонический перечень индексов проб

        Returns:
            List: Индексы в детерминированном порядке
        """
        pass

    @abstractmethod
    def validate_label(self, label: Any) -> Hashable:
        """
        Проверка и нормализация метки

        Returns:
            Hashable: Нормализованная метка

        Raises:
            DomainError: Метка не принадлежит пространству семейства
        """
        pass

    @abstractmethod
    def labels(self) -> Iterator[Hashable]:
        """Перечисление всего пространства меток"""
        pass

    @abstractmethod
    def space_size(self) -> int:
        """Размер пространства меток"""
        pass

    @abstractmethod
    def key(self, index: Hashable) -> str:
        """Строковый ключ индекса"""
        pass

    @abstractmethod
    def _index_from_match(self, match) -> Hashable:
        """Индекс по результату разбора ключа"""
        pass

    @abstractmethod
    def _evaluate(self, index: Hashable, label: Hashable) -> int:
        """Значение пробы для проверенных индекса и метки"""
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Параметры семейства для сериализации"""
        pass

    def parse_key(self, text: str) -> Hashable:
        """
        Разбор строкового ключа

        Raises:
            DomainError: Ключ не относится к семейству
        """
        match = self.key_pattern.fullmatch(text) if isinstance(text, str) else None
        if match is None:
            raise DomainError(f"Ключ '{text}' не относится к семейству {self.kind}")
        return self.normalize_index(self._index_from_match(match))

    def normalize_index(self, index: Hashable) -> Hashable:
        """
        Приведение индекса (или строкового ключа) к родному виду

        Raises:
            DomainError: Индекс вне множества индексов семейства
        """
        if isinstance(index, str):
            return self.parse_key(index)
        if isinstance(index, list):
            index = tuple(index)
        if self._index_set is None:
            self._index_set = frozenset(self.indices())
        try:
            known = index in self._index_set
        except TypeError:
            known = False
        if not known:
            raise DomainError(f"Индекс {index!r} вне семейства {self.kind}")
        return index

    def evaluate(self, index: Hashable, label: Any) -> int:
        """
        Значение пробы на метке

        Args:
            index: Индекс или строковый ключ
            label: Метка пространства

        Returns:
            int: +1 или -1
        """
        return self._evaluate(self.normalize_index(index), self.validate_label(label))

    def probe_vector(self, label: Any) -> Tuple[int, ...]:
        """Полный вектор проб метки в каноническом порядке"""
        label = self.validate_label(label)
        return tuple(self._evaluate(index, label) for index in self.indices())

    def enumerate_labels(self, max_space_size: int) -> List[Hashable]:
        """
        Явное перечисление пространства

        Raises:
            CapacityError: Пространство больше max_space_size
        """
        size = self.space_size()
        if size > max_space_size:
            raise CapacityError(
                f"Пространство {self.kind} содержит {size} меток, предел {max_space_size}"
            )
        return list(self.labels())

    def check_identifiability(self, max_space_size: int) -> bool:
        """Инъективность отображения метка -> вектор проб"""
        seen = set()
        for label in self.enumerate_labels(max_space_size):
            vector = self.probe_vector(label)
            if vector in seen:
                return False
            seen.add(vector)
        return True

    def encode_label(self, label: Any) -> Any:
        """Метка в JSON-совместимом виде"""
        label = self.validate_label(label)
        return list(label) if isinstance(label, tuple) else label

    def decode_label(self, data: Any) -> Hashable:
        """Метка из JSON"""
        if isinstance(data, list):
            data = tuple(data)
        return self.validate_label(data)


def compile_key(prefix: str, parts: int) -> 're.Pattern':
    """Шаблон ключа вида 'p:1-2' или 't:5'"""
    body = '-'.join([r'(\d+)'] * parts)
    return re.compile(f"{re.escape(prefix)}:{body}")
