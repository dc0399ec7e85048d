#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Базовый класс калибратора
Результат калибровки и его применение к новому экземпляру
Версия: 0.1.0
"""

import hashlib
import math
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from core.dataset import CalibSample, WeakExample, check_homogeneous
from core.errors import DomainError
from core.nested import AccuracyVector, LossTrace, ScoreVector, bernoulli_threshold, eta_set, threshold_set
from core.probes import ProbeAdaptedSet
from utils.logger import get_logger

logger = get_logger('calibrators')


@dataclass(frozen=True)
class CalibrationOutcome:
    """Выбранный параметр, метаданные метода и диагностика"""

    method: str
    family: str
    parameter: float
    delta: float
    probe_family: str = ''
    alpha: Optional[float] = None
    epsilon: Optional[float] = None
    alpha_fst: Optional[float] = None
    grid: Optional[Tuple[float, ...]] = None
    p_values: Optional[Tuple[float, ...]] = None
    mean_losses: Optional[Tuple[float, ...]] = None
    scores_sorted: Optional[Tuple[float, ...]] = None
    quantile_index: Optional[int] = None
    k_hat: Optional[int] = None
    abstain_all: bool = False
    warning: Optional[str] = None
    err_estimate: Optional[float] = None
    err_se: Optional[float] = None
    n: int = 0
    created_from: str = ''
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Словарь для JSON (бесконечности записываются строкой)"""
        data = asdict(self)
        for key in ('grid', 'p_values', 'mean_losses', 'scores_sorted'):
            if data[key] is not None:
                data[key] = [_finite_or_text(v) for v in data[key]]
        data['parameter'] = _finite_or_text(data['parameter'])
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CalibrationOutcome':
        """
        Восстановление из JSON

        Raises:
            DomainError: Неизвестные или отсутствующие поля
        """
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"Неизвестные поля результата калибровки: {sorted(unknown)}")
        try:
            values = dict(data)
            for key in ('grid', 'p_values', 'mean_losses', 'scores_sorted'):
                if values.get(key) is not None:
                    values[key] = tuple(_text_or_float(v) for v in values[key])
            values['parameter'] = _text_or_float(values['parameter'])
            return cls(**values)
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"Некорректный результат калибровки: {e}")


def _finite_or_text(value: float) -> Any:
    return value if math.isfinite(value) else ('inf' if value > 0 else '-inf')


def _text_or_float(value: Any) -> float:
    return float(value)


def sample_digest(examples: Iterable[WeakExample]) -> str:
    """SHA-256 канонической записи выборки (совпадает с дайджестом файла JSONL)"""
    from utils.io_utils import canonical_json

    sha = hashlib.sha256()
    for example in examples:
        sha.update(canonical_json(example.to_record()).encode('utf-8'))
        sha.update(b'\n')
    return f"sha256:{sha.hexdigest()}"


class BaseCalibrator(ABC):
    """Базовый класс процедур калибровки"""

    method = ''

    def __init__(self, family, delta: float):
        """
        Инициализация калибратора

        Args:
            family: Вложенное семейство (ThresholdFamily или BernoulliFamily)
            delta: Целевой уровень потерь

        Raises:
            DomainError: delta вне [0, 1]
        """
        if not 0.0 <= delta <= 1.0:
            raise DomainError(f"delta должно лежать в [0, 1]: {delta}")
        self.family = family
        self.delta = float(delta)
        self.name = self.__class__.__name__

    @abstractmethod
    def calibrate(self, examples: CalibSample, created_from: str = '') -> CalibrationOutcome:
        """
        Калибровка по выборке

        Args:
            examples: Калибровочная выборка (n >= 1)
            created_from: Дайджест набора данных

        Returns:
            CalibrationOutcome: Результат калибровки
        """
        pass

    def prepare(self, examples: CalibSample) -> str:
        """Проверка выборки; возвращает тег семейства проб"""
        examples = list(examples)
        probe_family = check_homogeneous(examples)
        for example in examples:
            self.family.check_example(example)
        return probe_family

    def traces(self, examples: Sequence[WeakExample], grid: Optional[Sequence[float]] = None) -> List[LossTrace]:
        """Трассы потерь по примерам (независимы, вычисляются последовательно)"""
        return [self.family.trace(example, grid) for example in examples]

    def trace_grid(self, examples: Sequence[WeakExample]) -> Optional[List[float]]:
        """Сетка для трасс бернуллиевского семейства (пороговому не нужна)"""
        if self.family.kind == 'bernoulli':
            return self.family.default_grid(examples, self.family.grid_size)
        return None


def apply_outcome(outcome: CalibrationOutcome, inputs: Any,
                  queries: Optional[Iterable[Hashable]] = None) -> ProbeAdaptedSet:
    """
    Предсказательное множество для нового экземпляра

    Args:
        outcome: Результат калибровки
        inputs: WeakExample, ScoreVector или AccuracyVector
        queries: Запросы экземпляра (для бернуллиевского семейства обязательны,
                 у WeakExample берутся из ответов пользователя)

    Returns:
        ProbeAdaptedSet: C^s_lambda или C_{eta*(x, delta)}

    Raises:
        DomainError: Входы не соответствуют семейству
    """
    scores = inputs if isinstance(inputs, ScoreVector) else getattr(inputs, 'scores', None)
    acc = inputs if isinstance(inputs, AccuracyVector) else getattr(inputs, 'acc', None)
    if queries is None and isinstance(inputs, WeakExample):
        queries = inputs.feedback.queries

    if outcome.family == 'threshold':
        if scores is None:
            raise DomainError("Для порогового семейства нужны оценки scores")
        if outcome.abstain_all:
            return ProbeAdaptedSet()
        return threshold_set(scores, outcome.parameter)

    if outcome.family == 'bernoulli':
        if acc is None:
            raise DomainError("Для бернуллиевского семейства нужны acc и pred")
        if queries is None:
            raise DomainError("Для бернуллиевского семейства нужен набор запросов экземпляра")
        queries = list(queries)
        if outcome.abstain_all or outcome.parameter > 1.0:
            return ProbeAdaptedSet()
        eta = bernoulli_threshold(acc, queries, max(outcome.parameter, 0.0))
        return eta_set(acc, eta)

    raise DomainError(f"Неизвестное семейство в результате калибровки: {outcome.family}")
