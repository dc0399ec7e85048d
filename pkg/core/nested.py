#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Вложенные семейства предсказательных множеств
Пороговое семейство C^s_lambda и бернуллиевское семейство C_{eta*(x, delta)}
Версия: 0.1.0
"""

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError
from .loss import UserFeedback, exact_level, fpp_counts
from .probes import ProbeAdaptedSet, check_sign

# Допуск сравнения префиксных средних с целевой точностью
PREFIX_MEAN_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ScoreVector:
    """Оценки s_i(x): знак - предсказанный ответ, модуль - уверенность"""

    scores: Mapping[Hashable, float] = field(default_factory=dict)

    def __post_init__(self):
        checked = {}
        for index, value in self.scores.items():
            value = float(value)
            if not math.isfinite(value):
                raise DomainError(f"Оценка для {index!r} не конечна: {value}")
            checked[index] = value
        object.__setattr__(self, 'scores', MappingProxyType(checked))

    def max_magnitude(self) -> float:
        return max((abs(v) for v in self.scores.values()), default=0.0)

    def __len__(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class AccuracyVector:
    """Предсказания phi_hat_i(x) и оценки их точности pi_hat_i(x)"""

    predictions: Mapping[Hashable, int] = field(default_factory=dict)
    accuracies: Mapping[Hashable, float] = field(default_factory=dict)

    def __post_init__(self):
        if set(self.predictions) != set(self.accuracies):
            raise DomainError("Ключи предсказаний и оценок точности должны совпадать")
        predictions = {i: check_sign(s, f" для {i!r}") for i, s in self.predictions.items()}
        accuracies = {}
        for index, value in self.accuracies.items():
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"Оценка точности для {index!r} вне [0, 1]: {value}")
            accuracies[index] = value
        object.__setattr__(self, 'predictions', MappingProxyType(predictions))
        object.__setattr__(self, 'accuracies', MappingProxyType(accuracies))

    def __len__(self) -> int:
        return len(self.accuracies)


def threshold_set(scores: ScoreVector, lam: float, lam_minus: Optional[float] = None) -> ProbeAdaptedSet:
    """
    C^s_lambda: ответ sign(s_i) для всех i с |s_i| > lambda

    Несимметричная форма: положительные оценки сравниваются с lam,
    отрицательные - с lam_minus (s_i < -lam_minus).

    Raises:
        DomainError: Отрицательный порог
    """
    lam_minus = lam if lam_minus is None else lam_minus
    if lam < 0 or lam_minus < 0:
        raise DomainError(f"Порог должен быть неотрицательным: {lam}, {lam_minus}")
    answers = {}
    for index, value in scores.scores.items():
        if value > lam:
            answers[index] = 1
        elif value < -lam_minus:
            answers[index] = -1
    return ProbeAdaptedSet(answers)


@dataclass(frozen=True)
class LossTrace:
    """
    Кусочно-постоянная зависимость потерь от параметра t

    Интервал k - это [lower(k), breakpoints[k]), последний - [breakpoints[-1], inf);
    lower(0) = origin. На интервале k потеря равна errors[k] / max(1, answered[k]).
    """

    origin: float
    breakpoints: Tuple[float, ...]
    errors: Tuple[int, ...]
    answered: Tuple[int, ...]

    def __post_init__(self):
        if len(self.errors) != len(self.breakpoints) + 1 or len(self.answered) != len(self.errors):
            raise DomainError("Длины массивов трассы не согласованы")

    def __len__(self) -> int:
        return len(self.errors)

    def lower(self, k: int) -> float:
        """Левый конец интервала k"""
        return self.origin if k == 0 else self.breakpoints[k - 1]

    def interval_index(self, t: float) -> int:
        """Номер интервала, содержащего t (непрерывность справа)"""
        return bisect.bisect_right(self.breakpoints, t)

    def loss(self, k: int) -> Fraction:
        return Fraction(self.errors[k], max(1, self.answered[k]))

    def loss_at(self, t: float) -> Fraction:
        return self.loss(self.interval_index(t))

    def values(self) -> List[Fraction]:
        return [self.loss(k) for k in range(len(self))]

    def exceeds(self, level) -> np.ndarray:
        """Маска интервалов с потерей строго больше level (точное сравнение)"""
        level = exact_level(level)
        errors = np.asarray(self.errors, dtype=object)
        answered = np.maximum(1, np.asarray(self.answered, dtype=object))
        return np.asarray(errors * level.denominator > level.numerator * answered, dtype=bool)

    def losses_float(self) -> np.ndarray:
        errors = np.asarray(self.errors, dtype=float)
        return errors / np.maximum(1.0, np.asarray(self.answered, dtype=float))

    def losses_on_grid(self, grid: Sequence[float]) -> np.ndarray:
        """Потери (float) в точках сетки"""
        positions = np.searchsorted(np.asarray(self.breakpoints, dtype=float),
                                    np.asarray(grid, dtype=float), side='right')
        return self.losses_float()[positions]


def loss_trace(scores: ScoreVector, feedback: UserFeedback) -> LossTrace:
    """
    Точная трасса lambda -> FPP(feedback, C^s_lambda) за O(|I| log |I|)

    Точки разрыва - различные положительные |s_i| при i из I; оценки,
    равные нулю, и запросы без оценки никогда не отвечаются.
    """
    magnitudes = []
    wrong = []
    for index, answer in feedback.answers.items():
        value = scores.scores.get(index, 0.0)
        if value == 0.0:
            continue
        magnitudes.append(abs(value))
        wrong.append((1 if value > 0 else -1) != answer)
    if not magnitudes:
        return LossTrace(0.0, (), (0,), (0,))

    magnitudes = np.asarray(magnitudes, dtype=float)
    wrong = np.asarray(wrong, dtype=np.int64)
    breakpoints, inverse = np.unique(magnitudes, return_inverse=True)
    m = len(breakpoints)
    # Отвечены пробы с |s| > t; на интервале k это пробы с номером уровня >= k
    level_counts = np.bincount(inverse, minlength=m)
    level_errors = np.bincount(inverse, weights=wrong, minlength=m).astype(np.int64)
    answered = np.concatenate([np.cumsum(level_counts[::-1])[::-1], [0]])
    errors = np.concatenate([np.cumsum(level_errors[::-1])[::-1], [0]])
    return LossTrace(0.0, tuple(float(b) for b in breakpoints),
                     tuple(int(e) for e in errors), tuple(int(a) for a in answered))


def _sorted_query_accuracies(acc: AccuracyVector, queries: Iterable[Hashable]) -> Tuple[List[Hashable], np.ndarray]:
    queries = list(queries)
    if not queries:
        raise DomainError("Пустой набор запросов")
    missing = [q for q in queries if q not in acc.accuracies]
    if missing:
        raise DomainError(f"Нет оценки точности для запросов {missing[:3]!r}")
    # Устойчивая сортировка по убыванию pi_hat; при равенстве - по ключу
    queries.sort(key=str)
    queries.sort(key=lambda q: -acc.accuracies[q])
    return queries, np.asarray([acc.accuracies[q] for q in queries], dtype=float)


def _prefix_depths(sorted_acc: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """J(x, delta) = max{J : среднее первых J >= delta}, 0 если таких нет"""
    n = len(sorted_acc)
    means = np.cumsum(sorted_acc) / np.arange(1, n + 1)
    # M_J = max_{J' >= J} m_{J'} не возрастает, поэтому J = #{J : M_J >= delta}
    suffix_max = np.maximum.accumulate(means[::-1])[::-1]
    return (suffix_max[None, :] >= deltas[:, None] - PREFIX_MEAN_TOLERANCE).sum(axis=1)


def _eta_from_depths(sorted_acc: np.ndarray, depths: np.ndarray) -> np.ndarray:
    n = len(sorted_acc)
    return np.where(depths < n, sorted_acc[np.minimum(depths, n - 1)], 0.0)


def bernoulli_threshold(acc: AccuracyVector, queries: Iterable[Hashable], delta_acc: float) -> float:
    """
    Адаптивный порог eta*(x, delta) последовательности Бернулли

    Args:
        acc: Предсказания и оценки точности
        queries: Запросы экземпляра I
        delta_acc: Целевая средняя точность отвеченных запросов

    Returns:
        float: pi_hat_(J+1) при J < N, иначе 0

    Raises:
        DomainError: Пустой набор запросов или delta_acc вне [0, 1]
    """
    if not 0.0 <= delta_acc <= 1.0:
        raise DomainError(f"Целевая точность вне [0, 1]: {delta_acc}")
    _, sorted_acc = _sorted_query_accuracies(acc, queries)
    depths = _prefix_depths(sorted_acc, np.asarray([delta_acc], dtype=float))
    return float(_eta_from_depths(sorted_acc, depths)[0])


def eta_set(acc: AccuracyVector, eta: float) -> ProbeAdaptedSet:
    """C_eta: ответ phi_hat_i для всех i с pi_hat_i > eta"""
    return ProbeAdaptedSet({index: acc.predictions[index]
                            for index, value in acc.accuracies.items() if value > eta})


def bernoulli_counts(acc: AccuracyVector, feedback: UserFeedback,
                     deltas: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Ошибки и число отвеченных запросов C_{eta*(x, delta)} для набора delta

    Returns:
        Tuple[np.ndarray, np.ndarray]: (errors, answered) той же длины, что deltas
    """
    queries, sorted_acc = _sorted_query_accuracies(acc, feedback.queries)
    correct = np.asarray([acc.predictions[q] == feedback.answers[q] for q in queries], dtype=bool)
    deltas = np.asarray(deltas, dtype=float)
    etas = _eta_from_depths(sorted_acc, _prefix_depths(sorted_acc, deltas))
    answered_mask = sorted_acc[None, :] > etas[:, None]
    answered = answered_mask.sum(axis=1)
    errors = (answered_mask & ~correct[None, :]).sum(axis=1)
    return errors.astype(np.int64), answered.astype(np.int64)


class ThresholdFamily:
    """Пороговое семейство: t = lambda >= 0, отвечаются пробы с |s_i| > t"""

    kind = 'threshold'
    t_min = 0.0
    t_max = math.inf

    def check_example(self, example) -> None:
        if example.scores is None:
            raise DomainError(f"Пример {example.id}: для порогового семейства нужны оценки scores")

    def set_at(self, example, t: float) -> ProbeAdaptedSet:
        self.check_example(example)
        return threshold_set(example.scores, t)

    def loss_at(self, example, t: float) -> Fraction:
        return Fraction(*_normalized_counts(fpp_counts(example.feedback, self.set_at(example, t))))

    def trace(self, example, grid: Optional[Sequence[float]] = None) -> LossTrace:
        """Точная трасса (сетка не нужна)"""
        self.check_example(example)
        return loss_trace(example.scores, example.feedback)

    def span(self, examples: Sequence) -> float:
        """Наибольший |s_i| по выборке"""
        span = max((ex.scores.max_magnitude() for ex in examples), default=0.0)
        return span if span > 0 else 1.0

    def default_grid(self, examples: Sequence, size: int) -> List[float]:
        """size равноотстоящих точек на (0, max |s_i|]"""
        if size < 1:
            raise DomainError(f"Размер сетки должен быть >= 1: {size}")
        span = self.span(examples)
        return [span * (k + 1) / size for k in range(size)]


class BernoulliFamily:
    """
    Бернуллиевское семейство: t = номинальная точность delta_acc в [0, 1]

    Параметр больше 1 означает полное воздержание на запросах.
    """

    kind = 'bernoulli'
    t_min = 0.0
    t_max = 1.0

    def __init__(self, grid_size: int = 100):
        self.grid_size = int(grid_size)

    def check_example(self, example) -> None:
        if example.acc is None:
            raise DomainError(f"Пример {example.id}: для бернуллиевского семейства нужны acc и pred")

    def set_at(self, example, t: float) -> ProbeAdaptedSet:
        self.check_example(example)
        if t > self.t_max:
            return ProbeAdaptedSet()
        eta = bernoulli_threshold(example.acc, example.feedback.queries, max(t, 0.0))
        return eta_set(example.acc, eta)

    def loss_at(self, example, t: float) -> Fraction:
        return Fraction(*_normalized_counts(fpp_counts(example.feedback, self.set_at(example, t))))

    def trace(self, example, grid: Optional[Sequence[float]] = None) -> LossTrace:
        """Трасса по узлам сетки delta_acc с правым сторожем (потеря 0)"""
        self.check_example(example)
        points = [0.0] + list(grid if grid is not None else self.default_grid([], self.grid_size))
        points = sorted(set(points))
        step = points[-1] - points[-2] if len(points) > 1 else 1.0
        errors, answered = bernoulli_counts(example.acc, example.feedback, points)
        return LossTrace(points[0], tuple(points[1:]) + (points[-1] + step,),
                         tuple(int(e) for e in errors) + (0,),
                         tuple(int(a) for a in answered) + (0,))

    def span(self, examples: Sequence) -> float:
        return 1.0

    def default_grid(self, examples: Sequence, size: int) -> List[float]:
        """size равноотстоящих точек на (0, 1]"""
        if size < 1:
            raise DomainError(f"Размер сетки должен быть >= 1: {size}")
        return [(k + 1) / size for k in range(size)]


# Любое из двух вложенных семейств
NestedFamily = Union[ThresholdFamily, BernoulliFamily]


def _normalized_counts(counts: Tuple[int, int]) -> Tuple[int, int]:
    errors, answered = counts
    return errors, max(1, answered)


def get_nested_family(kind: str, grid_size: int = 100) -> NestedFamily:
    """
    Вложенное семейство по имени

    Raises:
        DomainError: Неизвестный вид
    """
    if kind == ThresholdFamily.kind:
        return ThresholdFamily()
    if kind == BernoulliFamily.kind:
        return BernoulliFamily(grid_size)
    raise DomainError(f"Неизвестное вложенное семейство: {kind}")
