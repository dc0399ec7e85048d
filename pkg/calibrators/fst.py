#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Fixed Sequence Testing

Для каждого узла сетки lambda_k проверяется гипотеза "ожидаемая потеря > delta"
p-значением Хёфдинга-Бенткуса; выбирается первый узел, начиная с которого
отвергнуты все гипотезы. Вариант с квантилем заменяет потерю индикатором
1{loss > delta}, а delta - на alpha.
Версия: 0.1.0
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import CALIBRATION_CONFIG
from core.dataset import WeakExample
from core.errors import DomainError
from core.loss import exact_level
from core.nested import LossTrace, get_nested_family
from core.stats import hb_pvalue
from .base import BaseCalibrator, CalibrationOutcome, logger, sample_digest


def check_grid(grid: Sequence[float]) -> List[float]:
    """
    Raises:
        DomainError: Пустая, неположительная или не строго возрастающая сетка
    """
    grid = [float(v) for v in grid]
    if not grid:
        raise DomainError("Пустая сетка параметров")
    if grid[0] <= 0:
        raise DomainError(f"Узлы сетки должны быть положительными: {grid[0]}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("Сетка параметров должна строго возрастать")
    return grid


def fst_select(p_values: Sequence[float], alpha_fst: float) -> Optional[int]:
    """
    Номер k (с 1) первого узла, после которого все p-значения <= alpha_fst

    Returns:
        Optional[int]: k, либо None, если последнее p-значение не прошло
    """
    failing = np.flatnonzero(np.asarray(p_values, dtype=float) > alpha_fst)
    if len(failing) == 0:
        return 1
    last = int(failing[-1])
    if last == len(p_values) - 1:
        return None
    return last + 2


def grid_counts(trace: LossTrace, grid: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Ошибки и число отвеченных проб трассы в узлах сетки"""
    positions = np.searchsorted(np.asarray(trace.breakpoints, dtype=float),
                                np.asarray(grid, dtype=float), side='right')
    return np.asarray(trace.errors)[positions], np.asarray(trace.answered)[positions]


def mean_grid_losses(traces: Sequence[LossTrace], grid: Sequence[float],
                     delta: Optional[float] = None) -> List[Fraction]:
    """
    Средние потери по выборке в каждом узле сетки (точные дроби)

    Args:
        traces: Трассы примеров
        grid: Узлы сетки
        delta: Если задано, потеря заменяется индикатором 1{loss > delta}
    """
    n = len(traces)
    counts = [grid_counts(trace, grid) for trace in traces]
    if delta is not None:
        level = exact_level(delta)
        # Матрицы n x |grid|; при больших знаменателях уровня - object, сравнение остаётся точным
        dtype = np.int64 if max(level.numerator, level.denominator) < 2 ** 31 else object
        errors = np.vstack([e for e, _ in counts]).astype(dtype)
        answered = np.maximum(1, np.vstack([a for _, a in counts]).astype(dtype))
        exceed = (errors * level.denominator > level.numerator * answered).sum(axis=0)
        return [Fraction(int(v), n) for v in exceed]
    means = []
    for k in range(len(grid)):
        total = sum(Fraction(int(errors[k]), max(1, int(answered[k]))) for errors, answered in counts)
        means.append(total / n)
    return means


def fst_from_losses(mean_losses: Sequence, n: int, delta: float,
                    alpha_fst: float) -> Tuple[Optional[int], List[float]]:
    """
    p-значения HB по средним потерям и выбранный индекс

    Returns:
        Tuple[Optional[int], List[float]]: (k_hat с 1 или None, p-значения)
    """
    p_values = [hb_pvalue(loss, n, delta) for loss in mean_losses]
    return fst_select(p_values, alpha_fst), p_values


class FixedSequenceCalibrator(BaseCalibrator):
    """FST по сетке параметров; quantile_alpha включает контроль квантиля"""

    method = 'fst'

    def __init__(self, family, delta: float, alpha_fst: float = CALIBRATION_CONFIG['alpha_fst'],
                 grid: Optional[Sequence[float]] = None,
                 grid_size: int = CALIBRATION_CONFIG['grid_size'],
                 quantile_alpha: Optional[float] = None):
        super().__init__(family, delta)
        if not 0.0 < alpha_fst < 1.0:
            raise DomainError(f"alpha_fst должно лежать в (0, 1): {alpha_fst}")
        if quantile_alpha is not None and not 0.0 < quantile_alpha < 1.0:
            raise DomainError(f"alpha должно лежать в (0, 1): {quantile_alpha}")
        self.alpha_fst = float(alpha_fst)
        self.grid = check_grid(grid) if grid is not None else None
        self.grid_size = int(grid_size)
        self.quantile_alpha = quantile_alpha
        if quantile_alpha is not None:
            self.method = 'fst-quantile'

    def resolve_grid(self, examples: Sequence[WeakExample]) -> List[float]:
        if self.grid is None:
            return self.family.default_grid(examples, self.grid_size)
        if self.grid[-1] > self.family.t_max:
            raise DomainError(f"Сетка выходит за область параметра семейства {self.family.kind}")
        return self.grid

    def calibrate(self, examples: Sequence[WeakExample], created_from: str = '') -> CalibrationOutcome:
        examples = list(examples)
        probe_family = self.prepare(examples)
        grid = self.resolve_grid(examples)
        traces = self.traces(examples, grid)
        n = len(examples)

        if self.quantile_alpha is None:
            means = mean_grid_losses(traces, grid)
            k_hat, p_values = fst_from_losses(means, n, self.delta, self.alpha_fst)
        else:
            means = mean_grid_losses(traces, grid, delta=self.delta)
            k_hat, p_values = fst_from_losses(means, n, self.quantile_alpha, self.alpha_fst)

        warning = None
        if k_hat is None:
            step = grid[-1] - grid[-2] if len(grid) > 1 else grid[-1]
            parameter = grid[-1] + step
            warning = "Ни одна гипотеза на конце сетки не отвергнута: полное воздержание"
            logger.warning(f"{self.name}: {warning}")
        else:
            parameter = grid[k_hat - 1]

        return CalibrationOutcome(
            method=self.method,
            family=self.family.kind,
            probe_family=probe_family,
            parameter=parameter,
            delta=self.delta,
            alpha=self.quantile_alpha,
            alpha_fst=self.alpha_fst,
            grid=tuple(grid),
            p_values=tuple(p_values),
            mean_losses=tuple(float(m) for m in means),
            k_hat=k_hat,
            abstain_all=k_hat is None,
            warning=warning,
            n=n,
            created_from=created_from or sample_digest(examples),
        )


def calibrate_fst(examples: Sequence[WeakExample], delta: float, alpha_fst: float,
                  grid: Optional[Sequence[float]] = None, family: str = 'threshold') -> CalibrationOutcome:
    """FST-калибровка ожидаемой потери"""
    return FixedSequenceCalibrator(get_nested_family(family), delta, alpha_fst, grid).calibrate(examples)


def calibrate_fst_quantile(examples: Sequence[WeakExample], delta: float, alpha: float, alpha_fst: float,
                           grid: Optional[Sequence[float]] = None,
                           family: str = 'threshold') -> CalibrationOutcome:
    """FST-калибровка доли примеров с потерей выше delta"""
    return FixedSequenceCalibrator(get_nested_family(family), delta, alpha_fst, grid,
                                   quantile_alpha=alpha).calibrate(examples)
