#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Step-up конформализация
Оценки S~_j (первое lambda с потерей <= delta) и поправка epsilon
Версия: 0.1.0
"""

import math
from typing import Optional, Sequence, Tuple

import numpy as np

from config import CALIBRATION_CONFIG
from core.dataset import WeakExample
from core.errors import DomainError
from core.nested import LossTrace, get_nested_family
from core.stats import binomial_standard_error, conformal_quantile, conformal_rank
from .base import BaseCalibrator, CalibrationOutcome, logger, sample_digest


def stepup_score(trace: LossTrace, delta: float) -> float:
    """
    Оценка S~_j: левый конец первого интервала с потерей <= delta

    Returns:
        float: S~_j (inf, если такого интервала нет)
    """
    passing = np.flatnonzero(~trace.exceeds(delta))
    if len(passing) == 0:
        return math.inf
    return trace.lower(int(passing[0]))


def err_event(trace: LossTrace, lam: float, epsilon: float, delta: float) -> bool:
    """Потеря опускается до delta при некотором lambda' <= lambda, но превышает delta в lambda + epsilon"""
    mask = trace.exceeds(delta)
    dipped = not bool(np.all(mask[:trace.interval_index(lam) + 1]))
    return dipped and bool(mask[trace.interval_index(lam + epsilon)])


def estimate_err(holdout: Sequence[LossTrace], lam: float, epsilon: float,
                 delta: float) -> Tuple[float, float]:
    """
    Оценка Err_delta(lambda, epsilon) по отложенной выборке

    Args:
        holdout: Трассы примеров, не участвовавших в калибровке
        lam: Выбранный параметр lambda_up
        epsilon: Допуск
        delta: Уровень потерь

    Returns:
        Tuple[float, float]: (эмпирическая частота, стандартная ошибка)
    """
    holdout = list(holdout)
    if not holdout:
        return float('nan'), float('nan')
    rate = sum(err_event(trace, lam, epsilon, delta) for trace in holdout) / len(holdout)
    return rate, binomial_standard_error(rate, len(holdout))


class StepUpCalibrator(BaseCalibrator):
    """Step-up: lambda_up = конформный квантиль S~_j, итоговый параметр lambda_up + epsilon"""

    method = 'stepup'

    def __init__(self, family, delta: float, alpha: float, epsilon: Optional[float] = None,
                 holdout: Optional[Sequence[WeakExample]] = None):
        super().__init__(family, delta)
        if not 0.0 < alpha < 1.0:
            raise DomainError(f"alpha должно лежать в (0, 1): {alpha}")
        if epsilon is not None and not epsilon > 0:
            raise DomainError(f"epsilon должно быть положительным: {epsilon}")
        self.alpha = float(alpha)
        self.epsilon = epsilon
        self.holdout = list(holdout) if holdout else []

    def resolve_epsilon(self, examples: Sequence[WeakExample]) -> float:
        """epsilon по умолчанию: доля от размаха параметра"""
        if self.epsilon is not None:
            return float(self.epsilon)
        return CALIBRATION_CONFIG['epsilon_factor'] * self.family.span(examples)

    def calibrate(self, examples: Sequence[WeakExample], created_from: str = '') -> CalibrationOutcome:
        examples = list(examples)
        probe_family = self.prepare(examples)
        grid = self.trace_grid(examples)
        scores = np.asarray([stepup_score(trace, self.delta) for trace in self.traces(examples, grid)],
                            dtype=float)
        lam = conformal_quantile(scores, self.alpha)
        epsilon = self.resolve_epsilon(examples)
        parameter = lam + epsilon

        err_estimate = err_se = None
        if self.holdout:
            for example in self.holdout:
                self.family.check_example(example)
            err_estimate, err_se = estimate_err(self.traces(self.holdout, grid), lam, epsilon, self.delta)
            logger.info(f"Оценка Err: {err_estimate:.4f} ± {err_se:.4f} (holdout {len(self.holdout)})")

        return CalibrationOutcome(
            method=self.method,
            family=self.family.kind,
            probe_family=probe_family,
            parameter=parameter,
            delta=self.delta,
            alpha=self.alpha,
            epsilon=epsilon,
            scores_sorted=tuple(float(s) for s in np.sort(scores)),
            quantile_index=conformal_rank(len(examples), self.alpha),
            abstain_all=bool(parameter > self.family.t_max),
            err_estimate=err_estimate,
            err_se=err_se,
            n=len(examples),
            created_from=created_from or sample_digest(examples),
        )


def calibrate_stepup(examples: Sequence[WeakExample], delta: float, alpha: float,
                     epsilon: Optional[float] = None, family: str = 'threshold',
                     holdout: Optional[Sequence[WeakExample]] = None) -> CalibrationOutcome:
    """Step-up калибровка по выборке"""
    return StepUpCalibrator(get_nested_family(family), delta, alpha, epsilon, holdout).calibrate(examples)
