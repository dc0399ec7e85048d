#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Step-down конформализация
Контроль (1 - alpha)-квантиля FPP через оценки несоответствия S_j
Версия: 0.1.0
"""

import math
from typing import Sequence

import numpy as np

from core.dataset import WeakExample
from core.errors import DomainError
from core.nested import LossTrace, get_nested_family
from core.stats import conformal_quantile, conformal_rank
from .base import BaseCalibrator, CalibrationOutcome, logger, sample_digest


def stepdown_score(trace: LossTrace, delta: float) -> float:
    """
    Оценка S_j: наименьшее lambda, начиная с которого потеря не превышает delta

    Сканирует интервалы справа: S_j - левый конец интервала, следующего
    за последним интервалом с потерей > delta.

    Args:
        trace: Трасса потерь примера
        delta: Уровень потерь

    Returns:
        float: S_j (origin, если потеря нигде не превышает delta)
    """
    violating = np.flatnonzero(trace.exceeds(delta))
    if len(violating) == 0:
        return trace.origin
    last = int(violating[-1])
    if last + 1 >= len(trace):
        return math.inf
    return trace.lower(last + 1)


class StepDownCalibrator(BaseCalibrator):
    """Step-down: lambda_down = конформный квантиль оценок S_j"""

    method = 'stepdown'

    def __init__(self, family, delta: float, alpha: float, rank_offset: int = 0):
        super().__init__(family, delta)
        if not 0.0 < alpha < 1.0:
            raise DomainError(f"alpha должно лежать в (0, 1): {alpha}")
        self.alpha = float(alpha)
        self.rank_offset = int(rank_offset)

    def scores(self, examples: Sequence[WeakExample]) -> np.ndarray:
        traces = self.traces(examples, self.trace_grid(examples))
        return np.asarray([stepdown_score(trace, self.delta) for trace in traces], dtype=float)

    def calibrate(self, examples: Sequence[WeakExample], created_from: str = '') -> CalibrationOutcome:
        examples = list(examples)
        probe_family = self.prepare(examples)
        scores = self.scores(examples)
        parameter = conformal_quantile(scores, self.alpha, self.rank_offset)
        abstain_all = parameter > self.family.t_max
        logger.debug(f"{self.name}: n={len(examples)}, lambda={parameter}")
        return CalibrationOutcome(
            method=self.method,
            family=self.family.kind,
            probe_family=probe_family,
            parameter=parameter,
            delta=self.delta,
            alpha=self.alpha,
            scores_sorted=tuple(float(s) for s in np.sort(scores)),
            quantile_index=conformal_rank(len(examples), self.alpha),
            abstain_all=bool(abstain_all),
            n=len(examples),
            created_from=created_from or sample_digest(examples),
        )


def calibrate_stepdown(examples: Sequence[WeakExample], delta: float, alpha: float,
                       family: str = 'threshold') -> CalibrationOutcome:
    """Step-down калибровка по выборке"""
    return StepDownCalibrator(get_nested_family(family), delta, alpha).calibrate(examples)
