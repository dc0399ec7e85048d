#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Оценка результата калибровки на тестовой выборке
FPP и воздержание по примерам, квантиль потерь, ECDF, гистограмма точностей
Версия: 0.1.0
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from calibrators import CalibrationOutcome, apply_outcome
from config import EVAL_CONFIG
from core.dataset import WeakExample, check_homogeneous
from core.errors import DataError, DomainError
from core.loss import abstention, exact_level, fpp_loss
from core.stats import CEIL_GUARD
from utils.logger import get_logger

logger = get_logger('evaluation')


def ecdf_table(values: Sequence[float]) -> pd.DataFrame:
    """
    Эмпирическая функция распределения

    Returns:
        pd.DataFrame: Столбцы t (различные значения) и fraction (доля <= t)
    """
    values = np.sort(np.asarray(values, dtype=float))
    if len(values) == 0:
        return pd.DataFrame({'t': [], 'fraction': []})
    points, counts = np.unique(values, return_counts=True)
    return pd.DataFrame({'t': points, 'fraction': np.cumsum(counts) / len(values)})


def upper_quantile(values: Sequence[float], level: float) -> float:
    """Наименьшее t с ECDF(t) >= level"""
    ordered = np.sort(np.asarray(values, dtype=float))
    if len(ordered) == 0:
        raise DomainError("Квантиль пустой выборки не определён")
    k = min(max(math.ceil(len(ordered) * level - CEIL_GUARD), 1), len(ordered))
    return float(ordered[k - 1])


def accuracy_histogram(examples: Sequence[WeakExample], bins: int) -> Optional[Dict[str, List[float]]]:
    """Гистограмма оценок точности pi^ по запросам пользователя (если они есть)"""
    values = [ex.acc.accuracies[q] for ex in examples if ex.acc is not None
              for q in ex.feedback.queries if q in ex.acc.accuracies]
    if not values:
        return None
    counts, edges = np.histogram(values, bins=bins, range=(0.0, 1.0))
    return {'edges': [float(e) for e in edges], 'counts': [int(c) for c in counts]}


@dataclass
class EvalReport:
    """Метрики применения результата калибровки к тестовой выборке"""

    method: str
    family: str
    probe_family: str
    parameter: float
    alpha: float
    delta: float
    n: int
    mean_loss: float
    loss_quantile: float
    loss_quantile_gap: float
    exceedance_rate: float
    mean_abstention: float
    abstain_all: bool = False
    accuracy_histogram: Optional[Dict[str, List[float]]] = None
    warnings: List[str] = field(default_factory=list)
    losses: List[float] = field(default_factory=list, repr=False)
    abstentions: List[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        """Отчёт без поэлементных массивов"""
        data = asdict(self)
        data.pop('losses')
        data.pop('abstentions')
        if not math.isfinite(data['parameter']):
            data['parameter'] = 'inf'
        return data

    def loss_ecdf(self) -> pd.DataFrame:
        return ecdf_table(self.losses)

    def abstention_ecdf(self) -> pd.DataFrame:
        return ecdf_table(self.abstentions)


def evaluate_outcome(outcome: CalibrationOutcome, examples: Sequence[WeakExample],
                     alpha: Optional[float] = None, digest: str = '',
                     bins: int = EVAL_CONFIG['accuracy_bins']) -> EvalReport:
    """
    Применение результата калибровки к каждому тестовому примеру

    Args:
        outcome: Результат калибровки
        examples: Тестовая выборка
        alpha: Уровень квантиля (по умолчанию из результата, иначе 0.1)
        digest: Дайджест тестового набора для сравнения с калибровочным

    Returns:
        EvalReport: Отчёт

    Raises:
        DataError: Пустая выборка или несовпадение семейства проб
    """
    examples = list(examples)
    if not examples:
        raise DataError("Пустая тестовая выборка")
    probe_family = check_homogeneous(examples)
    if outcome.probe_family and outcome.probe_family != probe_family:
        raise DataError(f"Результат калибровки для семейства {outcome.probe_family}, "
                        f"а данные - {probe_family}")
    if alpha is None:
        alpha = outcome.alpha if outcome.alpha is not None else 0.1

    warnings = []
    if digest and outcome.created_from == digest:
        warnings.append("Тестовый набор совпадает с калибровочным")
        logger.warning(warnings[-1])
    if outcome.warning:
        warnings.append(outcome.warning)

    losses = []
    abstentions = []
    for example in examples:
        try:
            pred_set = apply_outcome(outcome, example)
        except DomainError as e:
            raise DataError(f"Пример {example.id}: {e}")
        losses.append(fpp_loss(example.feedback, pred_set))
        abstentions.append(abstention(example.feedback, pred_set))

    level = exact_level(outcome.delta)
    quantile = upper_quantile([float(v) for v in losses], 1.0 - alpha)
    return EvalReport(
        method=outcome.method,
        family=outcome.family,
        probe_family=probe_family,
        parameter=outcome.parameter,
        alpha=alpha,
        delta=outcome.delta,
        n=len(examples),
        mean_loss=float(np.mean([float(v) for v in losses])),
        loss_quantile=quantile,
        loss_quantile_gap=quantile - outcome.delta,
        exceedance_rate=sum(v > level for v in losses) / len(losses),
        mean_abstention=float(np.mean([float(v) for v in abstentions])),
        abstain_all=outcome.abstain_all,
        accuracy_histogram=accuracy_histogram(examples, bins),
        warnings=warnings,
        losses=[float(v) for v in losses],
        abstentions=[float(v) for v in abstentions],
    )
