#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Процедуры калибровки
Версия: 0.1.0
"""

from config import CALIBRATION_CONFIG
from core.errors import DomainError
from core.nested import get_nested_family
from .base import BaseCalibrator, CalibrationOutcome, apply_outcome, sample_digest
from .fst import (FixedSequenceCalibrator, calibrate_fst, calibrate_fst_quantile, check_grid,
                  fst_from_losses, fst_select, mean_grid_losses)
from .nominal import NominalCalibrator
from .stepdown import StepDownCalibrator, calibrate_stepdown, stepdown_score
from .stepup import StepUpCalibrator, calibrate_stepup, err_event, estimate_err, stepup_score

__all__ = [
    'BaseCalibrator', 'CalibrationOutcome', 'apply_outcome', 'sample_digest',
    'StepDownCalibrator', 'StepUpCalibrator', 'FixedSequenceCalibrator', 'NominalCalibrator',
    'stepdown_score', 'stepup_score', 'estimate_err', 'err_event',
    'fst_select', 'fst_from_losses', 'mean_grid_losses', 'check_grid',
    'calibrate_stepdown', 'calibrate_stepup', 'calibrate_fst', 'calibrate_fst_quantile',
    'get_calibrator',
]


def get_calibrator(method: str, family: str, delta: float, alpha: float = None, epsilon: float = None,
                   alpha_fst: float = None, grid_size: int = None, grid=None, holdout=None,
                   rank_offset: int = 0) -> BaseCalibrator:
    """
    Калибратор по имени метода

    Args:
        method: stepdown, stepup, fst, fst-quantile или nominal
        family: threshold или bernoulli
        delta: Уровень потерь

    Returns:
        BaseCalibrator: Настроенный калибратор

    Raises:
        DomainError: Неизвестный метод или недостающие параметры
    """
    grid_size = grid_size or CALIBRATION_CONFIG['grid_size']
    nested = get_nested_family(family, CALIBRATION_CONFIG['bernoulli_grid_size'])
    if alpha_fst is None:
        alpha_fst = CALIBRATION_CONFIG['alpha_fst']

    if method in ('stepdown', 'stepup', 'fst-quantile') and alpha is None:
        raise DomainError(f"Метод {method} требует alpha")

    if method == 'stepdown':
        return StepDownCalibrator(nested, delta, alpha, rank_offset=rank_offset)
    if method == 'stepup':
        return StepUpCalibrator(nested, delta, alpha, epsilon, holdout)
    if method == 'fst':
        return FixedSequenceCalibrator(nested, delta, alpha_fst, grid, grid_size)
    if method == 'fst-quantile':
        return FixedSequenceCalibrator(nested, delta, alpha_fst, grid, grid_size, quantile_alpha=alpha)
    if method == 'nominal':
        return NominalCalibrator(nested, delta)
    raise DomainError(f"Неизвестный метод калибровки: {method}")
