#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Номинальный порог последовательности Бернулли
Без калибровки: delta_acc = 1 - delta
Версия: 0.1.0
"""

from typing import Sequence

from core.dataset import WeakExample
from core.errors import DomainError
from .base import BaseCalibrator, CalibrationOutcome, sample_digest


class NominalCalibrator(BaseCalibrator):
    """Контроль ожидаемой FPP при независимых пробах с известными pi"""

    method = 'nominal'

    def __init__(self, family, delta: float):
        super().__init__(family, delta)
        if family.kind != 'bernoulli':
            raise DomainError("Номинальный порог определён только для бернуллиевского семейства")

    def calibrate(self, examples: Sequence[WeakExample], created_from: str = '') -> CalibrationOutcome:
        examples = list(examples)
        probe_family = self.prepare(examples) if examples else ''
        return CalibrationOutcome(
            method=self.method,
            family=self.family.kind,
            probe_family=probe_family,
            parameter=1.0 - self.delta,
            delta=self.delta,
            n=len(examples),
            created_from=created_from or sample_digest(examples),
        )
