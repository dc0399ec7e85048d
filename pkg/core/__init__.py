"""
ProbeConformal - Ядро системы
Пробы, FPP, вложенные семейства, статистика и формат данных
"""

__version__ = "0.1.0"

from .errors import CapacityError, DataError, DomainError, ProbeConformalError, UsageError
from .probes import ProbeAdaptedSet, check_identifiability, evaluate_probe, materialize_weak_set, membership
from .loss import UserFeedback, abstention, fpp_counts, fpp_loss
from .nested import (AccuracyVector, BernoulliFamily, LossTrace, NestedFamily, ScoreVector, ThresholdFamily,
                     bernoulli_threshold, eta_set, get_nested_family, loss_trace, threshold_set)
from .stats import conformal_quantile, hb_pvalue
from .dataset import CalibSample, WeakExample, read_jsonl, write_jsonl

__all__ = [
    'ProbeConformalError', 'DomainError', 'CapacityError', 'UsageError', 'DataError',
    'ProbeAdaptedSet', 'evaluate_probe', 'membership', 'check_identifiability', 'materialize_weak_set',
    'UserFeedback', 'fpp_counts', 'fpp_loss', 'abstention',
    'ScoreVector', 'AccuracyVector', 'LossTrace', 'NestedFamily', 'ThresholdFamily', 'BernoulliFamily',
    'threshold_set', 'loss_trace', 'bernoulli_threshold', 'eta_set', 'get_nested_family',
    'conformal_quantile', 'hb_pvalue',
    'WeakExample', 'CalibSample', 'read_jsonl', 'write_jsonl',
]
