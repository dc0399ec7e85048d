"""
ProbeConformal - Анализаторы
Оракулы, оценка результатов калибровки, прогоны по сетке и самопроверка
"""

from .oracle import (DenseGrid, MonteCarloResult, brute_fpp, brute_lambda_targets, brute_loss_trace,
                     brute_stepdown_score, brute_stepup_score, exact_binomial_cdf, mc_bernoulli_expectation,
                     mc_guarantee_check, mc_pvalue_uniformity, oracle_hb_pvalue)
from .evaluation import EvalReport, accuracy_histogram, ecdf_table, evaluate_outcome, upper_quantile
from .sweep import merge_config, ordering_fraction, run_sweep, summarize
from .selfcheck import run_selfcheck

__all__ = [
    'DenseGrid', 'MonteCarloResult', 'brute_fpp', 'brute_lambda_targets', 'brute_loss_trace',
    'brute_stepdown_score', 'brute_stepup_score', 'exact_binomial_cdf', 'mc_bernoulli_expectation',
    'mc_guarantee_check', 'mc_pvalue_uniformity', 'oracle_hb_pvalue',
    'EvalReport', 'accuracy_histogram', 'ecdf_table', 'evaluate_outcome', 'upper_quantile',
    'merge_config', 'ordering_fraction', 'run_sweep', 'summarize', 'run_selfcheck',
]
