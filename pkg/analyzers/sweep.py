#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Прогон по сетке параметров
(alpha, delta, метод, семейство, зерно) -> метрики; сводка с межквартильными размахами
Версия: 0.1.0
"""

import concurrent.futures
import copy
from typing import Any, Dict, List, Optional

import pandas as pd

from calibrators import get_calibrator
from config import SWEEP_CONFIG
from core.errors import ProbeConformalError, UsageError
from models.generator import build_model, generate_examples, split_examples
from utils.logger import get_logger
from .evaluation import evaluate_outcome

logger = get_logger('sweep')

ROW_COLUMNS = ['alpha', 'delta', 'method', 'family', 'seed', 'status', 'parameter', 'abstain_all',
               'mean_loss', 'loss_quantile', 'loss_quantile_gap', 'exceedance_rate',
               'mean_abstention', 'error']


def merge_config(overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Конфигурация прогона поверх SWEEP_CONFIG

    Raises:
        UsageError: Неизвестные ключи или пустые списки
    """
    config = copy.deepcopy(SWEEP_CONFIG)
    overrides = overrides or {}
    unknown = set(overrides) - set(config)
    if unknown:
        raise UsageError(f"Неизвестные ключи конфигурации прогона: {sorted(unknown)}")
    config.update(overrides)
    for key in ('alphas', 'deltas', 'methods', 'families'):
        if not isinstance(config[key], list) or not config[key]:
            raise UsageError(f"Ключ {key} должен быть непустым списком")
    if int(config['seeds']) < 1:
        raise UsageError("Число зёрен должно быть >= 1")
    if int(config['n_calibration']) < 1 or int(config['n_test']) < 1:
        raise UsageError("Размеры выборок должны быть >= 1")
    return config


def cell_count(config: Dict[str, Any]) -> int:
    return (len(config['alphas']) * len(config['deltas']) * len(config['methods'])
            * len(config['families']) * int(config['seeds']))


def run_seed(config: Dict[str, Any], seed_index: int, base_seed: int) -> List[Dict[str, Any]]:
    """
    Все ячейки для одного зерна: одна генерация, калибровка и оценка по ячейкам

    Ошибка ячейки записывается строкой со статусом error.
    """
    seed = base_seed + seed_index
    task = config['task']
    model = build_model(task, config.get('generator') or {})
    examples = generate_examples(task, config['n_calibration'] + config['n_test'], seed, model=model)
    calibration, test = split_examples(examples, config['n_calibration'])

    rows = []
    for alpha in config['alphas']:
        for delta in config['deltas']:
            for method in config['methods']:
                for family in config['families']:
                    row = {'alpha': alpha, 'delta': delta, 'method': method, 'family': family,
                           'seed': seed, 'status': 'ok', 'error': ''}
                    try:
                        calibrator = get_calibrator(method, family, delta, alpha=alpha,
                                                    alpha_fst=config['alpha_fst'],
                                                    grid_size=config['grid_size'])
                        outcome = calibrator.calibrate(calibration, created_from=f"seed-{seed}")
                        report = evaluate_outcome(outcome, test, alpha=alpha)
                        row.update({
                            'parameter': outcome.parameter,
                            'abstain_all': outcome.abstain_all,
                            'mean_loss': report.mean_loss,
                            'loss_quantile': report.loss_quantile,
                            'loss_quantile_gap': report.loss_quantile_gap,
                            'exceedance_rate': report.exceedance_rate,
                            'mean_abstention': report.mean_abstention,
                        })
                    except ProbeConformalError as e:
                        row.update({'status': 'error', 'error': str(e)})
                        logger.warning(f"Ячейка alpha={alpha}, delta={delta}, {method}/{family}: {e}")
                    rows.append(row)
    return rows


def _run_seed_task(task) -> List[Dict[str, Any]]:
    return run_seed(*task)


def run_sweep(config: Dict[str, Any], base_seed: int = 0, jobs: int = 1) -> pd.DataFrame:
    """
    Прогон по всем ячейкам и зёрнам

    Returns:
        pd.DataFrame: Длинная таблица, одна строка на (alpha, delta, метод, семейство, зерно)
    """
    tasks = [(config, s, base_seed) for s in range(int(config['seeds']))]
    logger.info(f"Прогон: {cell_count(config)} ячеек, {len(tasks)} зёрен, процессов {jobs}")
    if jobs <= 1:
        chunks = [_run_seed_task(task) for task in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
            chunks = list(executor.map(_run_seed_task, tasks))
    rows = [row for chunk in chunks for row in chunk]
    frame = pd.DataFrame(rows, columns=ROW_COLUMNS)
    return frame.sort_values(['alpha', 'delta', 'method', 'family', 'seed'], kind='stable').reset_index(drop=True)


def summarize(frame: pd.DataFrame) -> pd.DataFrame:
    """Среднее и квартили зазора квантиля и воздержания по ячейкам"""
    ok = frame[frame['status'] == 'ok']
    grouped = ok.groupby(['alpha', 'delta', 'method', 'family'])
    summary = grouped.agg(
        runs=('seed', 'count'),
        gap_mean=('loss_quantile_gap', 'mean'),
        gap_q25=('loss_quantile_gap', lambda s: s.quantile(0.25)),
        gap_q75=('loss_quantile_gap', lambda s: s.quantile(0.75)),
        abstention_mean=('mean_abstention', 'mean'),
        abstention_q25=('mean_abstention', lambda s: s.quantile(0.25)),
        abstention_q75=('mean_abstention', lambda s: s.quantile(0.75)),
    )
    return summary.reset_index()


def ordering_fraction(summary: pd.DataFrame, order=('stepdown', 'fst-quantile', 'stepup'),
                      family: Optional[str] = None) -> Dict[str, float]:
    """
    Доля ячеек, где средний зазор упорядочен как order, а воздержание - обратно

    Args:
        summary: Сводка summarize
        order: Методы от самого консервативного к самому оптимистичному
        family: Только ячейки этого вложенного семейства

    Returns:
        Dict[str, float]: {'gap': доля, 'abstention': доля, 'cells': число ячеек}
    """
    if family is not None:
        summary = summary[summary['family'] == family]
    if summary.empty:
        return {'gap': float('nan'), 'abstention': float('nan'), 'cells': 0}
    pivot_gap = summary.pivot_table(index=['alpha', 'delta', 'family'], columns='method', values='gap_mean')
    pivot_abs = summary.pivot_table(index=['alpha', 'delta', 'family'], columns='method',
                                    values='abstention_mean')
    methods = [m for m in order if m in pivot_gap.columns]
    if len(methods) < 2 or pivot_gap.empty:
        return {'gap': float('nan'), 'abstention': float('nan'), 'cells': 0}
    gap_ok = pd.Series(True, index=pivot_gap.index)
    abs_ok = pd.Series(True, index=pivot_abs.index)
    for low, high in zip(methods, methods[1:]):
        gap_ok &= pivot_gap[low] <= pivot_gap[high]
        abs_ok &= pivot_abs[low] >= pivot_abs[high]
    return {'gap': float(gap_ok.mean()), 'abstention': float(abs_ok.mean()), 'cells': int(len(gap_ok))}
