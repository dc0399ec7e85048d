#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Набор самопроверки
Сверка быстрых вычислений с оракулами и Монте-Карло-проверки гарантий
Версия: 0.1.0
"""

import copy
import time
from typing import Any, Dict, List, Optional

import numpy as np

from calibrators import stepdown_score, stepup_score
from config import ORACLE_LIMITS, SELFCHECK_CONFIG
from core.errors import UsageError
from core.loss import UserFeedback
from core.nested import ScoreVector, loss_trace, threshold_set
from core.stats import conformal_quantile, hb_pvalue
from families import BitVectorFamily, PairwiseFamily, RankPositionFamily
from models.generator import generate_examples
from models.rng import seed_stream
from models.tree import TreeModel, build_balanced_tree
from utils.logger import get_logger
from .oracle import (brute_lambda_targets, brute_loss_trace, brute_stepdown_score,
                     brute_stepup_score, mc_bernoulli_expectation, mc_guarantee_check,
                     mc_pvalue_uniformity, oracle_hb_pvalue)

logger = get_logger('selfcheck')

HB_SAMPLE_SIZES = (1, 2, 3, 5, 10, 20, 37, 50, 100, 150, 200)
HB_DELTAS = (0.05, 0.1, 0.2, 0.5)
ORACLE_DELTAS = (0.0, 0.1, 0.2, 0.25, 1 / 3, 0.5, 1.0)


def random_instance(rng: np.random.Generator, max_probes: int):
    """Случайные оценки (с повторами и нулями) и ответы на случайном подмножестве"""
    m = int(rng.integers(1, max_probes + 1))
    keys = [f"b:{i + 1}" for i in range(m)]
    magnitudes = rng.choice([0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0], size=m)
    magnitudes = np.where(rng.random(m) < 0.5, magnitudes, rng.random(m) * 3.0)
    signs = rng.choice([-1.0, 1.0], size=m)
    scores = ScoreVector({k: float(v * s) for k, v, s in zip(keys, magnitudes, signs)})
    queried = [k for k in keys if rng.random() < 0.7] or [keys[0]]
    answers = {k: int(rng.choice([-1, 1])) for k in queried}
    return scores, UserFeedback.from_queries(queried, answers)


def check_hb_exact(config: Dict[str, Any]) -> Dict[str, Any]:
    """hb_pvalue против точной суммы, относительный допуск 1e-12"""
    worst = 0.0
    failures = []
    for n in HB_SAMPLE_SIZES:
        for delta in HB_DELTAS:
            for step in range(101):
                mean_loss = step / 100
                fast = hb_pvalue(mean_loss, n, delta)
                exact = oracle_hb_pvalue(mean_loss, n, delta)
                error = abs(fast - exact) / max(abs(exact), 1e-300)
                worst = max(worst, error)
                if error > 1e-12:
                    failures.append({'n': n, 'delta': delta, 'mean_loss': mean_loss})
    return {'passed': not failures, 'worst_relative_error': worst, 'failures': failures[:10]}


def check_hb_uniformity(config: Dict[str, Any]) -> Dict[str, Any]:
    """Суперравномерность p-значения на границе гипотезы"""
    results = mc_pvalue_uniformity(config['fst_n'], 0.2, config['fst_trials'] * 4, config['seed'])
    return {'passed': all(r.passed for r in results), 'levels': [r.to_dict() for r in results]}


def check_oracle_equivalence(config: Dict[str, Any]) -> Dict[str, Any]:
    """Трассы, оценки S_j и S~_j против перебора на случайных экземплярах"""
    rng = seed_stream(config['seed'], 'oracle')
    mismatches = []
    for case in range(config['oracle_cases']):
        scores, feedback = random_instance(rng, config['oracle_max_probes'])
        trace = loss_trace(scores, feedback)
        grid, losses = brute_loss_trace(scores, feedback)
        if any(trace.loss_at(t) != loss for t, loss in zip(grid.points, losses)):
            mismatches.append({'case': case, 'what': 'loss_trace'})
            continue
        for t in grid.points:
            answered = threshold_set(scores, t).indices
            expected = {k for k, v in scores.scores.items() if abs(v) > t}
            if answered != expected:
                mismatches.append({'case': case, 'what': 'threshold_set', 't': t})
                break
        delta = ORACLE_DELTAS[case % len(ORACLE_DELTAS)]
        if stepdown_score(trace, delta) != brute_stepdown_score(scores, feedback, delta):
            mismatches.append({'case': case, 'what': 'stepdown', 'delta': delta})
        if stepup_score(trace, delta) != brute_stepup_score(scores, feedback, delta):
            mismatches.append({'case': case, 'what': 'stepup', 'delta': delta})
    return {'passed': not mismatches, 'cases': config['oracle_cases'], 'mismatches': mismatches[:10]}


def check_lambda_order(config: Dict[str, Any]) -> Dict[str, Any]:
    """lambda_up <= lambda_down на случайных выборках и для целевых значений популяции"""
    rng = seed_stream(config['seed'], 'order')
    violations = []
    for sample in range(100):
        population = [random_instance(rng, 6) for _ in range(int(rng.integers(1, 16)))]
        alpha = float(rng.choice([0.1, 0.2, 0.3, 0.5]))
        delta = float(rng.choice([0.0, 0.2, 0.25, 0.5]))
        traces = [loss_trace(s, f) for s, f in population]
        up = conformal_quantile([stepup_score(t, delta) for t in traces], alpha)
        down = conformal_quantile([stepdown_score(t, delta) for t in traces], alpha)
        target_up, target_down = brute_lambda_targets(population, delta, alpha)
        if up > down or target_up > target_down:
            violations.append({'sample': sample, 'up': up, 'down': down})
    return {'passed': not violations, 'violations': violations[:10]}


def check_identifiability(config: Dict[str, Any]) -> Dict[str, Any]:
    """Инъективность отображения метка -> вектор проб для всех семейств"""
    limit = ORACLE_LIMITS['max_space_size']
    results = {}
    for k in range(2, 6):
        results[f"pairwise-{k}"] = PairwiseFamily(k).check_identifiability(limit)
        results[f"rank-position-{k}"] = RankPositionFamily(k).check_identifiability(limit)
    for leaves, branching in ((1, 2), (2, 2), (7, 3), (16, 2), (64, 4), (64, 8)):
        results[f"tree-{leaves}-{branching}"] = build_balanced_tree(leaves, branching).check_identifiability(limit)
    for k in range(1, 13):
        results[f"bitvector-{k}"] = BitVectorFamily(k).check_identifiability(limit)
    return {'passed': all(results.values()), 'families': results}


def check_stepdown_coverage(config: Dict[str, Any], rank_offset: int = 0, jobs: int = 1) -> Dict[str, Any]:
    """
    Доля тестовых FPP <= delta после step-down калибровки

    Кроме прогонов по coverage_n выполняется прогон чувствительности: при n = 9
    и alpha = 0.1 конформный ранг равен n, и ошибка ранга на единицу
    опускает покрытие заметно ниже порога 1 - alpha - 3 SE.
    """
    results = [mc_guarantee_check('stepdown', config['coverage_trials'], config['seed'], n,
                                  config['coverage_delta'], alpha=config['coverage_alpha'],
                                  rank_offset=rank_offset, jobs=jobs)
               for n in config['coverage_n']]
    results.append(mc_guarantee_check('stepdown', config['sensitivity_trials'], config['seed'],
                                      config['sensitivity_n'], config['sensitivity_delta'],
                                      alpha=config['coverage_alpha'],
                                      model_params=config['sensitivity_model'],
                                      rank_offset=rank_offset, jobs=jobs))
    return {'passed': all(r.passed for r in results), 'runs': [r.to_dict() for r in results]}


def check_stepup_guarantee(config: Dict[str, Any], jobs: int = 1) -> Dict[str, Any]:
    """Покрытие step-up против 1 - alpha - Err с Err по свежей отложенной выборке"""
    result = mc_guarantee_check('stepup', config['stepup_trials'], config['seed'], config['stepup_n'],
                                config['coverage_delta'], alpha=config['coverage_alpha'],
                                holdout_size=config['stepup_holdout'], jobs=jobs)
    return {'passed': result.passed, 'run': result.to_dict()}


def check_fst_guarantee(config: Dict[str, Any], jobs: int = 1) -> Dict[str, Any]:
    """Частота выбора lambda с истинной потерей выше delta"""
    result = mc_guarantee_check('fst', config['fst_trials'], config['seed'], config['fst_n'], 0.2,
                                alpha_fst=0.1, grid_size=config['fst_grid_size'], jobs=jobs)
    return {'passed': result.passed, 'run': result.to_dict()}


def check_bernoulli_expectation(config: Dict[str, Any]) -> Dict[str, Any]:
    """Условное ожидание FPP для адаптивного порога при delta_acc = 0.9"""
    results = mc_bernoulli_expectation(config['bernoulli_instances'], config['bernoulli_draws'],
                                       0.9, config['seed'])
    return {'passed': all(r.passed for r in results), 'instances': [r.to_dict() for r in results]}


def check_tree_queries(config: Dict[str, Any]) -> Dict[str, Any]:
    """Среднее число запросов на 1000-листовом дереве в [20, 45]"""
    model = TreeModel()
    examples = generate_examples('tree', config['tree_query_instances'], config['seed'], model=model)
    mean = float(np.mean([len(ex.feedback) for ex in examples]))
    return {'passed': 20.0 <= mean <= 45.0, 'mean_queries': mean, 'instances': len(examples)}


def build_suite(config: Dict[str, Any], rank_offset: int = 0,
                jobs: int = 1) -> List[tuple]:
    return [
        ('hb_exact', lambda: check_hb_exact(config)),
        ('hb_uniformity', lambda: check_hb_uniformity(config)),
        ('oracle_equivalence', lambda: check_oracle_equivalence(config)),
        ('lambda_order', lambda: check_lambda_order(config)),
        ('identifiability', lambda: check_identifiability(config)),
        ('stepdown_coverage', lambda: check_stepdown_coverage(config, rank_offset, jobs)),
        ('stepup_guarantee', lambda: check_stepup_guarantee(config, jobs)),
        ('fst_guarantee', lambda: check_fst_guarantee(config, jobs)),
        ('bernoulli_expectation', lambda: check_bernoulli_expectation(config)),
        ('tree_queries', lambda: check_tree_queries(config)),
    ]


def run_selfcheck(overrides: Optional[Dict[str, Any]] = None, only: Optional[List[str]] = None,
                  rank_offset: int = 0, jobs: int = 1) -> Dict[str, Any]:
    """
    Запуск набора проверок

    Args:
        overrides: Поправки к SELFCHECK_CONFIG
        only: Имена проверок для запуска (по умолчанию все)
        rank_offset: Сдвиг ранга конформного квантиля (внедрение дефекта)
        jobs: Число процессов для Монте-Карло

    Returns:
        Dict[str, Any]: Отчёт {'passed', 'checks': {имя: результат}, 'config'}

    Raises:
        UsageError: Неверные параметры набора
    """
    config = copy.deepcopy(SELFCHECK_CONFIG)
    config.update(overrides or {})
    for key in ('coverage_trials', 'sensitivity_trials', 'stepup_trials', 'fst_trials'):
        if int(config[key]) < ORACLE_LIMITS['min_trials']:
            raise UsageError(f"{key}: нужно не меньше {ORACLE_LIMITS['min_trials']} испытаний")
    if any(int(n) < 1 for n in config['coverage_n']):
        raise UsageError(f"coverage_n: размеры выборки должны быть >= 1: {config['coverage_n']}")
    for key in ('oracle_cases', 'bernoulli_instances', 'bernoulli_draws', 'tree_query_instances',
                'sensitivity_n', 'stepup_n', 'stepup_holdout'):
        if int(config[key]) < 1:
            raise UsageError(f"{key} должно быть >= 1")

    suite = build_suite(config, rank_offset, jobs)
    names = [name for name, _ in suite]
    if only:
        unknown = set(only) - set(names)
        if unknown:
            raise UsageError(f"Неизвестные проверки: {sorted(unknown)}")

    checks = {}
    for name, run in suite:
        if only and name not in only:
            continue
        started = time.monotonic()
        result = run()
        checks[name] = result
        logger.info(f"{name}: {'OK' if result['passed'] else 'FAIL'} ({time.monotonic() - started:.1f} с)")

    return {
        'passed': all(c['passed'] for c in checks.values()),
        'checks': checks,
        'config': config,
        'rank_offset': rank_offset,
    }
