#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Переборные оракулы

Независимые медленные реализации: потери по плотной сетке lambda с построением
множества заново, точный биномиальный хвост на дробях, целевые lambda по
конечной популяции, а также Монте-Карло-проверки гарантий.
Версия: 0.1.0
"""

import concurrent.futures
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from calibrators import apply_outcome, fst_from_losses, get_calibrator
from config import CALIBRATION_CONFIG, ORACLE_LIMITS
from core.errors import CapacityError, DomainError
from core.loss import UserFeedback, exact_level, fpp_loss
from core.nested import ScoreVector
from core.stats import binomial_standard_error, hb_pvalue, kl_bernoulli
from models.bernoulli import BernoulliLossModel, IndependenceSimulator
from models.generator import build_model, generate_examples
from models.rng import seed_stream
from utils.logger import get_logger

logger = get_logger('oracle')


@dataclass(frozen=True)
class DenseGrid:
    """0, все точки разрыва, середины между ними и правый сторож max + 1"""

    points: Tuple[float, ...]
    breakpoints: Tuple[float, ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise DomainError("Точки плотной сетки должны строго возрастать")

    @classmethod
    def from_breakpoints(cls, breakpoints: Sequence[float]) -> 'DenseGrid':
        marks = sorted({float(b) for b in breakpoints if b > 0})
        points = {0.0}
        points.update(marks)
        for a, b in zip([0.0] + marks, marks):
            points.add((a + b) / 2.0)
        points.add((marks[-1] if marks else 0.0) + 1.0)
        return cls(tuple(sorted(points)), tuple(marks))

    @property
    def candidates(self) -> List[float]:
        """Левые концы интервалов постоянства: 0 и точки разрыва"""
        return [0.0] + list(self.breakpoints)


def _check_capacity(scores: ScoreVector, feedback: UserFeedback) -> None:
    limit = ORACLE_LIMITS['max_probes']
    if max(len(scores), len(feedback)) > limit:
        raise CapacityError(f"Переборный оракул ограничен {limit} пробами")


def brute_fpp(scores: ScoreVector, feedback: UserFeedback, lam: float) -> Fraction:
    """FPP множества {i : |s_i| > lam}, построенного заново по определению"""
    errors = answered = 0
    for index, answer in feedback.answers.items():
        value = scores.scores.get(index, 0.0)
        if abs(value) > lam and value != 0.0:
            answered += 1
            errors += (1 if value > 0 else -1) != answer
    return Fraction(errors, max(1, answered))


def brute_loss_trace(scores: ScoreVector, feedback: UserFeedback) -> Tuple[DenseGrid, List[Fraction]]:
    """
    Потери во всех точках плотной сетки

    Raises:
        CapacityError: Больше допустимого числа проб
    """
    _check_capacity(scores, feedback)
    grid = DenseGrid.from_breakpoints([abs(v) for v in scores.scores.values()])
    return grid, [brute_fpp(scores, feedback, t) for t in grid.points]


def _exceeds(loss: Fraction, delta) -> bool:
    return loss > exact_level(delta)


def brute_stepdown_score(scores: ScoreVector, feedback: UserFeedback, delta: float) -> float:
    """inf{lambda : для всех lambda' >= lambda потеря <= delta} перебором по сетке"""
    grid, losses = brute_loss_trace(scores, feedback)
    for candidate in grid.candidates:
        if all(not _exceeds(loss, delta) for t, loss in zip(grid.points, losses) if t >= candidate):
            return candidate
    return math.inf


def brute_stepup_score(scores: ScoreVector, feedback: UserFeedback, delta: float) -> float:
    """inf{lambda : потеря в lambda <= delta} перебором по сетке"""
    _check_capacity(scores, feedback)
    grid = DenseGrid.from_breakpoints([abs(v) for v in scores.scores.values()])
    for candidate in grid.candidates:
        if not _exceeds(brute_fpp(scores, feedback, candidate), delta):
            return candidate
    return math.inf


def brute_lambda_targets(population: Sequence[Tuple[ScoreVector, UserFeedback]], delta: float,
                         alpha: float) -> Tuple[float, float]:
    """
    Целевые lambda^up и lambda^down для конечной популяции

    lambda^up = min{lambda : доля примеров с потерей <= delta не меньше 1 - alpha};
    lambda^down - то же для события "потеря <= delta при всех lambda' >= lambda".

    Returns:
        Tuple[float, float]: (lambda^up, lambda^down), inf при отсутствии
    """
    population = list(population)
    if not population:
        raise DomainError("Пустая популяция")
    level = exact_level(alpha)
    need = (1 - level) * len(population)

    breakpoints = set()
    traces = []
    for scores, feedback in population:
        grid, losses = brute_loss_trace(scores, feedback)
        breakpoints.update(grid.breakpoints)
        traces.append((grid, losses))
    candidates = [0.0] + sorted(breakpoints)

    def holds_at(scores, feedback, lam):
        return not _exceeds(brute_fpp(scores, feedback, lam), delta)

    def holds_after(trace, lam):
        grid, losses = trace
        tail = [loss for t, loss in zip(grid.points, losses) if t >= lam]
        return all(not _exceeds(loss, delta) for loss in tail)

    lam_up = next((lam for lam in candidates
                   if sum(holds_at(s, f, lam) for s, f in population) >= need), math.inf)
    lam_down = next((lam for lam in candidates
                     if sum(holds_at(s, f, lam) and holds_after(trace, lam)
                            for (s, f), trace in zip(population, traces)) >= need), math.inf)
    return lam_up, lam_down


@lru_cache(maxsize=None)
def _binomial_cumulative(n: int, delta: Fraction) -> Tuple[Fraction, ...]:
    terms = [math.comb(n, i) * delta ** i * (1 - delta) ** (n - i) for i in range(n + 1)]
    cumulative = []
    total = Fraction(0)
    for term in terms:
        total += term
        cumulative.append(total)
    return tuple(cumulative)


def exact_binomial_cdf(n: int, delta: float, m: int) -> float:
    """
    P(Bin(n, delta) <= m) точным суммированием на дробях

    delta берётся как точное двоичное значение числа с плавающей точкой.
    """
    if not 0 <= m <= n:
        raise DomainError(f"Нужно 0 <= m <= n: m={m}, n={n}")
    return float(_binomial_cumulative(int(n), Fraction(float(delta)))[m])


def oracle_hb_pvalue(mean_loss: float, n: int, delta: float) -> float:
    """p-значение Хёфдинга-Бенткуса через точную сумму и замкнутую форму Хёфдинга"""
    level = exact_level(mean_loss)
    if level >= exact_level(delta):
        return 1.0
    hoeffding = math.exp(-n * kl_bernoulli(float(mean_loss), delta))
    bentkus = math.e * exact_binomial_cdf(n, delta, math.ceil(level * n))
    return min(1.0, hoeffding, bentkus)


@dataclass(frozen=True)
class MonteCarloResult:
    """Эмпирическая частота события гарантии; correction - вычтенная из цели поправка (Err для step-up)"""

    name: str
    rate: float
    standard_error: float
    trials: int
    target: float
    passed: bool
    correction: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _run_parallel(worker, tasks: Sequence[Any], jobs: int) -> List[Any]:
    if jobs <= 1:
        return [worker(task) for task in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(worker, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def _trial_seed(seed: int, trial: int) -> int:
    return int(seed_stream(seed, 'trial', trial).integers(0, 2 ** 63 - 1))


def _conformal_trial(task: Tuple) -> Tuple[bool, float]:
    """(FPP теста <= delta, оценка Err по отложенной выборке или 0)"""
    method, trial_seed, n, alpha, delta, model_task, model_params, rank_offset, holdout_size = task
    model = build_model(model_task, model_params)
    examples = generate_examples(model_task, n + 1 + holdout_size, trial_seed, model=model)
    calibration, test, holdout = examples[:n], examples[n], examples[n + 1:]
    calibrator = get_calibrator(method, 'threshold', delta, alpha=alpha, rank_offset=rank_offset,
                                holdout=holdout or None)
    outcome = calibrator.calibrate(calibration, created_from='mc')
    covered = not _exceeds(fpp_loss(test.feedback, apply_outcome(outcome, test)), delta)
    return covered, float(outcome.err_estimate or 0.0)


def _fst_trial(task: Tuple) -> bool:
    trial_seed, n, grid, delta, alpha_fst, start = task
    model = BernoulliLossModel(start)
    losses = model.loss_matrix(n, grid, seed_stream(trial_seed, 'fst'))
    means = [Fraction(int(total), n) for total in losses.sum(axis=0)]
    k_hat, _ = fst_from_losses(means, n, delta, alpha_fst)
    if k_hat is None:
        return True
    return bool(model.expected_loss([grid[k_hat - 1]])[0] <= delta)


def mc_guarantee_check(method: str, trials: int, seed: int, n: int, delta: float,
                       alpha: Optional[float] = None, alpha_fst: Optional[float] = None,
                       grid_size: int = 50, task: str = 'ranking',
                       model_params: Optional[Dict[str, Any]] = None,
                       rank_offset: int = 0, holdout_size: int = 0, jobs: int = 1) -> MonteCarloResult:
    """
    Частота события гарантии по независимым испытаниям

    stepdown: калибровка на n примерах генератора, событие FPP(тест) <= delta,
    цель 1 - alpha. stepup: то же, но в каждом испытании Err_delta(lambda_up, epsilon)
    оценивается на свежей отложенной выборке из holdout_size примеров, и цель
    равна 1 - alpha - среднее Err. fst: потери BernoulliLossModel на сетке (0, 1],
    событие "выбранный lambda имеет истинную потерю <= delta", цель 1 - alpha_fst.

    Raises:
        DomainError: Меньше допустимого числа испытаний или неизвестный метод
    """
    if trials < ORACLE_LIMITS['min_trials']:
        raise DomainError(f"Нужно не меньше {ORACLE_LIMITS['min_trials']} испытаний: {trials}")

    correction = 0.0
    if method in ('stepdown', 'stepup'):
        if alpha is None:
            raise DomainError(f"Метод {method} требует alpha")
        if method == 'stepup' and holdout_size < 1:
            raise DomainError("Проверка step-up требует отложенной выборки для оценки Err")
        if method == 'stepdown':
            holdout_size = 0
        tasks = [(method, _trial_seed(seed, t), n, alpha, delta, task, model_params or {}, rank_offset,
                  holdout_size) for t in range(trials)]
        results = _run_parallel(_conformal_trial, tasks, jobs)
        outcomes = [covered for covered, _ in results]
        errs = np.asarray([err for _, err in results], dtype=float)
        correction = float(errs.mean())
        target = 1.0 - alpha - correction
    elif method == 'fst':
        alpha_fst = CALIBRATION_CONFIG['alpha_fst'] if alpha_fst is None else alpha_fst
        grid = [(k + 1) / grid_size for k in range(grid_size)]
        tasks = [(_trial_seed(seed, t), n, grid, delta, alpha_fst, 2.0 * delta) for t in range(trials)]
        outcomes = _run_parallel(_fst_trial, tasks, jobs)
        target = 1.0 - alpha_fst
    else:
        raise DomainError(f"Монте-Карло-проверка не определена для метода {method}")

    rate = float(np.mean(outcomes))
    se = binomial_standard_error(target, trials)
    if method == 'stepup':
        # Разброс оценок Err между испытаниями входит в ошибку цели
        se = math.sqrt(se ** 2 + float(errs.var(ddof=1)) / trials)
    result = MonteCarloResult(f"{method}-guarantee", rate, se, trials, target, rate >= target - 3.0 * se,
                              correction)
    logger.info(f"{result.name}: {rate:.4f} (цель {target:.3f}, SE {se:.4f})")
    return result


def mc_bernoulli_expectation(instances: int, draws: int, delta_acc: float, seed: int,
                             probes: int = 20) -> List[MonteCarloResult]:
    """
    Условное ожидание FPP множества C_{eta*} при независимых пробах с известными pi

    Каждый экземпляр проходит, если среднее FPP <= 1 - delta_acc + 3 SE.
    """
    results = []
    bound = 1.0 - delta_acc
    for index in range(instances):
        simulator = IndependenceSimulator.random(seed_stream(seed, 'instance', index), probes)
        losses = simulator.mc_fpp(delta_acc, draws, seed_stream(seed, 'draws', index))
        mean = float(losses.mean())
        se = float(losses.std(ddof=1) / math.sqrt(draws)) if draws > 1 else 0.0
        results.append(MonteCarloResult(f"bernoulli-{index}", mean, se, draws, bound,
                                        mean <= bound + 3.0 * se))
    return results


def mc_pvalue_uniformity(n: int, delta: float, trials: int, seed: int,
                         levels: Sequence[float] = (0.01, 0.05, 0.1, 0.2, 0.5)) -> List[MonteCarloResult]:
    """P(p <= u) при потерях Bernoulli(delta), то есть ровно на границе гипотезы"""
    rng = seed_stream(seed, 'uniformity')
    totals = rng.binomial(n, delta, size=trials)
    p_values = np.asarray([hb_pvalue(Fraction(int(t), n), n, delta) for t in totals])
    results = []
    for u in levels:
        rate = float(np.mean(p_values <= u))
        se = binomial_standard_error(u, trials)
        results.append(MonteCarloResult(f"uniformity-{u}", rate, se, trials, u, rate <= u + 3.0 * se))
    return results
