#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Синтетическая задача ранжирования

Латентные релевантности r ~ Exp, истинная перестановка из распределения
Плакетта-Льюса (ListNet) с полезностями sharpness * r, оценки пар по
зашумлённой копии r, запросы пользователя по формуле, предпочитающей
релевантные и хорошо разделённые пары.
Версия: 0.1.0
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit, softmax

from config import QUERY_SAMPLER_CONFIG, RANKING_CONFIG
from core.dataset import WeakExample
from core.errors import DomainError
from core.loss import UserFeedback
from core.nested import AccuracyVector, ScoreVector
from families import PairwiseFamily
from .rng import seed_stream


@dataclass(frozen=True)
class QuerySamplerParams:
    """Параметры семплеров запросов: c1, c2 для пар; a, b, c для дерева"""

    c1: float = QUERY_SAMPLER_CONFIG['ranking']['c1']
    c2: float = QUERY_SAMPLER_CONFIG['ranking']['c2']
    a: float = QUERY_SAMPLER_CONFIG['tree']['a']
    b: float = QUERY_SAMPLER_CONFIG['tree']['b']
    c: float = QUERY_SAMPLER_CONFIG['tree']['c']
    max_attempts: int = QUERY_SAMPLER_CONFIG['max_attempts']

    def __post_init__(self):
        for name in ('c1', 'c2', 'a', 'b', 'c'):
            if getattr(self, name) < 0:
                raise DomainError(f"Параметр семплера {name} должен быть неотрицательным")
        if self.max_attempts < 1:
            raise DomainError("max_attempts должно быть >= 1")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class RankingModel:
    """Генеративная модель ранжирования K предметов"""

    k: int = RANKING_CONFIG['k']
    relevance_scale: float = RANKING_CONFIG['relevance_scale']
    sharpness: float = RANKING_CONFIG['sharpness']
    noise: float = RANKING_CONFIG['noise']
    flip_rate: float = RANKING_CONFIG['flip_rate']
    flip_boost: float = RANKING_CONFIG['flip_boost']
    family: PairwiseFamily = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.k < 2:
            raise DomainError(f"Число предметов K должно быть >= 2, получено {self.k}")
        if self.relevance_scale < 0 or self.sharpness < 0 or self.noise < 0:
            raise DomainError("Масштабы модели ранжирования должны быть неотрицательными")
        if not 0.0 <= self.flip_rate <= 1.0:
            raise DomainError(f"flip_rate должно лежать в [0, 1]: {self.flip_rate}")
        if self.flip_boost <= 0:
            raise DomainError(f"flip_boost должно быть положительным: {self.flip_boost}")
        object.__setattr__(self, 'family', PairwiseFamily(self.k))

    def to_dict(self) -> Dict[str, Any]:
        return {'k': self.k, 'relevance_scale': self.relevance_scale,
                'sharpness': self.sharpness, 'noise': self.noise,
                'flip_rate': self.flip_rate, 'flip_boost': self.flip_boost,
                'relevance_distribution': 'exponential'}


class RankingDraw(NamedTuple):
    label: Tuple[int, ...]
    scores: ScoreVector
    acc: AccuracyVector
    relevance: np.ndarray


def top1_probabilities(utilities: Sequence[float]) -> np.ndarray:
    """Вероятности оказаться первым: softmax полезностей"""
    return softmax(np.asarray(utilities, dtype=float))


def listnet_probability(utilities: Sequence[float], permutation: Sequence[int]) -> float:
    """
    P(pi) = prod_y exp(u_{pi(y)}) / sum_{l >= y} exp(u_{pi(l)})

    Args:
        utilities: Полезности предметов 1..K
        permutation: Предметы по позициям (с 1)
    """
    u = np.asarray(utilities, dtype=float)[np.asarray(permutation) - 1]
    probability = 1.0
    for position in range(len(u)):
        probability *= top1_probabilities(u[position:])[0]
    return float(probability)


def sample_plackett_luce(utilities: Sequence[float], rng: np.random.Generator) -> Tuple[int, ...]:
    """Перестановка из распределения Плакетта-Льюса (трюк Гумбеля)"""
    u = np.asarray(utilities, dtype=float)
    perturbed = u + rng.gumbel(size=len(u))
    return tuple(int(i) + 1 for i in np.argsort(-perturbed, kind='stable'))


def pair_query_probability(r_i: float, r_j: float, c1: float, c2: float) -> float:
    """1 - exp(-c1 min(r_i, r_j) (1 + c2 |r_i - r_j|))"""
    return float(1.0 - np.exp(-c1 * min(r_i, r_j) * (1.0 + c2 * abs(r_i - r_j))))


def sample_pair_queries(relevance: Sequence[float], params: QuerySamplerParams,
                        rng: np.random.Generator) -> List[Tuple[int, int]]:
    """
    Независимый отбор пар (i, j), i < j

    Relevances сдвигаются так, чтобы минимум был неотрицательным.
    """
    r = np.asarray(relevance, dtype=float)
    if len(r) and r.min() < 0:
        r = r - r.min()
    i, j = np.triu_indices(len(r), k=1)
    low = np.minimum(r[i], r[j])
    probabilities = 1.0 - np.exp(-params.c1 * low * (1.0 + params.c2 * np.abs(r[i] - r[j])))
    chosen = rng.random(len(i)) < probabilities
    return [(int(a) + 1, int(b) + 1) for a, b in zip(i[chosen], j[chosen])]


def gen_ranking_example(model: RankingModel, rng: np.random.Generator) -> RankingDraw:
    """
    Один экземпляр ранжирования

    Пара с уверенной ошибкой (доля flip_rate) получает оценку -flip_boost * s:
    знак неверен, а модуль завышен, точность pi^ остаётся sigmoid(|s|).

    Returns:
        RankingDraw: Истинная перестановка, оценки пар s_ij = u^_i - u^_j,
                     точности pi^_ij = sigmoid(|s_ij|) и латентные r
    """
    relevance = rng.exponential(model.relevance_scale, size=model.k)
    label = sample_plackett_luce(model.sharpness * relevance, rng)
    noisy = relevance + model.noise * rng.standard_normal(model.k)
    utilities = model.sharpness * noisy

    pairs = model.family.indices()
    if model.flip_rate > 0:
        flipped = rng.random(len(pairs)) < model.flip_rate
    else:
        flipped = np.zeros(len(pairs), dtype=bool)

    scores = {}
    accuracies = {}
    predictions = {}
    for (i, j), flip in zip(pairs, flipped):
        key = model.family.key((i, j))
        s = float(utilities[i - 1] - utilities[j - 1])
        if flip:
            s = -model.flip_boost * s
        scores[key] = s
        # Для пары из модели Плакетта-Льюса P(i выше j) = sigmoid(u_i - u_j)
        accuracies[key] = float(expit(abs(s)))
        predictions[key] = 1 if s >= 0 else -1
    return RankingDraw(label, ScoreVector(scores), AccuracyVector(predictions, accuracies), relevance)


def ranking_weak_example(model: RankingModel, params: QuerySamplerParams, seed: int, index: int,
                         example_id: Optional[str] = None) -> WeakExample:
    """
    Слабо размеченный пример ранжирования с непустым набором запросов

    Экземпляр перегенерируется, пока семплер не выберет хотя бы одну пару.

    Raises:
        DomainError: За max_attempts попыток запросы так и не выбраны
    """
    rng = seed_stream(seed, 'ranking', index)
    for _ in range(params.max_attempts):
        draw = gen_ranking_example(model, rng)
        pairs = sample_pair_queries(draw.relevance, params, rng)
        if pairs:
            break
    else:
        raise DomainError(f"Пример {index}: семплер не выбрал ни одной пары за {params.max_attempts} попыток")

    family = model.family
    answers = {family.key(pair): family.evaluate(pair, draw.label) for pair in pairs}
    return WeakExample(
        id=example_id or f"ranking-{index:06d}",
        family=family.kind,
        feedback=UserFeedback.from_queries(list(answers), answers),
        scores=draw.scores,
        acc=draw.acc,
        label=draw.label,
    )
