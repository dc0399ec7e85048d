#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Модели с известными вероятностями

IndependenceSimulator: пробы независимы, phi^_i верна с вероятностью pi_i.
BernoulliLossModel: потери на сетке с известным убывающим математическим ожиданием.
Версия: 0.1.0
"""

from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence

import numpy as np

from core.errors import DomainError
from core.loss import UserFeedback
from core.nested import AccuracyVector, bernoulli_threshold, eta_set


class IndependenceSimulator:
    """
    Экземпляр с известными pi: ответы пользователя согласуются с
    предсказанием phi^_i независимо с вероятностью pi_i
    """

    def __init__(self, accuracies: Dict[Hashable, float], predictions: Optional[Dict[Hashable, int]] = None):
        if not accuracies:
            raise DomainError("Нужна хотя бы одна проба")
        if predictions is None:
            predictions = {key: 1 for key in accuracies}
        self.acc = AccuracyVector(predictions, accuracies)
        self.keys: List[Hashable] = sorted(accuracies, key=str)
        self.pi = np.asarray([accuracies[k] for k in self.keys], dtype=float)
        self.pred = np.asarray([predictions[k] for k in self.keys], dtype=np.int64)

    @classmethod
    def random(cls, rng: np.random.Generator, probes: int = 20, low: float = 0.5) -> 'IndependenceSimulator':
        """Случайный экземпляр: pi_i ~ U(low, 1), случайные знаки предсказаний"""
        accuracies = {f"b:{i + 1}": float(v) for i, v in enumerate(rng.uniform(low, 1.0, size=probes))}
        predictions = {key: int(s) for key, s in zip(accuracies, rng.choice([-1, 1], size=probes))}
        return cls(accuracies, predictions)

    def draw_answers(self, rng: np.random.Generator) -> UserFeedback:
        correct = rng.random(len(self.keys)) < self.pi
        answers = np.where(correct, self.pred, -self.pred)
        return UserFeedback.from_queries(self.keys, {k: int(a) for k, a in zip(self.keys, answers)})

    def expected_fpp(self, delta_acc: float) -> float:
        """Точное E[FPP] множества C_{eta*}: средняя (1 - pi) по отвеченным пробам"""
        pred_set = eta_set(self.acc, bernoulli_threshold(self.acc, self.keys, delta_acc))
        answered = [i for i, k in enumerate(self.keys) if k in pred_set.answers]
        if not answered:
            return 0.0
        return float(np.mean(1.0 - self.pi[answered]))

    def mc_fpp(self, delta_acc: float, draws: int, rng: np.random.Generator) -> np.ndarray:
        """FPP множества C_{eta*} на draws независимых наборах ответов"""
        pred_set = eta_set(self.acc, bernoulli_threshold(self.acc, self.keys, delta_acc))
        answered = np.asarray([k in pred_set.answers for k in self.keys], dtype=bool)
        if not answered.any():
            return np.zeros(draws, dtype=float)
        correct = rng.random((draws, len(self.keys))) < self.pi[None, :]
        errors = (~correct[:, answered]).sum(axis=1)
        return errors / answered.sum()


@dataclass(frozen=True)
class BernoulliLossModel:
    """
    Потери l_jk = 1{U_j < mu(lambda_k)}, U_j ~ U(0, 1), mu(lambda) = start (1 - lambda)

    Ожидаемая потеря строго убывает по lambda; потери одного примера монотонны по сетке.
    """

    start: float = 0.4

    def __post_init__(self):
        if not 0.0 < self.start <= 1.0:
            raise DomainError(f"start должно лежать в (0, 1]: {self.start}")

    def expected_loss(self, grid: Sequence[float]) -> np.ndarray:
        return self.start * (1.0 - np.asarray(grid, dtype=float))

    def loss_matrix(self, n: int, grid: Sequence[float], rng: np.random.Generator) -> np.ndarray:
        """Целочисленная матрица потерь n x N"""
        u = rng.random(n)
        return (u[:, None] < self.expected_loss(grid)[None, :]).astype(np.int64)
