#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Генерация наборов данных
Версия: 0.1.0
"""

import concurrent.futures
import os
from typing import Any, Dict, List, Optional, Tuple

from core.dataset import WeakExample
from core.errors import DataError, DomainError
from families import PairwiseFamily, ProbeFamily, family_from_dict
from utils.io_utils import read_json
from utils.logger import get_logger
from .ranking import QuerySamplerParams, RankingModel, ranking_weak_example
from .tree import TreeModel, tree_weak_example

logger = get_logger('models')

TASKS = ('ranking', 'tree')


def build_model(task: str, params: Optional[Dict[str, Any]] = None):
    """
    Модель по имени задачи и словарю параметров

    Raises:
        DomainError: Неизвестная задача или параметры
    """
    params = dict(params or {})
    try:
        if task == 'ranking':
            return RankingModel(**params)
        if task == 'tree':
            return TreeModel(**params)
    except TypeError as e:
        raise DomainError(f"Некорректные параметры модели {task}: {e}")
    raise DomainError(f"Неизвестная задача: {task}")


def _generate_range(task: str, model, sampler: QuerySamplerParams, seed: int,
                    start: int, stop: int) -> List[WeakExample]:
    make = ranking_weak_example if task == 'ranking' else tree_weak_example
    return [make(model, sampler, seed, index) for index in range(start, stop)]


def generate_examples(task: str, size: int, seed: int, model=None,
                      sampler: Optional[QuerySamplerParams] = None, jobs: int = 1) -> List[WeakExample]:
    """
    Генерация size примеров; пример i зависит только от (seed, i)

    Args:
        task: ranking или tree
        size: Число примеров (>= 0)
        seed: Зерно эксперимента
        model: Модель задачи (по умолчанию из конфигурации)
        sampler: Параметры семплера запросов
        jobs: Число процессов

    Returns:
        List[WeakExample]: Примеры в порядке номеров
    """
    if task not in TASKS:
        raise DomainError(f"Неизвестная задача: {task}")
    if size < 0:
        raise DomainError(f"Размер набора должен быть >= 0: {size}")
    model = model if model is not None else build_model(task)
    sampler = sampler or QuerySamplerParams()

    if jobs <= 1 or size < 2 * jobs:
        return _generate_range(task, model, sampler, seed, 0, size)

    bounds = [size * w // jobs for w in range(jobs + 1)]
    logger.debug(f"Генерация {size} примеров в {jobs} процессах")
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
        futures = [executor.submit(_generate_range, task, model, sampler, seed, lo, hi)
                   for lo, hi in zip(bounds, bounds[1:])]
        chunks = [future.result() for future in futures]
    return [example for chunk in chunks for example in chunk]


def generator_metadata(task: str, size: int, seed: int, model, sampler: QuerySamplerParams) -> Dict[str, Any]:
    """Метаданные генерации: конфигурация, зерно и дерево"""
    meta = {
        'task': task,
        'size': size,
        'seed': seed,
        'model': model.to_dict(),
        'sampler': sampler.to_dict(),
        'rng': 'numpy Philox + SeedSequence(seed, task, index)',
    }
    if task == 'tree':
        meta['tree'] = model.tree.to_dict()
    else:
        meta['note'] = 'relevances are synthetic stand-ins drawn from an exponential distribution'
    return meta


def split_examples(examples: List[WeakExample], first: int) -> Tuple[List[WeakExample], List[WeakExample]]:
    """Разбиение на первые first примеров и остаток"""
    return list(examples[:first]), list(examples[first:])


def sidecar_family(path: str) -> Optional[ProbeFamily]:
    """
    Семейство проб набора по метаданным <path>.meta.json

    Returns:
        Optional[ProbeFamily]: Попарное семейство с K или дерево; None без метаданных
    """
    meta_path = f"{path}.meta.json"
    if not os.path.exists(meta_path):
        return None
    meta = read_json(meta_path)
    try:
        if meta.get('task') == 'tree':
            return family_from_dict(meta['tree'])
        if meta.get('task') == 'ranking':
            return PairwiseFamily(meta['model']['k'])
    except (KeyError, TypeError, DomainError) as e:
        raise DataError(f"Некорректные метаданные {meta_path}: {e}")
    return None
