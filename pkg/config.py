#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Конфигурация проекта
Версия: 0.1.0
"""

# Версия приложения
APP_VERSION = "0.1.0"
APP_NAME = "ProbeConformal"
APP_DESCRIPTION = ("Калибровка probe-adapted предсказательных множеств "
                   "при слабой разметке с контролем FPP")

# Логирование
LOGGER_NAME = "ProbeConformal"
LOG_CONSOLE_FORMAT = "[%(levelname)s] %(message)s"
LOG_FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Коды выхода команд
EXIT_CODES = {
    "success": 0,
    "usage": 2,
    "data": 3,
    "suite_failure": 4
}

# Префиксы строковых ключей проб
PROBE_KEY_PREFIXES = {
    "pairwise": "p",
    "rank-position": "r",
    "tree": "t",
    "bitvector": "b"
}

# Число числовых частей ключа: "p:1-2" - две, "t:5" - одна
PROBE_KEY_PARTS = {
    "pairwise": 2,
    "rank-position": 2,
    "tree": 1,
    "bitvector": 1
}

# Теги семейств проб в записях данных
FAMILY_TAGS = list(PROBE_KEY_PREFIXES)

# Виды вложенных семейств и методы калибровки
NESTED_FAMILIES = ["threshold", "bernoulli"]
CALIBRATION_METHODS = ["stepdown", "stepup", "fst", "fst-quantile", "nominal"]

# Генератор задачи ранжирования
RANKING_CONFIG = {
    "k": 8,
    "relevance_scale": 10.0,   # среднее экспоненциального распределения r
    "sharpness": 0.3,          # полезности ListNet: u = sharpness * r
    "noise": 0.5,              # sigma гауссова шума на r
    "flip_rate": 0.0,          # доля пар с уверенной ошибкой оценки
    "flip_boost": 3.0,         # такая пара получает оценку -flip_boost * s
}

# Генератор задачи классификации по дереву
TREE_CONFIG = {
    "leaves": 1000,
    "branching": 8,
    "base_concentration": 0.05,
    "anchor_concentration": 5.0,
    "s_max": 30.0,
}

# Семплеры запросов пользователя
QUERY_SAMPLER_CONFIG = {
    "ranking": {"c1": 0.05, "c2": 0.2},
    "tree": {"a": 2.0, "b": 0.1, "c": 1.5},
    "max_attempts": 1000,
}

# Калибровка
CALIBRATION_CONFIG = {
    "grid_size": 100,
    "epsilon_factor": 1e-6,
    "alpha_fst": 0.1,
    "bernoulli_grid_size": 100,
}

# Оценка
EVAL_CONFIG = {
    "accuracy_bins": 10,
}

# Прогон по сетке параметров
SWEEP_CONFIG = {
    "task": "ranking",
    "alphas": [0.1, 0.15, 0.2],
    "deltas": [0.1, 0.15, 0.2, 0.25],
    "methods": ["stepdown", "fst-quantile", "stepup"],
    "families": ["threshold", "bernoulli"],
    "seeds": 10,
    "n_calibration": 2000,
    "n_test": 1000,
    "alpha_fst": 0.1,
    "grid_size": 1000,
    # 1% пар с уверенной ошибкой: трассы потерь немонотонны
    "generator": {"flip_rate": 0.01},
}

# Пределы переборных оракулов
ORACLE_LIMITS = {
    "max_probes": 32,
    "max_leaves": 64,
    "max_space_size": 5000,
    "min_trials": 100,
}

# Набор самопроверки
SELFCHECK_CONFIG = {
    "seed": 20240601,
    "oracle_cases": 1000,
    "oracle_max_probes": 20,
    "coverage_trials": 500,
    "coverage_n": [19, 200],
    "coverage_alpha": 0.1,
    "coverage_delta": 0.2,
    # n = 9 при alpha = 0.1: ранг k = n, сдвиг k - 1 снижает покрытие до ~0.8
    "sensitivity_n": 9,
    "sensitivity_trials": 2000,
    "sensitivity_delta": 0.0,
    "sensitivity_model": {"sharpness": 0.1},
    "stepup_trials": 300,
    "stepup_n": 100,
    "stepup_holdout": 100,
    "fst_trials": 500,
    "fst_n": 100,
    "fst_grid_size": 50,
    "bernoulli_instances": 20,
    "bernoulli_draws": 10000,
    "tree_query_instances": 200,
}
