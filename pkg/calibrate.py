#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Калибровка параметра вложенного семейства
Версия: 0.1.0
"""

import argparse
import os
import sys
from typing import List, Optional

# Добавляем путь к модулям проекта
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from calibrators import get_calibrator
from config import CALIBRATION_CONFIG, CALIBRATION_METHODS, EXIT_CODES, NESTED_FAMILIES
from core.dataset import read_jsonl
from core.errors import DataError, UsageError
from models.generator import sidecar_family
from utils.cli import build_parser, parse_arguments, require_range, run_command
from utils.io_utils import file_digest, write_json
from utils.logger import get_logger

logger = get_logger('calibrate')

FAMILY_HELP = ("threshold: t = lambda, отвечаются пробы с |s| > lambda; "
               "bernoulli: t = delta_acc, порог по оценкам точности. "
               "Для bernoulli и метода nominal уровень потерь --delta переводится "
               "в номинальную точность delta_acc = 1 - delta")


def create_parser():
    parser = build_parser('calibrate', 'калибровка probe-adapted множеств')
    parser.add_argument('--method', choices=CALIBRATION_METHODS, required=True,
                        help='stepdown, stepup, fst, fst-quantile или nominal')
    parser.add_argument('--family', choices=NESTED_FAMILIES, default='threshold', help=FAMILY_HELP)
    parser.add_argument('--alpha', type=float, default=None,
                        help='Уровень квантиля 1 - alpha (stepdown, stepup, fst-quantile)')
    parser.add_argument('--delta', type=float, required=True, help='Целевой уровень потерь FPP')
    parser.add_argument('--epsilon', type=float, default=None,
                        help='Сдвиг stepup (по умолчанию 1e-6 размаха оценок)')
    parser.add_argument('--alpha-fst', type=float, default=CALIBRATION_CONFIG['alpha_fst'], dest='alpha_fst',
                        help='Уровень FST')
    parser.add_argument('--grid-size', type=int, default=CALIBRATION_CONFIG['grid_size'], dest='grid_size',
                        help='Размер сетки FST')
    parser.add_argument('--in', type=str, required=True, dest='input', help='Калибровочный набор JSONL')
    parser.add_argument('--holdout', type=str, default=None,
                        help='Отложенный набор JSONL для оценки события ошибки stepup')
    parser.add_argument('--out', type=str, required=True, help='Файл результата JSON')
    parser.add_argument('--rank-offset', type=int, default=0, dest='rank_offset', help=argparse.SUPPRESS)
    return parser


def validate(args) -> None:
    """
    Проверка диапазонов параметров

    Raises:
        UsageError: Параметр вне допустимого диапазона
    """
    require_range('--alpha', args.alpha, 0.0, 1.0)
    require_range('--delta', args.delta, 0.0, 1.0, closed=True)
    if args.method == 'fst':
        # p-значение HB для ожидаемой потери определено только при 0 < delta < 1
        require_range('--delta', args.delta, 0.0, 1.0)
    require_range('--alpha-fst', args.alpha_fst, 0.0, 1.0)
    if args.epsilon is not None and args.epsilon <= 0:
        raise UsageError(f"--epsilon должно быть > 0: {args.epsilon}")
    if args.grid_size < 1:
        raise UsageError(f"--grid-size должно быть >= 1: {args.grid_size}")
    if args.method in ('stepdown', 'stepup', 'fst-quantile') and args.alpha is None:
        raise UsageError(f"Метод {args.method} требует --alpha")
    if args.method == 'nominal' and args.family != 'bernoulli':
        raise UsageError("Метод nominal определён только для семейства bernoulli")
    if args.holdout and args.method != 'stepup':
        raise UsageError("--holdout используется только методом stepup")


def main(argv: Optional[List[str]] = None) -> int:
    """Главная функция калибровки"""
    args, code = parse_arguments(create_parser(), argv)
    if args is None:
        return code

    def body() -> int:
        validate(args)
        examples = read_jsonl(args.input, sidecar_family(args.input))
        if not examples and args.method != 'nominal':
            raise DataError(f"Пустой калибровочный набор: {args.input}")
        holdout = read_jsonl(args.holdout, sidecar_family(args.holdout)) if args.holdout else None
        logger.info(f"Метод: {args.method}, семейство: {args.family}, n = {len(examples)}")

        calibrator = get_calibrator(args.method, args.family, args.delta, alpha=args.alpha,
                                    epsilon=args.epsilon, alpha_fst=args.alpha_fst,
                                    grid_size=args.grid_size, holdout=holdout,
                                    rank_offset=args.rank_offset)
        outcome = calibrator.calibrate(examples, created_from=file_digest(args.input))
        write_json(args.out, outcome.to_dict())

        if outcome.warning:
            logger.warning(outcome.warning)
        logger.info(f"Параметр: {outcome.parameter}")
        logger.info(f"Результат: {args.out}")
        return EXIT_CODES['success']

    return run_command('Калибровка', args, body)


if __name__ == '__main__':
    sys.exit(main())
