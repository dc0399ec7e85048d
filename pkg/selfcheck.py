#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Набор самопроверки
Версия: 0.1.0
"""

import argparse
import os
import sys
from typing import List, Optional

# Добавляем путь к модулям проекта
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from analyzers.selfcheck import run_selfcheck
from config import EXIT_CODES, SELFCHECK_CONFIG
from core.errors import UsageError
from utils.cli import build_parser, parse_arguments, run_command
from utils.io_utils import canonical_json, write_json
from utils.logger import get_logger

logger = get_logger('selfcheck')


def create_parser():
    parser = build_parser('selfcheck', 'сверка с оракулами и проверка гарантий')
    parser.add_argument('--seed', type=int, default=SELFCHECK_CONFIG['seed'], help='Зерно набора')
    parser.add_argument('--trials', type=int, default=None,
                        help='Число испытаний Монте-Карло для проверок гарантий '
                             '(прогон чувствительности step-down использует sensitivity_trials)')
    parser.add_argument('--only', type=str, nargs='+', default=None, help='Запустить только указанные проверки')
    parser.add_argument('--report', type=str, default=None, help='Файл отчёта JSON (по умолчанию stdout)')
    parser.add_argument('--jobs', type=int, default=1, help='Число процессов')
    parser.add_argument('--inject-quantile-fault', action='store_true', dest='inject_fault',
                        help=argparse.SUPPRESS)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Главная функция самопроверки"""
    args, code = parse_arguments(create_parser(), argv)
    if args is None:
        return code

    def body() -> int:
        if args.jobs < 1:
            raise UsageError("--jobs должно быть >= 1")
        overrides = {'seed': args.seed}
        if args.trials is not None:
            overrides['coverage_trials'] = args.trials
            overrides['stepup_trials'] = args.trials
            overrides['fst_trials'] = args.trials
        rank_offset = -1 if args.inject_fault else 0
        if rank_offset:
            logger.warning("Внедрён дефект квантиля: ранг k - 1")

        report = run_selfcheck(overrides, only=args.only, rank_offset=rank_offset, jobs=args.jobs)
        if args.report:
            write_json(args.report, report)
            logger.info(f"Отчёт: {args.report}")
        else:
            print(canonical_json(report, indent=2))

        failed = [name for name, check in report['checks'].items() if not check['passed']]
        if failed:
            logger.error(f"Не пройдены: {', '.join(failed)}")
            return EXIT_CODES['suite_failure']
        logger.info("Все проверки пройдены")
        return EXIT_CODES['success']

    return run_command('Самопроверка', args, body)


if __name__ == '__main__':
    sys.exit(main())
