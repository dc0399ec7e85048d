#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Оценка результата калибровки на тестовом наборе
Версия: 0.1.0
"""

import os
import sys
from typing import List, Optional

import pandas as pd

# Добавляем путь к модулям проекта
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from analyzers.evaluation import evaluate_outcome
from calibrators import CalibrationOutcome
from config import EXIT_CODES
from core.dataset import read_jsonl
from models.generator import sidecar_family
from utils.cli import build_parser, parse_arguments, require_range, run_command
from utils.io_utils import canonical_json, file_digest, read_json, write_json
from utils.logger import get_logger

logger = get_logger('evaluate')


def create_parser():
    parser = build_parser('evaluate', 'оценка FPP и воздержания на тестовом наборе')
    parser.add_argument('--outcome', type=str, required=True, help='Результат калибровки JSON')
    parser.add_argument('--in', type=str, required=True, dest='input', help='Тестовый набор JSONL')
    parser.add_argument('--report', type=str, default=None, help='Файл отчёта (по умолчанию stdout)')
    parser.add_argument('--ecdf', type=str, default=None,
                        help='Префикс таблиц ECDF: <prefix>.loss.csv и <prefix>.abstention.csv')
    parser.add_argument('--alpha', type=float, default=None,
                        help='Уровень квантиля (по умолчанию из результата калибровки)')
    parser.add_argument('--format', choices=['json', 'csv'], default='json', help='Формат отчёта')
    return parser


def write_report(report, path: Optional[str], fmt: str) -> None:
    data = report.to_dict()
    if fmt == 'json':
        if path:
            write_json(path, data)
        else:
            print(canonical_json(data, indent=2))
        return
    # В CSV только скалярные поля
    row = {k: v for k, v in data.items() if not isinstance(v, (list, dict)) and v is not None}
    row['warnings'] = '; '.join(data['warnings'])
    frame = pd.DataFrame([row])
    if path:
        frame.to_csv(path, index=False)
    else:
        print(frame.to_csv(index=False), end='')


def main(argv: Optional[List[str]] = None) -> int:
    """Главная функция оценки"""
    args, code = parse_arguments(create_parser(), argv)
    if args is None:
        return code

    def body() -> int:
        require_range('--alpha', args.alpha, 0.0, 1.0)
        outcome = CalibrationOutcome.from_dict(read_json(args.outcome))
        examples = read_jsonl(args.input, sidecar_family(args.input))
        logger.info(f"Результат: {outcome.method}/{outcome.family}, тестовых примеров: {len(examples)}")

        report = evaluate_outcome(outcome, examples, alpha=args.alpha, digest=file_digest(args.input))
        write_report(report, args.report, args.format)

        if args.ecdf:
            report.loss_ecdf().to_csv(f"{args.ecdf}.loss.csv", index=False)
            report.abstention_ecdf().to_csv(f"{args.ecdf}.abstention.csv", index=False)
            logger.info(f"Таблицы ECDF: {args.ecdf}.loss.csv, {args.ecdf}.abstention.csv")

        logger.info(f"Квантиль потерь - delta: {report.loss_quantile_gap:.6f}")
        logger.info(f"Среднее воздержание: {report.mean_abstention:.6f}")
        return EXIT_CODES['success']

    return run_command('Оценка', args, body)


if __name__ == '__main__':
    sys.exit(main())
