#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Прогон по сетке (alpha, delta, метод, семейство, зерно)
Версия: 0.1.0
"""

import math
import os
import sys
from typing import List, Optional

import pandas as pd

# Добавляем путь к модулям проекта
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from analyzers.sweep import cell_count, merge_config, ordering_fraction, run_sweep, summarize
from config import EXIT_CODES
from core.errors import UsageError
from utils.cli import build_parser, parse_arguments, run_command
from utils.io_utils import read_json, write_json
from utils.logger import get_logger

logger = get_logger('sweep')


def create_parser():
    parser = build_parser('sweep', 'прогон калибровки и оценки по сетке параметров')
    parser.add_argument('--config', type=str, default=None, help='JSON с поправками к сетке прогона')
    parser.add_argument('--out', type=str, required=True, help='Длинная таблица результатов')
    parser.add_argument('--seed', type=int, default=0, help='Базовое зерно')
    parser.add_argument('--jobs', type=int, default=1, help='Число процессов')
    parser.add_argument('--format', choices=['json', 'csv'], default='csv', help='Формат таблиц')
    return parser


def json_records(frame: pd.DataFrame) -> List[dict]:
    """Строки таблицы для JSON: NaN -> null, бесконечности строкой"""
    records = []
    for row in frame.to_dict(orient='records'):
        for key, value in row.items():
            if isinstance(value, float) and not math.isfinite(value):
                row[key] = None if math.isnan(value) else ('inf' if value > 0 else '-inf')
            elif hasattr(value, 'item'):
                row[key] = value.item()
        records.append(row)
    return records


def main(argv: Optional[List[str]] = None) -> int:
    """Главная функция прогона"""
    args, code = parse_arguments(create_parser(), argv)
    if args is None:
        return code

    def body() -> int:
        if args.jobs < 1:
            raise UsageError("--jobs должно быть >= 1")
        overrides = read_json(args.config) if args.config else {}
        if not isinstance(overrides, dict):
            raise UsageError("Конфигурация прогона должна быть объектом JSON")
        config = merge_config(overrides)
        logger.info(f"Ячеек с зёрнами: {cell_count(config)}")

        frame = run_sweep(config, base_seed=args.seed, jobs=args.jobs)
        summary = summarize(frame)
        base, _ = os.path.splitext(args.out)
        summary_path = f"{base}.summary.{args.format}"
        if args.format == 'csv':
            frame.to_csv(args.out, index=False)
            summary.to_csv(summary_path, index=False)
        else:
            write_json(args.out, json_records(frame))
            write_json(summary_path, json_records(summary))

        failed = int((frame['status'] == 'error').sum())
        if failed:
            logger.warning(f"Ячеек с ошибкой: {failed}")
        for family in config['families']:
            order = ordering_fraction(summary, family=family)
            if order['cells'] == 0:
                continue
            logger.info(f"{family}: доля ячеек с зазором stepdown <= fst-quantile <= stepup: "
                        f"{order['gap']:.2f} из {order['cells']}")
            logger.info(f"{family}: доля ячеек с обратным порядком воздержания: {order['abstention']:.2f}")
        logger.info(f"Таблицы: {args.out}, {summary_path}")
        return EXIT_CODES['success']

    return run_command('Прогон по сетке', args, body)


if __name__ == '__main__':
    sys.exit(main())
