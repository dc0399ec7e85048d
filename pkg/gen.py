#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Генерация синтетического набора данных
Версия: 0.1.0
"""

import os
import sys
from typing import List, Optional

# Добавляем путь к модулям проекта
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import APP_VERSION, EXIT_CODES
from core.dataset import write_jsonl
from core.errors import DomainError, UsageError
from models.generator import TASKS, build_model, generate_examples, generator_metadata
from models.ranking import QuerySamplerParams
from utils.cli import build_parser, parse_arguments, run_command
from utils.io_utils import file_digest, read_json, write_json
from utils.logger import get_logger

logger = get_logger('gen')

MODEL_FLAGS = {
    'ranking': ('k', 'relevance_scale', 'sharpness', 'noise', 'flip_rate', 'flip_boost'),
    'tree': ('leaves', 'branching', 'base_concentration', 'anchor_concentration', 's_max'),
}
SAMPLER_FLAGS = ('c1', 'c2', 'a', 'b', 'c')


def create_parser():
    parser = build_parser('gen', 'генерация синтетического набора данных')
    parser.add_argument('--task', choices=TASKS, required=True, help='ranking или tree')
    parser.add_argument('--n', type=int, default=1000, help='Число примеров')
    parser.add_argument('--seed', type=int, default=0, help='Зерно генератора')
    parser.add_argument('--out', type=str, required=True, help='Выходной файл JSONL')
    parser.add_argument('--config', type=str, default=None,
                        help='JSON с разделами "model" и "sampler" (ключи командной строки важнее)')
    parser.add_argument('--jobs', type=int, default=1, help='Число процессов')
    parser.add_argument('--k', type=int, default=None, help='Число предметов (ranking)')
    parser.add_argument('--relevance-scale', type=float, default=None, dest='relevance_scale')
    parser.add_argument('--sharpness', type=float, default=None)
    parser.add_argument('--noise', type=float, default=None, help='Шум оценок (ranking)')
    parser.add_argument('--flip-rate', type=float, default=None, dest='flip_rate',
                        help='Доля пар с уверенной ошибкой оценки (ranking)')
    parser.add_argument('--flip-boost', type=float, default=None, dest='flip_boost')
    parser.add_argument('--leaves', type=int, default=None, help='Число листьев (tree)')
    parser.add_argument('--branching', type=int, default=None)
    parser.add_argument('--base-concentration', type=float, default=None, dest='base_concentration')
    parser.add_argument('--anchor-concentration', type=float, default=None, dest='anchor_concentration')
    parser.add_argument('--s-max', type=float, default=None, dest='s_max')
    for name in SAMPLER_FLAGS:
        parser.add_argument(f'--{name}', type=float, default=None, help=f'Параметр семплера {name}')
    return parser


def collect_settings(args):
    """
    Параметры модели и семплера: файл конфигурации, затем ключи командной строки

    Raises:
        UsageError: Некорректная конфигурация
    """
    model_params, sampler_params = {}, {}
    if args.config:
        document = read_json(args.config)
        if not isinstance(document, dict) or set(document) - {'model', 'sampler'}:
            raise UsageError("Конфигурация gen: ожидается объект с разделами model и sampler")
        model_params.update(document.get('model') or {})
        sampler_params.update(document.get('sampler') or {})
    for name in MODEL_FLAGS[args.task]:
        if getattr(args, name) is not None:
            model_params[name] = getattr(args, name)
    for name in SAMPLER_FLAGS:
        if getattr(args, name) is not None:
            sampler_params[name] = getattr(args, name)
    try:
        return build_model(args.task, model_params), QuerySamplerParams(**sampler_params)
    except (DomainError, TypeError) as e:
        raise UsageError(f"Некорректная конфигурация генератора: {e}")


def main(argv: Optional[List[str]] = None) -> int:
    """Главная функция генерации"""
    args, code = parse_arguments(create_parser(), argv)
    if args is None:
        return code

    def body() -> int:
        if args.n < 0:
            raise UsageError(f"Размер набора должен быть >= 0: {args.n}")
        if args.jobs < 1:
            raise UsageError("--jobs должно быть >= 1")
        model, sampler = collect_settings(args)
        logger.info(f"Задача: {args.task}, примеров: {args.n}, зерно: {args.seed}")

        examples = generate_examples(args.task, args.n, args.seed, model=model, sampler=sampler, jobs=args.jobs)
        count = write_jsonl(args.out, examples)

        meta = generator_metadata(args.task, args.n, args.seed, model, sampler)
        meta['digest'] = file_digest(args.out)
        meta['version'] = APP_VERSION
        write_json(f"{args.out}.meta.json", meta)

        logger.info(f"Записано примеров: {count} -> {args.out}")
        logger.info(f"Метаданные: {args.out}.meta.json")
        return EXIT_CODES['success']

    return run_command('Генерация данных', args, body)


if __name__ == '__main__':
    sys.exit(main())
