#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Общие части команд
Разбор аргументов, ведение лога и перевод исключений в коды выхода
Версия: 0.1.0
"""

import argparse
from typing import Callable, List, Optional, Tuple

from config import APP_NAME, APP_VERSION, EXIT_CODES
from core.errors import ProbeConformalError, UsageError
from .logger import get_logger, log_banner, setup_logging

logger = get_logger('cli')


def build_parser(command: str, description: str) -> argparse.ArgumentParser:
    """Парсер команды с общими ключами --verbose, --log-file и --version"""
    parser = argparse.ArgumentParser(prog=command, description=f"{APP_NAME} - {description}")
    parser.add_argument('--verbose', action='store_true', help='Подробный вывод (DEBUG)')
    parser.add_argument('--log-file', type=str, default=None, help='Файл лога')
    parser.add_argument('--version', action='version', version=f'{APP_NAME} {APP_VERSION}')
    return parser


def parse_arguments(parser: argparse.ArgumentParser,
                    argv: Optional[List[str]]) -> Tuple[Optional[argparse.Namespace], Optional[int]]:
    """
    Разбор без завершения процесса

    Returns:
        Tuple: (аргументы, None) или (None, код выхода) после --help/--version/ошибки
    """
    try:
        return parser.parse_args(argv), None
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else EXIT_CODES['usage']
        return None, code


def run_command(title: str, args: argparse.Namespace, body: Callable[[], int]) -> int:
    """
    Выполнение тела команды с переводом исключений в коды выхода

    UsageError - 2; ошибки данных, ввода-вывода, области определения и
    ёмкости - 3.
    """
    setup_logging(args.verbose, args.log_file)
    log_banner(f"{APP_NAME} - {title}", APP_VERSION)
    try:
        return body()
    except UsageError as e:
        logger.error(str(e))
        return EXIT_CODES['usage']
    except ProbeConformalError as e:
        logger.error(str(e))
        return EXIT_CODES['data']
    except OSError as e:
        logger.error(f"Ошибка ввода-вывода: {e}")
        return EXIT_CODES['data']


def require_range(name: str, value: Optional[float], low: float, high: float,
                  closed: bool = False) -> None:
    """
    Проверка параметра командной строки

    Raises:
        UsageError: Значение вне (low, high) или [low, high] при closed
    """
    if value is None:
        return
    inside = low <= value <= high if closed else low < value < high
    if not inside:
        brackets = f"[{low}, {high}]" if closed else f"({low}, {high})"
        raise UsageError(f"{name} должно лежать в {brackets}: {value}")
