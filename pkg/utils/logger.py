#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Настройка логирования
Версия: 0.1.0
"""

import logging
import sys
from typing import Optional

from config import (LOGGER_NAME, LOG_CONSOLE_FORMAT, LOG_FILE_FORMAT,
                    LOG_DATE_FORMAT)


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Получение логгера проекта

    Args:
        name: Имя подсистемы (None - корневой логгер проекта)

    Returns:
        logging.Logger: Логгер вида 'ProbeConformal.<name>'
    """
    if not name:
        return logging.getLogger(LOGGER_NAME)
    return logging.getLogger(f"{LOGGER_NAME}.{name}")


def setup_logging(verbose: bool = False, log_file: Optional[str] = None) -> logging.Logger:
    """
    Инициализация логирования для команд CLI

    Консоль получает сообщения вида "[INFO] ...", файл (если указан) -
    полный формат с временем и именем логгера.

    Args:
        verbose: Включить DEBUG
        log_file: Путь к файлу лога

    Returns:
        logging.Logger: Корневой логгер проекта
    """
    logger = get_logger()
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    logger.propagate = False

    # Повторный вызов не должен дублировать обработчики
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter(LOG_CONSOLE_FORMAT))
    logger.addHandler(console)

    if log_file:
        try:
            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(LOG_FILE_FORMAT, datefmt=LOG_DATE_FORMAT))
            logger.addHandler(file_handler)
            logger.debug(f"Лог файл: {log_file}")
        except OSError as e:
            logger.warning(f"Не удалось открыть файл лога: {e}")

    return logger


def log_banner(title: str, version: str) -> None:
    """Заголовок команды"""
    logger = get_logger()
    logger.info("=" * 60)
    logger.info(f"{title}")
    logger.info(f"Версия: {version}")
    logger.info("=" * 60)
