#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Исключения
Версия: 0.1.0
"""

from typing import Optional


class ProbeConformalError(Exception):
    """Базовое исключение проекта"""


class DomainError(ProbeConformalError, ValueError):
    """Аргумент вне области определения операции"""


class CapacityError(ProbeConformalError):
    """Экземпляр слишком велик для переборной операции"""


class UsageError(ProbeConformalError):
    """Некорректные параметры команды"""


class DataError(ProbeConformalError):
    """Некорректные входные данные (с номером строки, если известен)"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"строка {line}: {message}"
        super().__init__(message)
