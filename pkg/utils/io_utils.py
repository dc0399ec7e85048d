#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Канонический JSON
Отсортированные ключи, UTF-8, float с 17 значащими цифрами
Версия: 0.1.0
"""

import hashlib
import json
import math
import os
from typing import Any, Optional

from core.errors import DataError


FLOAT_DIGITS = 17


def format_float(value: float) -> str:
    """
    Запись float с 17 значащими цифрами (всегда восстанавливает то же значение)

    Raises:
        ValueError: NaN или бесконечность
    """
    if not math.isfinite(value):
        raise ValueError(f"Число {value!r} не представимо в JSON")
    text = format(value, f'.{FLOAT_DIGITS}g')
    if not any(c in text for c in '.e'):
        text += '.0'
    return text


def _encode(obj: Any, indent: Optional[int], level: int) -> str:
    if obj is None:
        return 'null'
    if isinstance(obj, bool):
        return 'true' if obj else 'false'
    if isinstance(obj, int):
        return str(int(obj))
    if isinstance(obj, float):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)

    if isinstance(obj, dict):
        items = []
        for key in sorted(obj, key=str):
            if not isinstance(key, (str, int)) or isinstance(key, bool):
                raise TypeError(f"Ключ JSON должен быть строкой: {key!r}")
            name = json.dumps(str(key), ensure_ascii=False)
            items.append(f"{name}{': ' if indent else ':'}{_encode(obj[key], indent, level + 1)}")
        brackets = '{}'
    elif isinstance(obj, (list, tuple)):
        items = [_encode(item, indent, level + 1) for item in obj]
        brackets = '[]'
    else:
        raise TypeError(f"Тип {type(obj).__name__} не сериализуется в JSON")

    if not items:
        return brackets
    if not indent:
        return brackets[0] + ','.join(items) + brackets[1]
    inner = '\n' + ' ' * (indent * (level + 1))
    return brackets[0] + inner + (',' + inner).join(items) + '\n' + ' ' * (indent * level) + brackets[1]


def canonical_json(obj: Any, indent: int = None) -> str:
    """
    Детерминированная сериализация

    Ключи сортируются, float пишется с 17 значащими цифрами,
    поэтому два прогона дают одинаковые байты.
    """
    return _encode(obj, indent, 0)


def write_json(path: str, obj: Any) -> None:
    """Запись JSON документа"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(canonical_json(obj, indent=2))
        f.write('\n')


def read_json(path: str) -> Any:
    """Чтение JSON документа"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise DataError(f"Не удалось прочитать {path}: {e}")
    except json.JSONDecodeError as e:
        raise DataError(f"Некорректный JSON в {path}: {e}", line=e.lineno)


def file_digest(path: str) -> str:
    """SHA-256 содержимого файла"""
    sha = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            sha.update(chunk)
    return f"sha256:{sha.hexdigest()}"
