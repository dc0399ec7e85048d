#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Слабо размеченные примеры и формат JSONL
Версия: 0.1.0
"""

import json
import os
import re
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional

from config import FAMILY_TAGS, PROBE_KEY_PARTS, PROBE_KEY_PREFIXES
from .errors import DataError, DomainError
from .loss import UserFeedback
from .nested import AccuracyVector, ScoreVector


@dataclass(frozen=True)
class WeakExample:
    """Один экземпляр: оценки проб, ответы пользователя и (для оракулов) истинная метка"""

    id: str
    family: str
    feedback: UserFeedback
    scores: Optional[ScoreVector] = None
    acc: Optional[AccuracyVector] = None
    label: Any = None

    def __post_init__(self):
        if self.family not in FAMILY_TAGS:
            raise DomainError(f"Неизвестный тег семейства: {self.family}")
        if self.scores is None and self.acc is None:
            raise DomainError(f"Пример {self.id}: нужны scores или acc + pred")
        if len(self.feedback) == 0:
            raise DomainError(f"Пример {self.id}: нужен хотя бы один запрос")

    def to_record(self) -> Dict[str, Any]:
        """Запись WeakExampleRecord"""
        record = {
            'id': self.id,
            'family': self.family,
            'queries': sorted(self.feedback.queries),
            'answers': dict(self.feedback.answers),
        }
        if self.scores is not None:
            record['scores'] = dict(self.scores.scores)
        if self.acc is not None:
            record['acc'] = dict(self.acc.accuracies)
            record['pred'] = dict(self.acc.predictions)
        if self.label is not None:
            record['label'] = list(self.label) if isinstance(self.label, tuple) else self.label
        return record


# Калибровочная выборка: однородный по семейству проб список примеров
CalibSample = List[WeakExample]


KEY_PATTERNS = {
    tag: re.compile(re.escape(PROBE_KEY_PREFIXES[tag]) + ':' + '-'.join([r'\d+'] * PROBE_KEY_PARTS[tag]))
    for tag in FAMILY_TAGS
}

KEYED_FIELDS = ('queries', 'answers', 'scores', 'acc', 'pred')


def check_record_keys(record: Dict[str, Any], line: Optional[int] = None, index_family=None) -> None:
    """
    Ключи проб во всех полях записи должны относиться к её семейству

    Args:
        record: Запись с проверенным тегом family
        line: Номер строки для сообщения
        index_family: Семейство с parse_key (K или дерево известны) для проверки индексов

    Raises:
        DataError: Чужой или неразборный ключ
    """
    tag = record.get('family')
    if tag not in KEY_PATTERNS:
        raise DataError(f"Неизвестный тег семейства: {tag}", line)
    if index_family is not None and index_family.kind != tag:
        raise DataError(f"Семейство записи {tag} не совпадает с семейством набора {index_family.kind}", line)
    pattern = KEY_PATTERNS[tag]
    for name in KEYED_FIELDS:
        keys = record.get(name)
        if keys is None:
            continue
        for key in keys:
            if not isinstance(key, str) or pattern.fullmatch(key) is None:
                raise DataError(f"Поле {name}: ключ {key!r} не относится к семейству {tag}", line)
            if index_family is not None:
                try:
                    index_family.parse_key(key)
                except DomainError as e:
                    raise DataError(f"Поле {name}: {e}", line)


def parse_record(record: Dict[str, Any], line: Optional[int] = None, index_family=None) -> WeakExample:
    """
    Разбор записи WeakExampleRecord

    Args:
        record: JSON-объект записи
        line: Номер строки файла
        index_family: Семейство проб набора, если известно (проверка индексов)

    Raises:
        DataError: Нарушена схема (с номером строки)
    """
    if not isinstance(record, dict):
        raise DataError("Запись должна быть JSON-объектом", line)
    try:
        queries = record['queries']
        answers = record['answers']
        if not isinstance(queries, list) or not isinstance(answers, dict):
            raise DataError("Поля queries/answers имеют неверный тип", line)
        if len(queries) != len(set(queries)):
            raise DataError("Повторяющиеся запросы", line)
        if not queries:
            raise DataError("Пример без запросов отклонён", line)
        for name in ('scores', 'acc', 'pred'):
            if record.get(name) is not None and not isinstance(record[name], dict):
                raise DataError(f"Поле {name} должно быть объектом", line)
        check_record_keys(record, line, index_family)
        feedback = UserFeedback.from_queries(queries, answers)
        scores = ScoreVector(record['scores']) if record.get('scores') is not None else None
        acc = None
        if record.get('acc') is not None or record.get('pred') is not None:
            if record.get('acc') is None or record.get('pred') is None:
                raise DataError("Поля acc и pred задаются только вместе", line)
            acc = AccuracyVector(record['pred'], record['acc'])
        label = record.get('label')
        if isinstance(label, list):
            label = tuple(label)
        return WeakExample(id=str(record['id']), family=record['family'], feedback=feedback,
                           scores=scores, acc=acc, label=label)
    except KeyError as e:
        raise DataError(f"Нет обязательного поля {e}", line)
    except (DomainError, TypeError, ValueError) as e:
        raise DataError(str(e), line)


def read_jsonl(path: str, index_family=None) -> List[WeakExample]:
    """
    Чтение набора данных

    Args:
        path: Путь к JSONL
        index_family: Семейство проб набора для проверки индексов (необязательно)

    Raises:
        DataError: Ошибка чтения или разбора (с номером строки)
    """
    examples = []
    try:
        with open(path, 'r', encoding='utf-8') as f:
            for line_no, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as e:
                    raise DataError(f"Некорректный JSON: {e.msg}", line_no)
                examples.append(parse_record(record, line_no, index_family))
    except OSError as e:
        raise DataError(f"Не удалось прочитать {path}: {e}")
    return examples


def write_jsonl(path: str, examples: Iterable[WeakExample]) -> int:
    """
    Запись набора данных: одна запись на строку, ключи отсортированы

    Returns:
        int: Число записанных примеров
    """
    from utils.io_utils import canonical_json

    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    count = 0
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for example in examples:
            f.write(canonical_json(example.to_record()))
            f.write('\n')
            count += 1
    return count


def check_homogeneous(examples: CalibSample) -> str:
    """
    Проверка однородности выборки по семейству проб

    Returns:
        str: Общий тег семейства

    Raises:
        DataError: Пустая или смешанная выборка
    """
    if not examples:
        raise DataError("Пустая выборка")
    tags = {ex.family for ex in examples}
    if len(tags) != 1:
        raise DataError(f"Смешанные семейства проб в выборке: {sorted(tags)}")
    return tags.pop()
