#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
ProbeConformal - Главная точка входа
Версия: 0.1.0
"""

import os
import sys
from typing import List, Optional

# Добавляем путь к модулям проекта
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import APP_DESCRIPTION, APP_NAME, APP_VERSION, EXIT_CODES

COMMANDS = {
    'gen': 'Генерация синтетического набора данных',
    'calibrate': 'Калибровка параметра вложенного семейства',
    'evaluate': 'Оценка результата калибровки на тестовом наборе',
    'sweep': 'Прогон по сетке параметров',
    'selfcheck': 'Сверка с оракулами и проверка гарантий',
}


def print_help():
    """Вывод справки"""
    print("=" * 60)
    print(f"{APP_NAME} v{APP_VERSION}")
    print(APP_DESCRIPTION)
    print("=" * 60)
    print()
    print("Использование:")
    print("  python main.py <команда> [ключи]")
    print("  python main.py <команда> --help")
    print()
    print("Команды:")
    for name, description in COMMANDS.items():
        print(f"  {name:<10} - {description}")


def main(argv: Optional[List[str]] = None) -> int:
    """Главная функция"""
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ('--help', '-h'):
        print_help()
        return EXIT_CODES['success'] if argv else EXIT_CODES['usage']
    if argv[0] in ('--version', '-v'):
        print(f"Версия: {APP_VERSION}")
        return EXIT_CODES['success']

    command, rest = argv[0], argv[1:]
    if command not in COMMANDS:
        print(f"[ERROR] Неизвестная команда: {command}", file=sys.stderr)
        print_help()
        return EXIT_CODES['usage']

    # Модули команд импортируются по требованию
    if command == 'gen':
        from gen import main as run
    elif command == 'calibrate':
        from calibrate import main as run
    elif command == 'evaluate':
        from evaluate import main as run
    elif command == 'sweep':
        from sweep import main as run
    else:
        from selfcheck import main as run
    return run(rest)


if __name__ == '__main__':
    sys.exit(main())
