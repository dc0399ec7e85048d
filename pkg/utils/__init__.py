"""
ProbeConformal - Утилиты
Логирование и канонический ввод-вывод JSON/JSONL
"""

from .logger import get_logger, setup_logging, log_banner
from .io_utils import canonical_json, write_json, read_json, file_digest

__all__ = [
    'get_logger',
    'setup_logging',
    'log_banner',
    'canonical_json',
    'write_json',
    'read_json',
    'file_digest'
]
