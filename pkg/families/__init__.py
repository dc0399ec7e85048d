"""
ProbeConformal - Семейства проб
Пространства меток и ±1-значные пробы над ними
"""

from typing import Any, Dict

from core.errors import DomainError
from .base import ProbeFamily
from .pairwise import PairwiseFamily
from .rank_position import RankPositionFamily
from .tree import TreeAncestorFamily
from .bitvector import BitVectorFamily

FAMILY_CLASSES = {
    'pairwise': PairwiseFamily,
    'rank-position': RankPositionFamily,
    'tree': TreeAncestorFamily,
    'bitvector': BitVectorFamily
}


def build_family(kind: str, **params) -> ProbeFamily:
    """
    Создание семейства по строковому тегу

    Raises:
        DomainError: Неизвестный тег
    """
    cls = FAMILY_CLASSES.get(kind)
    if cls is None:
        raise DomainError(f"Неизвестное семейство проб: {kind}")
    return cls(**params)


def family_from_dict(data: Dict[str, Any]) -> ProbeFamily:
    """Восстановление семейства из to_dict()"""
    params = {k: v for k, v in data.items() if k != 'kind'}
    return build_family(data.get('kind', ''), **params)


__all__ = [
    'ProbeFamily',
    'PairwiseFamily',
    'RankPositionFamily',
    'TreeAncestorFamily',
    'BitVectorFamily',
    'FAMILY_CLASSES',
    'build_family',
    'family_from_dict'
]
