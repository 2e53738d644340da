"""Permutation group structure and subgroups generated by Engel words."""

from .config import Thresholds, get_thresholds, set_thresholds
from .errors import EngelForgeError, InvalidInputError, NotSolubleError, ParseError, TooLargeError
from .group import GroupHom, PermGroup, action_hom, build_group, coset_action, quotient
from .perm import Permutation, commutator, compose, conjugate, engel_commutator, inverse

__version__ = "0.1.0"

__all__ = [
    "Thresholds", "get_thresholds", "set_thresholds",
    "EngelForgeError", "InvalidInputError", "NotSolubleError", "ParseError", "TooLargeError",
    "GroupHom", "PermGroup", "action_hom", "build_group", "coset_action", "quotient",
    "Permutation", "commutator", "compose", "conjugate", "engel_commutator", "inverse",
]
