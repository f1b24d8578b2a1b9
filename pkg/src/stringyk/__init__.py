"""Exact stringy K-theory and Chen-Ruan invariants of finite orbifold models."""

from __future__ import annotations

__version__ = "0.1.0"

from .cyclotomic import Cyclotomic, angle_of, root_of_unity, sqrt_rational
from .errors import InvariantViolation
from .groups import FiniteGroup, FiniteGSet, GroupError, builtin, cyclic, dihedral, quaternion8, symmetric
from .characters import CharacterTable, VirtualCharacter, character_table, decompose
from .class_functions import ClassFunction, PairClassFunction
from .finite_orbifold import DelocalizedCharacter, FiniteOrbifold, KClass
from .local_model import UnitaryModel, obstruction_character, sector_data
from .orbisphere import OrbisphereModel, stringy_k_ring

__all__ = [
    "Cyclotomic",
    "angle_of",
    "root_of_unity",
    "sqrt_rational",
    "InvariantViolation",
    "FiniteGroup",
    "FiniteGSet",
    "GroupError",
    "builtin",
    "cyclic",
    "dihedral",
    "quaternion8",
    "symmetric",
    "CharacterTable",
    "VirtualCharacter",
    "character_table",
    "decompose",
    "ClassFunction",
    "PairClassFunction",
    "DelocalizedCharacter",
    "FiniteOrbifold",
    "KClass",
    "UnitaryModel",
    "obstruction_character",
    "sector_data",
    "OrbisphereModel",
    "stringy_k_ring",
]
