"""cuspforge: exact invariants of plane curve cusps and Cremona replays."""

from cuspforge.invariants import (
    CharacteristicExponents,
    CurveProfile,
    CuspType,
    MultiplicitySequence,
    NewtonPairs,
    cbar_squared,
    char_to_multseq,
    char_to_newton,
    genus_check,
    multseq_delta,
    newton_to_char,
    validate_newton_pairs,
)

__all__ = [
    "CharacteristicExponents",
    "CurveProfile",
    "CuspType",
    "MultiplicitySequence",
    "NewtonPairs",
    "cbar_squared",
    "char_to_multseq",
    "char_to_newton",
    "genus_check",
    "multseq_delta",
    "newton_to_char",
    "validate_newton_pairs",
]
