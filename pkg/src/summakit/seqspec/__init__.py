"""Finite descriptions of infinite sequences and index sets, plus their text syntax."""

from .schedule import BlockSchedule, Phase, PhaseLength
from .sets import (
    ALL, EMPTY, EVENS, ODDS, SQUARES,
    ArithmeticProgression, BlockUnion, Complement, Finite, IndexSet, Intersection,
    Mask, PerfectSquares, Residues, Union,
    complement_of, count_between, finite_members, initial_segment, intersect, is_all, is_empty,
    normalize,
    prefix_count, shift_set, union_of,
)
from .spec import (
    Affine, Blocks, Constant, ConstantValue, Explicit, IndexValue, Overlay,
    ParityValue, Periodic, SequenceSpec, Shifted, Sum, Telescoped, term,
)
from .transform import add, affine, shift, telescope
from .dsl import parse_modification, parse_sequence, parse_set, parse_spec, render

__all__ = [
    "BlockSchedule", "Phase", "PhaseLength",
    "ALL", "EMPTY", "EVENS", "ODDS", "SQUARES",
    "ArithmeticProgression", "BlockUnion", "Complement", "Finite", "IndexSet",
    "Intersection", "Mask", "PerfectSquares", "Residues", "Union",
    "complement_of", "count_between", "finite_members", "initial_segment", "intersect", "is_all",
    "is_empty", "normalize",
    "prefix_count", "shift_set", "union_of",
    "Affine", "Blocks", "Constant", "ConstantValue", "Explicit", "IndexValue",
    "Overlay", "ParityValue", "Periodic", "SequenceSpec", "Shifted", "Sum",
    "Telescoped", "term",
    "add", "affine", "shift", "telescope",
    "parse_modification", "parse_sequence", "parse_set", "parse_spec", "render",
]
