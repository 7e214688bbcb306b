from .arrangement import Arrangement, enumerate_arrangements, realize
from .model import (
    FreeCongruence,
    HierarchicModel,
    ModelError,
    format_model,
    model_from_json,
    model_to_json,
    verify_model,
)
from .oracle import OracleBoundsError, oracle_solve
from .partitions import restricted_growth_strings, set_partitions
from .propositional import dpll
from .solver import FragmentError, Sat, SoundnessError, Unknown, Unsat, decide_ground, prepare, solve

__all__ = [
    "Arrangement",
    "FragmentError",
    "FreeCongruence",
    "HierarchicModel",
    "ModelError",
    "OracleBoundsError",
    "Sat",
    "SoundnessError",
    "Unknown",
    "Unsat",
    "decide_ground",
    "dpll",
    "enumerate_arrangements",
    "format_model",
    "model_from_json",
    "model_to_json",
    "oracle_solve",
    "prepare",
    "realize",
    "restricted_growth_strings",
    "set_partitions",
    "solve",
    "verify_model",
]
