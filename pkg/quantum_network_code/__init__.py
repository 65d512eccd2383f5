# Quantum network code toolkit.
#
# Builds the symplectic encoder/decoder for unicast networks with a known set
# of corrupted channels, simulates adversaries exactly at small dimension and
# checks the capacity bounds numerically.

__version__ = "0.1.0"

from .errors import QncError
from .finite_field import FieldSpec, FieldElement
from .symplectic import SymplecticContext, WBasis
from .network import Layer, LayeredNetwork, DagNetwork, CorruptionModel, reorganize
from .codeplan import CodePlan, plan_code, encode, decode

__all__ = [
    "__version__",
    "QncError",
    "FieldSpec",
    "FieldElement",
    "SymplecticContext",
    "WBasis",
    "Layer",
    "LayeredNetwork",
    "DagNetwork",
    "CorruptionModel",
    "reorganize",
    "CodePlan",
    "plan_code",
    "encode",
    "decode",
]
