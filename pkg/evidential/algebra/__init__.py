from evidential.algebra.frames import Configuration, FocalSet, Scope, Variable
from evidential.algebra.mass import MassFunction, SetFunctionKind, combine_all

__all__ = [
    "Configuration",
    "FocalSet",
    "MassFunction",
    "Scope",
    "SetFunctionKind",
    "Variable",
    "combine_all",
]
