"""Evidential reasoning with probabilistic and Dempster-Shafer belief networks."""

from evidential.algebra import FocalSet, MassFunction, Scope, Variable, combine_all
from evidential.network import BeliefNetwork, Dag, EvidenceSet, build_network

__version__ = "0.1.0"

__all__ = [
    "BeliefNetwork",
    "Dag",
    "EvidenceSet",
    "FocalSet",
    "MassFunction",
    "Scope",
    "Variable",
    "build_network",
    "combine_all",
]
