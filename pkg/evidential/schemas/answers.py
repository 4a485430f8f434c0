from math import fsum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, model_validator

from evidential.config.config import settings
from evidential.utils.formatting import format_real


class Explanation(BaseModel):
    """Result of belief revision.

    ``assignment`` is set when the maximizing set is a single configuration;
    it covers every variable except those clamped to one value by the
    findings. ``configurations`` lists the members of the maximizing set over
    the same variables.
    """

    assignment: Optional[Dict[str, str]] = None
    configurations: List[Dict[str, str]] = []
    score: float
    evidence: Dict[str, str] = {}
    ties: List[Dict[str, str]] = []
    target: Optional[str] = None
    max_marginal: Optional[Dict[str, float]] = None

    def render(self, digits: Optional[int] = None) -> str:
        if self.assignment is not None:
            parts = [f"{name}={value}" for name, value in self.assignment.items()]
        else:
            members = ",".join(
                "(" + ",".join(f"{k}={v}" for k, v in config.items()) + ")"
                for config in self.configurations
            )
            parts = ["set={" + members + "}"]
        parts.append(f"beta={format_real(self.score, digits)}")
        return " ".join(parts)


class ThreeValuedAnswer(BaseModel):
    """How often a rule fires correctly (t), fires wrongly (n) or does not fire (?)."""

    pT: float
    pN: float
    pQ: float
    intervals: Optional[Dict[str, Tuple[float, float]]] = None

    @model_validator(mode="after")
    def check_distribution(self) -> "ThreeValuedAnswer":
        values = (self.pT, self.pN, self.pQ)
        if any(v < -settings.TOLERANCE for v in values):
            raise ValueError("three-valued answer has a negative component")
        if abs(fsum(values) - 1.0) > settings.TOLERANCE:
            raise ValueError("three-valued answer does not sum to 1")
        return self

    def render(self, digits: Optional[int] = None) -> str:
        lines = []
        for label, value in (("t", self.pT), ("n", self.pN), ("?", self.pQ)):
            line = f"{label} = {format_real(value, digits)}"
            if self.intervals is not None:
                low, high = self.intervals[label]
                line += f" [{format_real(low, digits)}, {format_real(high, digits)}]"
            lines.append(line)
        return "\n".join(lines)


class EventAnswer(BaseModel):
    """Belief and plausibility of an event; equal for probabilistic networks."""

    belief: float
    plausibility: float
    probabilistic: bool

    def render(self, digits: Optional[int] = None) -> str:
        if self.probabilistic:
            return f"P = {format_real(self.belief, digits)}"
        return (
            f"Bel = {format_real(self.belief, digits)}\n"
            f"Pl = {format_real(self.plausibility, digits)}"
        )
