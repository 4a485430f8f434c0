from evidential.algebra.maxproduct import combine_max, marginalize_max
from evidential.revision.explanation import (
    Conditioning,
    Explanatory,
    Hypothesizing,
    RevisionMode,
    max_marginal,
    revise,
)

__all__ = [
    "Conditioning",
    "Explanatory",
    "Hypothesizing",
    "RevisionMode",
    "combine_max",
    "marginalize_max",
    "max_marginal",
    "revise",
]
