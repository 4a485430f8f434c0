"""Max-product counterparts of combination and marginalization.

Values are scores, not masses: nothing is renormalized and the empty set is
never an output. Ties are decided with a relative tolerance.
"""

from typing import Dict, List, Sequence, Tuple

from evidential.algebra.frames import Scope, extend_mask, iter_bits, project_mask
from evidential.algebra.mass import MassFunction
from evidential.config.config import settings
from evidential.core.exceptions import ScopeMismatchError

Witnesses = List[Tuple[int, ...]]


def is_tie(a: float, b: float) -> bool:
    return abs(a - b) <= settings.TIE_TOLERANCE * max(abs(a), abs(b), 1e-300)


def set_order(mask: int) -> List[int]:
    """Sort key putting sets in lexicographic order of their members"""
    return list(iter_bits(mask))


def _scores(scope: Scope, values: Dict[int, float]) -> MassFunction:
    focals = tuple(sorted((a, v) for a, v in values.items() if v != 0.0))
    return MassFunction(
        scope, focals, pseudo=any(v < 0 for _, v in focals), normalized=False
    )


def fold_max(
    scope: Scope, factors: Sequence[MassFunction]
) -> Dict[int, Tuple[float, Witnesses]]:
    """Max-combine ``factors`` over ``scope`` remembering the choices.

    Each output set maps to its score and to every tuple of factor focal sets
    (in the factors' own scopes) that attains it.
    """
    state: Dict[int, Tuple[float, Witnesses]] = {scope.full_mask: (1.0, [()])}
    for factor in factors:
        if not factor.scope.issubset(scope):
            raise ScopeMismatchError(f"{factor.scope} is not contained in {scope}")
        extended = [
            (extend_mask(factor.scope, scope, a), a, v) for a, v in factor.focals
        ]
        fresh: Dict[int, Tuple[float, Witnesses]] = {}
        for current, (score, witnesses) in state.items():
            for cylinder, original, value in extended:
                meet = current & cylinder
                if not meet:
                    continue
                candidate = score * value
                choices = [w + (original,) for w in witnesses]
                known = fresh.get(meet)
                if known is None or (
                    candidate > known[0] and not is_tie(candidate, known[0])
                ):
                    fresh[meet] = (candidate, choices)
                elif is_tie(candidate, known[0]):
                    fresh[meet] = (max(candidate, known[0]), known[1] + choices)
        state = fresh
    return state


def fold_scores(scope: Scope, factors: Sequence[MassFunction]) -> MassFunction:
    return _scores(scope, {a: v for a, (v, _) in fold_max(scope, factors).items()})


def combine_max(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Score of A is the best product over focal pairs meeting exactly in A"""
    if m1.scope != m2.scope:
        raise ScopeMismatchError(f"operands over {m1.scope} and {m2.scope}; extend first")
    best: Dict[int, float] = {}
    for b, mb in m1.focals:
        for c, mc in m2.focals:
            a = b & c
            if a and (a not in best or mb * mc > best[a]):
                best[a] = mb * mc
    return _scores(m1.scope, best)


def marginalize_max(
    m: MassFunction, target: Scope
) -> Tuple[MassFunction, Dict[int, Tuple[int, ...]]]:
    """Project keeping the best pre-image score of every image.

    The second value maps each image to all pre-images attaining its score,
    in lexicographic order.
    """
    if not target.issubset(m.scope):
        raise ScopeMismatchError(f"{target} is not contained in {m.scope}")
    best: Dict[int, float] = {}
    witnesses: Dict[int, List[int]] = {}
    for b, value in m.focals:
        image = b if target == m.scope else project_mask(m.scope, target, b)
        known = best.get(image)
        if known is None or (value > known and not is_tie(value, known)):
            best[image] = value
            witnesses[image] = [b]
        elif is_tie(value, known):
            best[image] = max(value, known)
            witnesses[image].append(b)
    ordered = {a: tuple(sorted(w, key=set_order)) for a, w in witnesses.items()}
    return _scores(target, best), ordered
