"""Dense set-function tables over every subset of a small frame.

Tables are indexed by bitset. The zeta and Möbius sweeps run one axis at a
time on the table reshaped to ``(2,) * n``.
"""

import numpy as np

from evidential.algebra.frames import Scope
from evidential.algebra.mass import MassFunction, SetFunctionKind
from evidential.config.config import settings
from evidential.core.exceptions import CapacityError, InvalidModelError


def _check_dense(scope: Scope) -> int:
    size = scope.frame_size
    if size > settings.DENSE_FRAME_LIMIT:
        raise CapacityError(
            f"dense tables need 2^{size} entries; limit is 2^{settings.DENSE_FRAME_LIMIT}"
        )
    return size


def _sweep(table: np.ndarray, size: int, superset: bool, inverse: bool) -> np.ndarray:
    cube = np.array(table, dtype=float).reshape((2,) * size)
    for axis in range(size):
        low = [slice(None)] * size
        high = [slice(None)] * size
        low[axis], high[axis] = 0, 1
        source, target = (tuple(high), tuple(low)) if superset else (tuple(low), tuple(high))
        if inverse:
            cube[target] -= cube[source]
        else:
            cube[target] += cube[source]
    return cube.reshape(-1)


def dense_masses(m: MassFunction) -> np.ndarray:
    size = _check_dense(m.scope)
    table = np.zeros(2**size)
    for mask, value in m.focals:
        table[mask] = value
    return table


def dense_table(m: MassFunction, kind: SetFunctionKind) -> np.ndarray:
    """Bel, Pl or Q of every subset of the frame, indexed by bitset"""
    kind = SetFunctionKind(kind)
    size = _check_dense(m.scope)
    masses = dense_masses(m)
    if kind is SetFunctionKind.COMMONALITY:
        return _sweep(masses, size, superset=True, inverse=False)
    masses[0] = 0.0
    belief = _sweep(masses, size, superset=False, inverse=False)
    if kind is SetFunctionKind.BELIEF:
        return belief
    # Pl(A) = Bel(frame) - Bel(complement of A); complements reverse the index
    return belief[-1] - belief[::-1]


def mass_from_table(
    scope: Scope, table: np.ndarray, kind: SetFunctionKind
) -> MassFunction:
    kind = SetFunctionKind(kind)
    size = _check_dense(scope)
    values = np.asarray(table, dtype=float)
    if values.shape != (2**size,):
        raise InvalidModelError(f"dense table over {scope} needs {2**size} entries")
    if kind is SetFunctionKind.COMMONALITY:
        if (values < -settings.PSEUDO_TOLERANCE).any():
            raise InvalidModelError("negative commonality; not a pseudo-belief function")
        masses = _sweep(values, size, superset=True, inverse=True)
        masses[0] = 0.0
    else:
        belief = values if kind is SetFunctionKind.BELIEF else values[-1] - values[::-1]
        belief = belief.copy()
        belief[0] = 0.0
        masses = _sweep(belief, size, superset=False, inverse=True)
    entries = [
        (mask, float(value))
        for mask, value in enumerate(masses)
        if abs(value) > settings.PRUNE_THRESHOLD
    ]
    return MassFunction.from_focals(scope, entries)


def from_belief(scope: Scope, table: np.ndarray) -> MassFunction:
    return mass_from_table(scope, table, SetFunctionKind.BELIEF)


def from_plausibility(scope: Scope, table: np.ndarray) -> MassFunction:
    return mass_from_table(scope, table, SetFunctionKind.PLAUSIBILITY)
